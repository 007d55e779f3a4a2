#include "lrkitaev/specfun.hpp"

#include <boost/math/special_functions/lambert_w.hpp>
#include <boost/math/special_functions/zeta.hpp>

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "lrkitaev/errors.hpp"

namespace lrk::specfun {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSeriesCutoff = 1e-18;
constexpr int kMaxSeriesTerms = 160;

void require_finite(double x, const char* what) {
  if (!std::isfinite(x)) throw DomainError(std::string(what) + ": non-finite argument");
}

double reduce_angle(double k) {
  // [-π, π]; the expansion converges for |k| < 2π so k = π is fine.
  if (k >= -kPi && k < kPi) return k;
  return std::remainder(k, 2.0 * kPi);
}

bool is_integer(double x) { return x == std::floor(x); }

}  // namespace

double cos_pi(double x) {
  const double r = std::remainder(x, 2.0);
  if (std::abs(r) == 0.5) return 0.0;
  return std::cos(kPi * r);
}

double sin_pi(double x) {
  const double r = std::remainder(x, 2.0);
  if (r == 0.0 || std::abs(r) == 1.0) return 0.0;
  return std::sin(kPi * r);
}

double riemann_zeta(double s) {
  require_finite(s, "riemann_zeta");
  if (s == 1.0) throw PoleError("riemann_zeta: pole at s = 1");
  return boost::math::zeta(s);
}

double gamma_real(double x) {
  require_finite(x, "gamma_real");
  if (x <= 0.0 && is_integer(x))
    throw PoleError("gamma_real: pole at non-positive integer " + std::to_string(x));
  return std::tgamma(x);
}

double lambert_w_lower(double s) {
  require_finite(s, "lambert_w_lower");
  constexpr double kBranchPoint = -0.36787944117144233;  // -1/e
  if (s >= 0.0) throw DomainError("lambert_w_lower: argument must be negative");
  if (s < kBranchPoint * (1.0 + 4e-16))
    throw DomainError("lambert_w_lower: argument below -1/e");
  if (s <= kBranchPoint) return -1.0;
  return boost::math::lambert_wm1(s);
}

CirclePolylog::CirclePolylog(double s) : CirclePolylog(s, NodeTag{}) {
  if (s <= 1.0) throw DomainError("polylog_on_circle: order must exceed 1");
}

// Order 1 is accepted here as an interpolation node; Li_1 is finite for k != 0.
CirclePolylog::CirclePolylog(double s, NodeTag) : s_(s) {
  require_finite(s, "polylog_on_circle");
  if (s < 1.0) throw DomainError("polylog_on_circle: order must exceed 1");
  zeta_s_ = (s == 1.0) ? std::numeric_limits<double>::infinity() : boost::math::zeta(s);

  if (s >= kDirectSeriesOrder) {
    method_ = Method::kDirect;
    // Tail Σ_{n>N} n^{-s} < N^{1-s}/(s-1).
    direct_terms_ = static_cast<int>(std::ceil(std::pow(kSeriesCutoff * (s - 1.0), -1.0 / (s - 1.0)))) + 1;
    return;
  }

  const double m = std::round(s);
  if (std::abs(s - m) < kIntegerBand && s != m) {
    method_ = Method::kInterpolated;
    const double h = 2.0 * kIntegerBand;  // nodes sit outside the band
    nodes_ = (m == 1.0) ? std::vector<double>{1.0, 1.0 + h, 1.0 + 2.0 * h}
                        : std::vector<double>{m - h, m, m + h};
    for (double node : nodes_) node_evals_.push_back(std::shared_ptr<const CirclePolylog>(new CirclePolylog(node, NodeTag{})));
    return;
  }

  const bool integer_order = (s == m);
  method_ = integer_order ? Method::kIntegerOrder : Method::kJonquiere;
  if (!integer_order) gamma_1ms_ = std::tgamma(1.0 - s);

  // |ζ(s-n)/n!| decays like (2π)^{-n}; stop once the |k| = π term is negligible.
  const double scale = std::isfinite(zeta_s_) ? std::max(1.0, std::abs(zeta_s_)) : 1.0;
  double factorial = 1.0;
  double previous_term = 1.0;
  for (int n = 0; n < kMaxSeriesTerms; ++n) {
    if (n > 0) factorial *= n;
    const double arg = s - n;
    double c = 0.0;
    if (!(integer_order && arg == 1.0)) c = boost::math::zeta(arg) / factorial;
    coeff_.push_back(c);
    // Two consecutive checks: ζ vanishes at negative even integers.
    const double term = std::abs(c) * std::pow(kPi, n);
    if (n > 8 && term < kSeriesCutoff * scale && previous_term < kSeriesCutoff * scale) break;
    previous_term = term;
  }
  if (integer_order) {
    for (int j = 1; j < static_cast<int>(m); ++j) harmonic_ += 1.0 / j;
  }
}

std::complex<double> CirclePolylog::operator()(double k) const {
  require_finite(k, "polylog_on_circle");
  k = reduce_angle(k);
  if (k == 0.0) return {zeta_s_, 0.0};
  switch (method_) {
    case Method::kDirect:
      return direct(k);
    case Method::kJonquiere:
      return jonquiere(k);
    case Method::kIntegerOrder:
      return integer_order(k);
    case Method::kInterpolated: {
      std::complex<double> sum = 0.0;
      for (std::size_t i = 0; i < nodes_.size(); ++i) {
        double w = 1.0;
        for (std::size_t j = 0; j < nodes_.size(); ++j)
          if (j != i) w *= (s_ - nodes_[j]) / (nodes_[i] - nodes_[j]);
        sum += w * (*node_evals_[i])(k);
      }
      return sum;
    }
  }
  return {};
}

std::complex<double> CirclePolylog::direct(double k) const {
  std::complex<double> sum = 0.0;
  for (int n = direct_terms_; n >= 1; --n) {
    const double a = std::pow(static_cast<double>(n), -s_);
    sum += a * std::complex<double>(std::cos(k * n), std::sin(k * n));
  }
  return sum;
}

std::complex<double> CirclePolylog::jonquiere(double k) const {
  const std::complex<double> z(0.0, k);
  std::complex<double> series = 0.0;
  for (auto it = coeff_.rbegin(); it != coeff_.rend(); ++it) series = series * z + *it;
  // (-ik)^{s-1} = |k|^{s-1} exp(-i sign(k) π (s-1)/2)
  const double half = 0.5 * (s_ - 1.0);
  const double sign = k > 0.0 ? 1.0 : -1.0;
  const std::complex<double> branch(cos_pi(half), -sign * sin_pi(half));
  return gamma_1ms_ * std::pow(std::abs(k), s_ - 1.0) * branch + series;
}

std::complex<double> CirclePolylog::integer_order(double k) const {
  const std::complex<double> z(0.0, k);
  std::complex<double> series = 0.0;
  for (auto it = coeff_.rbegin(); it != coeff_.rend(); ++it) series = series * z + *it;
  const int m = static_cast<int>(s_);
  // log(-ik) = log|k| - i sign(k) π/2
  const std::complex<double> log_term(std::log(std::abs(k)), -(k > 0.0 ? 1.0 : -1.0) * kPi / 2.0);
  double factorial = 1.0;
  for (int j = 2; j < m; ++j) factorial *= j;
  return std::pow(z, m - 1) / factorial * (harmonic_ - log_term) + series;
}

std::complex<double> polylog_on_circle(double s, double k) {
  require_finite(k, "polylog_on_circle");
  return CirclePolylog(s)(k);
}

}  // namespace lrk::specfun
