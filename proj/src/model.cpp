#include "lrkitaev/model.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "lrkitaev/errors.hpp"

namespace lrk {

namespace {

constexpr double kPi = std::numbers::pi;

std::string lowercase(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

// sin(απ/2) Γ(1-α), continuous through α = 2 where it tends to -π/2.
double hopping_nonanalytic_coefficient(double alpha) {
  if (alpha == 2.0) return -kPi / 2.0;
  return specfun::sin_pi(alpha / 2.0) * specfun::gamma_real(1.0 - alpha);
}

}  // namespace

Exponent::Exponent(double value) {
  if (std::isinf(value) && value > 0) return;
  if (!(value > 1.0)) throw DomainError("exponent must be > 1");
  infinite_ = false;
  value_ = value;
}

Exponent Exponent::parse(std::string_view text) {
  const std::string lower = lowercase(text);
  if (lower == "inf" || lower == "infinity" || lower == "nn" || lower == "+inf")
    return nearest_neighbor();
  double v = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end)
    throw DomainError("cannot parse exponent '" + std::string(text) + "'");
  return Exponent(v);
}

double Exponent::value() const noexcept {
  return infinite_ ? std::numeric_limits<double>::infinity() : value_;
}

std::string Exponent::to_string() const {
  if (infinite_) return "inf";
  std::ostringstream os;
  os.precision(15);
  os << value_;
  return os.str();
}

void ChainParams::validate() const {
  if (!(J > 0.0) || !std::isfinite(J)) throw DomainError("J must be positive and finite");
  if (!(d > 0.0) || !std::isfinite(d)) throw DomainError("d must be positive and finite");
  if (!std::isfinite(mu)) throw DomainError("mu must be finite");
}

CriticalData critical_data(const ChainParams& params) {
  const double phi = std::min(params.alpha.value(), params.beta.value());
  const double z = std::min(phi - 1.0, 1.0);
  return {2.0 * params.J, phi, z, 1.0 / z};
}

BogolyubovAmplitudes bogolyubov_amplitudes(double epsilon, double gap) {
  if (epsilon == 0.0 && gap == 0.0)
    throw DegenerateModeError("Bogolyubov angle undefined for a gapless mode");
  const double theta = std::atan2(gap, epsilon);
  return {theta, std::cos(0.5 * theta), std::sin(0.5 * theta)};
}

KitaevChain::KitaevChain(const ChainParams& params) : params_(params) {
  params_.validate();
  if (!params_.alpha.is_infinite()) {
    hopping_series_.emplace(params_.alpha.value());
    zeta_alpha_ = specfun::riemann_zeta(params_.alpha.value());
  }
  if (!params_.beta.is_infinite()) {
    pairing_series_.emplace(params_.beta.value());
    zeta_beta_ = specfun::riemann_zeta(params_.beta.value());
  }
}

double KitaevChain::hopping(double k) const {
  if (!hopping_series_) return params_.J * std::cos(k);
  if (k == 0.0) return params_.J;
  return params_.J * (*hopping_series_)(k).real() / zeta_alpha_;
}

double KitaevChain::pairing(double k) const {
  if (!pairing_series_) return params_.d * std::sin(k);
  if (k == 0.0) return 0.0;
  return params_.d * (*pairing_series_)(k).imag() / zeta_beta_;
}

double KitaevChain::spectrum(double k, double mu) const {
  return 2.0 * std::hypot(dispersion(k, mu), pairing(k));
}

ModeEquilibrium KitaevChain::equilibrium(double k, double mu) const {
  const double eps = dispersion(k, mu);
  const double gap = pairing(k);
  return {k, eps, gap, 2.0 * std::hypot(eps, gap), bogolyubov_amplitudes(eps, gap)};
}

double hopping_fourier(const ChainParams& params, double k) { return KitaevChain(params).hopping(k); }

double pairing_fourier(const ChainParams& params, double k) { return KitaevChain(params).pairing(k); }

double dispersion(const ChainParams& params, double k) { return KitaevChain(params).dispersion(k); }

double spectrum(const ChainParams& params, double k) { return KitaevChain(params).spectrum(k); }

BogolyubovAmplitudes ground_state_amplitudes(const ChainParams& params, double k) {
  return KitaevChain(params).equilibrium(k, params.mu).amplitudes;
}

double winding_number(const ChainParams& params, int grid_size) {
  if (grid_size < 1000) throw DomainError("winding_number: grid_size must be >= 1000");
  const KitaevChain chain(params);
  const double mu_c = 2.0 * params.J;
  const double tol = 1e-12 * std::max(1.0, std::abs(params.mu));
  if (std::abs(std::abs(params.mu) - mu_c) <= tol)
    throw DomainError("winding_number: undefined at |mu| = mu_c");
  if (std::abs(chain.dispersion(0.0)) <= tol || std::abs(chain.dispersion(kPi)) <= tol)
    throw DomainError("winding_number: gap closes at k = 0 or k = pi");

  double total = 0.0;
  double prev_e = chain.dispersion(-kPi);
  double prev_g = chain.pairing(-kPi);
  for (int i = 1; i <= grid_size; ++i) {
    const double k = -kPi + 2.0 * kPi * i / grid_size;
    const double e = chain.dispersion(k);
    const double g = chain.pairing(k);
    total += std::atan2(prev_e * g - prev_g * e, prev_e * e + prev_g * g);
    prev_e = e;
    prev_g = g;
  }
  // (ε, Δ) circulates clockwise in the topological phase.
  return -total / (2.0 * kPi);
}

double lowk_hopping_expansion(const ChainParams& params, double k) {
  const double q = std::abs(k);
  const double J = params.J;
  if (q == 0.0) return J;
  if (params.alpha.is_infinite()) return J * (1.0 - 0.5 * q * q);
  const double a = params.alpha.value();
  if (a == 3.0) return J * (1.0 + (2.0 * std::log(q) - 3.0) / (4.0 * specfun::riemann_zeta(3.0)) * q * q);
  const double za = specfun::riemann_zeta(a);
  const double analytic = -specfun::riemann_zeta(a - 2.0) / (2.0 * za) * q * q;
  if (a > 3.0) return J * (1.0 + analytic);
  return J * (1.0 + hopping_nonanalytic_coefficient(a) / za * std::pow(q, a - 1.0) + analytic);
}

double lowk_pairing_expansion(const ChainParams& params, double k) {
  const double q = std::abs(k);
  const double sign = k < 0.0 ? -1.0 : 1.0;
  const double d = params.d;
  if (q == 0.0) return 0.0;
  if (params.beta.is_infinite()) return sign * d * q;
  const double b = params.beta.value();
  if (b == 2.0) return sign * d * 6.0 * (1.0 - std::log(q)) / (kPi * kPi) * q;
  const double zb = specfun::riemann_zeta(b);
  const double linear = specfun::riemann_zeta(b - 1.0) / zb * q;
  if (b > 2.0) return sign * d * linear;
  const double lead = specfun::cos_pi(b / 2.0) * specfun::gamma_real(1.0 - b) / zb * std::pow(q, b - 1.0);
  return sign * d * (lead + linear);
}

}  // namespace lrk
