#include "lrkitaev/analysis.hpp"

// Boost 1.74 pchip.hpp calls isnan unqualified.
#include <math.h>

#include <boost/math/interpolators/pchip.hpp>
#include <boost/math/tools/minima.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

#include "lrkitaev/errors.hpp"

namespace lrk::analysis {

namespace {

void check_sweep(std::span<const SweepPoint> points) {
  if (points.size() < kMinFitPoints) throw DomainError("fit needs at least 5 points");
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (const auto& p : points) {
    if (!(p.delta > 0.0) || !(p.n_exc > 0.0) || !std::isfinite(p.delta) || !std::isfinite(p.n_exc))
      throw DomainError("fit data must be positive and finite");
    lo = std::min(lo, p.delta);
    hi = std::max(hi, p.delta);
  }
  if (std::log10(hi / lo) < kMinFitDecades - 1e-9) throw DomainError("fit window spans fewer than 1.5 decades");
}

std::pair<double, double> delta_range(std::span<const SweepPoint> points) {
  auto [lo, hi] = std::minmax_element(points.begin(), points.end(),
                                      [](const auto& a, const auto& b) { return a.delta < b.delta; });
  return {lo->delta, hi->delta};
}

double r_squared(std::span<const SweepPoint> points, double rss) {
  double mean = 0.0;
  for (const auto& p : points) mean += std::log(p.n_exc);
  mean /= static_cast<double>(points.size());
  double tss = 0.0;
  for (const auto& p : points) tss += std::pow(std::log(p.n_exc) - mean, 2);
  if (tss == 0.0) return rss == 0.0 ? 1.0 : 0.0;
  return std::clamp(1.0 - rss / tss, 0.0, 1.0);
}

}  // namespace

std::string to_string(FitModel model) {
  return model == FitModel::kPurePower ? "pure_power" : "power_over_log";
}

ScalingFit fit_power_law(std::span<const SweepPoint> points) {
  check_sweep(points);
  const double n = static_cast<double>(points.size());
  double mx = 0.0;
  double my = 0.0;
  for (const auto& p : points) {
    mx += std::log(p.delta);
    my += std::log(p.n_exc);
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (const auto& p : points) {
    const double dx = std::log(p.delta) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(p.n_exc) - my);
  }
  ScalingFit fit;
  fit.model = FitModel::kPurePower;
  fit.theta_hat = sxy / sxx;
  const double intercept = my - fit.theta_hat * mx;
  for (const auto& p : points) {
    const double r = std::log(p.n_exc) - intercept - fit.theta_hat * std::log(p.delta);
    fit.rss += r * r;
  }
  fit.std_error = std::sqrt(fit.rss / (n - 2.0) / sxx);
  fit.r_squared = r_squared(points, fit.rss);
  fit.amplitude = std::exp(intercept);
  fit.window = delta_range(points);
  fit.points = points.size();
  return fit;
}

ScalingFit fit_power_over_log(std::span<const SweepPoint> points) {
  check_sweep(points);
  const auto window = delta_range(points);
  const double n = static_cast<double>(points.size());
  const double log_hi = std::log(window.second);

  // log B = log δ_max + e^u. For fixed B the optimal log A is the mean residual.
  auto residuals = [&](double u, double* log_a) {
    const double log_b = log_hi + std::exp(u);
    double mean = 0.0;
    for (const auto& p : points)
      mean += std::log(p.n_exc) - 0.5 * std::log(p.delta) + std::log(log_b - std::log(p.delta));
    mean /= n;
    double rss = 0.0;
    for (const auto& p : points) {
      const double r = std::log(p.n_exc) - 0.5 * std::log(p.delta) + std::log(log_b - std::log(p.delta)) - mean;
      rss += r * r;
    }
    if (log_a) *log_a = mean;
    return rss;
  };

  constexpr double kLo = -14.0;
  constexpr double kHi = 6.0;
  constexpr int kScan = 400;
  double best_u = kLo;
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= kScan; ++i) {
    const double u = kLo + (kHi - kLo) * i / kScan;
    const double r = residuals(u, nullptr);
    if (r < best) {
      best = r;
      best_u = u;
    }
  }
  const double step = (kHi - kLo) / kScan;
  const double u_opt = boost::math::tools::brent_find_minima(
      [&](double u) { return residuals(u, nullptr); }, std::max(kLo, best_u - step), std::min(kHi, best_u + step), 50).first;

  ScalingFit fit;
  fit.model = FitModel::kPowerOverLog;
  fit.theta_hat = 0.5;
  double log_a = 0.0;
  fit.rss = residuals(u_opt, &log_a);
  fit.amplitude = std::exp(log_a);
  fit.log_scale = std::exp(log_hi + std::exp(u_opt));
  fit.std_error = std::sqrt(fit.rss / (n - 2.0));
  fit.r_squared = r_squared(points, fit.rss);
  fit.window = window;
  fit.points = points.size();
  return fit;
}

double log_ratio_variation(std::span<const SweepPoint> points, double scale) {
  if (points.empty()) throw DomainError("log_ratio_variation: no points");
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (const auto& p : points) {
    if (!(p.delta > 0.0 && p.delta < scale) || !(p.n_exc > 0.0))
      throw DomainError("log_ratio_variation: need 0 < delta < scale and n > 0");
    const double r = p.n_exc * std::abs(std::log(p.delta / scale)) / std::sqrt(p.delta);
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  return hi / lo - 1.0;
}

std::vector<SweepPoint> select_window(std::span<const SweepPoint> points, double max_decades) {
  std::vector<SweepPoint> sorted(points.begin(), points.end());
  std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.delta < b.delta; });
  if (sorted.empty()) throw DomainError("select_window: no points");
  const double limit = sorted.front().delta * std::pow(10.0, max_decades) * (1.0 + 1e-12);
  std::vector<SweepPoint> window;
  for (const auto& p : sorted)
    if (p.delta <= limit) window.push_back(p);
  check_sweep(window);
  return window;
}

CollapseReport collapse_spread(std::span<const Profile> curves, double exponent) {
  if (curves.size() < 3) throw DomainError("collapse needs at least 3 curves");
  std::vector<double> deltas;
  for (const auto& c : curves) deltas.push_back(c.delta);
  std::sort(deltas.begin(), deltas.end());
  if (std::adjacent_find(deltas.begin(), deltas.end()) != deltas.end())
    throw DomainError("collapse curves must have distinct delta");

  using Interp = boost::math::interpolators::pchip<std::vector<double>>;
  std::vector<Interp> interps;
  CollapseReport report;
  report.exponent = exponent;
  double lo = 0.0;
  double hi = std::numeric_limits<double>::infinity();
  for (const auto& c : curves) {
    if (!(c.delta > 0.0)) throw DomainError("collapse curves need delta > 0");
    std::vector<ProfileSample> s = c.samples;
    std::sort(s.begin(), s.end(), [](const auto& a, const auto& b) { return a.k < b.k; });
    std::size_t transition = 0;
    for (const auto& x : s)
      if (x.p >= 0.05 && x.p <= 0.95) ++transition;
    if (transition < kMinTransitionSamples) throw DomainError("collapse curve has fewer than 50 transition samples");
    report.transition_samples.push_back(transition);

    const double scale = std::pow(c.delta, -exponent);
    std::vector<double> xs;
    std::vector<double> ys;
    for (const auto& x : s) {
      if (!(x.k > 0.0)) throw DomainError("collapse samples need k > 0");
      const double xv = x.k * scale;
      if (!xs.empty() && !(xv > xs.back())) continue;
      xs.push_back(xv);
      ys.push_back(x.p);
    }
    lo = std::max(lo, xs.front());
    hi = std::min(hi, xs.back());
    interps.emplace_back(std::move(xs), std::move(ys));
  }
  if (!(hi > lo)) throw DomainError("collapse curves do not overlap after rescaling");
  report.overlap = {lo, hi};

  const double ratio = hi / lo;
  for (std::size_t i = 0; i < kCollapseGrid; ++i) {
    const double x = lo * std::pow(ratio, static_cast<double>(i) / (kCollapseGrid - 1));
    double y_min = std::numeric_limits<double>::infinity();
    double y_max = -y_min;
    for (const auto& f : interps) {
      const double y = f(std::clamp(x, lo, hi));
      y_min = std::min(y_min, y);
      y_max = std::max(y_max, y);
    }
    report.spread = std::max(report.spread, y_max - y_min);
  }
  return report;
}

}  // namespace lrk::analysis
