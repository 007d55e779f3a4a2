#pragma once

// Exponent fits of n_exc(δ) and scaling-collapse quality of p_k profiles.

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace lrk::analysis {

struct SweepPoint {
  double delta;
  double n_exc;
};

enum class FitModel { kPurePower, kPowerOverLog };

std::string to_string(FitModel model);

struct ScalingFit {
  FitModel model = FitModel::kPurePower;
  /// Fitted slope for kPurePower; fixed at 1/2 for kPowerOverLog.
  double theta_hat = 0.0;
  /// Slope standard error; residual standard deviation for kPowerOverLog.
  double std_error = 0.0;
  /// Coefficient of determination of log n, clamped to [0, 1].
  double r_squared = 0.0;
  /// Residual sum of squares in log n.
  double rss = 0.0;
  /// n ≈ amplitude δ^θ, or amplitude √δ / |log(δ/log_scale)|.
  double amplitude = 0.0;
  double log_scale = 0.0;
  std::pair<double, double> window{0.0, 0.0};
  std::size_t points = 0;
};

inline constexpr std::size_t kMinFitPoints = 5;
inline constexpr double kMinFitDecades = 1.5;

/// OLS of log n on log δ. Throws DomainError with fewer than 5 points,
/// non-positive data, or a δ range narrower than 1.5 decades.
ScalingFit fit_power_law(std::span<const SweepPoint> points);

/// n = A √δ / |log(δ/B)| with B > max δ, least squares in log n: A in
/// closed form, B by a bounded one-dimensional search. Same preconditions.
ScalingFit fit_power_over_log(std::span<const SweepPoint> points);

/// max/min - 1 of n |log(δ/scale)| / √δ over the points.
double log_ratio_variation(std::span<const SweepPoint> points, double scale = 6.0);

/// The smallest-δ points, from δ_min up to δ_min · 10^max_decades.
/// Throws DomainError if they span fewer than 1.5 decades or 5 points.
std::vector<SweepPoint> select_window(std::span<const SweepPoint> points, double max_decades = 2.0);

struct ProfileSample {
  double k;
  double p;
};

struct Profile {
  double delta;
  std::vector<ProfileSample> samples;
};

struct CollapseReport {
  double exponent = 0.0;
  double spread = 0.0;
  std::pair<double, double> overlap{0.0, 0.0};
  /// Samples per curve inside the transition region p ∈ [0.05, 0.95].
  std::vector<std::size_t> transition_samples;
};

inline constexpr std::size_t kMinTransitionSamples = 50;
inline constexpr std::size_t kCollapseGrid = 2000;

/// Rescales each curve to x = k δ^{-exponent}, interpolates with a monotone
/// piecewise cubic, and returns the largest vertical range across curves on
/// a common log-spaced grid over the overlap of the rescaled ranges.
/// Throws DomainError for fewer than 3 distinct δ, fewer than 50 transition
/// samples on a curve, or an empty overlap.
CollapseReport collapse_spread(std::span<const Profile> curves, double exponent);

}  // namespace lrk::analysis
