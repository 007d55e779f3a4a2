#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "lrkitaev/analysis.hpp"
#include "lrkitaev/errors.hpp"
#include "oracles.hpp"

using namespace lrk;
using namespace lrk::analysis;
using std::numbers::pi;

namespace {

template <class F>
std::vector<SweepPoint> sweep(F n, double lo, double hi, int count) {
  std::vector<SweepPoint> out;
  for (int i = 0; i < count; ++i) {
    const double d = lo * std::pow(hi / lo, static_cast<double>(i) / (count - 1));
    out.push_back({d, n(d)});
  }
  return out;
}

double logistic(double x) { return 1.0 / (1.0 + std::exp(4.0 * (x - 1.0))); }

// Curve with p = f(k δ^{-e}) sampled at fixed scaled positions.
Profile scaled_profile(double delta, double exponent, double shift = 0.0) {
  Profile c{delta, {}};
  for (int i = 0; i < 200; ++i) {
    const double x = 0.01 * std::pow(300.0, i / 199.0);
    c.samples.push_back({x * std::pow(delta, exponent), logistic(x) + shift});
  }
  return c;
}

}  // namespace

TEST(PowerLaw, ExactData) {
  const auto pts = sweep([](double d) { return 3.0 * std::sqrt(d); }, 1e-3, 1e-1, 7);
  const auto fit = fit_power_law(pts);
  EXPECT_EQ(fit.model, FitModel::kPurePower);
  EXPECT_NEAR(fit.theta_hat, 0.5, 1e-12);
  EXPECT_NEAR(fit.std_error, 0.0, 1e-12);
  EXPECT_NEAR(fit.amplitude, 3.0, 1e-10);
  EXPECT_NEAR(fit.r_squared, 1.0, 1e-12);
  EXPECT_EQ(fit.points, 7u);
  EXPECT_DOUBLE_EQ(fit.window.first, 1e-3);
  EXPECT_NEAR(fit.window.second, 1e-1, 1e-15);
}

TEST(PowerLaw, LogarithmicDataBiasesSlope) {
  const auto pts = sweep([](double d) { return d / std::abs(std::log(d)); }, 1e-5, 1e-3, 9);
  EXPECT_GT(fit_power_law(pts).theta_hat, 1.0);
}

TEST(PowerLaw, Preconditions) {
  const auto ok = sweep([](double d) { return d; }, 1e-3, 1e-1, 5);
  EXPECT_NO_THROW(fit_power_law(ok));
  EXPECT_THROW(fit_power_law(std::span(ok).first(4)), DomainError);
  const auto narrow = sweep([](double d) { return d; }, 1e-3, 1e-2, 8);
  EXPECT_THROW(fit_power_law(narrow), DomainError);
  auto bad = ok;
  bad[2].n_exc = 0.0;
  EXPECT_THROW(fit_power_law(bad), DomainError);
  bad = ok;
  bad[1].delta = -1.0;
  EXPECT_THROW(fit_power_law(bad), DomainError);
}

TEST(PowerLaw, ScaleEquivariance) {
  auto g = oracle::rng(401);
  for (int trial = 0; trial < 50; ++trial) {
    const double theta = oracle::uniform(g, 0.3, 2.5);
    std::vector<SweepPoint> pts;
    for (int i = 0; i < 8; ++i) {
      const double d = 1e-4 * std::pow(10.0, 0.3 * i);
      pts.push_back({d, std::pow(d, theta) * std::exp(oracle::uniform(g, -0.1, 0.1))});
    }
    const auto base = fit_power_law(pts);
    const double c = oracle::log_uniform(g, 1e-3, 1e3);
    auto scaled_n = pts;
    auto scaled_d = pts;
    for (auto& p : scaled_n) p.n_exc *= c;
    for (auto& p : scaled_d) p.delta *= c;
    EXPECT_NEAR(fit_power_law(scaled_n).theta_hat, base.theta_hat, 1e-10);
    EXPECT_NEAR(fit_power_law(scaled_d).theta_hat, base.theta_hat, 1e-10);
    EXPECT_NEAR(fit_power_law(scaled_n).amplitude / base.amplitude, c, 1e-8 * c);
    EXPECT_GE(base.r_squared, 0.0);
    EXPECT_LE(base.r_squared, 1.0);
    EXPECT_GT(base.std_error, 0.0);
  }
}

TEST(PowerLaw, StandardErrorTracksNoise) {
  auto g = oracle::rng(402);
  std::normal_distribution<double> noise(0.0, 0.05);
  std::vector<double> errors;
  std::vector<double> slopes;
  for (int trial = 0; trial < 400; ++trial) {
    std::vector<SweepPoint> pts;
    for (int i = 0; i < 10; ++i) {
      const double d = 1e-4 * std::pow(10.0, 0.25 * i);
      pts.push_back({d, d * std::exp(noise(g))});
    }
    const auto fit = fit_power_law(pts);
    slopes.push_back(fit.theta_hat);
    errors.push_back(fit.std_error);
  }
  double mean = 0;
  for (double s : slopes) mean += s / slopes.size();
  double var = 0;
  for (double s : slopes) var += (s - mean) * (s - mean) / (slopes.size() - 1);
  double mean_err = 0;
  for (double e : errors) mean_err += e / errors.size();
  EXPECT_NEAR(mean, 1.0, 0.01);
  EXPECT_NEAR(mean_err / std::sqrt(var), 1.0, 0.15);
}

TEST(PowerOverLog, RecoversAmplitude) {
  const double A = pi * pi / 6;
  const auto pts = sweep([&](double d) { return A * std::sqrt(d) / std::abs(std::log(d / 6.0)); }, 1e-5, 1e-3, 9);
  const auto fit = fit_power_over_log(pts);
  EXPECT_EQ(fit.model, FitModel::kPowerOverLog);
  EXPECT_EQ(to_string(fit.model), "power_over_log");
  EXPECT_DOUBLE_EQ(fit.theta_hat, 0.5);
  EXPECT_NEAR(fit.amplitude / A, 1.0, 0.05);
  EXPECT_NEAR(fit.log_scale, 6.0, 0.3);
  EXPECT_LT(fit.rss, 1e-10);
  EXPECT_NEAR(log_ratio_variation(pts), 0.0, 1e-12);
}

TEST(ModelSelection, MatchingModelFitsBetter) {
  for (double theta : {0.5, 1.0, 2.0}) {
    const auto pts = sweep([&](double d) { return 0.4 * std::pow(d, theta); }, 1e-4, 1e-2, 9);
    EXPECT_LT(fit_power_law(pts).rss, fit_power_over_log(pts).rss) << theta;
  }
  const auto log_pts = sweep([](double d) { return std::sqrt(d) / std::abs(std::log(d / 6.0)); }, 1e-6, 1e-2, 9);
  EXPECT_LT(fit_power_over_log(log_pts).rss, fit_power_law(log_pts).rss);
}

TEST(Window, SmallestDecades) {
  const auto pts = sweep([](double d) { return d; }, 1e-5, 1e-1, 17);
  const auto w = select_window(pts, 2.0);
  ASSERT_EQ(w.size(), 9u);
  EXPECT_DOUBLE_EQ(w.front().delta, 1e-5);
  EXPECT_NEAR(w.back().delta, 1e-3, 1e-15);
  EXPECT_THROW(select_window(pts, 1.0), DomainError);
}

TEST(Collapse, IdenticalCurvesHaveZeroSpread) {
  std::vector<Profile> curves{scaled_profile(0.002, 0.5), scaled_profile(0.005, 0.5), scaled_profile(0.01, 0.5),
                              scaled_profile(0.02, 0.5)};
  const auto r = collapse_spread(curves, 0.5);
  EXPECT_NEAR(r.spread, 0.0, 1e-14);
  EXPECT_DOUBLE_EQ(r.exponent, 0.5);
  EXPECT_EQ(r.transition_samples.size(), 4u);
  EXPECT_GT(r.overlap.second, r.overlap.first);
  // Wrong exponent separates them.
  EXPECT_GT(collapse_spread(curves, 2.0).spread, 0.3);
}

TEST(Collapse, MonotoneUnderPerturbation) {
  auto g = oracle::rng(403);
  for (int trial = 0; trial < 30; ++trial) {
    const double e = oracle::uniform(g, 0.3, 1.0);
    const double probe = oracle::uniform(g, 0.3, 1.0);
    std::vector<Profile> curves{scaled_profile(0.002, e), scaled_profile(0.005, e), scaled_profile(0.01, e)};
    const double base = collapse_spread(curves, probe).spread;
    const double eps = oracle::uniform(g, 1e-4, 0.05);
    auto bumped = curves;
    for (auto& s : bumped[trial % 3].samples) s.p += eps * oracle::uniform(g, -1.0, 1.0);
    const double after = collapse_spread(bumped, probe).spread;
    EXPECT_GE(after, 0.0);
    EXPECT_LE(after, base + eps + 1e-12);
  }
}

TEST(Collapse, Preconditions) {
  std::vector<Profile> two{scaled_profile(0.002, 0.5), scaled_profile(0.005, 0.5)};
  EXPECT_THROW(collapse_spread(two, 0.5), DomainError);
  std::vector<Profile> dup{scaled_profile(0.002, 0.5), scaled_profile(0.002, 0.5), scaled_profile(0.005, 0.5)};
  EXPECT_THROW(collapse_spread(dup, 0.5), DomainError);
  auto sparse = std::vector<Profile>{scaled_profile(0.002, 0.5), scaled_profile(0.005, 0.5), scaled_profile(0.01, 0.5)};
  sparse[1].samples.resize(60);
  EXPECT_THROW(collapse_spread(sparse, 0.5), DomainError);
  // Disjoint scaled ranges.
  std::vector<Profile> apart{scaled_profile(1e-6, 0.5), scaled_profile(0.005, 0.5), scaled_profile(0.01, 0.5)};
  EXPECT_THROW(collapse_spread(apart, -3.0), DomainError);
}
