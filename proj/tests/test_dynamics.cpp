#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "lrkitaev/dynamics.hpp"
#include "lrkitaev/errors.hpp"
#include "lrkitaev/theory.hpp"
#include "oracles.hpp"

using namespace lrk;
using std::numbers::pi;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

ChainParams chain(double alpha, double beta) {
  ChainParams p;
  p.alpha = std::isinf(alpha) ? Exponent::nearest_neighbor() : Exponent(alpha);
  p.beta = std::isinf(beta) ? Exponent::nearest_neighbor() : Exponent(beta);
  return p;
}

double final_p(const ChainParams& p, const RampProtocol& ramp, double k, const IntegratorOptions& opt = {}) {
  const KitaevChain c(p);
  return excitation_probability(evolve_mode(c, ramp, k, opt).state, c, ramp.mu_end());
}

// First k at which p drops below 1/2, by linear interpolation between nodes.
double half_crossing(const std::vector<ModeResult>& modes) {
  for (std::size_t i = 1; i < modes.size(); ++i)
    if (modes[i - 1].p >= 0.5 && modes[i].p < 0.5)
      return modes[i - 1].k + (modes[i - 1].p - 0.5) / (modes[i - 1].p - modes[i].p) * (modes[i].k - modes[i - 1].k);
  return std::nan("");
}

}  // namespace

TEST(Ramp, FullCrossing) {
  const auto r = RampProtocol::full_crossing(2.0, 0.05);
  EXPECT_DOUBLE_EQ(r.t_start, -40.0);
  EXPECT_DOUBLE_EQ(r.t_end, 40.0);
  EXPECT_DOUBLE_EQ(r.mu_start(), 4.0);
  EXPECT_DOUBLE_EQ(r.mu_end(), 0.0);
  EXPECT_TRUE(r.crosses_critical_point());
  const auto b = RampProtocol::between(2.0, 0.01, 4.0, 3.0);
  EXPECT_DOUBLE_EQ(b.mu_start(), 4.0);
  EXPECT_NEAR(b.mu_end(), 3.0, 1e-12);
  EXPECT_FALSE(b.crosses_critical_point());
}

TEST(Ramp, Validation) {
  EXPECT_THROW(RampProtocol::full_crossing(2.0, 0.0), DomainError);
  EXPECT_THROW(RampProtocol::full_crossing(2.0, -1.0), DomainError);
  EXPECT_THROW(RampProtocol::between(2.0, 0.1, 1.0, 3.0), DomainError);
  EXPECT_THROW(RampProtocol::full_crossing(2.0, std::nan("")), DomainError);
}

TEST(Integrator, ToleranceRange) {
  const KitaevChain c(chain(kInf, kInf));
  const auto r = RampProtocol::full_crossing(2.0, 0.5);
  for (double tol : {1e-13, 1e-5, 0.0}) {
    IntegratorOptions o;
    o.tol = tol;
    EXPECT_THROW(evolve_mode(c, r, 0.3, o), DomainError) << tol;
  }
}

TEST(Evolve, MatchesFixedStepOracle) {
  struct Case {
    double alpha, beta, delta, k;
  };
  for (const auto& cs : {Case{kInf, kInf, 0.5, 0.4}, Case{1.5, 1.25, 1.0, 0.2}, Case{1.25, 3.0, 0.8, 1.1}}) {
    const auto p = chain(cs.alpha, cs.beta);
    const KitaevChain c(p);
    const auto ramp = RampProtocol::full_crossing(2.0, cs.delta);
    const auto start = initial_state(c, ramp, cs.k);
    const auto evo = evolve_mode(c, ramp, start);
    const auto [u, v] = oracle::rk4_mode(c.hopping(cs.k), c.pairing(cs.k), 2.0, cs.delta, ramp.t_start, ramp.t_end,
                                         start.u, start.v, 40000);
    EXPECT_LT(std::abs(evo.state.u - u), 1e-8) << cs.alpha << " " << cs.beta;
    EXPECT_LT(std::abs(evo.state.v - v), 1e-8);
    EXPECT_DOUBLE_EQ(evo.state.t, ramp.t_end);
  }
}

TEST(Evolve, BothSteppersAgree) {
  const auto p = chain(1.5, 1.5);
  const auto ramp = RampProtocol::full_crossing(2.0, 0.1);
  IntegratorOptions a;
  IntegratorOptions b;
  b.stepper = Stepper::kDormandPrince5;
  EXPECT_NEAR(final_p(p, ramp, 0.05, a), final_p(p, ramp, 0.05, b), 1e-7);
}

TEST(Evolve, LandauZenerAtModerateRate) {
  const double delta = 0.05;
  const double k = 0.3;
  const double lz = std::exp(-pi * std::sin(k) * std::sin(k) / delta);
  EXPECT_NEAR(final_p(chain(kInf, kInf), RampProtocol::full_crossing(2.0, delta), k), lz, 0.02);
}

TEST(Evolve, SuddenLimitKeepsInitialState) {
  auto g = oracle::rng(201);
  for (int i = 0; i < 10; ++i) {
    const auto p = chain(oracle::uniform(g, 1.1, 4), oracle::uniform(g, 1.1, 4));
    const KitaevChain c(p);
    const double k = oracle::uniform(g, 0.01, 3.0);
    const auto ramp = RampProtocol::full_crossing(2.0, 1e5);
    const auto evo = evolve_mode(c, ramp, k);
    const auto a = c.equilibrium(k, ramp.mu_start()).amplitudes;
    const auto b = c.equilibrium(k, ramp.mu_end()).amplitudes;
    const double overlap = a.u * b.u + a.v * b.v;
    EXPECT_NEAR(excitation_probability(evo.state, c, ramp.mu_end()), 1 - overlap * overlap, 1e-3);
  }
}

TEST(Evolve, NormPreserved) {
  auto g = oracle::rng(202);
  for (int i = 0; i < 20; ++i) {
    const auto p = chain(oracle::uniform(g, 1.1, 4), oracle::uniform(g, 1.1, 4));
    const KitaevChain c(p);
    const double delta = oracle::log_uniform(g, 1e-3, 1.0);
    const auto evo = evolve_mode(c, RampProtocol::full_crossing(2.0, delta), oracle::uniform(g, 1e-3, 3.1));
    EXPECT_LE(evo.stats.max_norm_drift, 1e-8);
    EXPECT_NEAR(evo.state.norm_squared(), 1.0, 1e-8);
  }
}

TEST(Evolve, NonFiniteStateReported) {
  const KitaevChain c(chain(kInf, kInf));
  const auto ramp = RampProtocol::full_crossing(2.0, 0.5);
  ModeState bad{0.7, {std::nan(""), 0.0}, {0.0, 0.0}, ramp.t_start};
  try {
    evolve_mode(c, ramp, bad);
    FAIL() << "expected IntegrationError";
  } catch (const IntegrationError& e) {
    EXPECT_DOUBLE_EQ(e.momentum(), 0.7);
    EXPECT_DOUBLE_EQ(e.time(), ramp.t_start);
  }
}

TEST(Excitation, ReferenceAndOrthogonalStates) {
  const KitaevChain c(chain(1.5, 1.75));
  const double k = 0.6;
  const double mu = 0.3;
  const auto a = c.equilibrium(k, mu).amplitudes;
  const std::complex<double> phase = std::polar(1.0, 0.9);
  EXPECT_NEAR(excitation_probability({k, phase * a.u, phase * a.v, 0.0}, c, mu), 0.0, 1e-15);
  EXPECT_NEAR(excitation_probability({k, -phase * a.v, phase * a.u, 0.0}, c, mu), 1.0, 1e-15);
  ChainParams at_mu = c.params();
  at_mu.mu = mu;
  EXPECT_NEAR(excitation_probability({k, -a.v, a.u, 0.0}, at_mu), 1.0, 1e-15);
  ChainParams critical = c.params();
  critical.mu = 2.0;
  EXPECT_THROW(excitation_probability({0.0, 1.0, 0.0, 0.0}, critical), DegenerateModeError);
}

TEST(Excitation, HighModesOnlyFeelTheRampEnd) {
  // No crossing above π/2: what is left comes from stopping the drive at
  // μ = 0, p ≈ δ² Δ² / (16 (ε_f² + Δ²)³) with ε_f = -j_α(k).
  for (const auto& p : {chain(kInf, kInf), chain(1.25, 1.5), chain(1.5, 1.25)}) {
    const KitaevChain c(p);
    for (double k : {1.7, 2.2, 3.0}) EXPECT_LT(final_p(p, RampProtocol::full_crossing(2.0, 0.05), k), 0.05) << k;
    const double delta = 0.01;
    for (double k : {1.7, 2.2}) {
      const double g = c.pairing(k);
      const double e = -c.hopping(k);
      const double expected = delta * delta * g * g / (16 * std::pow(e * e + g * g, 3));
      EXPECT_NEAR(final_p(p, RampProtocol::full_crossing(2.0, delta), k) / expected, 1.0, 0.2) << k;
    }
  }
}

TEST(Excitation, FastRampInvertsMoreModesAtSmallBeta) {
  // At δ = 0.5 the β = 1.25 profile stays inverted (p ≥ 1/2) over more modes.
  const auto ramp = RampProtocol::full_crossing(2.0, 0.5);
  int lr = 0;
  int sr = 0;
  for (int i = 1; i <= 150; ++i) {
    const double k = 0.01 * i;
    lr += final_p(chain(kInf, 1.25), ramp, k) >= 0.5;
    sr += final_p(chain(kInf, kInf), ramp, k) >= 0.5;
  }
  EXPECT_GT(sr, 0);
  EXPECT_GT(lr, sr);
}

TEST(Grid, NonCrossingLayout) {
  const auto nodes = make_momentum_grid(GridSpec::non_crossing(), 1e-6);
  ASSERT_EQ(nodes.size(), 1010u);
  EXPECT_DOUBLE_EQ(nodes.front(), 1e-3);
  EXPECT_TRUE(std::is_sorted(nodes.begin(), nodes.end()));
  EXPECT_NEAR(nodes[11] - nodes[10], (pi - 1e-2) / 1000, 1e-15);
}

TEST(Grid, Layout) {
  GridSpec spec;
  const auto nodes = make_momentum_grid(spec, 0.1);
  ASSERT_EQ(nodes.size(), spec.log_points + spec.uniform_points);
  EXPECT_TRUE(std::is_sorted(nodes.begin(), nodes.end()));
  EXPECT_DOUBLE_EQ(nodes.front(), 1e-4);
  EXPECT_LT(nodes.back(), pi);
  EXPECT_DOUBLE_EQ(nodes[spec.log_points], 0.5);
  // Narrow thresholds push the log block lower.
  EXPECT_DOUBLE_EQ(make_momentum_grid(spec, 1e-3).front(), 2e-5);
  spec.k_min = 1e-3;
  EXPECT_DOUBLE_EQ(make_momentum_grid(spec, 1e-6).front(), 1e-3);
}

TEST(Grid, Errors) {
  GridSpec spec;
  spec.k_min = 0.6;
  EXPECT_THROW(make_momentum_grid(spec, 0.1), DomainError);
  spec = {};
  spec.uniform_points = 0;
  EXPECT_THROW(make_momentum_grid(spec, 0.1), DomainError);
}

TEST(Quadrature, TrapezoidOnNodes) {
  std::vector<ModeResult> flat;
  for (double k : {0.1, 0.7, 2.0, 3.0}) flat.push_back({k, 0.25});
  EXPECT_NEAR(defect_density(flat, 0.25, 0.25), 0.25, 1e-15);
  // Linear p = 1 - k/π is integrated exactly.
  std::vector<ModeResult> line;
  for (double k : {0.05, 0.3, 1.0, 2.5}) line.push_back({k, 1 - k / pi});
  EXPECT_NEAR(defect_density(line, 1.0, 0.0), 0.5, 1e-15);
}

TEST(Quadrature, DecoupledModes) {
  const KitaevChain c(chain(kInf, kInf));
  const auto ramp = RampProtocol::full_crossing(2.0, 0.1);
  EXPECT_EQ(decoupled_mode_probability(c, ramp, 0.0), 1.0);
  EXPECT_EQ(decoupled_mode_probability(c, ramp, pi), 0.0);
  const auto stop = RampProtocol::between(2.0, 0.1, 4.0, 3.0);
  EXPECT_EQ(decoupled_mode_probability(c, stop, 0.0), 0.0);
}

TEST(Threshold, EstimateSolvesHalfCondition) {
  for (const auto& p : {chain(kInf, kInf), chain(kInf, 1.5), chain(2.0, 3.0)}) {
    const KitaevChain c(p);
    const double k = lz_threshold_estimate(c, 0.01);
    EXPECT_NEAR(std::exp(-pi * c.pairing(k) * c.pairing(k) / 0.01), 0.5, 1e-10);
  }
  EXPECT_DOUBLE_EQ(lz_threshold_estimate(KitaevChain(chain(kInf, kInf)), 100.0), pi / 2);
}

TEST(Quench, ProbabilitiesBoundedAndAveraged) {
  GridSpec grid;
  grid.log_points = 40;
  grid.uniform_points = 20;
  const auto r = run_quench(chain(1.5, 1.5), RampProtocol::full_crossing(2.0, 0.05), grid);
  ASSERT_EQ(r.modes.size(), 60u);
  for (const auto& m : r.modes) {
    EXPECT_GE(m.p, 0.0);
    EXPECT_LE(m.p, 1.0);
  }
  EXPECT_NEAR(r.n_exc, defect_density(r.modes, 1.0, 0.0), 1e-15);
  EXPECT_LE(r.max_norm_drift, 1e-8);
  EXPECT_GT(r.total_steps, 0u);
}

TEST(Quench, DeterministicAcrossWorkerCounts) {
  GridSpec grid;
  grid.log_points = 30;
  grid.uniform_points = 15;
  const auto p = chain(1.25, 1.75);
  const auto ramp = RampProtocol::full_crossing(2.0, 0.02);
  const auto a = run_quench(p, ramp, grid, {}, 1);
  const auto b = run_quench(p, ramp, grid, {}, 4);
  const auto c = run_quench(p, ramp, grid, {}, 7);
  ASSERT_EQ(a.modes.size(), b.modes.size());
  for (std::size_t i = 0; i < a.modes.size(); ++i) {
    EXPECT_EQ(a.modes[i].p, b.modes[i].p);
    EXPECT_EQ(a.modes[i].p, c.modes[i].p);
  }
  EXPECT_EQ(a.n_exc, b.n_exc);
  EXPECT_EQ(a.n_exc, c.n_exc);
  EXPECT_EQ(a.total_steps, c.total_steps);
}

TEST(Quench, UnderResolvedGridWarns) {
  const std::vector<double> coarse{0.2, 0.8, 1.6, 2.4};
  const auto r = run_quench(chain(kInf, kInf), RampProtocol::full_crossing(2.0, 0.01), coarse);
  EXPECT_EQ(r.points_below_threshold, 0u);
  ASSERT_EQ(r.warnings.size(), 1u);
  EXPECT_NE(r.warnings[0].find("under-resolved"), std::string::npos);
  const auto ok = run_quench(chain(kInf, kInf), RampProtocol::full_crossing(2.0, 0.01), GridSpec{});
  EXPECT_TRUE(ok.warnings.empty());
  EXPECT_GE(ok.points_below_threshold, 20u);
}

TEST(Quench, InvalidNodes) {
  const auto ramp = RampProtocol::full_crossing(2.0, 0.1);
  EXPECT_THROW(run_quench(chain(kInf, kInf), ramp, std::vector<double>{0.0, 1.0}), DomainError);
  EXPECT_THROW(run_quench(chain(kInf, kInf), ramp, std::vector<double>{1.0, 0.5}), DomainError);
  EXPECT_THROW(run_quench(chain(kInf, kInf), ramp, std::vector<double>{}), DomainError);
}

TEST(Quench, GridRefinementAndUniformGrid) {
  const auto p = chain(kInf, kInf);
  const auto ramp = RampProtocol::full_crossing(2.0, 0.02);
  const auto base = run_quench(p, ramp, GridSpec{});
  GridSpec fine;
  fine.log_points *= 2;
  fine.uniform_points *= 2;
  const auto refined = run_quench(p, ramp, fine, {}, 4);
  EXPECT_LT(std::abs(refined.n_exc / base.n_exc - 1), 5e-3);
  std::vector<double> uniform;
  for (int i = 1; i < 1000; ++i) uniform.push_back(pi * i / 1000.0);
  const auto flat = run_quench(p, ramp, uniform, {}, 4);
  EXPECT_LT(std::abs(flat.n_exc / base.n_exc - 1), 5e-3);
}

TEST(Quench, ToleranceConvergence) {
  const auto p = chain(1.5, 1.5);
  const auto ramp = RampProtocol::full_crossing(2.0, 0.02);
  IntegratorOptions loose;
  loose.tol = 1e-9;
  IntegratorOptions tight;
  tight.tol = 1e-10;
  const auto a = run_quench(p, ramp, GridSpec{}, loose, 4);
  const auto b = run_quench(p, ramp, GridSpec{}, tight, 4);
  EXPECT_LT(std::abs(a.n_exc / b.n_exc - 1), 1e-3);
}

TEST(Quench, InversionThresholdMatchesTheory) {
  const double delta = 0.01;
  for (double beta : {1.5, 3.0}) {
    const double k_th = theory::threshold_momentum(beta, delta);
    std::vector<double> nodes;
    for (int i = 0; i < 60; ++i) nodes.push_back(k_th * (0.5 + i / 60.0));
    const auto r = run_quench(chain(kInf, beta), RampProtocol::full_crossing(2.0, delta), nodes, {}, 4);
    EXPECT_NEAR(half_crossing(r.modes) / k_th, 1.0, 0.1) << beta;
  }
}
