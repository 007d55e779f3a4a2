#include "lrkitaev/dynamics.hpp"

#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include "lrkitaev/errors.hpp"
#include "lrkitaev/parallel.hpp"

namespace lrk {

namespace {

namespace odeint = boost::numeric::odeint;

constexpr double kPi = std::numbers::pi;

using State = std::array<double, 4>;  // Re u, Im u, Re v, Im v

struct ModeRhs {
  double mu_c;
  double delta;
  double hopping;
  double gap;

  double epsilon(double t) const noexcept { return 0.5 * (mu_c - delta * t) - hopping; }

  void operator()(const State& x, State& dxdt, double t) const noexcept {
    const double e = epsilon(t);
    const double w1r = e * x[0] + gap * x[2];
    const double w1i = e * x[1] + gap * x[3];
    const double w2r = gap * x[0] - e * x[2];
    const double w2i = gap * x[1] - e * x[3];
    dxdt[0] = 0.5 * w1i;
    dxdt[1] = -0.5 * w1r;
    dxdt[2] = 0.5 * w2i;
    dxdt[3] = -0.5 * w2r;
  }
};

template <class Controlled>
ModeEvolution integrate(Controlled stepper, const ModeRhs& rhs, const RampProtocol& ramp,
                        const ModeState& start, const IntegratorOptions& options) {
  State x{start.u.real(), start.u.imag(), start.v.real(), start.v.imag()};
  double t = ramp.t_start;
  const double t_end = ramp.t_end;
  const double span = t_end - t;
  const double end_slack = 1e-13 * std::max(std::abs(t_end), span);

  auto step_cap = [&](double time) {
    double cap = options.max_step;
    if (options.phase_step > 0.0) {
      const double omega = 2.0 * std::hypot(rhs.epsilon(time), rhs.gap);
      if (omega > 0.0) cap = std::min(cap, options.phase_step / omega);
    }
    return cap;
  };

  EvolutionStats stats;
  double dt = std::min({step_cap(t), 1e-2, span});
  while (t_end - t > end_slack) {
    dt = std::min({dt, step_cap(t), t_end - t});
    const double t_before = t;
    if (stepper.try_step(std::cref(rhs), x, t, dt) == odeint::success) {
      ++stats.steps;
      const double norm = x[0] * x[0] + x[1] * x[1] + x[2] * x[2] + x[3] * x[3];
      if (!std::isfinite(norm)) {
        std::ostringstream msg;
        msg << "non-finite amplitudes at k = " << start.k << ", t = " << t_before;
        throw IntegrationError(msg.str(), start.k, t_before);
      }
      stats.max_norm_drift = std::max(stats.max_norm_drift, std::abs(norm - 1.0));
    } else {
      ++stats.rejected;
      if (dt < 1e-14 * std::max(1.0, std::abs(t_before))) {
        std::ostringstream msg;
        msg << "step size underflow at k = " << start.k << ", t = " << t_before;
        throw IntegrationError(msg.str(), start.k, t_before);
      }
    }
  }
  ModeState out{start.k, {x[0], x[1]}, {x[2], x[3]}, t_end};
  return {out, stats};
}

}  // namespace

RampProtocol RampProtocol::full_crossing(double mu_c, double delta) {
  RampProtocol ramp{mu_c, delta, -mu_c / delta, mu_c / delta};
  ramp.validate();
  return ramp;
}

RampProtocol RampProtocol::between(double mu_c, double delta, double mu_start, double mu_end) {
  RampProtocol ramp{mu_c, delta, (mu_c - mu_start) / delta, (mu_c - mu_end) / delta};
  ramp.validate();
  return ramp;
}

void RampProtocol::validate() const {
  if (!(delta > 0.0) || !std::isfinite(delta)) throw DomainError("ramp rate delta must be positive");
  if (!std::isfinite(mu_c) || !std::isfinite(t_start) || !std::isfinite(t_end))
    throw DomainError("ramp endpoints must be finite");
  if (!(t_end > t_start)) throw DomainError("ramp must end after it starts");
}

void IntegratorOptions::validate() const {
  if (!(tol >= 1e-12 && tol <= 1e-6)) throw DomainError("integrator tolerance must lie in [1e-12, 1e-6]");
  if (!(phase_step >= 0.0) || !(max_step > 0.0)) throw DomainError("invalid step caps");
}

ModeState initial_state(const KitaevChain& chain, const RampProtocol& ramp, double k) {
  const auto eq = chain.equilibrium(k, ramp.mu_start());
  return {k, eq.amplitudes.u, eq.amplitudes.v, ramp.t_start};
}

ModeEvolution evolve_mode(const KitaevChain& chain, const RampProtocol& ramp, double k,
                          const IntegratorOptions& options) {
  ramp.validate();
  return evolve_mode(chain, ramp, initial_state(chain, ramp, k), options);
}

ModeEvolution evolve_mode(const KitaevChain& chain, const RampProtocol& ramp, const ModeState& start,
                          const IntegratorOptions& options) {
  ramp.validate();
  options.validate();
  const ModeRhs rhs{ramp.mu_c, ramp.delta, chain.hopping(start.k), chain.pairing(start.k)};
  switch (options.stepper) {
    case Stepper::kDormandPrince5:
      return integrate(odeint::make_controlled<odeint::runge_kutta_dopri5<State>>(options.tol, options.tol),
                       rhs, ramp, start, options);
    case Stepper::kFehlberg78:
      break;
  }
  return integrate(odeint::make_controlled<odeint::runge_kutta_fehlberg78<State>>(options.tol, options.tol),
                   rhs, ramp, start, options);
}

double excitation_probability(const ModeState& final_state, const KitaevChain& chain, double mu_end) {
  const auto ref = chain.equilibrium(final_state.k, mu_end).amplitudes;
  // Orthogonal complement of (u_f, v_f) is (-v_f, u_f).
  const std::complex<double> excited = -ref.v * final_state.u + ref.u * final_state.v;
  const double p = std::norm(excited) / final_state.norm_squared();
  return std::clamp(p, 0.0, 1.0);
}

double excitation_probability(const ModeState& final_state, const ChainParams& params_at_mu_end) {
  return excitation_probability(final_state, KitaevChain(params_at_mu_end), params_at_mu_end.mu);
}

double lz_threshold_estimate(const KitaevChain& chain, double delta) {
  const double target = std::log(2.0);
  auto excess = [&](double k) {
    const double g = chain.pairing(k);
    return kPi * g * g / delta - target;
  };
  constexpr int kScan = 400;
  const double lo_edge = 1e-15;
  const double hi_edge = kPi / 2.0;
  double prev = lo_edge;
  if (excess(prev) >= 0.0) return prev;
  for (int i = 1; i <= kScan; ++i) {
    const double k = lo_edge * std::pow(hi_edge / lo_edge, static_cast<double>(i) / kScan);
    if (excess(k) >= 0.0) {
      double a = prev;
      double b = k;
      for (int it = 0; it < 100 && (b - a) > 1e-14 * b; ++it) {
        const double m = 0.5 * (a + b);
        (excess(m) >= 0.0 ? b : a) = m;
      }
      return 0.5 * (a + b);
    }
    prev = k;
  }
  return hi_edge;
}

GridSpec GridSpec::non_crossing(std::size_t uniform_points) {
  GridSpec spec;
  spec.k_min = 1e-3;
  spec.k_split = 1e-2;
  spec.log_points = 10;
  spec.uniform_points = uniform_points;
  return spec;
}

std::vector<double> make_momentum_grid(const GridSpec& spec, double k_threshold) {
  const double k_min = spec.k_min.value_or(std::min(1e-4, k_threshold / 50.0));
  if (!(k_min > 0.0) || !(k_min < spec.k_split) || !(spec.k_split < kPi))
    throw DomainError("momentum grid requires 0 < k_min < k_split < pi");
  if (spec.log_points == 0 || spec.uniform_points == 0) throw DomainError("momentum grid needs points");
  std::vector<double> nodes;
  nodes.reserve(spec.log_points + spec.uniform_points);
  const double ratio = spec.k_split / k_min;
  for (std::size_t i = 0; i < spec.log_points; ++i)
    nodes.push_back(k_min * std::pow(ratio, static_cast<double>(i) / spec.log_points));
  const double width = kPi - spec.k_split;
  for (std::size_t i = 0; i < spec.uniform_points; ++i)
    nodes.push_back(spec.k_split + width * static_cast<double>(i) / spec.uniform_points);
  return nodes;
}

double defect_density(std::span<const ModeResult> modes, double p_at_zero, double p_at_pi) {
  double integral = 0.0;
  double k_prev = 0.0;
  double p_prev = p_at_zero;
  for (const auto& m : modes) {
    integral += 0.5 * (m.k - k_prev) * (m.p + p_prev);
    k_prev = m.k;
    p_prev = m.p;
  }
  integral += 0.5 * (kPi - k_prev) * (p_at_pi + p_prev);
  return integral / kPi;
}

double decoupled_mode_probability(const KitaevChain& chain, const RampProtocol& ramp, double k) {
  const bool start_positive = chain.dispersion(k, ramp.mu_start()) >= 0.0;
  const bool end_positive = chain.dispersion(k, ramp.mu_end()) >= 0.0;
  return start_positive == end_positive ? 0.0 : 1.0;
}

QuenchResult run_quench(const ChainParams& params, const RampProtocol& ramp, const GridSpec& grid,
                        const IntegratorOptions& options, unsigned workers) {
  const KitaevChain chain(params);
  const double k_th = lz_threshold_estimate(chain, ramp.delta);
  const auto nodes = make_momentum_grid(grid, k_th);
  return run_quench(params, ramp, nodes, options, workers);
}

QuenchResult run_quench(const ChainParams& params, const RampProtocol& ramp, std::span<const double> nodes,
                        const IntegratorOptions& options, unsigned workers) {
  ramp.validate();
  options.validate();
  const KitaevChain chain(params);
  if (!std::is_sorted(nodes.begin(), nodes.end()) || nodes.empty() || nodes.front() <= 0.0 ||
      nodes.back() >= kPi)
    throw DomainError("quench grid must be sorted inside (0, pi)");

  QuenchResult result;
  result.delta = ramp.delta;
  result.k_threshold = lz_threshold_estimate(chain, ramp.delta);
  result.points_below_threshold =
      static_cast<std::size_t>(std::lower_bound(nodes.begin(), nodes.end(), result.k_threshold) - nodes.begin());
  if (ramp.crosses_critical_point() && result.points_below_threshold < 20) {
    std::ostringstream msg;
    msg << "under-resolved grid: " << result.points_below_threshold << " points below k_th = " << result.k_threshold;
    result.warnings.push_back(msg.str());
  }

  std::vector<ModeResult> modes(nodes.size());
  std::vector<EvolutionStats> stats(nodes.size());
  std::vector<std::string> failures(nodes.size());
  parallel_for(nodes.size(), workers, [&](std::size_t i) {
    try {
      const auto evo = evolve_mode(chain, ramp, nodes[i], options);
      modes[i] = {nodes[i], excitation_probability(evo.state, chain, ramp.mu_end())};
      stats[i] = evo.stats;
    } catch (const std::exception& e) {
      failures[i] = e.what();
    }
  });

  std::size_t failed = 0;
  std::string first_failure;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (failures[i].empty()) continue;
    if (failed++ == 0) first_failure = failures[i];
  }
  if (failed > 0) {
    std::ostringstream msg;
    msg << failed << " of " << nodes.size() << " modes failed at delta = " << ramp.delta << "; first: " << first_failure;
    throw IntegrationError(msg.str(), nodes.front(), ramp.t_start);
  }

  for (const auto& s : stats) {
    result.max_norm_drift = std::max(result.max_norm_drift, s.max_norm_drift);
    result.total_steps += s.steps;
    result.rejected_steps += s.rejected;
  }
  result.n_exc = defect_density(modes, decoupled_mode_probability(chain, ramp, 0.0),
                                decoupled_mode_probability(chain, ramp, kPi));
  result.modes = std::move(modes);
  return result;
}

}  // namespace lrk
