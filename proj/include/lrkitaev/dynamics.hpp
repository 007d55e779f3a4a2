#pragma once

// Time evolution of the Bogolyubov amplitudes of one momentum mode during a
// linear ramp μ(t) = μ_c - δ t, and the aggregate defect density.
//
// Each mode evolves under the pseudo-spin Hamiltonian
//
//   i d/dt (u, v) = ½ [[ε(k,t), Δ(k)], [Δ(k), -ε(k,t)]] (u, v),
//
// whose Landau-Zener excitation probability is exp(-π Δ² / δ).

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lrkitaev/model.hpp"

namespace lrk {

struct RampProtocol {
  double mu_c = 2.0;
  double delta = 0.01;
  double t_start = -1.0;
  double t_end = 1.0;

  /// μ from 2μ_c down to 0, i.e. t ∈ [-μ_c/δ, μ_c/δ].
  static RampProtocol full_crossing(double mu_c, double delta);
  /// Ramp between two chemical potentials at rate δ (mu_start > mu_end).
  static RampProtocol between(double mu_c, double delta, double mu_start, double mu_end);

  double mu(double t) const noexcept { return mu_c - delta * t; }
  double mu_start() const noexcept { return mu(t_start); }
  double mu_end() const noexcept { return mu(t_end); }
  bool crosses_critical_point() const noexcept { return mu_start() > mu_c && mu_end() < mu_c; }

  /// Throws DomainError for δ <= 0, non-finite times or t_end <= t_start.
  void validate() const;
};

enum class Stepper { kDormandPrince5, kFehlberg78 };

struct IntegratorOptions {
  double tol = 1e-10;
  /// Step cap h <= phase_step / ω_k(t). Zero disables the cap.
  double phase_step = 0.5;
  double max_step = 1e300;
  Stepper stepper = Stepper::kFehlberg78;

  /// Throws DomainError unless tol ∈ [1e-12, 1e-6].
  void validate() const;
};

struct ModeState {
  double k = 0.0;
  std::complex<double> u;
  std::complex<double> v;
  double t = 0.0;

  double norm_squared() const noexcept { return std::norm(u) + std::norm(v); }
};

struct EvolutionStats {
  std::size_t steps = 0;
  std::size_t rejected = 0;
  double max_norm_drift = 0.0;
};

struct ModeEvolution {
  ModeState state;
  EvolutionStats stats;
};

/// Equilibrium state of mode k at μ(t_start).
ModeState initial_state(const KitaevChain& chain, const RampProtocol& ramp, double k);

/// Integrates one mode from t_start to t_end. Throws IntegrationError on
/// step-size underflow and DomainError for an invalid tolerance or ramp.
ModeEvolution evolve_mode(const KitaevChain& chain, const RampProtocol& ramp, double k,
                          const IntegratorOptions& options = {});

/// Same, but from an explicit state at ramp.t_start.
ModeEvolution evolve_mode(const KitaevChain& chain, const RampProtocol& ramp, const ModeState& start,
                          const IntegratorOptions& options = {});

/// p_k = 1 - |u_f u*(t_f) + v_f v*(t_f)|² against the equilibrium amplitudes at mu_end,
/// evaluated as the weight on the orthogonal state so that small p keep full precision.
/// Throws DegenerateModeError if mode k is gapless at mu_end.
double excitation_probability(const ModeState& final_state, const KitaevChain& chain, double mu_end);
double excitation_probability(const ModeState& final_state, const ChainParams& params_at_mu_end);

struct GridSpec {
  std::size_t log_points = 160;
  std::size_t uniform_points = 80;
  double k_split = 0.5;
  /// Lower edge of the log-spaced block; by default min(1e-4, k_th/50).
  std::optional<double> k_min;

  /// Dense uniform layout for ramps that never reach μ_c. Their p_k has no
  /// low-k structure but oscillates in k from the two ramp ends.
  static GridSpec non_crossing(std::size_t uniform_points = 1000);
};

/// k where the Landau-Zener probability exp(-πΔ(k)²/δ) first drops to 1/2,
/// found by bisection on the full Δ_β(k); π/2 if it stays above 1/2 there.
double lz_threshold_estimate(const KitaevChain& chain, double delta);

/// Sorted nodes in (0, π): log-spaced on [k_min, k_split), uniform on [k_split, π).
std::vector<double> make_momentum_grid(const GridSpec& spec, double k_threshold);

struct ModeResult {
  double k;
  double p;
};

struct QuenchResult {
  double delta = 0.0;
  std::vector<ModeResult> modes;
  double n_exc = 0.0;
  double k_threshold = 0.0;
  std::size_t points_below_threshold = 0;
  double max_norm_drift = 0.0;
  std::size_t total_steps = 0;
  std::size_t rejected_steps = 0;
  std::vector<std::string> warnings;
};

/// (1/π)∫_0^π p dk by the trapezoid rule on the nodes, closed with the
/// decoupled-mode limits p(0) and p(π).
double defect_density(std::span<const ModeResult> modes, double p_at_zero, double p_at_pi);

/// p at k = 0 or π, where Δ = 0: 1 if the sign of ε flips over the ramp, else 0.
double decoupled_mode_probability(const KitaevChain& chain, const RampProtocol& ramp, double k);

/// Evolves every grid mode (in parallel over `workers` threads) and
/// aggregates n_exc. Results do not depend on the worker count.
QuenchResult run_quench(const ChainParams& params, const RampProtocol& ramp, const GridSpec& grid,
                        const IntegratorOptions& options = {}, unsigned workers = 1);

QuenchResult run_quench(const ChainParams& params, const RampProtocol& ramp, std::span<const double> nodes,
                        const IntegratorOptions& options = {}, unsigned workers = 1);

}  // namespace lrk
