#pragma once

// Equilibrium long-range Kitaev chain in momentum space (thermodynamic limit,
// Kac-normalized couplings):
//
//   j_α(k) = J Re Li_α(e^{ik}) / ζ(α)      Δ_β(k) = d Im Li_β(e^{ik}) / ζ(β)
//   ε(k)   = μ/2 - j_α(k)                   ω_k    = 2 sqrt(ε² + Δ²)
//
// so that j_α(0) = J and the gap closes at k = 0 for μ = μ_c = 2J.

#include <optional>
#include <string>
#include <string_view>

#include "lrkitaev/specfun.hpp"

namespace lrk {

/// Power-law decay exponent; either a finite value > 1 or the
/// nearest-neighbour limit, which is evaluated with exact cos/sin forms.
class Exponent {
 public:
  static Exponent nearest_neighbor() { return Exponent(); }

  /// Throws DomainError unless value > 1. +inf maps to nearest_neighbor().
  explicit Exponent(double value);

  /// Accepts a decimal number or "inf" / "infinity" / "nn".
  static Exponent parse(std::string_view text);

  bool is_infinite() const noexcept { return infinite_; }
  /// +inf for the nearest-neighbour limit.
  double value() const noexcept;
  std::string to_string() const;

  friend bool operator==(const Exponent&, const Exponent&) = default;

 private:
  Exponent() = default;
  bool infinite_ = true;
  double value_ = 0.0;
};

struct ChainParams {
  double J = 1.0;
  double d = 1.0;
  Exponent alpha = Exponent::nearest_neighbor();
  Exponent beta = Exponent::nearest_neighbor();
  double mu = 0.0;

  /// Throws DomainError if J <= 0, d <= 0 or mu is not finite.
  void validate() const;
};

struct CriticalData {
  double mu_c;  // 2J
  double phi;   // min(α, β)
  double z;     // min(φ - 1, 1)
  double nu;    // 1/z
};

CriticalData critical_data(const ChainParams& params);

struct BogolyubovAmplitudes {
  double theta;  // atan2(Δ, ε) ∈ (-π, π]
  double u;      // cos(θ/2)
  double v;      // sin(θ/2)
};

struct ModeEquilibrium {
  double k;
  double epsilon;
  double gap;  // Δ_β(k)
  double omega;
  BogolyubovAmplitudes amplitudes;
};

/// (u, v) = (cos θ/2, sin θ/2) with θ = atan2(Δ, ε). Throws
/// DegenerateModeError when ε = Δ = 0.
BogolyubovAmplitudes bogolyubov_amplitudes(double epsilon, double gap);

/// Momentum-space couplings of one chain. Holds the polylog evaluators, so
/// build one per (α, β) and reuse it across a momentum grid.
class KitaevChain {
 public:
  explicit KitaevChain(const ChainParams& params);

  const ChainParams& params() const noexcept { return params_; }

  double hopping(double k) const;
  double pairing(double k) const;
  double dispersion(double k, double mu) const { return 0.5 * mu - hopping(k); }
  double spectrum(double k, double mu) const;
  ModeEquilibrium equilibrium(double k, double mu) const;

  double dispersion(double k) const { return dispersion(k, params_.mu); }
  double spectrum(double k) const { return spectrum(k, params_.mu); }

 private:
  ChainParams params_;
  std::optional<specfun::CirclePolylog> hopping_series_;
  std::optional<specfun::CirclePolylog> pairing_series_;
  double zeta_alpha_ = 1.0;
  double zeta_beta_ = 1.0;
};

double hopping_fourier(const ChainParams& params, double k);
double pairing_fourier(const ChainParams& params, double k);
double dispersion(const ChainParams& params, double k);
double spectrum(const ChainParams& params, double k);
BogolyubovAmplitudes ground_state_amplitudes(const ChainParams& params, double k);

/// Winding of the pseudo-spin (ε, Δ) around the Brillouin zone, sampled on
/// grid_size + 1 points and accumulated from branch-safe angle increments.
/// Oriented so that the topological phase gives +1. Throws DomainError when
/// grid_size < 1000 or the gap closes at k = 0 or k = π.
double winding_number(const ChainParams& params, int grid_size);

/// Leading small-|k| forms of j_α(k) (three regimes split at α = 3) and
/// Δ_β(k) (split at β = 2, with logarithms on the boundary).
double lowk_hopping_expansion(const ChainParams& params, double k);
double lowk_pairing_expansion(const ChainParams& params, double k);

}  // namespace lrk
