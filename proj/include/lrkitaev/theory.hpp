#pragma once

// Closed-form predictions: Landau-Zener probabilities, the population
// inversion threshold, saddle-point defect-density laws and Kibble-Zurek
// scaling variables.

#include <string>
#include <vector>

#include "lrkitaev/model.hpp"

namespace lrk::theory {

/// Optional sink for soft validity warnings.
using Warnings = std::vector<std::string>;

enum class ScalingForm { kPurePower, kPowerOverLog };

std::string to_string(ScalingForm form);

struct ScalingPrediction {
  double theta = 0.5;
  /// Saddle-point prefactor. Overall quadrature constants are not tracked,
  /// so only the δ dependence is meaningful.
  double prefactor = 1.0;
  bool normalized = false;
  ScalingForm form = ScalingForm::kPurePower;
};

struct DefectDensityPrediction {
  double value;
  ScalingPrediction scaling;
};

/// θ = 1/(2β - 2) for 1 < β <= 2, 1/2 above (β = +inf allowed).
double scaling_exponent(double beta);

/// exp(-π Δ_β(k)² / δ). Warns outside (0, π/2).
double lz_probability(const KitaevChain& chain, double delta, double k, Warnings* warnings = nullptr);

/// Leading low-k coefficient c of Δ_β(k)² / d²: c k^{2(β-1)} below β = 2,
/// c k² above. Throws DomainError for β <= 1 and β = 2.
double threshold_coefficient(double beta);

/// k_th = [δ ln 2 / (π c d²)]^θ. Warns when k_th >= 0.5.
double threshold_momentum(double beta, double delta, double d = 1.0, Warnings* warnings = nullptr);

/// Leading small-δ defect density from the low-k saddle point:
///   β < 2:  θ Γ(θ) (δ / (π c))^θ
///   β = 2:  -(π²/6) √δ / log(δ/6)      (δ < 6)
///   β > 2:  ζ(β)/ζ(β-1) √δ
DefectDensityPrediction predicted_defect_density(double beta, double delta);

/// (1/π)∫ exp(-πΔ_β(k)²/δ) dk over (0, π/2), where the Landau-Zener form holds.
double lz_defect_density(const KitaevChain& chain, double delta);

/// Ω = δ / Δ_β(k)². Throws DomainError when Δ_β(k) = 0.
double lz_mapping_parameter(const KitaevChain& chain, double delta, double k);

/// First-order adiabatic-perturbation amplitude (π/3) e^{-π/(2Ω)}. Ω > 0.
double adiabatic_amplitude_infinite_ramp(double omega);

/// Excitation left by a ramp that stops at reduced field g_f = μ_f/(2J)
/// before reaching the critical point:
///   p_k = δ² Δ² / (16 (ε_f² + Δ²)³),   ε_f = J g_f - j_α(k).
/// Throws DomainError unless |g_f| > 1.
double finite_ramp_excitation(const KitaevChain& chain, double delta, double k, double g_f);

/// (1/π)∫_0^π of finite_ramp_excitation.
double finite_ramp_defect_density(const KitaevChain& chain, double delta, double g_f);

struct KZVariables {
  double phi;
  double z;            // min(φ - 1, 1)
  double nu;           // 1/z
  double kz_exponent;  // ν/(1 + zν)
  double z_d = 1.0;
  double nu_d = 1.0;
  double dyn_exponent = 0.5;
};

/// Throws DomainError unless φ > 1 (+inf allowed).
KZVariables kz_variables(double phi);

/// η = k δ^{-ν/(1+zν)}.
double kz_scaling_variable(double k, double delta, double phi);

/// k / √δ.
double dyn_scaling_variable(double k, double delta);

}  // namespace lrk::theory
