#include "lrkitaev/theory.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <numbers>
#include <sstream>

#include "lrkitaev/errors.hpp"
#include "lrkitaev/specfun.hpp"

namespace lrk::theory {

namespace {

constexpr double kPi = std::numbers::pi;

void warn(Warnings* sink, std::string message) {
  if (sink) sink->push_back(std::move(message));
}

void require_beta(double beta) {
  if (!(beta > 1.0)) throw DomainError("beta must be > 1");
}

// ∫_a^b f(k) dk with k = e^s, for integrands that vary on every scale near 0.
template <class F>
double integrate_log(F f, double a, double b) {
  auto g = [&](double s) {
    const double k = std::exp(s);
    return k * f(k);
  };
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(g, std::log(a), std::log(b), 25, 1e-12);
}

template <class F>
double integrate_linear(F f, double a, double b) {
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 25, 1e-12);
}

constexpr double kLogFloor = 1e-30;

}  // namespace

std::string to_string(ScalingForm form) {
  return form == ScalingForm::kPurePower ? "pure_power" : "power_over_log";
}

double scaling_exponent(double beta) {
  require_beta(beta);
  return beta <= 2.0 ? 1.0 / (2.0 * beta - 2.0) : 0.5;
}

double lz_probability(const KitaevChain& chain, double delta, double k, Warnings* warnings) {
  if (!(delta > 0.0)) throw DomainError("delta must be positive");
  if (!(k > 0.0 && k < kPi / 2.0)) {
    std::ostringstream msg;
    msg << "lz_probability: k = " << k << " outside (0, pi/2)";
    warn(warnings, msg.str());
  }
  const double g = chain.pairing(k);
  return std::exp(-kPi * g * g / delta);
}

double threshold_coefficient(double beta) {
  require_beta(beta);
  if (beta == 2.0) throw DomainError("threshold_coefficient: beta = 2 is logarithmic");
  if (std::isinf(beta)) return 1.0;
  const double zb = specfun::riemann_zeta(beta);
  const double a = beta < 2.0 ? specfun::cos_pi(beta / 2.0) * specfun::gamma_real(1.0 - beta) / zb
                              : specfun::riemann_zeta(beta - 1.0) / zb;
  return a * a;
}

double threshold_momentum(double beta, double delta, double d, Warnings* warnings) {
  if (!(delta > 0.0)) throw DomainError("delta must be positive");
  const double c = threshold_coefficient(beta) * d * d;
  const double k = std::pow(delta * std::log(2.0) / (kPi * c), scaling_exponent(beta));
  if (k >= 0.5) {
    std::ostringstream msg;
    msg << "threshold_momentum: k_th = " << k << " beyond the low-momentum regime";
    warn(warnings, msg.str());
  }
  return k;
}

DefectDensityPrediction predicted_defect_density(double beta, double delta) {
  require_beta(beta);
  if (!(delta > 0.0)) throw DomainError("delta must be positive");
  ScalingPrediction s;
  s.theta = scaling_exponent(beta);
  if (beta == 2.0) {
    if (!(delta < 6.0)) throw DomainError("predicted_defect_density: beta = 2 form needs delta < 6");
    s.form = ScalingForm::kPowerOverLog;
    s.prefactor = kPi * kPi / 6.0;
    return {-s.prefactor * std::sqrt(delta) / std::log(delta / 6.0), s};
  }
  if (beta < 2.0) {
    const double c = threshold_coefficient(beta);
    s.prefactor = s.theta * specfun::gamma_real(s.theta) / std::pow(kPi * c, s.theta);
  } else {
    s.prefactor = std::isinf(beta) ? 1.0 : specfun::riemann_zeta(beta) / specfun::riemann_zeta(beta - 1.0);
  }
  return {s.prefactor * std::pow(delta, s.theta), s};
}

double lz_defect_density(const KitaevChain& chain, double delta) {
  if (!(delta > 0.0)) throw DomainError("delta must be positive");
  auto p = [&](double k) {
    const double g = chain.pairing(k);
    return std::exp(-kPi * g * g / delta);
  };
  return (kLogFloor + integrate_log(p, kLogFloor, kPi / 2.0)) / kPi;
}

double lz_mapping_parameter(const KitaevChain& chain, double delta, double k) {
  const double g = chain.pairing(k);
  if (g == 0.0) throw DomainError("lz_mapping_parameter: pairing vanishes at this k");
  return delta / (g * g);
}

double adiabatic_amplitude_infinite_ramp(double omega) {
  if (!(omega > 0.0)) throw DomainError("adiabaticity parameter must be positive");
  return kPi / 3.0 * std::exp(-kPi / (2.0 * omega));
}

double finite_ramp_excitation(const KitaevChain& chain, double delta, double k, double g_f) {
  if (!(std::abs(g_f) > 1.0)) throw DomainError("finite_ramp_excitation: ramp must stop before criticality (|g_f| > 1)");
  if (!(delta > 0.0)) throw DomainError("delta must be positive");
  const double g = chain.pairing(k);
  const double e = chain.params().J * g_f - chain.hopping(k);
  const double w2 = e * e + g * g;
  return delta * delta * g * g / (16.0 * w2 * w2 * w2);
}

double finite_ramp_defect_density(const KitaevChain& chain, double delta, double g_f) {
  auto p = [&](double k) { return finite_ramp_excitation(chain, delta, k, g_f); };
  return (integrate_log(p, kLogFloor, 0.5) + integrate_linear(p, 0.5, kPi)) / kPi;
}

KZVariables kz_variables(double phi) {
  if (!(phi > 1.0)) throw DomainError("phi must be > 1");
  KZVariables v;
  v.phi = phi;
  v.z = std::min(phi - 1.0, 1.0);
  v.nu = 1.0 / v.z;
  v.kz_exponent = v.nu / (1.0 + v.z * v.nu);
  return v;
}

double kz_scaling_variable(double k, double delta, double phi) {
  return k * std::pow(delta, -kz_variables(phi).kz_exponent);
}

double dyn_scaling_variable(double k, double delta) { return k / std::sqrt(delta); }

}  // namespace lrk::theory
