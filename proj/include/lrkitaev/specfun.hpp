#pragma once

// Special functions needed by the momentum-space couplings and the
// closed-form scaling laws: Li_s(e^{ik}) on the unit circle, ζ(s) on the
// real line, Γ(x) and the lower real branch W_{-1} of the Lambert function.

#include <complex>
#include <memory>
#include <vector>

namespace lrk::specfun {

/// Li_s(e^{ik}) for a fixed real order s > 1.
///
/// Construction precomputes the expansion coefficients so repeated
/// evaluation over a momentum grid is cheap. Small orders use the
/// expansion of Li_s(e^{μ}) around μ = 0,
///
///   Li_s(e^μ) = Γ(1-s)(-μ)^{s-1} + Σ_n ζ(s-n) μ^n / n!,   |μ| < 2π,
///
/// with the harmonic-number/log form at integer s and a three-node
/// interpolation in s within kIntegerBand of an integer, where the
/// Γ and ζ poles cancel. Large orders sum the defining series directly.
class CirclePolylog {
 public:
  static constexpr double kDirectSeriesOrder = 12.0;
  static constexpr double kIntegerBand = 1e-4;

  explicit CirclePolylog(double s);

  double order() const noexcept { return s_; }

  /// Li_s(e^{ik}); k must be finite. Arguments outside [-π, π) are reduced.
  std::complex<double> operator()(double k) const;

 private:
  struct NodeTag {};
  CirclePolylog(double s, NodeTag);

  enum class Method { kDirect, kJonquiere, kIntegerOrder, kInterpolated };

  std::complex<double> jonquiere(double k) const;
  std::complex<double> integer_order(double k) const;
  std::complex<double> direct(double k) const;

  double s_;
  Method method_;
  double zeta_s_ = 0.0;
  double gamma_1ms_ = 0.0;   // Γ(1-s), non-integer orders only
  std::vector<double> coeff_;  // ζ(s-n)/n!, with the n = s-1 slot zeroed at integer s
  double harmonic_ = 0.0;     // H_{s-1} at integer s
  int direct_terms_ = 0;
  // Interpolation nodes near an integer order.
  std::vector<double> nodes_;
  std::vector<std::shared_ptr<const CirclePolylog>> node_evals_;
};

/// Li_s(e^{ik}). Throws DomainError for s <= 1 or non-finite input.
std::complex<double> polylog_on_circle(double s, double k);

/// ζ(s) for real s != 1, negative arguments included. Throws PoleError at s = 1.
double riemann_zeta(double s);

/// Γ(x); throws PoleError at x ∈ {0, -1, -2, ...}.
double gamma_real(double x);

/// Lower real branch W_{-1}(s), s ∈ [-1/e, 0); returns w <= -1 with w e^w = s.
double lambert_w_lower(double s);

/// cos(πx) with exact zeros at half-integers.
double cos_pi(double x);

/// sin(πx) with exact zeros at integers.
double sin_pi(double x);

}  // namespace lrk::specfun
