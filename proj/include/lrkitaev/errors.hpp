#pragma once

#include <stdexcept>
#include <string>

namespace lrk {

/// Argument outside the mathematical domain of a function.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Evaluation at a pole (ζ(1), Γ at non-positive integers).
class PoleError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Bogolyubov angle requested for a gapless mode (ε = Δ = 0).
class DegenerateModeError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Time integration could not reach the requested endpoint.
class IntegrationError : public std::runtime_error {
 public:
  IntegrationError(const std::string& what, double k, double t)
      : std::runtime_error(what), k_(k), t_(t) {}
  double momentum() const noexcept { return k_; }
  double time() const noexcept { return t_; }

 private:
  double k_;
  double t_;
};

/// Invalid or inconsistent run configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace lrk
