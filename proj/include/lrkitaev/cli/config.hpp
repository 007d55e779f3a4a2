#pragma once

// Run configuration for the command-line driver. Loaded from a YAML file,
// then overridden by flags.

#include "json.hpp"

#include <optional>
#include <string>
#include <vector>

#include "lrkitaev/dynamics.hpp"
#include "lrkitaev/model.hpp"

namespace lrk::cli {

struct PhaseDiagramOptions {
  double mu_min = -4.0;
  double mu_max = 4.0;
  int mu_points = 81;
  int grid_size = 10000;
};

struct RunConfig {
  std::string command;

  double J = 1.0;
  double d = 1.0;
  std::vector<Exponent> alphas{Exponent::nearest_neighbor()};
  std::vector<Exponent> betas{Exponent::nearest_neighbor()};

  std::vector<double> deltas;
  /// Ramp endpoints; full crossing 2μ_c -> 0 when unset.
  std::optional<double> mu_start;
  std::optional<double> mu_end;
  /// Non-crossing final field g_f = μ_f / (2J) for finite-ramp.
  std::optional<double> g_final;

  GridSpec grid;
  /// Set when the grid came from the config file or --grid-points.
  bool grid_from_user = false;
  IntegratorOptions integrator;

  /// Fit window width for scaling, in decades of δ.
  double fit_decades = 2.0;
  PhaseDiagramOptions phase;

  std::string out_dir = "out";
  unsigned workers = 1;

  /// Throws ConfigError on any violated constraint.
  void validate() const;

  ChainParams chain(const Exponent& alpha, const Exponent& beta) const;
  RampProtocol ramp(double delta) const;
  /// The user grid, else the default layout for the command.
  GridSpec effective_grid() const;
};

/// Reads a YAML config. Unknown keys are rejected. Throws ConfigError.
RunConfig load_config(const std::string& path);

/// Parses YAML text (same schema as load_config).
RunConfig parse_config(const std::string& text);

/// Resolved physics and numerics settings, without execution-only fields
/// (output directory, worker count), so that outputs do not depend on them.
nlohmann::json to_json(const RunConfig& config);

/// Splits a --grid-points total into log-spaced and uniform blocks (2:1).
void set_grid_points(GridSpec& grid, std::size_t total);

Stepper parse_stepper(const std::string& name);
std::string to_string(Stepper stepper);

}  // namespace lrk::cli
