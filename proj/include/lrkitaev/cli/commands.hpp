#pragma once

#include <iosfwd>

#include "lrkitaev/cli/config.hpp"

namespace lrk::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 1,
  kExitNumerical = 2,
  kExitPartial = 3,
};

/// Per-(α, β, δ) mode tables plus summary.csv.
int cmd_quench(const RunConfig& config, std::ostream& log);
/// sweep.csv and exponents.csv (fitted θ per (α, β)).
int cmd_scaling(const RunConfig& config, std::ostream& log);
/// collapse_curves.csv and collapse_report.csv for one (α, β).
int cmd_collapse(const RunConfig& config, std::ostream& log);
/// finite_ramp.csv and finite_ramp_fit.csv for a ramp stopping at g_final.
int cmd_finite_ramp(const RunConfig& config, std::ostream& log);
/// phase_diagram.csv: winding number over a μ grid.
int cmd_phase_diagram(const RunConfig& config, std::ostream& log);

/// Validates and dispatches on config.command. Config errors map to exit 1.
int run_command(const RunConfig& config, std::ostream& log);

}  // namespace lrk::cli
