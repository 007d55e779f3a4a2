// lrkitaev: slow quenches of the long-range Kitaev chain.
//
//   lrkitaev quench --alpha 1.25 --beta inf --delta 0.05 --out runs/q
//   lrkitaev scaling --config configs/scaling_beta.yaml --workers 4

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lrkitaev/cli/commands.hpp"
#include "lrkitaev/errors.hpp"

namespace {

struct Flags {
  std::string config;
  std::optional<std::string> out;
  std::optional<unsigned> workers;
  std::optional<double> tol;
  std::vector<std::string> alpha;
  std::vector<std::string> beta;
  std::vector<double> delta;
  std::optional<std::size_t> grid_points;
  std::optional<double> g_final;
};

void add_shared(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config, "YAML run configuration");
  cmd->add_option("--out", f.out, "Output directory");
  cmd->add_option("--workers", f.workers, "Worker threads")->check(CLI::PositiveNumber);
  cmd->add_option("--tol", f.tol, "Integrator tolerance in [1e-12, 1e-6]");
  cmd->add_option("--alpha", f.alpha, "Hopping exponent (> 1 or inf); repeatable")->take_all();
  cmd->add_option("--beta", f.beta, "Pairing exponent (> 1 or inf); repeatable")->take_all();
  cmd->add_option("--delta", f.delta, "Ramp rate; repeatable")->take_all();
  cmd->add_option("--grid-points", f.grid_points, "Total momentum grid points");
}

lrk::cli::RunConfig resolve(const std::string& command, const Flags& f) {
  using lrk::cli::RunConfig;
  RunConfig cfg = f.config.empty() ? RunConfig{} : lrk::cli::load_config(f.config);
  if (!cfg.command.empty() && cfg.command != command)
    throw lrk::ConfigError("config file is for '" + cfg.command + "', not '" + command + "'");
  cfg.command = command;
  auto exponents = [](const std::vector<std::string>& texts) {
    std::vector<lrk::Exponent> out;
    for (const auto& t : texts) {
      try {
        out.push_back(lrk::Exponent::parse(t));
      } catch (const lrk::DomainError& e) {
        throw lrk::ConfigError(e.what());
      }
    }
    return out;
  };
  if (!f.alpha.empty()) cfg.alphas = exponents(f.alpha);
  if (!f.beta.empty()) cfg.betas = exponents(f.beta);
  if (!f.delta.empty()) cfg.deltas = f.delta;
  if (f.out) cfg.out_dir = *f.out;
  if (f.workers) cfg.workers = *f.workers;
  if (f.tol) cfg.integrator.tol = *f.tol;
  if (f.grid_points) {
    lrk::cli::set_grid_points(cfg.grid, *f.grid_points);
    cfg.grid_from_user = true;
  }
  if (f.g_final) cfg.g_final = *f.g_final;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Slow quenches of the long-range Kitaev chain"};
  app.set_version_flag("--version", std::string(LRKITAEV_VERSION));
  app.require_subcommand(1);

  Flags flags;
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"quench", "Per-mode excitation probabilities and defect density"},
      {"scaling", "Defect-density exponent per (alpha, beta) from a delta sweep"},
      {"collapse", "Scaling collapse of p_k under Kibble-Zurek and dynamical exponents"},
      {"finite-ramp", "Defect density of a ramp that stops before the critical point"},
      {"phase-diagram", "Winding number over a grid of chemical potentials"},
  };
  for (const auto& [name, help] : commands) {
    auto* cmd = app.add_subcommand(name, help);
    add_shared(cmd, flags);
    if (name == "finite-ramp") cmd->add_option("--g-final", flags.g_final, "Final reduced field mu_f/(2J) > 1");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return lrk::cli::kExitConfig;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  lrk::cli::RunConfig cfg;
  try {
    cfg = resolve(command, flags);
  } catch (const lrk::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return lrk::cli::kExitConfig;
  }
  return lrk::cli::run_command(cfg, std::cerr);
}
