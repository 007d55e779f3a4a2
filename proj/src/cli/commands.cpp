#include "lrkitaev/cli/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <functional>
#include <mutex>
#include <optional>
#include <ostream>

#include "lrkitaev/analysis.hpp"
#include "lrkitaev/cli/csv.hpp"
#include "lrkitaev/cli/manifest.hpp"
#include "lrkitaev/errors.hpp"
#include "lrkitaev/parallel.hpp"
#include "lrkitaev/theory.hpp"

namespace lrk::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct SweepCell {
  Exponent alpha;
  Exponent beta;
  double delta;

  std::string key() const {
    return "alpha=" + alpha.to_string() + ",beta=" + beta.to_string() + ",delta=" + format_double(delta);
  }
  std::string tag() const {
    return "a" + alpha.to_string() + "_b" + beta.to_string() + "_d" + format_double(delta);
  }
};

std::vector<SweepCell> sweep_cells(const RunConfig& cfg) {
  std::vector<SweepCell> cells;
  for (const auto& a : cfg.alphas)
    for (const auto& b : cfg.betas)
      for (double d : cfg.deltas) cells.push_back({a, b, d});
  return cells;
}

struct SweepOutcome {
  std::vector<std::optional<json>> summaries;
  std::size_t failed = 0;
};

using CellHandler = std::function<json(const SweepCell&, const QuenchResult&)>;

// Runs every cell not yet recorded in the manifest. Cells are spread over
// workers when there are enough of them; otherwise the modes of each cell
// are. on_done runs under a lock, so it may write files.
SweepOutcome run_cells(const RunConfig& cfg, const std::vector<SweepCell>& cells, Manifest& manifest,
                       const CellHandler& on_done, std::ostream& log) {
  SweepOutcome out;
  out.summaries.resize(cells.size());
  std::vector<std::size_t> pending;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (auto done = manifest.completed(cells[i].key()))
      out.summaries[i] = std::move(done);
    else
      pending.push_back(i);
  }
  if (pending.size() < cells.size())
    log << "[" << cfg.command << "] resuming: " << cells.size() - pending.size() << " of " << cells.size()
        << " cells already complete\n";

  const unsigned cell_workers = pending.size() >= cfg.workers ? cfg.workers : 1;
  const unsigned mode_workers = cell_workers == 1 ? cfg.workers : 1;
  std::mutex io;
  std::atomic<std::size_t> finished{0};
  std::atomic<std::size_t> failed{0};
  parallel_for(pending.size(), cell_workers, [&](std::size_t j) {
    const auto& cell = cells[pending[j]];
    try {
      const auto result =
          run_quench(cfg.chain(cell.alpha, cell.beta), cfg.ramp(cell.delta), cfg.effective_grid(), cfg.integrator, mode_workers);
      std::lock_guard lock(io);
      auto summary = on_done(cell, result);
      manifest.mark_completed(cell.key(), summary);
      out.summaries[pending[j]] = std::move(summary);
      log << "[" << cfg.command << "] " << ++finished << "/" << pending.size() << " " << cell.key()
          << " n_exc=" << format_double(result.n_exc) << "\n";
      for (const auto& w : result.warnings) log << "  warning: " << w << "\n";
    } catch (const std::exception& e) {
      std::lock_guard lock(io);
      manifest.mark_failed(cell.key(), e.what());
      ++failed;
      log << "[" << cfg.command << "] " << ++finished << "/" << pending.size() << " " << cell.key()
          << " FAILED: " << e.what() << "\n";
    }
  });
  out.failed = failed;
  return out;
}

int exit_code(std::size_t failed, std::size_t total, const Manifest& manifest, std::ostream& log) {
  if (failed == 0) return kExitOk;
  log << failed << " of " << total << " cells failed; see " << manifest.path().string() << "\n";
  return failed == total ? kExitNumerical : kExitPartial;
}

double saddle_point(const Exponent& beta, double delta) {
  return theory::predicted_defect_density(beta.value(), delta).value;
}

}  // namespace

int cmd_quench(const RunConfig& cfg, std::ostream& log) {
  const fs::path dir(cfg.out_dir);
  const json config = to_json(cfg);
  Manifest manifest(dir, config);
  const auto cells = sweep_cells(cfg);

  auto on_done = [&](const SweepCell& cell, const QuenchResult& r) {
    const KitaevChain chain(cfg.chain(cell.alpha, cell.beta));
    auto meta = base_metadata(config);
    meta["alpha"] = cell.alpha.to_string();
    meta["beta"] = cell.beta.to_string();
    meta["delta"] = cell.delta;
    CsvTable modes("modes", {"k", "p_k_numeric", "p_k_lz_prediction"}, meta);
    for (const auto& m : r.modes) modes.add_row({m.k, m.p, theory::lz_probability(chain, cell.delta, m.k)});
    modes.write(dir / ("modes_" + cell.tag() + ".csv"));
    return json{{"n_exc", r.n_exc},
                {"n_exc_lz_quadrature", theory::lz_defect_density(chain, cell.delta)},
                {"n_exc_saddle_point", saddle_point(cell.beta, cell.delta)},
                {"k_threshold", r.k_threshold},
                {"points_below_threshold", r.points_below_threshold},
                {"max_norm_drift", r.max_norm_drift}};
  };
  const auto outcome = run_cells(cfg, cells, manifest, on_done, log);

  CsvTable summary("summary",
                   {"alpha", "beta", "delta", "n_exc", "n_exc_lz_quadrature", "n_exc_saddle_point", "k_threshold",
                    "points_below_threshold", "max_norm_drift"},
                   base_metadata(config));
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const auto& s = outcome.summaries[i];
    if (!s) continue;
    summary.add_row({cells[i].alpha.to_string(), cells[i].beta.to_string(), cells[i].delta, (*s)["n_exc"].get<double>(),
                     (*s)["n_exc_lz_quadrature"].get<double>(), (*s)["n_exc_saddle_point"].get<double>(),
                     (*s)["k_threshold"].get<double>(), (*s)["points_below_threshold"].get<long long>(),
                     (*s)["max_norm_drift"].get<double>()});
  }
  summary.write(dir / "summary.csv");
  return exit_code(outcome.failed, cells.size(), manifest, log);
}

int cmd_scaling(const RunConfig& cfg, std::ostream& log) {
  const fs::path dir(cfg.out_dir);
  const json config = to_json(cfg);
  Manifest manifest(dir, config);
  const auto cells = sweep_cells(cfg);
  auto on_done = [](const SweepCell&, const QuenchResult& r) {
    return json{{"n_exc", r.n_exc}, {"max_norm_drift", r.max_norm_drift}};
  };
  const auto outcome = run_cells(cfg, cells, manifest, on_done, log);

  CsvTable sweep("sweep", {"alpha", "beta", "delta", "n_exc", "max_norm_drift"}, base_metadata(config));
  auto meta = base_metadata(config);
  meta["fit"] = "OLS of log n_exc on log delta over the smallest-delta window of fit_decades";
  CsvTable exponents("exponents",
                     {"alpha", "beta", "theta_hat", "stderr", "r_squared", "delta_min", "delta_max", "points",
                      "theta_predicted", "theta_kz", "status"},
                     meta);
  std::size_t i = 0;
  for (const auto& a : cfg.alphas) {
    for (const auto& b : cfg.betas) {
      std::vector<analysis::SweepPoint> points;
      for (std::size_t j = 0; j < cfg.deltas.size(); ++j, ++i) {
        const auto& s = outcome.summaries[i];
        if (!s) continue;
        const double n = (*s)["n_exc"].get<double>();
        sweep.add_row({a.to_string(), b.to_string(), cells[i].delta, n, (*s)["max_norm_drift"].get<double>()});
        points.push_back({cells[i].delta, n});
      }
      const double predicted = theory::scaling_exponent(b.value());
      const double kz = theory::kz_variables(std::min(a.value(), b.value())).kz_exponent;
      const double nan = std::nan("");
      try {
        const auto fit = analysis::fit_power_law(analysis::select_window(points, cfg.fit_decades));
        exponents.add_row({a.to_string(), b.to_string(), fit.theta_hat, fit.std_error, fit.r_squared, fit.window.first,
                           fit.window.second, static_cast<long long>(fit.points), predicted, kz, std::string("ok")});
      } catch (const DomainError& e) {
        exponents.add_row({a.to_string(), b.to_string(), nan, nan, nan, nan, nan, static_cast<long long>(points.size()),
                           predicted, kz, std::string("fit failed: ") + e.what()});
      }
    }
  }
  sweep.write(dir / "sweep.csv");
  exponents.write(dir / "exponents.csv");
  return exit_code(outcome.failed, cells.size(), manifest, log);
}

int cmd_collapse(const RunConfig& cfg, std::ostream& log) {
  const fs::path dir(cfg.out_dir);
  fs::create_directories(dir);
  const json config = to_json(cfg);
  const auto params = cfg.chain(cfg.alphas.front(), cfg.betas.front());
  const double phi = std::min(params.alpha.value(), params.beta.value());
  const double kz_exponent = theory::kz_variables(phi).kz_exponent;

  std::vector<double> deltas = cfg.deltas;
  std::sort(deltas.begin(), deltas.end());
  deltas.erase(std::unique(deltas.begin(), deltas.end()), deltas.end());

  CsvTable curves("collapse_curves", {"delta", "k", "p_k", "x_kz", "x_dyn"}, base_metadata(config));
  std::vector<analysis::Profile> profiles;
  for (double d : deltas) {
    QuenchResult r;
    try {
      r = run_quench(params, cfg.ramp(d), cfg.effective_grid(), cfg.integrator, cfg.workers);
    } catch (const std::exception& e) {
      log << "[collapse] delta=" << format_double(d) << " FAILED: " << e.what() << "\n";
      return kExitNumerical;
    }
    log << "[collapse] delta=" << format_double(d) << " n_exc=" << format_double(r.n_exc) << "\n";
    analysis::Profile profile{d, {}};
    for (const auto& m : r.modes) {
      profile.samples.push_back({m.k, m.p});
      curves.add_row({d, m.k, m.p, theory::kz_scaling_variable(m.k, d, phi), theory::dyn_scaling_variable(m.k, d)});
    }
    profiles.push_back(std::move(profile));
  }
  curves.write(dir / "collapse_curves.csv");

  CsvTable report("collapse_report",
                  {"scaling", "exponent", "spread", "overlap_min", "overlap_max", "min_transition_samples", "status"},
                  base_metadata(config));
  int code = kExitOk;
  for (const auto& [name, exponent] : {std::pair{"kz", kz_exponent}, std::pair{"dynamical", 0.5}}) {
    try {
      const auto rep = analysis::collapse_spread(profiles, exponent);
      const auto min_samples = *std::min_element(rep.transition_samples.begin(), rep.transition_samples.end());
      report.add_row({std::string(name), exponent, rep.spread, rep.overlap.first, rep.overlap.second,
                      static_cast<long long>(min_samples), std::string("ok")});
    } catch (const DomainError& e) {
      const double nan = std::nan("");
      report.add_row({std::string(name), exponent, nan, nan, nan, 0LL, std::string("failed: ") + e.what()});
      log << "[collapse] " << name << ": " << e.what() << "\n";
      code = kExitNumerical;
    }
  }
  report.write(dir / "collapse_report.csv");
  return code;
}

int cmd_finite_ramp(const RunConfig& cfg, std::ostream& log) {
  const fs::path dir(cfg.out_dir);
  const json config = to_json(cfg);
  Manifest manifest(dir, config);
  const auto cells = sweep_cells(cfg);
  const double g_f = *cfg.g_final;
  auto on_done = [&](const SweepCell& cell, const QuenchResult& r) {
    const KitaevChain chain(cfg.chain(cell.alpha, cell.beta));
    return json{{"n_exc", r.n_exc},
                {"n_exc_closed_form", theory::finite_ramp_defect_density(chain, cell.delta, g_f)},
                {"max_norm_drift", r.max_norm_drift}};
  };
  const auto outcome = run_cells(cfg, cells, manifest, on_done, log);

  CsvTable table("finite_ramp", {"alpha", "beta", "delta", "n_exc", "n_exc_closed_form", "max_norm_drift"},
                 base_metadata(config));
  CsvTable fits("finite_ramp_fit", {"alpha", "beta", "slope", "stderr", "r_squared", "points", "status"},
                base_metadata(config));
  std::size_t i = 0;
  for (const auto& a : cfg.alphas) {
    for (const auto& b : cfg.betas) {
      std::vector<analysis::SweepPoint> points;
      for (std::size_t j = 0; j < cfg.deltas.size(); ++j, ++i) {
        const auto& s = outcome.summaries[i];
        if (!s) continue;
        const double n = (*s)["n_exc"].get<double>();
        table.add_row({a.to_string(), b.to_string(), cells[i].delta, n, (*s)["n_exc_closed_form"].get<double>(),
                       (*s)["max_norm_drift"].get<double>()});
        points.push_back({cells[i].delta, n});
      }
      try {
        const auto fit = analysis::fit_power_law(points);
        fits.add_row({a.to_string(), b.to_string(), fit.theta_hat, fit.std_error, fit.r_squared,
                      static_cast<long long>(fit.points), std::string("ok")});
      } catch (const DomainError& e) {
        const double nan = std::nan("");
        fits.add_row({a.to_string(), b.to_string(), nan, nan, nan, static_cast<long long>(points.size()),
                      std::string("fit failed: ") + e.what()});
      }
    }
  }
  table.write(dir / "finite_ramp.csv");
  fits.write(dir / "finite_ramp_fit.csv");
  return exit_code(outcome.failed, cells.size(), manifest, log);
}

int cmd_phase_diagram(const RunConfig& cfg, std::ostream& log) {
  const fs::path dir(cfg.out_dir);
  fs::create_directories(dir);
  struct Point {
    Exponent alpha;
    Exponent beta;
    double mu;
  };
  std::vector<Point> points;
  const auto& ph = cfg.phase;
  for (const auto& a : cfg.alphas)
    for (const auto& b : cfg.betas)
      for (int i = 0; i < ph.mu_points; ++i) {
        const double mu = ph.mu_points == 1 ? ph.mu_min : ph.mu_min + (ph.mu_max - ph.mu_min) * i / (ph.mu_points - 1);
        points.push_back({a, b, mu});
      }
  std::vector<double> winding(points.size(), std::nan(""));
  std::vector<std::string> status(points.size(), "ok");
  parallel_for(points.size(), cfg.workers, [&](std::size_t i) {
    auto params = cfg.chain(points[i].alpha, points[i].beta);
    params.mu = points[i].mu;
    try {
      winding[i] = winding_number(params, ph.grid_size);
    } catch (const DomainError& e) {
      status[i] = "gapless";
    }
  });
  CsvTable table("phase_diagram", {"alpha", "beta", "mu", "winding", "status"}, base_metadata(to_json(cfg)));
  for (std::size_t i = 0; i < points.size(); ++i)
    table.add_row({points[i].alpha.to_string(), points[i].beta.to_string(), points[i].mu, winding[i], status[i]});
  table.write(dir / "phase_diagram.csv");
  log << "[phase-diagram] " << points.size() << " points written\n";
  return kExitOk;
}

int run_command(const RunConfig& config, std::ostream& log) {
  try {
    config.validate();
  } catch (const ConfigError& e) {
    log << "config error: " << e.what() << "\n";
    return kExitConfig;
  }
  try {
    if (config.command == "quench") return cmd_quench(config, log);
    if (config.command == "scaling") return cmd_scaling(config, log);
    if (config.command == "collapse") return cmd_collapse(config, log);
    if (config.command == "finite-ramp") return cmd_finite_ramp(config, log);
    if (config.command == "phase-diagram") return cmd_phase_diagram(config, log);
  } catch (const ConfigError& e) {
    log << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
  log << "config error: unknown command '" << config.command << "'\n";
  return kExitConfig;
}

}  // namespace lrk::cli
