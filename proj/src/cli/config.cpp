#include "lrkitaev/cli/config.hpp"

#include <yaml-cpp/yaml.h>

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "lrkitaev/errors.hpp"

namespace lrk::cli {

namespace {

using nlohmann::json;

void check_keys(const YAML::Node& node, const std::string& where, const std::set<std::string>& allowed) {
  if (!node.IsMap()) throw ConfigError("'" + where + "' must be a mapping");
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    if (!allowed.count(key)) throw ConfigError("unknown key '" + key + "' in '" + where + "'");
  }
}

template <class T>
T scalar(const YAML::Node& node, const std::string& name) {
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    throw ConfigError("cannot read '" + name + "'");
  }
}

std::vector<double> doubles(const YAML::Node& node, const std::string& name) {
  std::vector<double> out;
  if (node.IsSequence()) {
    for (const auto& item : node) out.push_back(scalar<double>(item, name));
  } else {
    out.push_back(scalar<double>(node, name));
  }
  return out;
}

std::vector<Exponent> exponents(const YAML::Node& node, const std::string& name) {
  std::vector<Exponent> out;
  auto one = [&](const YAML::Node& item) {
    const auto text = scalar<std::string>(item, name);
    try {
      out.push_back(Exponent::parse(text == ".inf" ? "inf" : text));
    } catch (const DomainError& e) {
      throw ConfigError(name + ": " + e.what());
    }
  };
  if (node.IsSequence()) {
    for (const auto& item : node) one(item);
  } else {
    one(node);
  }
  return out;
}

json exponent_list(const std::vector<Exponent>& xs) {
  json out = json::array();
  for (const auto& x : xs) out.push_back(x.to_string());
  return out;
}

}  // namespace

Stepper parse_stepper(const std::string& name) {
  if (name == "rk78" || name == "fehlberg78") return Stepper::kFehlberg78;
  if (name == "rk45" || name == "dopri5") return Stepper::kDormandPrince5;
  throw ConfigError("unknown stepper '" + name + "' (expected rk78 or rk45)");
}

std::string to_string(Stepper stepper) { return stepper == Stepper::kFehlberg78 ? "rk78" : "rk45"; }

void set_grid_points(GridSpec& grid, std::size_t total) {
  if (total < 3) throw ConfigError("grid-points must be at least 3");
  grid.log_points = (2 * total) / 3;
  grid.uniform_points = total - grid.log_points;
}

RunConfig parse_config(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("YAML: ") + e.what());
  }
  RunConfig cfg;
  if (root.IsNull()) return cfg;
  check_keys(root, "config", {"command", "model", "ramp", "grid", "integrator", "scaling", "phase_diagram", "run"});

  if (root["command"]) cfg.command = scalar<std::string>(root["command"], "command");
  if (const auto m = root["model"]) {
    check_keys(m, "model", {"J", "d", "alpha", "beta"});
    if (m["J"]) cfg.J = scalar<double>(m["J"], "model.J");
    if (m["d"]) cfg.d = scalar<double>(m["d"], "model.d");
    if (m["alpha"]) cfg.alphas = exponents(m["alpha"], "model.alpha");
    if (m["beta"]) cfg.betas = exponents(m["beta"], "model.beta");
  }
  if (const auto r = root["ramp"]) {
    check_keys(r, "ramp", {"delta", "mu_start", "mu_end", "g_final"});
    if (r["delta"]) cfg.deltas = doubles(r["delta"], "ramp.delta");
    if (r["mu_start"]) cfg.mu_start = scalar<double>(r["mu_start"], "ramp.mu_start");
    if (r["mu_end"]) cfg.mu_end = scalar<double>(r["mu_end"], "ramp.mu_end");
    if (r["g_final"]) cfg.g_final = scalar<double>(r["g_final"], "ramp.g_final");
  }
  if (const auto g = root["grid"]) {
    cfg.grid_from_user = true;
    check_keys(g, "grid", {"log_points", "uniform_points", "k_split", "k_min", "points"});
    if (g["points"]) set_grid_points(cfg.grid, scalar<std::size_t>(g["points"], "grid.points"));
    if (g["log_points"]) cfg.grid.log_points = scalar<std::size_t>(g["log_points"], "grid.log_points");
    if (g["uniform_points"]) cfg.grid.uniform_points = scalar<std::size_t>(g["uniform_points"], "grid.uniform_points");
    if (g["k_split"]) cfg.grid.k_split = scalar<double>(g["k_split"], "grid.k_split");
    if (g["k_min"]) cfg.grid.k_min = scalar<double>(g["k_min"], "grid.k_min");
  }
  if (const auto i = root["integrator"]) {
    check_keys(i, "integrator", {"tol", "phase_step", "max_step", "stepper"});
    if (i["tol"]) cfg.integrator.tol = scalar<double>(i["tol"], "integrator.tol");
    if (i["phase_step"]) cfg.integrator.phase_step = scalar<double>(i["phase_step"], "integrator.phase_step");
    if (i["max_step"]) cfg.integrator.max_step = scalar<double>(i["max_step"], "integrator.max_step");
    if (i["stepper"]) cfg.integrator.stepper = parse_stepper(scalar<std::string>(i["stepper"], "integrator.stepper"));
  }
  if (const auto s = root["scaling"]) {
    check_keys(s, "scaling", {"fit_decades"});
    if (s["fit_decades"]) cfg.fit_decades = scalar<double>(s["fit_decades"], "scaling.fit_decades");
  }
  if (const auto p = root["phase_diagram"]) {
    check_keys(p, "phase_diagram", {"mu_min", "mu_max", "mu_points", "grid_size"});
    if (p["mu_min"]) cfg.phase.mu_min = scalar<double>(p["mu_min"], "phase_diagram.mu_min");
    if (p["mu_max"]) cfg.phase.mu_max = scalar<double>(p["mu_max"], "phase_diagram.mu_max");
    if (p["mu_points"]) cfg.phase.mu_points = scalar<int>(p["mu_points"], "phase_diagram.mu_points");
    if (p["grid_size"]) cfg.phase.grid_size = scalar<int>(p["grid_size"], "phase_diagram.grid_size");
  }
  if (const auto r = root["run"]) {
    check_keys(r, "run", {"out", "workers"});
    if (r["out"]) cfg.out_dir = scalar<std::string>(r["out"], "run.out");
    if (r["workers"]) cfg.workers = scalar<unsigned>(r["workers"], "run.workers");
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

void RunConfig::validate() const {
  auto positive = [](double x) { return x > 0.0 && std::isfinite(x); };
  if (!positive(J) || !positive(d)) throw ConfigError("J and d must be positive");
  if (alphas.empty() || betas.empty()) throw ConfigError("alpha and beta lists must be non-empty");
  const bool needs_delta = command != "phase-diagram";
  if (needs_delta && deltas.empty()) throw ConfigError("delta list is empty");
  for (double x : deltas)
    if (!positive(x)) throw ConfigError("every delta must be positive");

  if (command == "scaling" && deltas.size() < 5) throw ConfigError("scaling needs at least 5 delta values");
  if (command == "collapse") {
    if (alphas.size() != 1 || betas.size() != 1) throw ConfigError("collapse takes a single (alpha, beta) pair");
    std::set<double> distinct(deltas.begin(), deltas.end());
    if (distinct.size() < 3) throw ConfigError("collapse needs at least 3 distinct delta values");
  }
  if (command == "finite-ramp") {
    if (!g_final) throw ConfigError("finite-ramp requires ramp.g_final");
    if (!(*g_final > 1.0)) throw ConfigError("finite-ramp: g_final must exceed 1 (the ramp may not reach mu_c)");
    if (mu_end) throw ConfigError("finite-ramp sets the end point from g_final; drop ramp.mu_end");
  } else if (g_final) {
    throw ConfigError("g_final is only used by finite-ramp");
  }
  if (needs_delta) {
    try {
      const auto r = ramp(deltas.front());
      if (command == "finite-ramp" && r.mu_start() <= r.mu_end())
        throw ConfigError("finite-ramp: mu_start must exceed the final field");
    } catch (const DomainError& e) {
      throw ConfigError(std::string("ramp: ") + e.what());
    }
  }

  if (grid.log_points == 0 || grid.uniform_points == 0) throw ConfigError("grid point counts must be positive");
  if (!(grid.k_split > 0.0 && grid.k_split < std::numbers::pi)) throw ConfigError("grid.k_split must lie in (0, pi)");
  if (grid.k_min && !(*grid.k_min > 0.0 && *grid.k_min < grid.k_split))
    throw ConfigError("grid.k_min must lie in (0, k_split)");
  try {
    integrator.validate();
  } catch (const DomainError& e) {
    throw ConfigError(std::string("integrator: ") + e.what());
  }
  if (workers == 0) throw ConfigError("workers must be at least 1");
  if (!(fit_decades >= 1.5)) throw ConfigError("scaling.fit_decades must be at least 1.5");
  if (command == "phase-diagram") {
    if (phase.mu_points < 1 || !(phase.mu_min <= phase.mu_max)) throw ConfigError("invalid mu range");
    if (phase.grid_size < 1000) throw ConfigError("phase_diagram.grid_size must be at least 1000");
  }
}

ChainParams RunConfig::chain(const Exponent& alpha, const Exponent& beta) const {
  ChainParams p;
  p.J = J;
  p.d = d;
  p.alpha = alpha;
  p.beta = beta;
  return p;
}

RampProtocol RunConfig::ramp(double delta) const {
  const double mu_c = 2.0 * J;
  const double start = mu_start.value_or(2.0 * mu_c);
  const double end = g_final ? 2.0 * J * *g_final : mu_end.value_or(0.0);
  return RampProtocol::between(mu_c, delta, start, end);
}

GridSpec RunConfig::effective_grid() const {
  if (grid_from_user) return grid;
  const double mu_c = 2.0 * J;
  const double start = mu_start.value_or(2.0 * mu_c);
  const double end = g_final ? 2.0 * J * *g_final : mu_end.value_or(0.0);
  return start > mu_c && end < mu_c ? grid : GridSpec::non_crossing();
}

nlohmann::json to_json(const RunConfig& c) {
  json j;
  j["command"] = c.command;
  j["model"] = {{"J", c.J}, {"d", c.d}, {"alpha", exponent_list(c.alphas)}, {"beta", exponent_list(c.betas)}};
  json ramp = {{"delta", c.deltas}};
  const double mu_c = 2.0 * c.J;
  ramp["mu_start"] = c.mu_start.value_or(2.0 * mu_c);
  ramp["mu_end"] = c.g_final ? 2.0 * c.J * *c.g_final : c.mu_end.value_or(0.0);
  if (c.g_final) ramp["g_final"] = *c.g_final;
  j["ramp"] = ramp;
  const GridSpec g = c.effective_grid();
  json grid = {{"log_points", g.log_points}, {"uniform_points", g.uniform_points}, {"k_split", g.k_split}};
  grid["k_min"] = g.k_min ? json(*g.k_min) : json("min(1e-4, k_th/50)");
  j["grid"] = grid;
  json integ = {{"tol", c.integrator.tol},
                {"phase_step", c.integrator.phase_step},
                {"stepper", to_string(c.integrator.stepper)}};
  if (std::isfinite(c.integrator.max_step) && c.integrator.max_step < 1e300) integ["max_step"] = c.integrator.max_step;
  j["integrator"] = integ;
  if (c.command == "scaling") j["scaling"] = {{"fit_decades", c.fit_decades}};
  if (c.command == "phase-diagram")
    j["phase_diagram"] = {{"mu_min", c.phase.mu_min},
                          {"mu_max", c.phase.mu_max},
                          {"mu_points", c.phase.mu_points},
                          {"grid_size", c.phase.grid_size}};
  return j;
}

}  // namespace lrk::cli
