// SPDX-License-Identifier: Apache-2.0
#include "sdc/harness/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>

#include "sdc/harness/presets.hpp"

namespace sdc::harness {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double as_double(const std::string& key, const std::string& text) {
  double value = 0.0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) throw ConfigError("'" + key + "' expects a number, got '" + text + "'");
  return value;
}

long as_long(const std::string& key, const std::string& text) {
  long value = 0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) throw ConfigError("'" + key + "' expects an integer, got '" + text + "'");
  return value;
}

int as_int(const std::string& key, const std::string& text) { return static_cast<int>(as_long(key, text)); }

bool as_bool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
  if (text == "false" || text == "0" || text == "no" || text == "off") return false;
  throw ConfigError("'" + key + "' expects a boolean, got '" + text + "'");
}

const std::set<std::string>& run_keys() {
  static const std::set<std::string> keys{
      "preset",    "nodes",  "M",     "preconditioner", "strategy",    "eps-tol",      "r-tol",
      "beta",      "gamma",  "k-max", "r-max",          "dt",          "dt-min",       "dt-max",
      "interpolation-restart", "restart-budget",        "inner",       "t0",           "t-end",
      "block-steps", "pipelined", "workers",            "output-dir",  "snapshot",     "reference-eps-tol",
      "reference", "reference-steps"};
  return keys;
}

}  // namespace

Entries read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  Entries entries;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(path + ":" + std::to_string(number) + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw ConfigError(path + ":" + std::to_string(number) + ": empty key or value");
    entries[key] = value;
  }
  return entries;
}

RunConfig resolve(const Entries& entries) {
  const auto preset_it = entries.find("preset");
  if (preset_it == entries.end()) throw ConfigError("no preset given");
  const std::string preset = preset_it->second;

  Entries merged = preset_defaults(preset);
  for (const auto& [key, value] : entries) merged[key] = value;

  const auto params = preset_parameters(preset);
  RunConfig c;
  c.preset = preset;
  for (const auto& [key, value] : merged) {
    if (std::find(params.begin(), params.end(), key) != params.end())
      c.params[key] = value;
    else if (!run_keys().contains(key))
      throw ConfigError("unknown key '" + key + "'");
  }

  auto get = [&](const std::string& key) -> const std::string* {
    auto it = merged.find(key);
    return it == merged.end() ? nullptr : &it->second;
  };
  auto& cc = c.controller;
  try {
    if (auto v = get("strategy")) cc.strategy = parse_strategy(*v);
    if (auto v = get("nodes")) c.family = parse_node_family(*v);
    if (auto v = get("preconditioner")) c.preconditioner = parse_preconditioner_kind(*v);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  const bool dtk = cc.strategy == Strategy::dtk_adaptive;
  const bool iterate_to_tol = dtk || cc.strategy == Strategy::k_adaptive;
  c.nodes = dtk ? 4 : 3;
  cc.k_max = iterate_to_tol ? 16 : 5;

  if (auto v = get("M")) c.nodes = as_int("M", *v);
  if (auto v = get("eps-tol")) cc.eps_tol = as_double("eps-tol", *v);
  if (auto v = get("beta")) cc.beta = as_double("beta", *v);
  if (auto v = get("gamma")) cc.gamma = as_double("gamma", *v);
  if (auto v = get("k-max")) cc.k_max = as_int("k-max", *v);
  if (auto v = get("r-max")) cc.r_max = as_double("r-max", *v);
  if (auto v = get("dt")) cc.dt_init = as_double("dt", *v);
  if (auto v = get("dt-min")) cc.dt_min = as_double("dt-min", *v);
  if (auto v = get("dt-max")) cc.dt_max = as_double("dt-max", *v);
  if (auto v = get("interpolation-restart")) cc.interpolation_restart = as_bool("interpolation-restart", *v);
  if (auto v = get("restart-budget")) cc.restart_budget = as_long("restart-budget", *v);
  if (auto v = get("inner")) {
    if (*v == "auto")
      c.inner = InnerMode::automatic;
    else if (*v == "exact")
      c.inner = InnerMode::exact;
    else if (*v == "inexact")
      c.inner = InnerMode::inexact;
    else
      throw ConfigError("'inner' expects auto, exact or inexact, got '" + *v + "'");
  }
  if (auto v = get("t0")) c.t0 = as_double("t0", *v);
  if (auto v = get("t-end")) c.t_end = as_double("t-end", *v);
  if (auto v = get("block-steps")) c.block_steps = as_int("block-steps", *v);
  if (auto v = get("pipelined")) c.pipelined = as_bool("pipelined", *v);
  if (auto v = get("workers")) c.workers = as_int("workers", *v);
  if (auto v = get("output-dir")) c.output_dir = *v;
  if (auto v = get("snapshot")) c.write_snapshot = as_bool("snapshot", *v);
  if (auto v = get("reference-eps-tol")) c.reference_eps_tol = as_double("reference-eps-tol", *v);
  if (auto v = get("reference-steps")) c.reference_steps = as_int("reference-steps", *v);
  if (auto v = get("reference")) {
    if (*v == "dtk")
      c.reference = RunConfig::Reference::dtk;
    else if (*v == "collocation")
      c.reference = RunConfig::Reference::collocation;
    else
      throw ConfigError("'reference' expects dtk or collocation, got '" + *v + "'");
  }

  // Checked by building the problem once; it is rebuilt for the run.
  const auto problem = make_problem(preset, c.params);
  if (auto v = get("r-tol"))
    cc.r_tol = as_double("r-tol", *v);
  else if (dtk)
    cc.r_tol = problem->residual_tolerance_factor() * cc.eps_tol;

  if (c.nodes < 1) throw ConfigError("M must be at least 1");
  if (c.family == NodeFamily::lobatto && c.nodes < 2) throw ConfigError("lobatto needs M >= 2");
  if (!(c.t_end > c.t0)) throw ConfigError("t-end must exceed t0");
  if (c.block_steps < 0) throw ConfigError("block-steps must be non-negative");
  if (c.workers < 1) throw ConfigError("workers must be at least 1");
  if (!(c.reference_eps_tol > 0.0)) throw ConfigError("reference-eps-tol must be positive");
  if (c.reference_steps < 1) throw ConfigError("reference-steps must be at least 1");
  if (c.block_steps > 0 && cc.strategy != Strategy::fixed && cc.strategy != Strategy::dt_adaptive)
    throw ConfigError("block-steps needs the fixed or dt-adaptive strategy");
  try {
    cc.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return c;
}

}  // namespace sdc::harness
