// SPDX-License-Identifier: Apache-2.0
//
// sdc run | work-precision | convergence
//
// Exit codes: 0 ok, 1 configuration error (including unknown presets),
// 2 run aborted, 3 internal error.
#include <filesystem>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "sdc/harness/config.hpp"
#include "sdc/harness/run.hpp"

namespace fs = std::filesystem;
using namespace sdc;
using namespace sdc::harness;

namespace {

enum Exit { ok = 0, config_error = 1, run_aborted = 2, internal_error = 3 };

struct Common {
  std::string config_path;
  Entries overrides;
  std::vector<std::string> params;
};

void add_common(CLI::App* sub, Common& common) {
  sub->add_option("-c,--config", common.config_path, "key = value configuration file");
  auto bind = [&](const std::string& flag, const std::string& key, const std::string& help) {
    sub->add_option_function<std::string>(
        "--" + flag, [&common, key](const std::string& v) { common.overrides[key] = v; }, help);
  };
  bind("preset", "preset", "dahlquist, vdp, vdp-transition, quench, nls, allen-cahn");
  bind("strategy", "strategy", "fixed, k-adaptive, dt-adaptive, dtk-adaptive");
  bind("eps-tol", "eps-tol", "local error tolerance");
  bind("r-tol", "r-tol", "residual tolerance");
  bind("dt", "dt", "initial (or fixed) step size");
  bind("dt-min", "dt-min", "lower step size clamp");
  bind("dt-max", "dt-max", "upper step size clamp");
  bind("k-max", "k-max", "sweeps per step (maximum for iterating strategies)");
  bind("beta", "beta", "safety factor");
  bind("gamma", "gamma", "step growth limit");
  bind("nodes", "nodes", "radau-right, lobatto, legendre");
  bind("M", "M", "number of collocation nodes");
  bind("preconditioner", "preconditioner", "implicit-euler, lu, min-sr-s, explicit-euler, picard");
  bind("inner", "inner", "auto, exact, inexact");
  bind("t0", "t0", "start time");
  bind("t-end", "t-end", "end time");
  bind("block-steps", "block-steps", "steps per GSSDC block (0: serial)");
  bind("workers", "workers", "node-parallel task pool width");
  bind("output-dir", "output-dir", "directory for steps.csv, summary.json and snapshots");
  bind("reference", "reference", "dtk or collocation self-run reference");
  bind("reference-eps-tol", "reference-eps-tol", "tolerance of the dtk reference run");
  bind("reference-steps", "reference-steps", "steps of the collocation reference run");
  sub->add_flag_function(
      "--interpolation-restart", [&common](std::int64_t) { common.overrides["interpolation-restart"] = "true"; },
      "start restarted steps from the interpolated collocation polynomial");
  sub->add_flag_function(
      "--pipelined", [&common](std::int64_t) { common.overrides["pipelined"] = "true"; },
      "run GSSDC blocks as a pipeline");
  sub->add_option("-p,--param", common.params, "problem parameter, key=value (repeatable)");
}

Entries gather(const Common& common) {
  Entries entries;
  if (!common.config_path.empty()) entries = read_config_file(common.config_path);
  for (const auto& [key, value] : common.overrides) entries[key] = value;
  for (const auto& p : common.params) {
    const auto eq = p.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("--param expects key=value, got '" + p + "'");
    entries[p.substr(0, eq)] = p.substr(eq + 1);
  }
  return entries;
}

template <class T>
std::vector<T> parse_list(const std::string& text, const char* what) {
  std::vector<T> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::stringstream is(item);
    T value{};
    if (!(is >> value) || !is.eof()) throw ConfigError(std::string("bad entry in ") + what + ": '" + item + "'");
    out.push_back(value);
  }
  return out;
}

int cmd_run(const Common& common, bool with_error) {
  const Entries entries = gather(common);
  const RunConfig config = resolve(entries);
  Experiment experiment(config);
  RunResult result = execute(experiment);
  const auto& problem = experiment.problem();
  if (!result.aborted && (with_error || problem.exact_solution(config.t_end)))
    result.global_error =
        relative_error(result.record.final_state, reference_solution(config), problem.field());

  const fs::path dir = config.output_dir;
  fs::create_directories(dir);
  write_steps_csv(dir / "steps.csv", result.record.steps);
  write_summary_json(dir / "summary.json", config, result);
  write_diagnostics_csv(dir / "diagnostics.csv", result.diagnostics);
  if (config.write_snapshot && !result.aborted)
    write_snapshot(dir, "snapshot", problem, result.record.final_state, config.t_end);

  const auto& totals = result.record.totals;
  std::cout << config.preset << " " << to_string(config.controller.strategy) << ": " << totals.steps << " steps, "
            << totals.restarts << " restarts, " << totals.sweeps << " sweeps, " << totals.newton_iters
            << " inner iterations, " << totals.wall_seconds << " s";
  if (result.global_error) std::cout << ", error " << *result.global_error;
  std::cout << "\n";
  if (result.aborted) {
    std::cerr << "run aborted: " << result.message << "\n";
    return run_aborted;
  }
  return ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral deferred correction with adaptive step size selection"};
  app.require_subcommand(1);

  Common run_opts, wp_opts, conv_opts;
  bool with_error = false;
  auto* run = app.add_subcommand("run", "integrate one configuration; writes steps.csv and summary.json");
  add_common(run, run_opts);
  run->add_flag("--global-error", with_error, "compute the error against a reference self-run");

  std::string strategies = "fixed,dt-adaptive,dtk-adaptive", tolerances = "1e-5,1e-6,1e-7,1e-8,1e-9",
              dts = "0.1,0.05,0.025,0.0125", wp_out = "wp.csv";
  auto* wp = app.add_subcommand("work-precision", "error and cost over a tolerance or step size sweep");
  add_common(wp, wp_opts);
  wp->add_option("--strategies", strategies, "comma separated strategies")->capture_default_str();
  wp->add_option("--tolerances", tolerances, "eps-tol values for adaptive strategies")->capture_default_str();
  wp->add_option("--dts", dts, "step sizes for the fixed strategy")->capture_default_str();
  wp->add_option("-o,--output", wp_out, "output csv")->capture_default_str();

  std::string sweeps = "1,2,3,4,5,6", conv_dts = "0.1,0.05,0.025,0.0125,0.00625", conv_out = "convergence.csv";
  auto* conv = app.add_subcommand("convergence", "observed order per sweep count over step size halvings");
  add_common(conv, conv_opts);
  conv->add_option("--sweeps", sweeps, "comma separated sweep counts")->capture_default_str();
  conv->add_option("--dts", conv_dts, "step sizes")->capture_default_str();
  conv->add_option("-o,--output", conv_out, "output csv")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? ok : config_error;
  }

  try {
    if (run->parsed()) return cmd_run(run_opts, with_error);
    if (wp->parsed()) {
      const Entries base = gather(wp_opts);
      resolve(base);
      std::vector<Strategy> list;
      for (const auto& s : parse_list<std::string>(strategies, "--strategies")) {
        try {
          list.push_back(parse_strategy(s));
        } catch (const std::invalid_argument& e) {
          throw ConfigError(e.what());
        }
      }
      const auto rows = work_precision(base, list, parse_list<double>(tolerances, "--tolerances"),
                                       parse_list<double>(dts, "--dts"));
      if (auto parent = fs::path(wp_out).parent_path(); !parent.empty()) fs::create_directories(parent);
      write_work_precision_csv(wp_out, rows);
      for (const auto& r : rows)
        std::cout << to_string(r.strategy) << " " << r.control << ": error " << r.error << ", " << r.wall_seconds
                  << " s\n";
      return ok;
    }
    if (conv->parsed()) {
      const Entries base = gather(conv_opts);
      const auto rows =
          convergence(base, parse_list<int>(sweeps, "--sweeps"), parse_list<double>(conv_dts, "--dts"));
      if (auto parent = fs::path(conv_out).parent_path(); !parent.empty()) fs::create_directories(parent);
      write_convergence_csv(conv_out, rows);
      for (const auto& r : rows)
        std::cout << "k=" << r.sweeps << " dt=" << r.dt << ": error " << r.error << ", order " << r.order << "\n";
      return ok;
    }
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return config_error;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return internal_error;
  }
  return internal_error;
}
