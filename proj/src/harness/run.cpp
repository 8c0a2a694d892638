// SPDX-License-Identifier: Apache-2.0
#include "sdc/harness/run.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include <json.hpp>

#include "sdc/harness/presets.hpp"
#include "sdc/pint.hpp"

namespace sdc::harness {

namespace {

using nlohmann::json;

constexpr double nan = std::numeric_limits<double>::quiet_NaN();

std::string number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

json finite_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

std::ofstream open_for_writing(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  return out;
}

InnerSolveConfig inner_for(const RunConfig& config, const Problem& problem) {
  switch (config.inner) {
    case InnerMode::exact:
      return exact_inner();
    case InnerMode::inexact:
      return problem.inexact_inner();
    case InnerMode::automatic:
      break;
  }
  return config.controller.strategy == Strategy::dtk_adaptive ? problem.inexact_inner() : exact_inner();
}

State reference_self_run(const RunConfig& config) {
  RunConfig ref = config;
  ref.inner = InnerMode::exact;
  ref.block_steps = 0;
  ref.workers = 1;
  ref.family = NodeFamily::radau_right;
  auto problem = make_problem(config.preset, config.params, config.t0);
  const double floor = 1e-13 * std::max(1.0, max_norm(problem->initial_state(), problem->field()));
  auto& cc = ref.controller;
  if (config.reference == RunConfig::Reference::dtk) {
    ref.nodes = 4;
    cc.strategy = Strategy::dtk_adaptive;
    cc.eps_tol = config.reference_eps_tol;
    cc.k_max = 16;
    cc.r_tol = std::max(problem->residual_tolerance_factor() * cc.eps_tol, floor);
  } else {
    ref.nodes = 5;
    cc.strategy = Strategy::k_adaptive;
    cc.k_max = 50;
    // Iterate to round-off; the growth check ends the sweeps there.
    cc.r_tol = 1e-3 * floor;
    cc.dt_init = (config.t_end - config.t0) / config.reference_steps;
    cc.dt_min.reset();
    cc.dt_max.reset();
  }
  Experiment experiment(ref);
  RunResult result = execute(experiment, false);
  if (result.aborted) throw std::runtime_error("reference run aborted: " + result.message);
  return result.record.final_state;
}

}  // namespace

InnerSolveConfig exact_inner() { return {0.0, 1e-15, 50}; }

Experiment::Experiment(RunConfig config) : config_(std::move(config)) {
  problem_ = make_problem(config_.preset, config_.params, config_.t0);
  sweeper_ = std::make_unique<Sweeper>(make_sweeper(*problem_, config_.family, config_.nodes, config_.preconditioner,
                                                    inner_for(config_, *problem_)));
  if (config_.workers > 1) pool_ = std::make_unique<TaskPool>(config_.workers);
}

RunResult execute(const Experiment& experiment, bool record_diagnostics) {
  const RunConfig& c = experiment.config();
  const Problem& problem = experiment.problem();
  RunResult result;
  const State u0 = problem.initial_state();
  if (record_diagnostics) result.diagnostics.push_back({c.t0, diagnostics(problem, u0)});

  double t_now = c.t0;
  StepObserver observer;
  if (record_diagnostics)
    observer = [&](const StepRecord& r, const State& u) {
      if (!r.accepted) return;
      t_now = r.t + r.dt;
      result.diagnostics.push_back({t_now, diagnostics(problem, u)});
    };

  try {
    if (c.block_steps > 0) {
      BlockController controller(experiment.sweeper(), c.controller, c.block_steps, c.pipelined);
      result.record = controller.integrate(u0, c.t0, c.t_end, observer);
    } else {
      Controller controller(experiment.sweeper(), c.controller, experiment.pool());
      result.record = controller.integrate(u0, c.t0, c.t_end, observer);
    }
  } catch (const RunAborted& e) {
    result.record = e.partial();
    result.aborted = true;
    result.message = e.what();
  }
  if (experiment.pool() != nullptr) result.tasks_per_worker = experiment.pool()->tasks_per_worker();
  return result;
}

State reference_solution(const RunConfig& config) {
  auto problem = make_problem(config.preset, config.params, config.t0);
  if (auto exact = problem->exact_solution(config.t_end)) return *exact;
  return reference_self_run(config);
}

double relative_error(const State& u, const State& reference, Field field) {
  const double scale = max_norm(reference, field);
  const double diff = max_norm_diff(u, reference, field);
  return scale > 0.0 ? diff / scale : diff;
}

void write_steps_csv(const std::filesystem::path& path, const std::vector<StepRecord>& steps) {
  auto out = open_for_writing(path);
  out << "step_index,t,dt,k,eps,residual,accepted,restart_reason,newton_iters\n";
  for (const auto& s : steps) {
    out << s.step_index << ',' << number(s.t) << ',' << number(s.dt) << ',' << s.k << ',' << number(s.eps) << ','
        << number(s.residual) << ',' << (s.accepted ? 1 : 0) << ',' << (s.accepted ? "" : to_string(s.reason))
        << ',' << s.newton_iters << '\n';
  }
}

void write_summary_json(const std::filesystem::path& path, const RunConfig& config, const RunResult& result) {
  const auto& totals = result.record.totals;
  json j;
  j["preset"] = config.preset;
  j["strategy"] = std::string(to_string(config.controller.strategy));
  j["nodes"] = std::string(to_string(config.family));
  j["M"] = config.nodes;
  j["preconditioner"] = std::string(to_string(config.preconditioner));
  j["eps_tol"] = config.controller.eps_tol;
  j["r_tol"] = config.controller.r_tol;
  j["k_max"] = config.controller.k_max;
  j["block_steps"] = config.block_steps;
  j["workers"] = config.workers;
  j["params"] = config.params;
  j["t0"] = result.record.t0;
  j["t_end"] = result.record.t_end;
  j["steps"] = totals.steps;
  j["restarts"] = totals.restarts;
  j["sweeps"] = totals.sweeps;
  j["newton_iters"] = totals.newton_iters;
  j["wall_seconds"] = totals.wall_seconds;
  j["aborted"] = result.aborted;
  if (result.aborted) j["abort_reason"] = result.message;
  j["global_error"] = result.global_error ? finite_or_null(*result.global_error) : json(nullptr);
  if (!result.tasks_per_worker.empty()) j["tasks_per_worker"] = result.tasks_per_worker;
  auto out = open_for_writing(path);
  out << j.dump(2) << '\n';
}

void write_diagnostics_csv(const std::filesystem::path& path, const std::vector<DiagnosticSample>& samples) {
  auto out = open_for_writing(path);
  out << 't';
  if (!samples.empty())
    for (const auto& [name, value] : samples.front().values) out << ',' << name;
  out << '\n';
  for (const auto& s : samples) {
    out << number(s.t);
    for (const auto& [name, value] : s.values) out << ',' << number(value);
    out << '\n';
  }
}

void write_snapshot(const std::filesystem::path& directory, const std::string& stem, const Problem& problem,
                    const State& u, double t) {
  const auto shape = state_shape(problem);
  const bool complex = problem.field() == Field::complex;
  {
    auto out = open_for_writing(directory / (stem + ".csv"));
    out << (shape.size() == 2 ? "i,j," : "i,") << (complex ? "re,im" : "value") << '\n';
    const std::size_t stride = complex ? 2 : 1;
    const std::size_t points = u.size() / stride;
    const std::size_t cols = shape.size() == 2 ? static_cast<std::size_t>(shape[1]) : points;
    for (std::size_t p = 0; p < points; ++p) {
      if (shape.size() == 2) out << p / cols << ',' << p % cols << ',';
      else out << p << ',';
      out << number(u[p * stride]);
      if (complex) out << ',' << number(u[p * stride + 1]);
      out << '\n';
    }
  }
  json meta;
  meta["problem"] = std::string(problem.name());
  meta["t"] = t;
  meta["shape"] = shape;
  meta["field"] = complex ? "complex" : "real";
  meta["layout"] = "row-major";
  json domain = json::array();
  for (const auto& [lo, hi] : state_domain(problem)) domain.push_back({lo, hi});
  meta["domain"] = domain;
  json diag;
  for (const auto& [name, value] : diagnostics(problem, u)) diag[name] = value;
  meta["diagnostics"] = diag;
  auto out = open_for_writing(directory / (stem + ".json"));
  out << meta.dump(2) << '\n';
}

std::vector<WorkPrecisionRow> work_precision(const Entries& base, const std::vector<Strategy>& strategies,
                                             const std::vector<double>& tolerances,
                                             const std::vector<double>& step_sizes) {
  const RunConfig base_config = resolve(base);
  const auto reference_problem = make_problem(base_config.preset, base_config.params, base_config.t0);
  const Field field = reference_problem->field();
  const State reference = reference_solution(base_config);

  std::vector<WorkPrecisionRow> rows;
  for (Strategy strategy : strategies) {
    const bool fixed = strategy == Strategy::fixed;
    for (double control : fixed ? step_sizes : tolerances) {
      Entries entries = base;
      entries["strategy"] = std::string(to_string(strategy));
      entries[fixed ? "dt" : "eps-tol"] = number(control);
      WorkPrecisionRow row;
      row.strategy = strategy;
      row.control = control;
      RunResult result;
      try {
        Experiment experiment(resolve(entries));
        result = execute(experiment, false);
      } catch (const std::exception&) {
        result.aborted = true;
      }
      const auto& totals = result.record.totals;
      row.error = result.aborted ? nan : relative_error(result.record.final_state, reference, field);
      row.wall_seconds = totals.wall_seconds;
      row.sweeps = totals.sweeps;
      row.newton = totals.newton_iters;
      row.restarts = totals.restarts;
      rows.push_back(row);
    }
  }
  return rows;
}

void write_work_precision_csv(const std::filesystem::path& path, const std::vector<WorkPrecisionRow>& rows) {
  auto out = open_for_writing(path);
  out << "strategy,control,error,wall_seconds,sweeps,newton,restarts\n";
  for (const auto& r : rows)
    out << to_string(r.strategy) << ',' << number(r.control) << ',' << number(r.error) << ','
        << number(r.wall_seconds) << ',' << r.sweeps << ',' << r.newton << ',' << r.restarts << '\n';
}

std::vector<ConvergenceRow> convergence(const Entries& base, const std::vector<int>& sweeps,
                                        const std::vector<double>& step_sizes) {
  Entries fixed = base;
  fixed["strategy"] = "fixed";
  const RunConfig base_config = resolve(fixed);
  const auto problem = make_problem(base_config.preset, base_config.params, base_config.t0);
  const State reference = reference_solution(base_config);

  std::vector<ConvergenceRow> rows;
  for (int k : sweeps) {
    double previous_error = nan;
    double previous_dt = nan;
    for (double dt : step_sizes) {
      Entries entries = fixed;
      entries["k-max"] = std::to_string(k);
      entries["dt"] = number(dt);
      Experiment experiment(resolve(entries));
      const RunResult result = execute(experiment, false);
      ConvergenceRow row;
      row.sweeps = k;
      row.dt = dt;
      row.error = result.aborted ? nan : relative_error(result.record.final_state, reference, problem->field());
      row.order = std::log(previous_error / row.error) / std::log(previous_dt / dt);
      rows.push_back(row);
      previous_error = row.error;
      previous_dt = dt;
    }
  }
  return rows;
}

void write_convergence_csv(const std::filesystem::path& path, const std::vector<ConvergenceRow>& rows) {
  auto out = open_for_writing(path);
  out << "sweeps,dt,error,order\n";
  for (const auto& r : rows)
    out << r.sweeps << ',' << number(r.dt) << ',' << number(r.error) << ',' << number(r.order) << '\n';
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (std::size_t i = 0; i < std::min(x.size(), y.size()); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0) || !std::isfinite(x[i]) || !std::isfinite(y[i])) continue;
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n;
  }
  if (n < 2) return nan;
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace sdc::harness
