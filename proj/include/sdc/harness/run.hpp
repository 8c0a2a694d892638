// SPDX-License-Identifier: Apache-2.0
//
// Executing configured runs and writing their telemetry.
//
// steps.csv columns: step_index, t, dt, k, eps, residual, accepted (1/0),
// restart_reason (empty on accepted rows), newton_iters.
// wp.csv columns: strategy, control, error, wall_seconds, sweeps, newton, restarts.
#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sdc/controller.hpp"
#include "sdc/harness/config.hpp"
#include "sdc/sweeper.hpp"
#include "sdc/task_pool.hpp"

namespace sdc::harness {

/// Inner solves run to round-off.
InnerSolveConfig exact_inner();

/// Problem, sweeper and task pool built from a resolved configuration.
class Experiment {
 public:
  explicit Experiment(RunConfig config);

  const RunConfig& config() const { return config_; }
  const Problem& problem() const { return *problem_; }
  const Sweeper& sweeper() const { return *sweeper_; }
  TaskPool* pool() const { return pool_.get(); }

 private:
  RunConfig config_;
  std::unique_ptr<Problem> problem_;
  std::unique_ptr<Sweeper> sweeper_;
  std::unique_ptr<TaskPool> pool_;
};

struct DiagnosticSample {
  double t = 0.0;
  std::vector<std::pair<std::string, double>> values;
};

struct RunResult {
  RunRecord record;
  bool aborted = false;
  std::string message;
  /// Initial state and every accepted step.
  std::vector<DiagnosticSample> diagnostics;
  std::vector<long> tasks_per_worker;
  std::optional<double> global_error;
};

/// Integrates the experiment. Aborted runs return their partial record with
/// aborted set instead of throwing.
RunResult execute(const Experiment& experiment, bool record_diagnostics = true);

/// Closed-form solution at t_end when the problem has one, otherwise the
/// configured self-run reference.
State reference_solution(const RunConfig& config);

/// ||u - reference||_inf / ||reference||_inf
double relative_error(const State& u, const State& reference, Field field);

void write_steps_csv(const std::filesystem::path& path, const std::vector<StepRecord>& steps);
void write_summary_json(const std::filesystem::path& path, const RunConfig& config, const RunResult& result);
void write_diagnostics_csv(const std::filesystem::path& path, const std::vector<DiagnosticSample>& samples);
/// <stem>.csv with one row per grid point and <stem>.json with shape, field,
/// domain and time.
void write_snapshot(const std::filesystem::path& directory, const std::string& stem, const Problem& problem,
                    const State& u, double t);

struct WorkPrecisionRow {
  Strategy strategy = Strategy::fixed;
  /// dt for the fixed strategy, eps_tol otherwise.
  double control = 0.0;
  /// NaN when the run aborted.
  double error = 0.0;
  double wall_seconds = 0.0;
  long sweeps = 0;
  long newton = 0;
  long restarts = 0;
};

/// One run per (strategy, control). Fixed runs take their step sizes from
/// step_sizes, the others their tolerances from tolerances.
std::vector<WorkPrecisionRow> work_precision(const Entries& base, const std::vector<Strategy>& strategies,
                                             const std::vector<double>& tolerances,
                                             const std::vector<double>& step_sizes);
void write_work_precision_csv(const std::filesystem::path& path, const std::vector<WorkPrecisionRow>& rows);

struct ConvergenceRow {
  int sweeps = 0;
  double dt = 0.0;
  double error = 0.0;
  /// Observed order against the previous step size of the same sweep count;
  /// NaN on the first row.
  double order = 0.0;
};

/// Fixed-step runs with k = sweeps for every step size.
std::vector<ConvergenceRow> convergence(const Entries& base, const std::vector<int>& sweeps,
                                        const std::vector<double>& step_sizes);
void write_convergence_csv(const std::filesystem::path& path, const std::vector<ConvergenceRow>& rows);

/// Least-squares slope of log(y) over log(x); pairs with non-positive or
/// non-finite entries are skipped.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace sdc::harness
