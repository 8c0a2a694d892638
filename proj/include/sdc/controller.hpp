// SPDX-License-Identifier: Apache-2.0
//
// Step acceptance and step-size selection: fixed, k-adaptive, dt-adaptive
// (increment estimate, fixed sweep count) and dt-k-adaptive (embedded node
// estimate, iterate to a residual tolerance).
#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "sdc/sweeper.hpp"

namespace sdc {

enum class Strategy { fixed, k_adaptive, dt_adaptive, dtk_adaptive };

std::string_view to_string(Strategy strategy);
Strategy parse_strategy(std::string_view name);

struct ControllerConfig {
  Strategy strategy = Strategy::dt_adaptive;
  double eps_tol = 1e-8;
  double r_tol = 1e-12;
  double beta = 0.9;
  double gamma = 4.0;
  int k_max = 16;
  double r_max = 1e9;
  double dt_init = 0.1;
  std::optional<double> dt_min;
  std::optional<double> dt_max;
  bool interpolation_restart = false;
  long restart_budget = 10000;

  /// Throws std::invalid_argument when an invariant is violated.
  void validate() const;
};

enum class Verdict { accept, restart };

enum class StepReason {
  within_tolerance,
  error_exceeds_tolerance,
  no_convergence,
  /// GSSDC only: a later step of a block whose earlier step was rejected.
  discarded,
};

std::string_view to_string(StepReason reason);

struct StepDecision {
  Verdict verdict = Verdict::accept;
  double dt_next = 0.0;
  StepReason reason = StepReason::within_tolerance;
  /// Node values to start the redone step from (interpolation restart).
  std::optional<std::vector<State>> initial_guess;
};

/// One attempted step.
struct StepRecord {
  long step_index = 0;
  double t = 0.0;
  double dt = 0.0;
  int k = 0;
  double eps = 0.0;
  double residual = 0.0;
  bool accepted = true;
  StepReason reason = StepReason::within_tolerance;
  long newton_iters = 0;
};

struct RunAggregates {
  long steps = 0;  ///< accepted steps
  long restarts = 0;
  long sweeps = 0;
  long newton_iters = 0;
  double wall_seconds = 0.0;
};

struct RunRecord {
  double t0 = 0.0;
  double t_end = 0.0;
  std::vector<StepRecord> steps;
  RunAggregates totals;
  State final_state;
};

/// Fold of the per-step records (wall time is not part of the records and stays 0).
RunAggregates aggregate(const std::vector<StepRecord>& steps);

/// A run stopped early; carries everything recorded so far.
class RunAborted : public std::runtime_error {
 public:
  RunAborted(const std::string& what, RunRecord partial) : std::runtime_error(what), partial_(std::move(partial)) {}
  const RunRecord& partial() const { return partial_; }

 private:
  RunRecord partial_;
};

/// Current time advanced with compensated summation, so that many equal
/// steps end on the interval end instead of drifting by the rounding sum.
class TimeAccumulator {
 public:
  explicit TimeAccumulator(double t0) : t_(t0) {}
  double value() const { return t_; }
  void advance(double dt) {
    const double y = dt - carry_;
    const double next = t_ + y;
    carry_ = (next - t_) - y;
    t_ = next;
  }
  void set(double t) {
    t_ = t;
    carry_ = 0.0;
  }

 private:
  double t_;
  double carry_ = 0.0;
};

/// beta dt (eps_tol / eps)^(1 / order_exponent); +inf for eps == 0.
double optimal_step_size(double eps, double eps_tol, double dt, int order_exponent, double beta);

/// min(candidate, gamma current), then clipped to [dt_min, dt_max] where given.
double clamp_growth(double candidate, double current, double gamma, std::optional<double> dt_min,
                    std::optional<double> dt_max);

struct StepOutcome {
  StepRecord record;
  StepDecision decision;
  State u_end;
};

/// Called after every attempted step with the record and, for accepted
/// steps, the new solution (empty otherwise).
using StepObserver = std::function<void(const StepRecord&, const State&)>;

class Controller {
 public:
  Controller(const Sweeper& sweeper, ControllerConfig config, TaskPool* pool = nullptr);

  const ControllerConfig& config() const { return config_; }

  /// Attempts the step [t, t + dt] from u0 with the configured strategy.
  StepOutcome step(double t, double dt, const State& u0, const std::vector<State>* guess = nullptr) const;

  StepOutcome step_fixed(double t, double dt, const State& u0) const;
  StepOutcome step_k_adaptive(double t, double dt, const State& u0) const;
  StepOutcome step_dt_adaptive(double t, double dt, const State& u0) const;
  StepOutcome step_dtk_adaptive(double t, double dt, const State& u0, const std::vector<State>* guess = nullptr) const;

  /// Integrates from t0 to t_end, truncating the last step to hit t_end.
  /// Throws RunAborted on non-finite states, solver failure or when the
  /// restart budget is exhausted.
  RunRecord integrate(const State& u0, double t0, double t_end, const StepObserver& observer = {}) const;

 private:
  SweepState begin(double t, double dt, const State& u0, const std::vector<State>* guess) const;

  const Sweeper* sweeper_;
  ControllerConfig config_;
  TaskPool* pool_;
};

}  // namespace sdc
