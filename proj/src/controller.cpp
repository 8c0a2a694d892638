// SPDX-License-Identifier: Apache-2.0
#include "sdc/controller.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

namespace sdc {

std::string_view to_string(Strategy strategy) {
  switch (strategy) {
    case Strategy::fixed:
      return "fixed";
    case Strategy::k_adaptive:
      return "k-adaptive";
    case Strategy::dt_adaptive:
      return "dt-adaptive";
    case Strategy::dtk_adaptive:
      return "dtk-adaptive";
  }
  return "?";
}

Strategy parse_strategy(std::string_view name) {
  if (name == "fixed") return Strategy::fixed;
  if (name == "k-adaptive") return Strategy::k_adaptive;
  if (name == "dt-adaptive") return Strategy::dt_adaptive;
  if (name == "dtk-adaptive") return Strategy::dtk_adaptive;
  throw std::invalid_argument("unknown strategy '" + std::string(name) + "'");
}

std::string_view to_string(StepReason reason) {
  switch (reason) {
    case StepReason::within_tolerance:
      return "within-tolerance";
    case StepReason::error_exceeds_tolerance:
      return "error-exceeds-tolerance";
    case StepReason::no_convergence:
      return "no-convergence";
    case StepReason::discarded:
      return "discarded";
  }
  return "?";
}

void ControllerConfig::validate() const {
  auto fail = [](const char* what) { throw std::invalid_argument(std::string("controller config: ") + what); };
  if (!(beta > 0.0 && beta <= 1.0)) fail("beta must lie in (0, 1]");
  if (!(gamma > 1.0)) fail("gamma must exceed 1");
  if (k_max < 1) fail("k_max must be at least 1");
  if (!(r_max > 0.0)) fail("r_max must be positive");
  if (!(dt_init > 0.0)) fail("dt_init must be positive");
  if ((strategy == Strategy::dt_adaptive || strategy == Strategy::dtk_adaptive) && !(eps_tol > 0.0))
    fail("eps_tol must be positive for adaptive strategies");
  if ((strategy == Strategy::dtk_adaptive || strategy == Strategy::k_adaptive) && !(r_tol > 0.0))
    fail("r_tol must be positive");
  if (dt_min && dt_init < *dt_min) fail("dt_init below dt_min");
  if (dt_max && dt_init > *dt_max) fail("dt_init above dt_max");
  if (dt_min && dt_max && *dt_min > *dt_max) fail("dt_min above dt_max");
  if (restart_budget < 0) fail("restart budget must be non-negative");
}

RunAggregates aggregate(const std::vector<StepRecord>& steps) {
  RunAggregates a;
  for (const auto& s : steps) {
    if (s.accepted)
      ++a.steps;
    else
      ++a.restarts;
    a.sweeps += s.k;
    a.newton_iters += s.newton_iters;
  }
  return a;
}

double optimal_step_size(double eps, double eps_tol, double dt, int order_exponent, double beta) {
  if (eps == 0.0) return std::numeric_limits<double>::infinity();
  return beta * dt * std::pow(eps_tol / eps, 1.0 / order_exponent);
}

double clamp_growth(double candidate, double current, double gamma, std::optional<double> dt_min,
                    std::optional<double> dt_max) {
  double dt = std::min(candidate, gamma * current);
  if (dt_min) dt = std::max(dt, *dt_min);
  if (dt_max) dt = std::min(dt, *dt_max);
  return dt;
}

Controller::Controller(const Sweeper& sweeper, ControllerConfig config, TaskPool* pool)
    : sweeper_(&sweeper), config_(config), pool_(pool) {
  config_.validate();
  if (config_.strategy == Strategy::dtk_adaptive && sweeper.nodes().size() < 2)
    throw std::invalid_argument("dt-k-adaptivity needs at least two collocation nodes");
}

SweepState Controller::begin(double t, double dt, const State& u0, const std::vector<State>* guess) const {
  if (guess != nullptr) return sweeper_->start(t, dt, u0, *guess);
  return sweeper_->start(t, dt, u0);
}

StepOutcome Controller::step(double t, double dt, const State& u0, const std::vector<State>* guess) const {
  switch (config_.strategy) {
    case Strategy::fixed:
      return step_fixed(t, dt, u0);
    case Strategy::k_adaptive:
      return step_k_adaptive(t, dt, u0);
    case Strategy::dt_adaptive:
      return step_dt_adaptive(t, dt, u0);
    case Strategy::dtk_adaptive:
      return step_dtk_adaptive(t, dt, u0, guess);
  }
  throw std::logic_error("unknown strategy");
}

namespace {

StepRecord make_record(const SweepState& s, double eps, bool accepted, StepReason reason) {
  StepRecord r;
  r.t = s.t;
  r.dt = s.dt;
  r.k = s.k;
  r.eps = eps;
  r.residual = s.residual;
  r.accepted = accepted;
  r.reason = reason;
  r.newton_iters = s.newton_count;
  return r;
}

}  // namespace

StepOutcome Controller::step_fixed(double t, double dt, const State& u0) const {
  const Field field = sweeper_->problem().field();
  SweepState s = begin(t, dt, u0, nullptr);
  State previous_end;
  for (int k = 0; k < config_.k_max; ++k) {
    previous_end = s.u.back();
    sweeper_->sweep(s, pool_);
  }
  const double eps = max_norm_diff(s.u.back(), previous_end, field);
  StepOutcome out{make_record(s, eps, true, StepReason::within_tolerance), {}, sweeper_->end_value(s)};
  out.decision = {Verdict::accept, dt, StepReason::within_tolerance, std::nullopt};
  return out;
}

StepOutcome Controller::step_k_adaptive(double t, double dt, const State& u0) const {
  const Field field = sweeper_->problem().field();
  SweepState s = begin(t, dt, u0, nullptr);
  State previous_end;
  do {
    previous_end = s.u.back();
    sweeper_->sweep(s, pool_);
  } while (s.residual > config_.r_tol && s.k < config_.k_max);
  const double eps = max_norm_diff(s.u.back(), previous_end, field);
  StepOutcome out{make_record(s, eps, true, StepReason::within_tolerance), {}, sweeper_->end_value(s)};
  out.decision = {Verdict::accept, dt, StepReason::within_tolerance, std::nullopt};
  return out;
}

StepOutcome Controller::step_dt_adaptive(double t, double dt, const State& u0) const {
  const Field field = sweeper_->problem().field();
  SweepState s = begin(t, dt, u0, nullptr);
  State previous_end;
  for (int k = 0; k < config_.k_max; ++k) {
    previous_end = s.u.back();
    sweeper_->sweep(s, pool_);
  }
  const double eps = max_norm_diff(s.u.back(), previous_end, field);
  const double dt_next = clamp_growth(optimal_step_size(eps, config_.eps_tol, dt, config_.k_max, config_.beta), dt,
                                      config_.gamma, config_.dt_min, config_.dt_max);
  const bool accept = eps <= config_.eps_tol;
  const StepReason reason = accept ? StepReason::within_tolerance : StepReason::error_exceeds_tolerance;
  StepOutcome out{make_record(s, eps, accept, reason), {}, {}};
  out.decision = {accept ? Verdict::accept : Verdict::restart, dt_next, reason, std::nullopt};
  if (accept) out.u_end = sweeper_->end_value(s);
  return out;
}

StepOutcome Controller::step_dtk_adaptive(double t, double dt, const State& u0,
                                          const std::vector<State>* guess) const {
  const Field field = sweeper_->problem().field();
  SweepState s = begin(t, dt, u0, guess);
  const CollocationResult result =
      solve_collocation(*sweeper_, s, config_.r_tol, config_.k_max, config_.r_max, pool_);
  StepOutcome out;
  if (!result.converged) {
    out.record = make_record(s, std::numeric_limits<double>::quiet_NaN(), false, StepReason::no_convergence);
    out.decision = {Verdict::restart, dt / config_.gamma, StepReason::no_convergence, std::nullopt};
    return out;
  }

  const double eps = embedded_node_error_estimate(s, sweeper_->nodes(), field);
  const double dt_next =
      clamp_growth(optimal_step_size(eps, config_.eps_tol, dt, sweeper_->nodes().size(), config_.beta), dt,
                   config_.gamma, config_.dt_min, config_.dt_max);
  const bool accept = eps <= config_.eps_tol;
  const StepReason reason = accept ? StepReason::within_tolerance : StepReason::error_exceeds_tolerance;
  out.record = make_record(s, eps, accept, reason);
  out.decision = {accept ? Verdict::accept : Verdict::restart, dt_next, reason, std::nullopt};
  if (accept) {
    out.u_end = sweeper_->end_value(s);
  } else if (config_.interpolation_restart && dt_next <= dt) {
    out.decision.initial_guess = interpolate_to_nodes(sweeper_->nodes(), s.u0, s.u, dt, dt_next);
  }
  return out;
}

RunRecord Controller::integrate(const State& u0, double t0, double t_end, const StepObserver& observer) const {
  if (!(t_end > t0)) throw std::invalid_argument("integrate: t_end must exceed t0");
  RunRecord run;
  run.t0 = t0;
  run.t_end = t_end;

  const auto wall_start = std::chrono::steady_clock::now();
  auto finish = [&] {
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start).count();
    run.totals = aggregate(run.steps);
    run.totals.wall_seconds = wall;
  };
  auto abort = [&](const std::string& why) {
    finish();
    return RunAborted(why, run);
  };

  const double slack = 1e-12 * std::max(1.0, std::abs(t_end));
  TimeAccumulator clock(t0);
  double dt = config_.dt_init;
  State u = u0;
  std::optional<std::vector<State>> guess;
  long index = 0;
  long restarts = 0;
  while (clock.value() < t_end) {
    const double t = clock.value();
    const bool last = t + dt >= t_end - slack;
    const double dt_step = last ? t_end - t : dt;
    if (!(dt_step > 0.0) || t + dt_step == t) throw abort("step size underflow at t = " + std::to_string(t));
    if (guess && dt_step != dt) guess.reset();

    StepOutcome out;
    try {
      out = step(t, dt_step, u, guess ? &*guess : nullptr);
    } catch (const NonFiniteError& e) {
      throw abort(std::string("non-finite state: ") + e.what());
    } catch (const SolverFailure& e) {
      throw abort(std::string("solver failure: ") + e.what());
    }
    out.record.step_index = index++;
    run.steps.push_back(out.record);
    if (observer) observer(out.record, out.u_end);

    guess.reset();
    if (out.decision.verdict == Verdict::accept) {
      u = std::move(out.u_end);
      if (last)
        clock.set(t_end);
      else
        clock.advance(dt_step);
      dt = out.decision.dt_next;
    } else {
      if (++restarts > config_.restart_budget) throw abort("restart budget exhausted");
      dt = out.decision.dt_next;
      guess = std::move(out.decision.initial_guess);
    }
  }
  run.final_state = std::move(u);
  finish();
  return run;
}

}  // namespace sdc
