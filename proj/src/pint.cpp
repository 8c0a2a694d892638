// SPDX-License-Identifier: Apache-2.0
#include "sdc/pint.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <condition_variable>
#include <exception>
#include <mutex>
#include <thread>

namespace sdc {

int node_parallel_sweep(const Sweeper& sweeper, SweepState& state, TaskPool* pool) {
  sweeper.sweep(state, pool);
  if (pool == nullptr || !sweeper.node_parallel()) return 1;
  return std::min(pool->width(), sweeper.nodes().size());
}

Block make_block(const Sweeper& sweeper, double t0, double dt, int steps, const State& u_in) {
  if (steps < 1) throw std::invalid_argument("make_block: need at least one step");
  Block b;
  b.t0 = t0;
  b.dt = dt;
  for (int j = 0; j < steps; ++j) b.steps.push_back(sweeper.start(t0 + j * dt, dt, u_in));
  b.end_history.resize(static_cast<std::size_t>(steps));
  return b;
}

void gssdc_iterate(const Sweeper& sweeper, Block& block) {
  const int k = block.iteration;
  for (int j = 0; j < block.size(); ++j) {
    auto& step = block.steps[static_cast<std::size_t>(j)];
    if (j > 0) step.u0 = block.end_history[static_cast<std::size_t>(j - 1)][static_cast<std::size_t>(k)];
    try {
      sweeper.sweep(step);
    } catch (const std::exception& e) {
      throw std::runtime_error("GSSDC step " + std::to_string(j + 1) + ": " + e.what());
    }
    auto& history = block.end_history[static_cast<std::size_t>(j)];
    history.resize(static_cast<std::size_t>(k) + 1);
    history[static_cast<std::size_t>(k)] = sweeper.end_value(step);
  }
  block.iteration = k + 1;
}

void gssdc_iterate_pipelined(const Sweeper& sweeper, Block& block, int iterations) {
  if (iterations <= 0) return;
  const int n = block.size();
  const int k0 = block.iteration;
  for (auto& h : block.end_history) h.resize(static_cast<std::size_t>(k0 + iterations));

  std::mutex mutex;
  std::condition_variable cv;
  std::vector<int> done(static_cast<std::size_t>(n), k0);
  bool failed = false;
  std::exception_ptr error;

  auto worker = [&](int j) {
    auto& step = block.steps[static_cast<std::size_t>(j)];
    try {
      for (int k = k0; k < k0 + iterations; ++k) {
        if (j > 0) {
          std::unique_lock lock(mutex);
          cv.wait(lock, [&] { return failed || done[static_cast<std::size_t>(j - 1)] > k; });
          if (failed) return;
          step.u0 = block.end_history[static_cast<std::size_t>(j - 1)][static_cast<std::size_t>(k)];
        }
        sweeper.sweep(step);
        block.end_history[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)] = sweeper.end_value(step);
        {
          std::lock_guard lock(mutex);
          done[static_cast<std::size_t>(j)] = k + 1;
        }
        cv.notify_all();
      }
    } catch (const std::exception& e) {
      std::lock_guard lock(mutex);
      if (!error) {
        try {
          throw std::runtime_error("GSSDC step " + std::to_string(j + 1) + ": " + e.what());
        } catch (...) {
          error = std::current_exception();
        }
      }
      failed = true;
      cv.notify_all();
    }
  };

  std::vector<std::thread> threads;
  threads.reserve(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) threads.emplace_back(worker, j);
  for (auto& t : threads) t.join();
  if (error) std::rethrow_exception(error);
  block.iteration = k0 + iterations;
}

bool gssdc_converge(const Sweeper& sweeper, Block& block, double tol, int max_iterations) {
  auto converged = [&] {
    return std::all_of(block.steps.begin(), block.steps.end(), [&](const SweepState& s) { return s.residual <= tol; });
  };
  for (int i = 0; i < max_iterations; ++i) {
    gssdc_iterate(sweeper, block);
    if (block.iteration > 1 && converged()) return true;
  }
  return converged();
}

BlockController::BlockController(const Sweeper& sweeper, ControllerConfig config, int block_steps, bool pipelined)
    : sweeper_(&sweeper), config_(config), block_steps_(block_steps), pipelined_(pipelined) {
  config_.validate();
  if (block_steps < 1) throw std::invalid_argument("BlockController: need at least one step per block");
  if (config_.strategy != Strategy::fixed && config_.strategy != Strategy::dt_adaptive)
    throw std::invalid_argument("BlockController supports the fixed and dt-adaptive strategies");
}

RunRecord BlockController::integrate(const State& u0, double t0, double t_end, const StepObserver& observer) const {
  if (!(t_end > t0)) throw std::invalid_argument("integrate: t_end must exceed t0");
  const Field field = sweeper_->problem().field();
  const int n = block_steps_;
  RunRecord run;
  run.t0 = t0;
  run.t_end = t_end;
  const auto wall_start = std::chrono::steady_clock::now();
  auto finish = [&] {
    run.totals = aggregate(run.steps);
    run.totals.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start).count();
  };

  const double slack = 1e-12 * std::max(1.0, std::abs(t_end));
  TimeAccumulator clock(t0);
  double dt = config_.dt_init;
  State u = u0;
  long index = 0;
  long restarts = 0;
  auto run_iterations = [&](Block& block, int count) {
    if (pipelined_)
      gssdc_iterate_pipelined(*sweeper_, block, count);
    else
      for (int i = 0; i < count; ++i) gssdc_iterate(*sweeper_, block);
  };

  while (clock.value() < t_end - slack) {
    const double t = clock.value();
    const double remaining = t_end - t;
    const bool last = n * dt >= remaining - slack;
    const double dt_block = last ? remaining / n : dt;
    if (!(dt_block > 0.0) || t + dt_block == t) {
      finish();
      throw RunAborted("step size underflow at t = " + std::to_string(t), run);
    }

    Block block = make_block(*sweeper_, t, dt_block, n, u);
    std::vector<State> previous_last(static_cast<std::size_t>(n));
    try {
      run_iterations(block, config_.k_max - 1);
      for (int j = 0; j < n; ++j) previous_last[static_cast<std::size_t>(j)] = block.steps[static_cast<std::size_t>(j)].u.back();
      run_iterations(block, 1);
    } catch (const std::exception& e) {
      finish();
      throw RunAborted(e.what(), run);
    }

    std::vector<double> eps(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j)
      eps[static_cast<std::size_t>(j)] =
          max_norm_diff(block.steps[static_cast<std::size_t>(j)].u.back(), previous_last[static_cast<std::size_t>(j)], field);

    int first_bad = n;
    if (config_.strategy == Strategy::dt_adaptive)
      for (int j = 0; j < n; ++j)
        if (!(eps[static_cast<std::size_t>(j)] <= config_.eps_tol)) {
          first_bad = j;
          break;
        }

    for (int j = 0; j < n; ++j) {
      const auto& s = block.steps[static_cast<std::size_t>(j)];
      StepRecord r;
      r.step_index = index++;
      r.t = s.t;
      r.dt = s.dt;
      r.k = s.k;
      r.eps = eps[static_cast<std::size_t>(j)];
      r.residual = s.residual;
      r.accepted = j < first_bad;
      r.reason = j < first_bad ? StepReason::within_tolerance
                               : (j == first_bad ? StepReason::error_exceeds_tolerance : StepReason::discarded);
      r.newton_iters = s.newton_count;
      run.steps.push_back(r);
      if (observer) observer(r, r.accepted ? block.end_history[static_cast<std::size_t>(j)].back() : State{});
    }

    if (first_bad > 0) u = block.end_history[static_cast<std::size_t>(first_bad - 1)].back();
    if (first_bad == n) {
      if (last)
        clock.set(t_end);
      else
        for (int j = 0; j < n; ++j) clock.advance(dt_block);
      if (config_.strategy == Strategy::dt_adaptive) {
        const double eps_max = *std::max_element(eps.begin(), eps.end());
        dt = clamp_growth(optimal_step_size(eps_max, config_.eps_tol, dt_block, config_.k_max, config_.beta), dt_block,
                          config_.gamma, config_.dt_min, config_.dt_max);
      }
    } else {
      for (int j = 0; j < first_bad; ++j) clock.advance(dt_block);
      dt = clamp_growth(optimal_step_size(eps[static_cast<std::size_t>(first_bad)], config_.eps_tol, dt_block,
                                          config_.k_max, config_.beta),
                        dt_block, config_.gamma, config_.dt_min, config_.dt_max);
      if (++restarts > config_.restart_budget) {
        finish();
        throw RunAborted("restart budget exhausted", run);
      }
    }
  }
  run.final_state = std::move(u);
  finish();
  return run;
}

}  // namespace sdc
