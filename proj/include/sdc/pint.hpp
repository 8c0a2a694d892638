// SPDX-License-Identifier: Apache-2.0
//
// Parallel-across-the-method (node-parallel sweeps with a diagonal
// preconditioner) and parallel-across-the-steps (block Gauss-Seidel SDC).
//
// Data flow of a GSSDC block iteration: step j sweeps once, then hands its
// end value to step j + 1, which uses it as initial value for its own sweep
// of the same iteration. Nothing else is exchanged, so step j's sweep k may
// run concurrently with step j + 1's sweep k - 1.
#pragma once

#include <vector>

#include "sdc/controller.hpp"
#include "sdc/sweeper.hpp"
#include "sdc/task_pool.hpp"

namespace sdc {

/// One sweep with the node solves dispatched to the pool. Returns the number
/// of node solves that could run concurrently (1 when the preconditioner
/// couples the nodes or no pool is given).
int node_parallel_sweep(const Sweeper& sweeper, SweepState& state, TaskPool* pool);

/// N consecutive steps sharing one step size.
struct Block {
  double t0 = 0.0;
  double dt = 0.0;
  std::vector<SweepState> steps;
  /// end_history[j][k]: end value of step j after block iteration k + 1.
  std::vector<std::vector<State>> end_history;
  int iteration = 0;

  int size() const { return static_cast<int>(steps.size()); }
};

/// Block starting at t0 with every step initialized from u_in.
Block make_block(const Sweeper& sweeper, double t0, double dt, int steps, const State& u_in);

/// One block iteration: steps swept in order, each taking the freshly swept
/// end value of its predecessor as initial value.
void gssdc_iterate(const Sweeper& sweeper, Block& block);

/// `iterations` block iterations executed as a pipeline, one thread per step.
/// Produces the same block bit for bit as calling gssdc_iterate repeatedly.
void gssdc_iterate_pipelined(const Sweeper& sweeper, Block& block, int iterations);

/// Iterates until every step's residual is <= tol or max_iterations is hit.
/// Returns whether the tolerance was met.
bool gssdc_converge(const Sweeper& sweeper, Block& block, double tol, int max_iterations);

/// Block-wise time stepping with a fixed number of block iterations (k_max)
/// per block. Supports the fixed and dt-adaptive strategies; with dt-adaptivity
/// each step's increment is checked against eps_tol and the block restarts at
/// the first step that fails it, keeping the steps before it.
class BlockController {
 public:
  BlockController(const Sweeper& sweeper, ControllerConfig config, int block_steps, bool pipelined = false);

  RunRecord integrate(const State& u0, double t0, double t_end, const StepObserver& observer = {}) const;

  int block_steps() const { return block_steps_; }

 private:
  const Sweeper* sweeper_;
  ControllerConfig config_;
  int block_steps_;
  bool pipelined_;
};

}  // namespace sdc
