// SPDX-License-Identifier: Apache-2.0
//
// Preconditioned SDC sweeps (plain and IMEX), residuals and the two local
// error estimates.
#pragma once

#include <limits>
#include <span>
#include <string_view>
#include <vector>

#include "sdc/collocation.hpp"
#include "sdc/preconditioner.hpp"
#include "sdc/problem.hpp"
#include "sdc/task_pool.hpp"

namespace sdc {

/// Iterate of one time step [t, t + dt].
struct SweepState {
  double t = 0.0;
  double dt = 0.0;
  State u0;
  std::vector<State> u;
  /// f (or f^I for split problems) at u, one entry per node.
  std::vector<State> f_impl;
  /// f^E at u; empty for unsplit problems.
  std::vector<State> f_expl;
  int k = 0;
  double residual = std::numeric_limits<double>::infinity();
  double residual_prev = std::numeric_limits<double>::infinity();
  long newton_count = 0;
};

class Sweeper {
 public:
  /// explicit_part is used only for split problems; it must be strictly lower
  /// triangular.
  Sweeper(const Problem& problem, QuadratureTable table, Preconditioner implicit_part,
          Preconditioner explicit_part, InnerSolveConfig inner);

  const Problem& problem() const { return *problem_; }
  const QuadratureTable& table() const { return table_; }
  const NodeSet& nodes() const { return table_.nodes; }
  const Preconditioner& preconditioner() const { return implicit_; }
  const Preconditioner& explicit_preconditioner() const { return explicit_; }
  const InnerSolveConfig& inner() const { return inner_; }
  void set_inner(const InnerSolveConfig& inner) { inner_ = inner; }

  /// True when the M node solves of a sweep are independent (diagonal
  /// implicit part, no explicit coupling).
  bool node_parallel() const;

  /// Initial iterate: u0 spread to all nodes (or the given guess), right-hand
  /// sides evaluated and the initial residual computed.
  SweepState start(double t, double dt, const State& u0) const;
  SweepState start(double t, double dt, const State& u0, std::vector<State> guess) const;

  /// One preconditioned sweep by forward substitution. With a pool and a
  /// node-parallel preconditioner the node solves run as independent tasks;
  /// the result is bitwise identical to the sequential sweep.
  void sweep(SweepState& state, TaskPool* pool = nullptr) const;

  /// || u0 + dt Q F(u) - u ||_inf from the cached right-hand sides.
  double residual(const SweepState& state) const;

  /// Solution at t + dt: the last node when tau_M = 1, else the collocation update.
  State end_value(const SweepState& state) const;

  double node_time(const SweepState& state, int m) const;

  /// Recomputes all right-hand sides and compares with the cache.
  bool cache_consistent(const SweepState& state, double tol) const;

 private:
  void evaluate(const State& u, double t, State& fi, State& fe) const;

  const Problem* problem_;
  QuadratureTable table_;
  Preconditioner implicit_;
  Preconditioner explicit_;
  InnerSolveConfig inner_;
};

/// Builds a sweeper with nodes, Q and the implicit preconditioner; split
/// problems get explicit Euler, or Picard (zero) when the implicit part is diagonal.
Sweeper make_sweeper(const Problem& problem, NodeFamily family, int count, PreconditionerKind kind,
                     InnerSolveConfig inner);

/// Increment estimate: difference of the final-node values of two consecutive iterates.
double increment_error_estimate(const SweepState& newer, const SweepState& older, Field field);

/// Embedded estimate: interpolate (0, u0), u_1 .. u_{M-2}, u_M at tau_{M-1}
/// and compare with u_{M-1}. Requires M >= 2.
double embedded_node_error_estimate(const SweepState& state, const NodeSet& nodes, Field field);

enum class Divergence { none, residual_overflow, residual_increase, iteration_limit };

std::string_view to_string(Divergence reason);

struct CollocationResult {
  bool converged = false;
  Divergence reason = Divergence::none;
};

/// Sweeps until residual <= r_tol. After each sweep that does not meet r_tol,
/// stops with no convergence if the residual exceeds r_max (or is not
/// finite), grew compared to the previous sweep, or k reached k_max.
CollocationResult solve_collocation(const Sweeper& sweeper, SweepState& state, double r_tol, int k_max,
                                    double r_max, TaskPool* pool = nullptr);

}  // namespace sdc
