// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "sdc/state.hpp"

namespace sdc {

/// Tolerance and iteration cap of the per-node implicit solver. The tolerance
/// handed to the solver is max(relative * current SDC residual, absolute).
struct InnerSolveConfig {
  double relative = 0.0;
  double absolute = 1e-13;
  int max_iterations = 50;

  double tolerance(double residual) const;
};

struct SolveReport {
  int iterations = 0;
  double residual = 0.0;  ///< infinity norm of u - a f^I(u) - b at return
  bool converged = true;
};

/// Thrown when an implicit solver cannot make progress (singular Jacobian
/// after the perturbed retry).
class SolverFailure : public std::runtime_error {
 public:
  explicit SolverFailure(const std::string& what) : std::runtime_error(what) {}
};

/// Right-hand side u_t = f(u, t), optionally split into an implicitly and an
/// explicitly treated part f = f^I + f^E. Implementations are immutable and
/// reentrant; all methods may be called concurrently.
class Problem {
 public:
  virtual ~Problem() = default;

  virtual std::string_view name() const = 0;
  /// Number of doubles in a state vector.
  virtual std::size_t size() const = 0;
  virtual Field field() const { return Field::real; }
  virtual State initial_state() const = 0;

  virtual void eval_rhs(const State& u, double t, State& f) const = 0;

  virtual bool is_split() const { return false; }
  /// Split evaluation; only meaningful when is_split().
  virtual void eval_split(const State& u, double t, State& f_implicit, State& f_explicit) const;

  /// Solves u - a f^I(u, t) = b starting from guess. Hitting max_iter is not
  /// an error; the report says whether tol was reached. With a == 0 the
  /// result is b exactly.
  virtual SolveReport implicit_solve(double a, const State& b, const State& guess, double t, double tol,
                                     int max_iter, State& u) const = 0;

  /// Closed-form solution at time t, when known.
  virtual std::optional<State> exact_solution(double /*t*/) const { return std::nullopt; }

  /// Inner solver settings used with inexact SDC (dt-k-adaptivity).
  virtual InnerSolveConfig inexact_inner() const { return {}; }
  /// r_tol = factor * eps_tol for dt-k-adaptivity.
  virtual double residual_tolerance_factor() const { return 1e-3; }
};

}  // namespace sdc
