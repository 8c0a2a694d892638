// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "sdc/problem.hpp"

namespace sdc {

struct QuenchParams {
  double heat_capacity = 1000.0;  // C_V
  double conductivity = 1000.0;   // kappa
  double t_thresh = 1e-2;
  double t_max = 2e-2;
  double q_max = 1.0;
  double leak_begin = 0.45;
  double leak_end = 0.55;
  int cells = 128;
};

/// 1D heat equation C_V u_t - kappa u_xx = Q(u) on (0, 1) with Neumann-zero
/// boundaries, cell-centered second-order differences and a piecewise linear
/// heat source that switches on between t_thresh and t_max.
class Quench final : public Problem {
 public:
  explicit Quench(QuenchParams params);

  std::string_view name() const override { return "quench"; }
  std::size_t size() const override { return static_cast<std::size_t>(params_.cells); }
  State initial_state() const override { return State(size(), 0.0); }
  void eval_rhs(const State& u, double t, State& f) const override;
  /// Newton with a tridiagonal Jacobian solved directly.
  SolveReport implicit_solve(double a, const State& b, const State& guess, double t, double tol, int max_iter,
                             State& u) const override;

  InnerSolveConfig inexact_inner() const override { return {1e-1, 1e-14, 5}; }
  double residual_tolerance_factor() const override { return 1e-1; }

  const QuenchParams& params() const { return params_; }
  double spacing() const { return spacing_; }
  double cell_center(int i) const { return (i + 0.5) * spacing_; }
  bool in_leak(int i) const { return leak_[static_cast<std::size_t>(i)]; }

  /// Source term Q(u) at cell i (before division by C_V).
  double source(int i, double u) const;
  double source_derivative(int i, double u) const;

 private:
  QuenchParams params_;
  double spacing_;
  std::vector<bool> leak_;
};

/// Solves the tridiagonal system with sub-diagonal lower (lower[0] unused),
/// diagonal diag and super-diagonal upper (upper[n-1] unused). Overwrites rhs
/// with the solution.
void solve_tridiagonal(std::vector<double> lower, std::vector<double> diag, std::vector<double> upper,
                       std::vector<double>& rhs);

}  // namespace sdc
