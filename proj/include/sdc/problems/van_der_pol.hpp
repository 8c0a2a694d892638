// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "sdc/problem.hpp"

namespace sdc {

struct VdPParams {
  double mu = 1000.0;
  double u0 = 1.1;
  double v0 = 0.0;
};

/// Van der Pol oscillator as the first-order system (u, v)' = (v, mu (1 - u^2) v - u).
class VanDerPol final : public Problem {
 public:
  explicit VanDerPol(VdPParams params);

  std::string_view name() const override { return "van-der-pol"; }
  std::size_t size() const override { return 2; }
  State initial_state() const override { return {params_.u0, params_.v0}; }
  void eval_rhs(const State& x, double t, State& f) const override;
  /// 2x2 Newton with the analytic Jacobian.
  SolveReport implicit_solve(double a, const State& b, const State& guess, double t, double tol, int max_iter,
                             State& x) const override;

  InnerSolveConfig inexact_inner() const override { return {1e-5, 1e-14, 9}; }
  double residual_tolerance_factor() const override { return 1e-5; }

  const VdPParams& params() const { return params_; }

 private:
  VdPParams params_;
};

}  // namespace sdc
