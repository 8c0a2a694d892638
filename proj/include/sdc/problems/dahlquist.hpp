// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "sdc/problem.hpp"

namespace sdc {

/// u' = lambda u with exact solution u0 exp(lambda (t - t0)). The split
/// variant puts everything in f^I and returns f^E = 0.
class Dahlquist final : public Problem {
 public:
  explicit Dahlquist(double lambda, double u0 = 1.0, double t0 = 0.0, bool split = false)
      : lambda_(lambda), u0_(u0), t0_(t0), split_(split) {}

  std::string_view name() const override { return "dahlquist"; }
  std::size_t size() const override { return 1; }
  State initial_state() const override { return {u0_}; }
  void eval_rhs(const State& u, double t, State& f) const override;
  bool is_split() const override { return split_; }
  void eval_split(const State& u, double t, State& fi, State& fe) const override;
  SolveReport implicit_solve(double a, const State& b, const State& guess, double t, double tol, int max_iter,
                             State& u) const override;
  std::optional<State> exact_solution(double t) const override;

  double lambda() const { return lambda_; }

 private:
  double lambda_;
  double u0_;
  double t0_;
  bool split_;
};

}  // namespace sdc
