// SPDX-License-Identifier: Apache-2.0
#include "sdc/problems/dahlquist.hpp"

#include <cmath>

namespace sdc {

void Dahlquist::eval_rhs(const State& u, double, State& f) const {
  f.resize(1);
  f[0] = lambda_ * u[0];
}

void Dahlquist::eval_split(const State& u, double, State& fi, State& fe) const {
  fi.resize(1);
  fe.resize(1);
  fi[0] = lambda_ * u[0];
  fe[0] = 0.0;
}

SolveReport Dahlquist::implicit_solve(double a, const State& b, const State&, double, double, int,
                                      State& u) const {
  u.resize(1);
  if (a == 0.0) {
    u[0] = b[0];
    return {0, 0.0, true};
  }
  u[0] = b[0] / (1.0 - a * lambda_);
  return {1, std::abs(u[0] - a * lambda_ * u[0] - b[0]), true};
}

std::optional<State> Dahlquist::exact_solution(double t) const {
  return State{u0_ * std::exp(lambda_ * (t - t0_))};
}

}  // namespace sdc
