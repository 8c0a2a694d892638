// SPDX-License-Identifier: Apache-2.0
#include "sdc/problems/van_der_pol.hpp"

#include <algorithm>
#include <cmath>

namespace sdc {

VanDerPol::VanDerPol(VdPParams params) : params_(params) {
  if (!(params_.mu >= 0.0)) throw std::invalid_argument("VanDerPol: mu must be non-negative");
}

void VanDerPol::eval_rhs(const State& x, double, State& f) const {
  f.resize(2);
  f[0] = x[1];
  f[1] = params_.mu * (1.0 - x[0] * x[0]) * x[1] - x[0];
}

SolveReport VanDerPol::implicit_solve(double a, const State& b, const State& guess, double, double tol,
                                      int max_iter, State& x) const {
  x.resize(2);
  if (a == 0.0) {
    x = b;
    return {0, 0.0, true};
  }
  const double mu = params_.mu;
  x = guess;
  auto residual = [&](double g[2]) {
    g[0] = x[0] - a * x[1] - b[0];
    g[1] = x[1] - a * (mu * (1.0 - x[0] * x[0]) * x[1] - x[0]) - b[1];
    return std::max(std::abs(g[0]), std::abs(g[1]));
  };

  double g[2];
  double norm = residual(g);
  int iter = 0;
  bool perturbed = false;
  while (norm > tol && iter < max_iter) {
    // Jacobian of x - a f(x) - b.
    double j00 = 1.0;
    double j01 = -a;
    double j10 = -a * (-2.0 * mu * x[0] * x[1] - 1.0);
    double j11 = 1.0 - a * mu * (1.0 - x[0] * x[0]);
    double det = j00 * j11 - j01 * j10;
    if (det == 0.0 || !std::isfinite(det)) {
      if (perturbed) throw SolverFailure("van der Pol Newton: singular Jacobian");
      perturbed = true;
      const double shift = 1e-8 * (1.0 + std::max(std::abs(j00), std::abs(j11)));
      j00 += shift;
      j11 += shift;
      det = j00 * j11 - j01 * j10;
      if (det == 0.0 || !std::isfinite(det)) throw SolverFailure("van der Pol Newton: singular Jacobian");
    }
    x[0] -= (j11 * g[0] - j01 * g[1]) / det;
    x[1] -= (-j10 * g[0] + j00 * g[1]) / det;
    ++iter;
    norm = residual(g);
  }
  return {iter, norm, norm <= tol};
}

}  // namespace sdc
