// SPDX-License-Identifier: Apache-2.0
#include "sdc/problems/quench.hpp"

#include <algorithm>
#include <cmath>

namespace sdc {

Quench::Quench(QuenchParams params) : params_(params), spacing_(1.0 / params.cells) {
  if (params_.cells < 8) throw std::invalid_argument("Quench: need at least 8 cells");
  if (!(params_.t_thresh < params_.t_max)) throw std::invalid_argument("Quench: t_thresh must be below t_max");
  leak_.resize(static_cast<std::size_t>(params_.cells));
  for (int i = 0; i < params_.cells; ++i) {
    const double x = cell_center(i);
    leak_[static_cast<std::size_t>(i)] = x > params_.leak_begin && x < params_.leak_end;
  }
}

double Quench::source(int i, double u) const {
  if (in_leak(i)) return params_.q_max;
  if (u < params_.t_thresh) return 0.0;
  if (u < params_.t_max) return params_.q_max * (u - params_.t_thresh) / (params_.t_max - params_.t_thresh);
  return params_.q_max;
}

double Quench::source_derivative(int i, double u) const {
  if (in_leak(i) || u < params_.t_thresh || u >= params_.t_max) return 0.0;
  return params_.q_max / (params_.t_max - params_.t_thresh);
}

void Quench::eval_rhs(const State& u, double, State& f) const {
  const int n = params_.cells;
  const double diff = params_.conductivity / (spacing_ * spacing_);
  f.resize(u.size());
  for (int i = 0; i < n; ++i) {
    const auto ii = static_cast<std::size_t>(i);
    const double left = u[i == 0 ? ii : ii - 1];
    const double right = u[i == n - 1 ? ii : ii + 1];
    f[ii] = (diff * (left - 2.0 * u[ii] + right) + source(i, u[ii])) / params_.heat_capacity;
  }
}

void solve_tridiagonal(std::vector<double> lower, std::vector<double> diag, std::vector<double> upper,
                       std::vector<double>& rhs) {
  const std::size_t n = diag.size();
  for (std::size_t i = 1; i < n; ++i) {
    const double w = lower[i] / diag[i - 1];
    diag[i] -= w * upper[i - 1];
    rhs[i] -= w * rhs[i - 1];
  }
  rhs[n - 1] /= diag[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) rhs[i] = (rhs[i] - upper[i] * rhs[i + 1]) / diag[i];
}

SolveReport Quench::implicit_solve(double a, const State& b, const State& guess, double t, double tol, int max_iter,
                                   State& u) const {
  if (a == 0.0) {
    u = b;
    return {0, 0.0, true};
  }
  const int n = params_.cells;
  const auto nn = static_cast<std::size_t>(n);
  const double scale = a / params_.heat_capacity;
  const double diff = params_.conductivity / (spacing_ * spacing_);

  u = guess;
  State f(nn), g(nn);
  auto residual = [&] {
    eval_rhs(u, t, f);
    double norm = 0.0;
    for (std::size_t i = 0; i < nn; ++i) {
      g[i] = u[i] - a * f[i] - b[i];
      norm = std::max(norm, std::abs(g[i]));
    }
    return norm;
  };

  std::vector<double> lower(nn), diag(nn), upper(nn);
  double norm = residual();
  int iter = 0;
  bool perturbed = false;
  while (norm > tol && iter < max_iter) {
    for (int i = 0; i < n; ++i) {
      const auto ii = static_cast<std::size_t>(i);
      const double lap_diag = (i == 0 || i == n - 1) ? -diff : -2.0 * diff;
      diag[ii] = 1.0 - scale * (lap_diag + source_derivative(i, u[ii]));
      lower[ii] = i > 0 ? -scale * diff : 0.0;
      upper[ii] = i < n - 1 ? -scale * diff : 0.0;
    }
    std::vector<double> delta = g;
    solve_tridiagonal(lower, diag, upper, delta);
    if (!all_finite(delta)) {
      if (perturbed) throw SolverFailure("quench Newton: singular Jacobian");
      perturbed = true;
      for (auto& d : diag) d += 1e-8 * (1.0 + std::abs(d));
      delta = g;
      solve_tridiagonal(lower, diag, upper, delta);
      if (!all_finite(delta)) throw SolverFailure("quench Newton: singular Jacobian");
    }
    for (std::size_t i = 0; i < nn; ++i) u[i] -= delta[i];
    ++iter;
    norm = residual();
  }
  return {iter, norm, norm <= tol};
}

}  // namespace sdc
