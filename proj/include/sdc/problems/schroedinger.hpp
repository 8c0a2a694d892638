// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>

#include "sdc/problem.hpp"
#include "sdc/problems/spectral.hpp"

namespace sdc {

struct NLSParams {
  int n = 64;
};

/// Focusing nonlinear Schroedinger equation u_t = i Lap u + 2 i |u|^2 u on the
/// 2 pi periodic square, split into the implicit Laplacian and the explicit
/// cubic term. States are complex (interleaved re/im).
class NonlinearSchroedinger final : public Problem {
 public:
  explicit NonlinearSchroedinger(NLSParams params);

  std::string_view name() const override { return "schroedinger"; }
  std::size_t size() const override { return 2 * grid_->points(); }
  Field field() const override { return Field::complex; }
  State initial_state() const override;
  void eval_rhs(const State& u, double t, State& f) const override;
  bool is_split() const override { return true; }
  void eval_split(const State& u, double t, State& fi, State& fe) const override;
  /// Exact per-mode division (1 + i a |k|^2) u_k = b_k.
  SolveReport implicit_solve(double a, const State& b, const State& guess, double t, double tol, int max_iter,
                             State& u) const override;

  InnerSolveConfig inexact_inner() const override { return {0.0, 0.0, 1}; }
  double residual_tolerance_factor() const override { return 1e-4; }

  const PeriodicGrid2D& grid() const { return *grid_; }
  /// sum |u|^2 h^2
  double mass(const State& u) const;

 private:
  NLSParams params_;
  std::shared_ptr<const PeriodicGrid2D> grid_;
};

}  // namespace sdc
