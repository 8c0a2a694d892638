// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <atomic>
#include <memory>

#include "sdc/problem.hpp"
#include "sdc/problems/spectral.hpp"

namespace sdc {

enum class ACProfile {
  /// 0.5 (1 + tanh((R0 - |x|) / (sqrt(2) eps))): a disc of phase 1 with radius R0.
  circle,
  /// tanh(R0 |x| / (sqrt(2) eps)), kept selectable for comparison.
  literal,
};

struct ACParams {
  int n = 128;
  double eps = 0.04;
  double radius = 0.25;
  double forcing_period = 0.032;
  double forcing_amplitude = 1e-2;
  ACProfile profile = ACProfile::circle;
};

/// Allen-Cahn equation on [-0.5, 0.5)^2 with a global forcing term that makes
/// the disc alternately grow and shrink:
///   u_t = Lap u - (2/eps^2) u (1-u)(1-2u) - 6 u (1-u) f(u, t).
/// The Laplacian is treated implicitly, the rest explicitly.
class AllenCahn final : public Problem {
 public:
  explicit AllenCahn(ACParams params);

  std::string_view name() const override { return "allen-cahn"; }
  std::size_t size() const override { return grid_->points(); }
  State initial_state() const override;
  void eval_rhs(const State& u, double t, State& f) const override;
  bool is_split() const override { return true; }
  void eval_split(const State& u, double t, State& fi, State& fe) const override;
  /// Exact per-mode division (1 + a |k|^2) u_k = b_k.
  SolveReport implicit_solve(double a, const State& b, const State& guess, double t, double tol, int max_iter,
                             State& u) const override;

  InnerSolveConfig inexact_inner() const override { return {0.0, 0.0, 1}; }
  double residual_tolerance_factor() const override { return 1e-3; }

  const PeriodicGrid2D& grid() const { return *grid_; }
  const ACParams& params() const { return params_; }
  double coordinate(int i) const { return -0.5 + i * grid_->spacing(); }

  /// Radius of a disc with the area of all cells where u > 1/2.
  double radius_by_count(const State& u) const;
  /// Radius of a disc with area sum(u) h^2; smooth in u.
  double radius_by_mass(const State& u) const;

  /// Number of evaluations where the forcing denominator vanished and the
  /// forcing was set to zero.
  long forcing_guard_hits() const { return guard_hits_->load(); }

 private:
  double forcing(const State& u, const State& laplacian, double t) const;

  ACParams params_;
  std::shared_ptr<const PeriodicGrid2D> grid_;
  std::shared_ptr<std::atomic<long>> guard_hits_;
};

}  // namespace sdc
