// SPDX-License-Identifier: Apache-2.0
#include "sdc/problems/allen_cahn.hpp"

#include <cmath>
#include <numbers>

namespace sdc {

namespace {
using Complex = std::complex<double>;
}

AllenCahn::AllenCahn(ACParams params)
    : params_(params),
      grid_(std::make_shared<PeriodicGrid2D>(params.n, 1.0)),
      guard_hits_(std::make_shared<std::atomic<long>>(0)) {
  if (!(params_.eps > 0.0)) throw std::invalid_argument("AllenCahn: eps must be positive");
}

State AllenCahn::initial_state() const {
  const int n = grid_->n();
  const double width = std::sqrt(2.0) * params_.eps;
  State u(size());
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double r = std::hypot(coordinate(i), coordinate(j));
      const double value = params_.profile == ACProfile::circle
                               ? 0.5 * (1.0 + std::tanh((params_.radius - r) / width))
                               : std::tanh(params_.radius * r / width);
      u[static_cast<std::size_t>(i) * n + j] = value;
    }
  }
  return u;
}

double AllenCahn::forcing(const State& u, const State& laplacian, double t) const {
  const double c = 2.0 / (params_.eps * params_.eps);
  double num = 0.0;
  double den = 0.0;
  for (std::size_t p = 0; p < u.size(); ++p) {
    const double v = u[p];
    num += laplacian[p] - c * v * (1.0 - v) * (1.0 - 2.0 * v);
    den += 6.0 * v * (1.0 - v);
  }
  if (std::abs(den) < 1e-14 * static_cast<double>(u.size())) {
    guard_hits_->fetch_add(1, std::memory_order_relaxed);
    return 0.0;
  }
  const double modulation =
      1.0 - std::sin(4.0 * std::numbers::pi * t / params_.forcing_period) * params_.forcing_amplitude;
  return num / den * modulation;
}

void AllenCahn::eval_split(const State& u, double t, State& fi, State& fe) const {
  const std::size_t np = grid_->points();
  std::vector<Complex> in(np), out(np);
  for (std::size_t p = 0; p < np; ++p) in[p] = u[p];
  grid_->laplacian(in.data(), out.data());
  fi.resize(np);
  fe.resize(np);
  for (std::size_t p = 0; p < np; ++p) fi[p] = out[p].real();

  const double c = 2.0 / (params_.eps * params_.eps);
  const double force = forcing(u, fi, t);
  for (std::size_t p = 0; p < np; ++p) {
    const double v = u[p];
    fe[p] = -c * v * (1.0 - v) * (1.0 - 2.0 * v) - 6.0 * v * (1.0 - v) * force;
  }
}

void AllenCahn::eval_rhs(const State& u, double t, State& f) const {
  State fe;
  eval_split(u, t, f, fe);
  for (std::size_t i = 0; i < f.size(); ++i) f[i] += fe[i];
}

SolveReport AllenCahn::implicit_solve(double a, const State& b, const State&, double, double, int,
                                      State& u) const {
  if (a == 0.0) {
    u = b;
    return {0, 0.0, true};
  }
  const std::size_t np = grid_->points();
  std::vector<Complex> in(np), spec(np);
  for (std::size_t p = 0; p < np; ++p) in[p] = b[p];
  grid_->forward(in.data(), spec.data());
  for (std::size_t p = 0; p < np; ++p) spec[p] /= 1.0 + a * grid_->wavenumber_squared(p);
  grid_->backward(spec.data(), in.data());
  u.resize(np);
  for (std::size_t p = 0; p < np; ++p) u[p] = in[p].real();
  return {1, 0.0, true};
}

double AllenCahn::radius_by_count(const State& u) const {
  const double h = grid_->spacing();
  long count = 0;
  for (double v : u)
    if (v > 0.5) ++count;
  return std::sqrt(static_cast<double>(count) * h * h / std::numbers::pi);
}

double AllenCahn::radius_by_mass(const State& u) const {
  const double h = grid_->spacing();
  double sum = 0.0;
  for (double v : u) sum += v;
  return std::sqrt(std::max(sum, 0.0) * h * h / std::numbers::pi);
}

}  // namespace sdc
