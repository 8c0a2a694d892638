// SPDX-License-Identifier: Apache-2.0
#include "sdc/problems/schroedinger.hpp"

#include <cmath>
#include <numbers>

namespace sdc {

namespace {

using Complex = std::complex<double>;

const Complex* as_complex(const State& s) { return reinterpret_cast<const Complex*>(s.data()); }
Complex* as_complex(State& s) { return reinterpret_cast<Complex*>(s.data()); }

}  // namespace

NonlinearSchroedinger::NonlinearSchroedinger(NLSParams params)
    : params_(params), grid_(std::make_shared<PeriodicGrid2D>(params.n, 2.0 * std::numbers::pi)) {}

State NonlinearSchroedinger::initial_state() const {
  const int n = grid_->n();
  const double h = grid_->spacing();
  State u(size(), 0.0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double x = i * h;
      const double y = j * h;
      const double value = (1.0 / (1.0 - std::cos(x + y) / std::sqrt(2.0)) - 1.0) / std::sqrt(2.0);
      u[2 * (static_cast<std::size_t>(i) * n + j)] = value;
    }
  }
  return u;
}

void NonlinearSchroedinger::eval_split(const State& u, double, State& fi, State& fe) const {
  const std::size_t np = grid_->points();
  fi.resize(size());
  fe.resize(size());
  const Complex* uc = as_complex(u);
  Complex* fic = as_complex(fi);
  Complex* fec = as_complex(fe);
  grid_->laplacian(uc, fic);
  const Complex i_unit(0.0, 1.0);
  for (std::size_t p = 0; p < np; ++p) {
    fic[p] *= i_unit;
    fec[p] = 2.0 * i_unit * std::norm(uc[p]) * uc[p];
  }
}

void NonlinearSchroedinger::eval_rhs(const State& u, double t, State& f) const {
  State fe;
  eval_split(u, t, f, fe);
  for (std::size_t i = 0; i < f.size(); ++i) f[i] += fe[i];
}

SolveReport NonlinearSchroedinger::implicit_solve(double a, const State& b, const State&, double, double, int,
                                                  State& u) const {
  if (a == 0.0) {
    u = b;
    return {0, 0.0, true};
  }
  const std::size_t np = grid_->points();
  u.resize(size());
  std::vector<Complex> spec(np);
  grid_->forward(as_complex(b), spec.data());
  for (std::size_t p = 0; p < np; ++p) spec[p] /= Complex(1.0, a * grid_->wavenumber_squared(p));
  grid_->backward(spec.data(), as_complex(u));
  return {1, 0.0, true};
}

double NonlinearSchroedinger::mass(const State& u) const {
  const double h = grid_->spacing();
  double sum = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) sum += u[i] * u[i];
  return sum * h * h;
}

}  // namespace sdc
