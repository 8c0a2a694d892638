// SPDX-License-Identifier: Apache-2.0
#include "sdc/problems/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace sdc {

namespace {

// FFTW planning is not thread safe; execution of existing plans is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

PeriodicGrid2D::PeriodicGrid2D(int n, double length) : n_(n), length_(length) {
  if (n < 2 || (n & (n - 1)) != 0) throw std::invalid_argument("PeriodicGrid2D: n must be a power of two");
  if (!(length > 0.0)) throw std::invalid_argument("PeriodicGrid2D: length must be positive");
  const double base = 2.0 * std::numbers::pi / length;
  auto wave = [&](int i) { return base * (i < n / 2 ? i : i - n); };
  k2_.resize(points());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      k2_[static_cast<std::size_t>(i) * n + j] = wave(i) * wave(i) + wave(j) * wave(j);

  std::vector<Complex> a(points()), b(points());
  auto* pa = reinterpret_cast<fftw_complex*>(a.data());
  auto* pb = reinterpret_cast<fftw_complex*>(b.data());
  std::lock_guard lock(planner_mutex());
  forward_plan_ = fftw_plan_dft_2d(n, n, pa, pb, FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
  backward_plan_ = fftw_plan_dft_2d(n, n, pa, pb, FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
  if (forward_plan_ == nullptr || backward_plan_ == nullptr) throw std::runtime_error("FFTW planning failed");
}

PeriodicGrid2D::~PeriodicGrid2D() {
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
  fftw_destroy_plan(static_cast<fftw_plan>(backward_plan_));
}

void PeriodicGrid2D::forward(const Complex* in, Complex* out) const {
  fftw_execute_dft(static_cast<fftw_plan>(forward_plan_),
                   reinterpret_cast<fftw_complex*>(const_cast<Complex*>(in)),
                   reinterpret_cast<fftw_complex*>(out));
}

void PeriodicGrid2D::backward(const Complex* in, Complex* out) const {
  fftw_execute_dft(static_cast<fftw_plan>(backward_plan_),
                   reinterpret_cast<fftw_complex*>(const_cast<Complex*>(in)),
                   reinterpret_cast<fftw_complex*>(out));
  const double scale = 1.0 / static_cast<double>(points());
  for (std::size_t i = 0; i < points(); ++i) out[i] *= scale;
}

void PeriodicGrid2D::laplacian(const Complex* in, Complex* out) const {
  std::vector<Complex> spec(points());
  forward(in, spec.data());
  for (std::size_t i = 0; i < points(); ++i) spec[i] *= -k2_[i];
  backward(spec.data(), out);
}

}  // namespace sdc
