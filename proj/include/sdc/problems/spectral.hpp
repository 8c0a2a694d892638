// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <memory>
#include <vector>

namespace sdc {

/// Square periodic grid of n x n points with side length `length`, and 2D
/// FFTs over it. Points are stored row-major; transforms are out-of-place and
/// may be executed concurrently.
class PeriodicGrid2D {
 public:
  using Complex = std::complex<double>;

  PeriodicGrid2D(int n, double length);
  ~PeriodicGrid2D();
  PeriodicGrid2D(const PeriodicGrid2D&) = delete;
  PeriodicGrid2D& operator=(const PeriodicGrid2D&) = delete;

  int n() const { return n_; }
  std::size_t points() const { return static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_); }
  double length() const { return length_; }
  double spacing() const { return length_ / n_; }

  /// |k|^2 of the Fourier mode stored at flat index idx.
  double wavenumber_squared(std::size_t idx) const { return k2_[idx]; }

  void forward(const Complex* in, Complex* out) const;
  /// Inverse transform including the 1/n^2 normalization.
  void backward(const Complex* in, Complex* out) const;

  /// Spectral Laplacian of a complex field.
  void laplacian(const Complex* in, Complex* out) const;

 private:
  int n_;
  double length_;
  std::vector<double> k2_;
  void* forward_plan_;
  void* backward_plan_;
};

}  // namespace sdc
