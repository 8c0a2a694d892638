// SPDX-License-Identifier: Apache-2.0
#include "sdc/state.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

namespace sdc {

namespace {

// NaN-propagating max.
double nan_max(double a, double b) { return std::isnan(b) ? b : std::max(a, b); }

}  // namespace

double max_norm(std::span<const double> x, Field field) {
  double r = 0.0;
  if (field == Field::complex) {
    assert(x.size() % 2 == 0);
    for (std::size_t i = 0; i + 1 < x.size(); i += 2) r = nan_max(r, std::hypot(x[i], x[i + 1]));
  } else {
    for (double v : x) r = nan_max(r, std::abs(v));
  }
  return r;
}

double max_norm_diff(std::span<const double> a, std::span<const double> b, Field field) {
  if (a.size() != b.size()) throw std::invalid_argument("max_norm_diff: size mismatch");
  double r = 0.0;
  if (field == Field::complex) {
    for (std::size_t i = 0; i + 1 < a.size(); i += 2)
      r = nan_max(r, std::hypot(a[i] - b[i], a[i + 1] - b[i + 1]));
  } else {
    for (std::size_t i = 0; i < a.size(); ++i) r = nan_max(r, std::abs(a[i] - b[i]));
  }
  return r;
}

void axpy(double a, std::span<const double> x, std::span<double> y) {
  assert(x.size() == y.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

bool all_finite(std::span<const double> x) {
  return std::all_of(x.begin(), x.end(), [](double v) { return std::isfinite(v); });
}

}  // namespace sdc
