// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace sdc {

/// Scalar field of a problem's state vector.
enum class Field { real, complex };

/// Flat state vector. Complex states are stored interleaved as (re, im) pairs,
/// so every real-coefficient linear combination used by the integrator acts
/// on them unchanged.
using State = std::vector<double>;

class NonFiniteError : public std::runtime_error {
 public:
  explicit NonFiniteError(const std::string& what) : std::runtime_error(what) {}
};

/// Infinity norm over components; complex components contribute their modulus.
double max_norm(std::span<const double> x, Field field);

/// max_norm(a - b) without a temporary.
double max_norm_diff(std::span<const double> a, std::span<const double> b, Field field);

/// y += a * x
void axpy(double a, std::span<const double> x, std::span<double> y);

bool all_finite(std::span<const double> x);

}  // namespace sdc
