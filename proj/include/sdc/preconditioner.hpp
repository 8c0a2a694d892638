// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <string_view>

#include "sdc/collocation.hpp"

namespace sdc {

enum class PreconditionerKind {
  implicit_euler,
  lu,
  min_sr_s,
  explicit_euler,
  picard,  ///< zero matrix; explicit part of a node-parallel IMEX sweep
};

std::string_view to_string(PreconditionerKind kind);
PreconditionerKind parse_preconditioner_kind(std::string_view name);

class FactorizationError : public std::runtime_error {
 public:
  explicit FactorizationError(const std::string& what) : std::runtime_error(what) {}
};

/// Q_delta approximating Q in the sweep.
struct Preconditioner {
  PreconditionerKind kind;
  Eigen::MatrixXd matrix;
  /// Set when MIN-SR-S optimization did not beat implicit Euler and diag(Q) was used.
  bool fallback = false;

  int size() const { return static_cast<int>(matrix.rows()); }
  bool is_diagonal() const;
  bool is_zero() const;
};

/// Node-to-node implicit Euler with tau_0 = 0: row m holds tau_j - tau_{j-1} for j <= m.
Preconditioner build_qdelta_implicit_euler(const NodeSet& nodes);

/// U^T from the Doolittle factorization L U = Q^T (no pivoting). When tau_1 = 0
/// the zero first row/column is kept and only the trailing block is factored.
Preconditioner build_qdelta_lu(const QuadratureTable& table);

/// Diagonal D minimizing the spectral radius of I - D^{-1} Q (stiff limit).
/// Results are cached per (family, M).
Preconditioner build_qdelta_min_sr_s(const QuadratureTable& table);

/// Implicit Euler shifted down one row: node-to-node forward Euler.
Preconditioner build_qdelta_explicit_euler(const NodeSet& nodes);

Preconditioner build_qdelta_picard(int count);

Preconditioner make_preconditioner(PreconditionerKind kind, const QuadratureTable& table);

/// Spectral radius of I - Q_delta^{-1} Q, restricted to the trailing block
/// when the first node sits at tau = 0 (that node is pinned to u0).
double stiff_limit_spectral_radius(const Eigen::MatrixXd& qdelta, const QuadratureTable& table);

}  // namespace sdc
