// SPDX-License-Identifier: Apache-2.0
//
// Collocation nodes on [0, 1], the spectral quadrature matrix Q and
// polynomial evaluation of the collocation solution (dense output).
#pragma once

#include <Eigen/Dense>

#include <span>
#include <string_view>
#include <vector>

#include "sdc/state.hpp"

namespace sdc {

enum class NodeFamily { radau_right, lobatto, legendre };

std::string_view to_string(NodeFamily family);
NodeFamily parse_node_family(std::string_view name);

/// Strictly increasing collocation nodes in [0, 1].
class NodeSet {
 public:
  NodeSet(NodeFamily family, std::vector<double> nodes);

  NodeFamily family() const { return family_; }
  int size() const { return static_cast<int>(nodes_.size()); }
  double operator[](int m) const { return nodes_[static_cast<std::size_t>(m)]; }
  std::span<const double> values() const { return nodes_; }

  /// True when tau_1 == 0, i.e. the first node coincides with the step start.
  bool starts_at_zero() const { return nodes_.front() == 0.0; }
  /// True when tau_M == 1, i.e. the last node is the step end.
  bool ends_at_one() const { return nodes_.back() == 1.0; }

 private:
  NodeFamily family_;
  std::vector<double> nodes_;
};

/// Collocation nodes of the given family, computed as eigenvalues of the
/// Jacobi matrix of the family's orthogonal polynomial and polished by Newton.
/// Throws std::invalid_argument for M < 1, or M < 2 with Lobatto.
NodeSet generate_nodes(NodeFamily family, int count);

struct QuadratureTable {
  NodeSet nodes;
  /// q(m, j) = integral over [0, tau_m] of the j-th Lagrange polynomial.
  Eigen::MatrixXd q;
  /// Weights for the full interval [0, 1]; equal to the last row of q when tau_M = 1.
  Eigen::VectorXd end_weights;

  int size() const { return nodes.size(); }
};

QuadratureTable quadrature_matrix(const NodeSet& nodes);

/// Gauss-Legendre rule on [0, 1] with n points (points ascending).
void gauss_legendre_01(int n, std::vector<double>& points, std::vector<double>& weights);

/// Barycentric weights (second form) for the given distinct points.
std::vector<double> barycentric_weights(std::span<const double> points);

/// Value at s of the interpolant through (points[i], values[i]). The points
/// may be given in any order; hitting a point exactly returns its value.
State lagrange_eval(std::span<const double> points, std::span<const State> values, double s);

/// Value at s in [0, 1] of the collocation polynomial through (0, u0) and
/// (tau_m, u_m). Throws std::invalid_argument outside [0, 1].
State dense_eval(const NodeSet& nodes, const State& u0, std::span<const State> node_values, double s);

/// Collocation polynomial of a step of size dt_old evaluated at the nodes of
/// a step of size dt_new starting at the same time. Requires dt_new <= dt_old.
std::vector<State> interpolate_to_nodes(const NodeSet& nodes, const State& u0,
                                        std::span<const State> node_values, double dt_old,
                                        double dt_new);

}  // namespace sdc
