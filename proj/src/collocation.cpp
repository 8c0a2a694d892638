// SPDX-License-Identifier: Apache-2.0
#include "sdc/collocation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace sdc {

namespace {

struct LegendreValue {
  double p, dp, d2p;
};

// Legendre polynomials P_0..P_n at x with first and second derivatives.
std::vector<LegendreValue> legendre_table(int n, double x) {
  std::vector<LegendreValue> t(static_cast<std::size_t>(std::max(n, 1)) + 1);
  t[0] = {1.0, 0.0, 0.0};
  t[1] = {x, 1.0, 0.0};
  for (int k = 1; k < n; ++k) {
    const auto& a = t[static_cast<std::size_t>(k)];
    const auto& b = t[static_cast<std::size_t>(k - 1)];
    auto& c = t[static_cast<std::size_t>(k + 1)];
    c.p = ((2.0 * k + 1.0) * x * a.p - k * b.p) / (k + 1.0);
    c.dp = b.dp + (2.0 * k + 1.0) * a.p;
    c.d2p = b.d2p + (2.0 * k + 1.0) * a.dp;
  }
  return t;
}

// Value and derivative of the polynomial whose roots are the interior nodes,
// in the [-1, 1] variable.
std::pair<double, double> defining_polynomial(NodeFamily family, int count, double x) {
  switch (family) {
    case NodeFamily::legendre: {
      auto t = legendre_table(count, x);
      return {t[static_cast<std::size_t>(count)].p, t[static_cast<std::size_t>(count)].dp};
    }
    case NodeFamily::radau_right: {
      auto t = legendre_table(count, x);
      const auto& a = t[static_cast<std::size_t>(count)];
      const auto& b = t[static_cast<std::size_t>(count - 1)];
      return {a.p - b.p, a.dp - b.dp};
    }
    case NodeFamily::lobatto: {
      auto t = legendre_table(count - 1, x);
      const auto& a = t[static_cast<std::size_t>(count - 1)];
      return {a.dp, a.d2p};
    }
  }
  return {0.0, 1.0};
}

// Roots of the Jacobi polynomial P_n^(alpha, beta) on [-1, 1] (Golub-Welsch).
std::vector<double> jacobi_roots(int n, double alpha, double beta) {
  if (n <= 0) return {};
  Eigen::VectorXd diag(n);
  Eigen::VectorXd sub(std::max(n - 1, 1));
  const double ab = alpha + beta;
  diag(0) = (beta - alpha) / (ab + 2.0);
  for (int k = 1; k < n; ++k) {
    const double s = 2.0 * k + ab;
    diag(k) = (beta * beta - alpha * alpha) / (s * (s + 2.0));
    sub(k - 1) = std::sqrt(4.0 * k * (k + alpha) * (k + beta) * (k + ab) /
                           (s * s * (s + 1.0) * (s - 1.0)));
  }
  if (n == 1) return {diag(0)};
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub.head(n - 1), Eigen::EigenvaluesOnly);
  const auto& ev = solver.eigenvalues();
  std::vector<double> roots(ev.data(), ev.data() + n);
  std::sort(roots.begin(), roots.end());
  return roots;
}

double newton_polish(NodeFamily family, int count, double x) {
  const auto [g, dg] = defining_polynomial(family, count, x);
  if (dg == 0.0) return x;
  const double candidate = x - g / dg;
  if (!(candidate > -1.0 && candidate < 1.0)) return x;
  const double g_new = defining_polynomial(family, count, candidate).first;
  return std::abs(g_new) <= std::abs(g) ? candidate : x;
}

}  // namespace

std::string_view to_string(NodeFamily family) {
  switch (family) {
    case NodeFamily::radau_right:
      return "radau-right";
    case NodeFamily::lobatto:
      return "lobatto";
    case NodeFamily::legendre:
      return "legendre";
  }
  return "?";
}

NodeFamily parse_node_family(std::string_view name) {
  if (name == "radau-right") return NodeFamily::radau_right;
  if (name == "lobatto") return NodeFamily::lobatto;
  if (name == "legendre") return NodeFamily::legendre;
  throw std::invalid_argument("unknown node family '" + std::string(name) + "'");
}

NodeSet::NodeSet(NodeFamily family, std::vector<double> nodes)
    : family_(family), nodes_(std::move(nodes)) {
  if (nodes_.empty()) throw std::invalid_argument("NodeSet: no nodes");
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (nodes_[i] < 0.0 || nodes_[i] > 1.0) throw std::invalid_argument("NodeSet: node outside [0, 1]");
    if (i > 0 && !(nodes_[i] > nodes_[i - 1]))
      throw std::invalid_argument("NodeSet: nodes must be strictly increasing");
  }
}

NodeSet generate_nodes(NodeFamily family, int count) {
  if (count < 1) throw std::invalid_argument("generate_nodes: need at least one node");
  if (family == NodeFamily::lobatto && count < 2)
    throw std::invalid_argument("generate_nodes: Lobatto needs at least two nodes");

  std::vector<double> interior;
  switch (family) {
    case NodeFamily::legendre:
      interior = jacobi_roots(count, 0.0, 0.0);
      break;
    case NodeFamily::radau_right:
      interior = jacobi_roots(count - 1, 1.0, 0.0);
      break;
    case NodeFamily::lobatto:
      interior = jacobi_roots(count - 2, 1.0, 1.0);
      break;
  }

  std::vector<double> nodes;
  nodes.reserve(static_cast<std::size_t>(count));
  if (family == NodeFamily::lobatto) nodes.push_back(0.0);
  for (double x : interior) nodes.push_back(0.5 * (newton_polish(family, count, x) + 1.0));
  if (family != NodeFamily::legendre) nodes.push_back(1.0);
  return NodeSet(family, std::move(nodes));
}

void gauss_legendre_01(int n, std::vector<double>& points, std::vector<double>& weights) {
  points.clear();
  weights.clear();
  for (double x : jacobi_roots(n, 0.0, 0.0)) {
    x = newton_polish(NodeFamily::legendre, n, x);
    const double dp = legendre_table(n, x)[static_cast<std::size_t>(n)].dp;
    points.push_back(0.5 * (x + 1.0));
    weights.push_back(1.0 / ((1.0 - x * x) * dp * dp));
  }
}

std::vector<double> barycentric_weights(std::span<const double> points) {
  std::vector<double> w(points.size(), 1.0);
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t k = 0; k < points.size(); ++k)
      if (k != i) w[i] *= points[i] - points[k];
    w[i] = 1.0 / w[i];
  }
  return w;
}

namespace {

// Value of the j-th Lagrange basis polynomial at s.
double lagrange_basis(std::span<const double> points, std::span<const double> bary, std::size_t j,
                      double s) {
  double denom = 0.0;
  for (std::size_t k = 0; k < points.size(); ++k) {
    if (s == points[k]) return k == j ? 1.0 : 0.0;
    denom += bary[k] / (s - points[k]);
  }
  return bary[j] / (s - points[j]) / denom;
}

}  // namespace

QuadratureTable quadrature_matrix(const NodeSet& nodes) {
  const int count = nodes.size();
  const auto tau = nodes.values();
  const auto bary = barycentric_weights(tau);

  std::vector<double> gp, gw;
  gauss_legendre_01(count + 1, gp, gw);

  auto integrate_basis = [&](std::size_t j, double upper) {
    double sum = 0.0;
    for (std::size_t g = 0; g < gp.size(); ++g) sum += gw[g] * lagrange_basis(tau, bary, j, upper * gp[g]);
    return upper * sum;
  };

  QuadratureTable table{nodes, Eigen::MatrixXd::Zero(count, count), Eigen::VectorXd::Zero(count)};
  for (int m = 0; m < count; ++m)
    for (int j = 0; j < count; ++j) table.q(m, j) = integrate_basis(static_cast<std::size_t>(j), tau[static_cast<std::size_t>(m)]);
  for (int j = 0; j < count; ++j) table.end_weights(j) = integrate_basis(static_cast<std::size_t>(j), 1.0);
  return table;
}

State lagrange_eval(std::span<const double> points, std::span<const State> values, double s) {
  if (points.empty() || points.size() != values.size())
    throw std::invalid_argument("lagrange_eval: points and values differ in length");
  const auto bary = barycentric_weights(points);
  for (std::size_t i = 0; i < points.size(); ++i)
    if (s == points[i]) return values[i];
  if (std::all_of(values.begin(), values.end(), [&](const State& v) { return v == values[0]; })) return values[0];

  const std::size_t dim = values[0].size();
  State num(dim, 0.0);
  double den = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (values[i].size() != dim) throw std::invalid_argument("lagrange_eval: inconsistent state sizes");
    const double c = bary[i] / (s - points[i]);
    den += c;
    axpy(c, values[i], num);
  }
  for (double& v : num) v /= den;
  return num;
}

namespace {

// Interpolation data (0, u0), (tau_m, u_m), dropping the duplicate left point
// when tau_1 == 0.
void collocation_points(const NodeSet& nodes, const State& u0, std::span<const State> node_values,
                        std::vector<double>& points, std::vector<State>& values) {
  if (static_cast<int>(node_values.size()) != nodes.size())
    throw std::invalid_argument("dense output: expected one value per collocation node");
  points.assign({0.0});
  values.assign({u0});
  const int first = nodes.starts_at_zero() ? 1 : 0;
  for (int m = first; m < nodes.size(); ++m) {
    points.push_back(nodes[m]);
    values.push_back(node_values[static_cast<std::size_t>(m)]);
  }
}

}  // namespace

State dense_eval(const NodeSet& nodes, const State& u0, std::span<const State> node_values, double s) {
  if (!(s >= 0.0 && s <= 1.0)) throw std::invalid_argument("dense_eval: s outside [0, 1]");
  std::vector<double> points;
  std::vector<State> values;
  collocation_points(nodes, u0, node_values, points, values);
  return lagrange_eval(points, values, s);
}

std::vector<State> interpolate_to_nodes(const NodeSet& nodes, const State& u0,
                                        std::span<const State> node_values, double dt_old,
                                        double dt_new) {
  if (!(dt_new > 0.0) || dt_new > dt_old)
    throw std::invalid_argument("interpolate_to_nodes: requires 0 < dt_new <= dt_old");
  const double ratio = dt_new / dt_old;
  std::vector<State> out;
  out.reserve(node_values.size());
  for (int m = 0; m < nodes.size(); ++m) out.push_back(dense_eval(nodes, u0, node_values, ratio * nodes[m]));
  return out;
}

}  // namespace sdc
