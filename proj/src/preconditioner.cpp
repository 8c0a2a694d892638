// SPDX-License-Identifier: Apache-2.0
#include "sdc/preconditioner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <random>
#include <utility>

namespace sdc {

std::string_view to_string(PreconditionerKind kind) {
  switch (kind) {
    case PreconditionerKind::implicit_euler:
      return "implicit-euler";
    case PreconditionerKind::lu:
      return "lu";
    case PreconditionerKind::min_sr_s:
      return "min-sr-s";
    case PreconditionerKind::explicit_euler:
      return "explicit-euler";
    case PreconditionerKind::picard:
      return "picard";
  }
  return "?";
}

PreconditionerKind parse_preconditioner_kind(std::string_view name) {
  if (name == "implicit-euler" || name == "ie") return PreconditionerKind::implicit_euler;
  if (name == "lu") return PreconditionerKind::lu;
  if (name == "min-sr-s") return PreconditionerKind::min_sr_s;
  if (name == "explicit-euler" || name == "ee") return PreconditionerKind::explicit_euler;
  if (name == "picard") return PreconditionerKind::picard;
  throw std::invalid_argument("unknown preconditioner '" + std::string(name) + "'");
}

bool Preconditioner::is_diagonal() const {
  for (int i = 0; i < matrix.rows(); ++i)
    for (int j = 0; j < matrix.cols(); ++j)
      if (i != j && matrix(i, j) != 0.0) return false;
  return true;
}

bool Preconditioner::is_zero() const { return (matrix.array() == 0.0).all(); }

Preconditioner build_qdelta_implicit_euler(const NodeSet& nodes) {
  const int count = nodes.size();
  Eigen::MatrixXd qd = Eigen::MatrixXd::Zero(count, count);
  for (int m = 0; m < count; ++m)
    for (int j = 0; j <= m; ++j) qd(m, j) = nodes[j] - (j == 0 ? 0.0 : nodes[j - 1]);
  return {PreconditionerKind::implicit_euler, std::move(qd)};
}

Preconditioner build_qdelta_explicit_euler(const NodeSet& nodes) {
  const int count = nodes.size();
  Eigen::MatrixXd qd = Eigen::MatrixXd::Zero(count, count);
  // Row m integrates f(u_j) over [tau_j, tau_{j+1}] for j < m.
  for (int m = 1; m < count; ++m)
    for (int j = 0; j < m; ++j) qd(m, j) = nodes[j + 1] - nodes[j];
  return {PreconditionerKind::explicit_euler, std::move(qd)};
}

Preconditioner build_qdelta_picard(int count) {
  return {PreconditionerKind::picard, Eigen::MatrixXd::Zero(count, count)};
}

Preconditioner build_qdelta_lu(const QuadratureTable& table) {
  const int count = table.size();
  const int offset = table.nodes.starts_at_zero() ? 1 : 0;
  const int n = count - offset;
  const Eigen::MatrixXd a = table.q.bottomRightCorner(n, n).transpose();

  // Doolittle: a = L U with unit lower L.
  Eigen::MatrixXd upper = Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd lower = Eigen::MatrixXd::Identity(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      double s = a(i, j);
      for (int k = 0; k < i; ++k) s -= lower(i, k) * upper(k, j);
      upper(i, j) = s;
    }
    if (upper(i, i) == 0.0 || !std::isfinite(upper(i, i)))
      throw FactorizationError("LU preconditioner: zero pivot at row " + std::to_string(i));
    for (int j = i + 1; j < n; ++j) {
      double s = a(j, i);
      for (int k = 0; k < i; ++k) s -= lower(j, k) * upper(k, i);
      lower(j, i) = s / upper(i, i);
    }
  }

  Eigen::MatrixXd qd = Eigen::MatrixXd::Zero(count, count);
  qd.bottomRightCorner(n, n) = upper.transpose();
  return {PreconditionerKind::lu, std::move(qd)};
}

double stiff_limit_spectral_radius(const Eigen::MatrixXd& qdelta, const QuadratureTable& table) {
  const int offset = table.nodes.starts_at_zero() ? 1 : 0;
  const int n = table.size() - offset;
  const Eigen::MatrixXd qd = qdelta.bottomRightCorner(n, n);
  const Eigen::MatrixXd q = table.q.bottomRightCorner(n, n);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(qd);
  if (!lu.isInvertible()) return std::numeric_limits<double>::infinity();
  const Eigen::MatrixXd k = Eigen::MatrixXd::Identity(n, n) - lu.solve(q);
  return k.eigenvalues().cwiseAbs().maxCoeff();
}

namespace {

// Coefficients c_0..c_{n-1} of det(lambda I - D^{-1} Q) (monic, Faddeev-LeVerrier)
// minus those of (lambda - 1)^n. Zero iff I - D^{-1} Q is nilpotent.
Eigen::VectorXd nilpotency_defect(const Eigen::VectorXd& d, const Eigen::MatrixXd& q) {
  const int n = static_cast<int>(d.size());
  const Eigen::MatrixXd a = d.cwiseInverse().asDiagonal() * q;
  Eigen::VectorXd coeff(n + 1);
  coeff(n) = 1.0;
  Eigen::MatrixXd mk = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k <= n; ++k) {
    mk = a * mk + coeff(n - k + 1) * Eigen::MatrixXd::Identity(n, n);
    coeff(n - k) = -(a * mk).trace() / k;
  }
  Eigen::VectorXd defect(n);
  double binom = 1.0;  // binom(n, j)
  for (int j = 0; j < n; ++j) {
    const double target = binom * (((n - j) % 2 == 0) ? 1.0 : -1.0);
    defect(j) = coeff(j) - target;
    binom = binom * (n - j) / (j + 1);
  }
  return defect;
}

Eigen::VectorXd solve_nilpotency(Eigen::VectorXd d, const Eigen::MatrixXd& q) {
  const int n = static_cast<int>(d.size());
  Eigen::VectorXd f = nilpotency_defect(d, q);
  for (int iter = 0; iter < 200 && f.lpNorm<Eigen::Infinity>() > 1e-15; ++iter) {
    Eigen::MatrixXd jac(n, n);
    for (int j = 0; j < n; ++j) {
      const double h = 1e-7 * std::max(std::abs(d(j)), 1e-3);
      Eigen::VectorXd dp = d, dm = d;
      dp(j) += h;
      dm(j) -= h;
      jac.col(j) = (nilpotency_defect(dp, q) - nilpotency_defect(dm, q)) / (2.0 * h);
    }
    const Eigen::VectorXd step = jac.colPivHouseholderQr().solve(-f);
    if (!step.allFinite()) break;
    double lambda = 1.0;
    bool improved = false;
    for (int ls = 0; ls < 40; ++ls, lambda *= 0.5) {
      const Eigen::VectorXd trial = d + lambda * step;
      if ((trial.array() <= 0.0).any()) continue;
      const Eigen::VectorXd ft = nilpotency_defect(trial, q);
      if (ft.allFinite() && ft.lpNorm<Eigen::Infinity>() < f.lpNorm<Eigen::Infinity>()) {
        d = trial;
        f = ft;
        improved = true;
        break;
      }
    }
    if (!improved) break;
  }
  return d;
}

Eigen::MatrixXd compute_min_sr_s(const QuadratureTable& table, bool& fallback) {
  const int count = table.size();
  const int offset = table.nodes.starts_at_zero() ? 1 : 0;
  const int n = count - offset;
  const Eigen::MatrixXd q = table.q.bottomRightCorner(n, n);
  const Eigen::VectorXd tau = Eigen::Map<const Eigen::VectorXd>(table.nodes.values().data(), count).tail(n);

  auto embed = [&](const Eigen::VectorXd& d) {
    Eigen::MatrixXd full = Eigen::MatrixXd::Zero(count, count);
    full.bottomRightCorner(n, n) = d.asDiagonal();
    return full;
  };

  std::vector<Eigen::VectorXd> starts;
  starts.push_back(tau / n);
  starts.push_back(tau);
  starts.push_back(q.diagonal());
  starts.push_back(Eigen::VectorXd::Constant(n, tau(n - 1) / n));
  std::mt19937_64 rng(0x5dc);
  std::uniform_real_distribution<double> dist(0.05, 1.0);
  for (int s = 0; s < 24; ++s) {
    Eigen::VectorXd d(n);
    for (int i = 0; i < n; ++i) d(i) = dist(rng) * tau(i);
    starts.push_back(d);
  }

  const double reference = stiff_limit_spectral_radius(build_qdelta_implicit_euler(table.nodes).matrix, table);
  double best_radius = std::numeric_limits<double>::infinity();
  Eigen::MatrixXd best;
  for (const auto& start : starts) {
    const Eigen::VectorXd d = solve_nilpotency(start, q);
    if ((d.array() <= 0.0).any() || !d.allFinite()) continue;
    const Eigen::MatrixXd candidate = embed(d);
    const double radius = stiff_limit_spectral_radius(candidate, table);
    if (radius < best_radius) {
      best_radius = radius;
      best = candidate;
    }
  }

  fallback = !(best_radius <= reference + 1e-10);
  if (fallback) return embed(q.diagonal());
  return best;
}

}  // namespace

Preconditioner build_qdelta_min_sr_s(const QuadratureTable& table) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::pair<Eigen::MatrixXd, bool>> cache;
  const auto key = std::make_pair(static_cast<int>(table.nodes.family()), table.size());
  std::lock_guard lock(mutex);
  auto it = cache.find(key);
  if (it == cache.end()) {
    bool fallback = false;
    Eigen::MatrixXd d = compute_min_sr_s(table, fallback);
    it = cache.emplace(key, std::make_pair(std::move(d), fallback)).first;
  }
  return {PreconditionerKind::min_sr_s, it->second.first, it->second.second};
}

Preconditioner make_preconditioner(PreconditionerKind kind, const QuadratureTable& table) {
  switch (kind) {
    case PreconditionerKind::implicit_euler:
      return build_qdelta_implicit_euler(table.nodes);
    case PreconditionerKind::lu:
      return build_qdelta_lu(table);
    case PreconditionerKind::min_sr_s:
      return build_qdelta_min_sr_s(table);
    case PreconditionerKind::explicit_euler:
      return build_qdelta_explicit_euler(table.nodes);
    case PreconditionerKind::picard:
      return build_qdelta_picard(table.size());
  }
  throw std::invalid_argument("make_preconditioner: unknown kind");
}

}  // namespace sdc
