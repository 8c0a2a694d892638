// SPDX-License-Identifier: Apache-2.0
#include "sdc/sweeper.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace sdc {

Sweeper::Sweeper(const Problem& problem, QuadratureTable table, Preconditioner implicit_part,
                 Preconditioner explicit_part, InnerSolveConfig inner)
    : problem_(&problem),
      table_(std::move(table)),
      implicit_(std::move(implicit_part)),
      explicit_(std::move(explicit_part)),
      inner_(inner) {
  const int count = table_.size();
  if (implicit_.size() != count || explicit_.size() != count)
    throw std::invalid_argument("Sweeper: preconditioner size does not match the node count");
  for (int m = 0; m < count; ++m)
    for (int j = m + 1; j < count; ++j)
      if (implicit_.matrix(m, j) != 0.0)
        throw std::invalid_argument("Sweeper: implicit preconditioner must be lower triangular");
  for (int m = 0; m < count; ++m)
    for (int j = m; j < count; ++j)
      if (explicit_.matrix(m, j) != 0.0)
        throw std::invalid_argument("Sweeper: explicit preconditioner must be strictly lower triangular");
}

bool Sweeper::node_parallel() const {
  return implicit_.is_diagonal() && (!problem_->is_split() || explicit_.is_zero());
}

double Sweeper::node_time(const SweepState& state, int m) const { return state.t + state.dt * table_.nodes[m]; }

void Sweeper::evaluate(const State& u, double t, State& fi, State& fe) const {
  fi.resize(u.size());
  if (problem_->is_split()) {
    fe.resize(u.size());
    problem_->eval_split(u, t, fi, fe);
  } else {
    problem_->eval_rhs(u, t, fi);
  }
}

SweepState Sweeper::start(double t, double dt, const State& u0) const {
  return start(t, dt, u0, std::vector<State>(static_cast<std::size_t>(table_.size()), u0));
}

SweepState Sweeper::start(double t, double dt, const State& u0, std::vector<State> guess) const {
  const int count = table_.size();
  if (static_cast<int>(guess.size()) != count) throw std::invalid_argument("Sweeper::start: guess needs M states");
  if (u0.size() != problem_->size()) throw std::invalid_argument("Sweeper::start: state size mismatch");
  SweepState s;
  s.t = t;
  s.dt = dt;
  s.u0 = u0;
  s.u = std::move(guess);
  s.f_impl.resize(static_cast<std::size_t>(count));
  if (problem_->is_split()) s.f_expl.resize(static_cast<std::size_t>(count));
  State unused;
  for (int m = 0; m < count; ++m) {
    const auto mi = static_cast<std::size_t>(m);
    evaluate(s.u[mi], node_time(s, m), s.f_impl[mi], problem_->is_split() ? s.f_expl[mi] : unused);
  }
  s.residual = residual(s);
  return s;
}

void Sweeper::sweep(SweepState& s, TaskPool* pool) const {
  const int count = table_.size();
  const bool split = problem_->is_split();
  const double tol = inner_.tolerance(s.residual);
  const auto& q = table_.q;
  const auto& qi = implicit_.matrix;
  const auto& qe = explicit_.matrix;

  std::vector<State> u_new(static_cast<std::size_t>(count));
  std::vector<State> fi_new(static_cast<std::size_t>(count));
  std::vector<State> fe_new(split ? static_cast<std::size_t>(count) : 0);
  std::vector<int> iterations(static_cast<std::size_t>(count), 0);

  // Zero coefficients are skipped, so a diagonal preconditioner never reads
  // another node's new values and the node tasks are independent.
  auto update_node = [&](int m) {
    const auto mi = static_cast<std::size_t>(m);
    State rhs = s.u0;
    for (int j = 0; j < count; ++j) {
      const auto ji = static_cast<std::size_t>(j);
      const double ci = s.dt * (q(m, j) - qi(m, j));
      if (ci != 0.0) axpy(ci, s.f_impl[ji], rhs);
      if (split) {
        const double ce = s.dt * (q(m, j) - qe(m, j));
        if (ce != 0.0) axpy(ce, s.f_expl[ji], rhs);
      }
    }
    for (int j = 0; j < m; ++j) {
      const auto ji = static_cast<std::size_t>(j);
      const double ci = s.dt * qi(m, j);
      if (ci != 0.0) axpy(ci, fi_new[ji], rhs);
      if (split) {
        const double ce = s.dt * qe(m, j);
        if (ce != 0.0) axpy(ce, fe_new[ji], rhs);
      }
    }
    const double tm = node_time(s, m);
    u_new[mi].resize(rhs.size());
    const SolveReport report =
        problem_->implicit_solve(s.dt * qi(m, m), rhs, s.u[mi], tm, tol, inner_.max_iterations, u_new[mi]);
    iterations[mi] = report.iterations;
    if (!all_finite(u_new[mi]))
      throw NonFiniteError("sweep produced a non-finite value at node " + std::to_string(m + 1));
    State unused;
    evaluate(u_new[mi], tm, fi_new[mi], split ? fe_new[mi] : unused);
  };

  if (pool != nullptr && pool->width() > 1 && node_parallel()) {
    pool->parallel_for(count, update_node);
  } else {
    for (int m = 0; m < count; ++m) update_node(m);
  }

  s.u = std::move(u_new);
  s.f_impl = std::move(fi_new);
  if (split) s.f_expl = std::move(fe_new);
  s.k += 1;
  s.newton_count += std::accumulate(iterations.begin(), iterations.end(), 0L);
  s.residual_prev = s.residual;
  s.residual = residual(s);
}

double Sweeper::residual(const SweepState& s) const {
  const int count = table_.size();
  const Field field = problem_->field();
  const bool split = problem_->is_split();
  double r = 0.0;
  State acc;
  for (int m = 0; m < count; ++m) {
    acc = s.u0;
    for (int j = 0; j < count; ++j) {
      const auto ji = static_cast<std::size_t>(j);
      const double c = s.dt * table_.q(m, j);
      axpy(c, s.f_impl[ji], acc);
      if (split) axpy(c, s.f_expl[ji], acc);
    }
    const double rm = max_norm_diff(acc, s.u[static_cast<std::size_t>(m)], field);
    if (!std::isfinite(rm)) throw NonFiniteError("residual is not finite");
    r = std::max(r, rm);
  }
  return r;
}

State Sweeper::end_value(const SweepState& s) const {
  if (table_.nodes.ends_at_one()) return s.u.back();
  State out = s.u0;
  for (int j = 0; j < table_.size(); ++j) {
    const auto ji = static_cast<std::size_t>(j);
    const double c = s.dt * table_.end_weights(j);
    axpy(c, s.f_impl[ji], out);
    if (problem_->is_split()) axpy(c, s.f_expl[ji], out);
  }
  return out;
}

bool Sweeper::cache_consistent(const SweepState& s, double tol) const {
  State fi, fe;
  for (int m = 0; m < table_.size(); ++m) {
    const auto mi = static_cast<std::size_t>(m);
    evaluate(s.u[mi], node_time(s, m), fi, fe);
    if (max_norm_diff(fi, s.f_impl[mi], problem_->field()) > tol) return false;
    if (problem_->is_split() && max_norm_diff(fe, s.f_expl[mi], problem_->field()) > tol) return false;
  }
  return true;
}

Sweeper make_sweeper(const Problem& problem, NodeFamily family, int count, PreconditionerKind kind,
                     InnerSolveConfig inner) {
  QuadratureTable table = quadrature_matrix(generate_nodes(family, count));
  Preconditioner implicit_part = make_preconditioner(kind, table);
  Preconditioner explicit_part = implicit_part.is_diagonal() ? build_qdelta_picard(count)
                                                             : build_qdelta_explicit_euler(table.nodes);
  return Sweeper(problem, std::move(table), std::move(implicit_part), std::move(explicit_part), inner);
}

double increment_error_estimate(const SweepState& newer, const SweepState& older, Field field) {
  if (newer.u.size() != older.u.size() || newer.u.empty() || newer.dt != older.dt)
    throw std::invalid_argument("increment_error_estimate: states do not describe the same step");
  return max_norm_diff(newer.u.back(), older.u.back(), field);
}

double embedded_node_error_estimate(const SweepState& s, const NodeSet& nodes, Field field) {
  const int count = nodes.size();
  if (count < 2) throw std::invalid_argument("embedded_node_error_estimate: needs M >= 2");
  if (static_cast<int>(s.u.size()) != count) throw std::invalid_argument("embedded_node_error_estimate: shape mismatch");
  std::vector<double> points{0.0};
  std::vector<State> values{s.u0};
  for (int m = nodes.starts_at_zero() ? 1 : 0; m < count - 2; ++m) {
    points.push_back(nodes[m]);
    values.push_back(s.u[static_cast<std::size_t>(m)]);
  }
  points.push_back(nodes[count - 1]);
  values.push_back(s.u.back());
  const State estimate = lagrange_eval(points, values, nodes[count - 2]);
  return max_norm_diff(estimate, s.u[static_cast<std::size_t>(count - 2)], field);
}

std::string_view to_string(Divergence reason) {
  switch (reason) {
    case Divergence::none:
      return "none";
    case Divergence::residual_overflow:
      return "residual-overflow";
    case Divergence::residual_increase:
      return "residual-increase";
    case Divergence::iteration_limit:
      return "iteration-limit";
  }
  return "?";
}

CollocationResult solve_collocation(const Sweeper& sweeper, SweepState& state, double r_tol, int k_max,
                                    double r_max, TaskPool* pool) {
  if (!(r_tol > 0.0)) throw std::invalid_argument("solve_collocation: r_tol must be positive");
  double r_prev = std::numeric_limits<double>::infinity();
  for (;;) {
    try {
      sweeper.sweep(state, pool);
    } catch (const NonFiniteError&) {
      return {false, Divergence::residual_overflow};
    } catch (const SolverFailure&) {
      return {false, Divergence::residual_overflow};
    }
    const double r = state.residual;
    if (r <= r_tol) return {true, Divergence::none};
    if (!(r <= r_max)) return {false, Divergence::residual_overflow};
    if (r > r_prev) return {false, Divergence::residual_increase};
    if (state.k >= k_max) return {false, Divergence::iteration_limit};
    r_prev = r;
  }
}

}  // namespace sdc
