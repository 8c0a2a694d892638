// SPDX-License-Identifier: Apache-2.0
#include "sdc/harness/presets.hpp"

#include <algorithm>
#include <charconv>
#include <numbers>

#include "sdc/problems/allen_cahn.hpp"
#include "sdc/problems/dahlquist.hpp"
#include "sdc/problems/quench.hpp"
#include "sdc/problems/schroedinger.hpp"
#include "sdc/problems/van_der_pol.hpp"

namespace sdc::harness {

namespace {

double to_double(const std::string& key, const std::string& text) {
  double value = 0.0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) throw ConfigError("'" + key + "' expects a number, got '" + text + "'");
  return value;
}

int to_int(const std::string& key, const std::string& text) {
  int value = 0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) throw ConfigError("'" + key + "' expects an integer, got '" + text + "'");
  return value;
}

void check_keys(const std::string& id, const Entries& params) {
  const auto known = preset_parameters(id);
  for (const auto& [key, value] : params)
    if (std::find(known.begin(), known.end(), key) == known.end())
      throw ConfigError("preset '" + id + "' has no parameter '" + key + "'");
}

template <class F>
void with(const Entries& params, const std::string& key, F&& apply) {
  if (auto it = params.find(key); it != params.end()) apply(it->second);
}

bool is_vdp(const std::string& id) { return id == "vdp" || id == "vdp-transition"; }

}  // namespace

const std::vector<std::string>& preset_ids() {
  static const std::vector<std::string> ids{"dahlquist", "vdp", "vdp-transition", "quench", "nls", "allen-cahn"};
  return ids;
}

Entries preset_defaults(const std::string& id) {
  if (id == "dahlquist")
    return {{"lambda", "-1"}, {"u0", "1"}, {"t-end", "1"}, {"strategy", "dt-adaptive"}, {"eps-tol", "1e-8"},
            {"dt", "0.1"}};
  if (id == "vdp")
    return {{"mu", "5"}, {"u0", "1.1"}, {"v0", "0"}, {"t-end", "20"}, {"strategy", "dtk-adaptive"},
            {"eps-tol", "1e-7"}, {"dt", "1e-2"}};
  if (id == "vdp-transition")
    return {{"mu", "1000"}, {"u0", "1.1"}, {"v0", "0"}, {"t-end", "12"}, {"strategy", "dtk-adaptive"},
            {"eps-tol", "1e-5"}, {"dt", "1e-3"}};
  if (id == "quench")
    return {{"cells", "128"}, {"t-end", "500"}, {"strategy", "dtk-adaptive"}, {"eps-tol", "1e-5"}, {"dt", "1"}};
  if (id == "nls")
    return {{"n", "64"}, {"t-end", "1"}, {"strategy", "dtk-adaptive"}, {"eps-tol", "1e-7"}, {"dt", "1e-2"}};
  if (id == "allen-cahn")
    return {{"n", "128"}, {"t-end", "0.025"}, {"strategy", "dtk-adaptive"}, {"eps-tol", "1e-5"}, {"dt", "1e-4"}};
  throw UnknownPreset(id);
}

std::vector<std::string> preset_parameters(const std::string& id) {
  if (id == "dahlquist") return {"lambda", "u0"};
  if (is_vdp(id)) return {"mu", "u0", "v0"};
  if (id == "quench")
    return {"cells", "heat-capacity", "conductivity", "t-thresh", "t-max", "q-max", "leak-begin", "leak-end"};
  if (id == "nls") return {"n"};
  if (id == "allen-cahn") return {"n", "interface-width", "radius", "forcing-period", "forcing-amplitude", "profile"};
  throw UnknownPreset(id);
}

std::unique_ptr<Problem> make_problem(const std::string& id, const Entries& params, double t0) {
  check_keys(id, params);
  try {
    if (id == "dahlquist") {
      double lambda = -1.0, u0 = 1.0;
      with(params, "lambda", [&](const std::string& v) { lambda = to_double("lambda", v); });
      with(params, "u0", [&](const std::string& v) { u0 = to_double("u0", v); });
      return std::make_unique<Dahlquist>(lambda, u0, t0);
    }
    if (is_vdp(id)) {
      VdPParams p;
      with(params, "mu", [&](const std::string& v) { p.mu = to_double("mu", v); });
      with(params, "u0", [&](const std::string& v) { p.u0 = to_double("u0", v); });
      with(params, "v0", [&](const std::string& v) { p.v0 = to_double("v0", v); });
      return std::make_unique<VanDerPol>(p);
    }
    if (id == "quench") {
      QuenchParams p;
      with(params, "cells", [&](const std::string& v) { p.cells = to_int("cells", v); });
      with(params, "heat-capacity", [&](const std::string& v) { p.heat_capacity = to_double("heat-capacity", v); });
      with(params, "conductivity", [&](const std::string& v) { p.conductivity = to_double("conductivity", v); });
      with(params, "t-thresh", [&](const std::string& v) { p.t_thresh = to_double("t-thresh", v); });
      with(params, "t-max", [&](const std::string& v) { p.t_max = to_double("t-max", v); });
      with(params, "q-max", [&](const std::string& v) { p.q_max = to_double("q-max", v); });
      with(params, "leak-begin", [&](const std::string& v) { p.leak_begin = to_double("leak-begin", v); });
      with(params, "leak-end", [&](const std::string& v) { p.leak_end = to_double("leak-end", v); });
      return std::make_unique<Quench>(p);
    }
    if (id == "nls") {
      NLSParams p;
      with(params, "n", [&](const std::string& v) { p.n = to_int("n", v); });
      return std::make_unique<NonlinearSchroedinger>(p);
    }
    if (id == "allen-cahn") {
      ACParams p;
      with(params, "n", [&](const std::string& v) { p.n = to_int("n", v); });
      with(params, "interface-width", [&](const std::string& v) { p.eps = to_double("interface-width", v); });
      with(params, "radius", [&](const std::string& v) { p.radius = to_double("radius", v); });
      with(params, "forcing-period", [&](const std::string& v) { p.forcing_period = to_double("forcing-period", v); });
      with(params, "forcing-amplitude",
           [&](const std::string& v) { p.forcing_amplitude = to_double("forcing-amplitude", v); });
      with(params, "profile", [&](const std::string& v) {
        if (v == "circle")
          p.profile = ACProfile::circle;
        else if (v == "literal")
          p.profile = ACProfile::literal;
        else
          throw ConfigError("'profile' expects circle or literal, got '" + v + "'");
      });
      return std::make_unique<AllenCahn>(p);
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  throw UnknownPreset(id);
}

std::vector<std::pair<std::string, double>> diagnostics(const Problem& problem, const State& u) {
  if (dynamic_cast<const Quench*>(&problem) != nullptr) return {{"max_temperature", max_norm(u, Field::real)}};
  if (const auto* s = dynamic_cast<const NonlinearSchroedinger*>(&problem)) return {{"mass", s->mass(u)}};
  if (const auto* a = dynamic_cast<const AllenCahn*>(&problem))
    return {{"radius", a->radius_by_mass(u)}, {"radius_by_count", a->radius_by_count(u)}};
  if (problem.size() == 2) return {{"u", u[0]}, {"v", u[1]}};
  return {{"u", u[0]}};
}

std::vector<int> state_shape(const Problem& problem) {
  if (const auto* s = dynamic_cast<const NonlinearSchroedinger*>(&problem)) return {s->grid().n(), s->grid().n()};
  if (const auto* a = dynamic_cast<const AllenCahn*>(&problem)) return {a->grid().n(), a->grid().n()};
  return {static_cast<int>(problem.size())};
}

std::vector<std::pair<double, double>> state_domain(const Problem& problem) {
  if (dynamic_cast<const Quench*>(&problem) != nullptr) return {{0.0, 1.0}};
  if (dynamic_cast<const NonlinearSchroedinger*>(&problem) != nullptr)
    return {{0.0, 2.0 * std::numbers::pi}, {0.0, 2.0 * std::numbers::pi}};
  if (dynamic_cast<const AllenCahn*>(&problem) != nullptr) return {{-0.5, 0.5}, {-0.5, 0.5}};
  return {};
}

}  // namespace sdc::harness
