// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "sdc/harness/config.hpp"
#include "sdc/problem.hpp"

namespace sdc::harness {

/// dahlquist, vdp, vdp-transition, quench, nls, allen-cahn
const std::vector<std::string>& preset_ids();

/// Default entries of a preset (run settings and problem parameters).
Entries preset_defaults(const std::string& id);

/// Names of the problem parameters a preset accepts.
std::vector<std::string> preset_parameters(const std::string& id);

/// Builds the problem starting at t0; throws ConfigError on unknown or
/// malformed parameters.
std::unique_ptr<Problem> make_problem(const std::string& id, const Entries& params, double t0 = 0.0);

/// Scalar diagnostics of a state: max temperature (quench), mass (nls),
/// radii (allen-cahn), components (ODEs).
std::vector<std::pair<std::string, double>> diagnostics(const Problem& problem, const State& u);

/// Grid shape of a state, e.g. {128} for quench or {64, 64} for nls.
std::vector<int> state_shape(const Problem& problem);

/// Physical extent of each grid axis, [lo, hi); empty for ODEs.
std::vector<std::pair<double, double>> state_domain(const Problem& problem);

}  // namespace sdc::harness
