// SPDX-License-Identifier: Apache-2.0
//
// Run configuration: a `key = value` file (one entry per line, `#` starts a
// comment) merged with command-line overrides, then checked and resolved
// against the preset defaults before anything runs.
#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>

#include "sdc/collocation.hpp"
#include "sdc/controller.hpp"
#include "sdc/preconditioner.hpp"

namespace sdc::harness {

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

class UnknownPreset : public ConfigError {
 public:
  explicit UnknownPreset(const std::string& id) : ConfigError("unknown preset '" + id + "'") {}
};

/// Raw key/value pairs; later sources overwrite earlier ones.
using Entries = std::map<std::string, std::string>;

/// Throws ConfigError when the file cannot be read or a line is malformed.
Entries read_config_file(const std::string& path);

/// How the per-node implicit solves are terminated.
enum class InnerMode {
  automatic,  ///< inexact for dtk-adaptive, exact otherwise
  exact,
  inexact,
};

struct RunConfig {
  std::string preset;
  /// Problem parameters, validated by the preset.
  Entries params;
  NodeFamily family = NodeFamily::radau_right;
  int nodes = 3;
  PreconditionerKind preconditioner = PreconditionerKind::implicit_euler;
  ControllerConfig controller;
  InnerMode inner = InnerMode::automatic;
  double t0 = 0.0;
  double t_end = 1.0;
  /// Steps per GSSDC block; 0 runs the serial controller.
  int block_steps = 0;
  bool pipelined = false;
  /// Width of the node-parallel task pool; 1 disables it.
  int workers = 1;
  std::string output_dir = ".";
  bool write_snapshot = true;
  /// Reference for global errors when no closed-form solution exists: a
  /// dtk-adaptive self-run at reference_eps_tol, or a converged radau-right
  /// M = 5 collocation run with reference_steps equal steps.
  enum class Reference { dtk, collocation } reference = Reference::dtk;
  double reference_eps_tol = 1e-12;
  int reference_steps = 1000;
};

/// Preset defaults with the entries applied on top. Keys:
///   preset, nodes, M, preconditioner, strategy, eps-tol, r-tol, beta, gamma,
///   k-max, r-max, dt, dt-min, dt-max, interpolation-restart, restart-budget,
///   inner, t0, t-end, block-steps, pipelined, workers, output-dir, snapshot,
///   reference, reference-eps-tol, reference-steps
/// plus the preset's own parameters. Unset M, k-max and r-tol follow the
/// strategy: M = 4 and r-tol = factor * eps-tol for dtk-adaptive, else M = 3;
/// k-max = 16 for dtk- and k-adaptive, else 5.
/// Throws UnknownPreset or ConfigError.
RunConfig resolve(const Entries& entries);

}  // namespace sdc::harness
