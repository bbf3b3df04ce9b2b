/* Copyright 2026 The c7ga Authors. All Rights Reserved.
Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at
    http://www.apache.org/licenses/LICENSE-2.0
Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

// Run configuration file (YAML). Units at the file boundary: frequencies in
// Hz, durations in microseconds, angles in degrees. See README.md for the
// grammar; unknown keys are errors.

#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

#include "c7ga/experiment.hpp"
#include "c7ga/optim.hpp"
#include "c7ga/problem.hpp"

namespace c7ga {

/// Parse or validation failure; what() reads "<source>:<line>: <field>: <message>".
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string &source, int line, const std::string &field,
              const std::string &message);
  int line() const { return line_; }
  const std::string &field() const { return field_; }

 private:
  int line_;
  std::string field_;
};

/// Grid axis in external units; `param` is a sequence parameter name or "offset" (Hz).
struct AxisSpec {
  std::string param;
  double start = 0.0;
  double stop = 0.0;
  int points = 1;

  std::vector<double> values() const;
  bool operator==(const AxisSpec &) const = default;
};

struct BuildupTask {
  int n_first = 1;
  int n_last = 45;
  /// evaluate with and without CSA
  bool both_csa_modes = true;
  bool operator==(const BuildupTask &) const = default;
};

struct Scan1dTask {
  AxisSpec axis{"tau1", 9.0, 19.0, 101};
  bool operator==(const Scan1dTask &) const = default;
};

struct Scan2dTask {
  AxisSpec x{"tau1", 9.0, 19.0, 101};
  AxisSpec y{"tau2", 9.0, 19.0, 101};
  bool operator==(const Scan2dTask &) const = default;
};

struct OffsetTask {
  AxisSpec axis{"offset", -10000.0, 10000.0, 81};
  bool operator==(const OffsetTask &) const = default;
};

struct SpeedTask {
  std::vector<double> speeds_hz{4000.0, 9000.0, 10204.0};
  /// dtau1 / tau_c grid
  double dtau1_start = 0.0;
  double dtau1_stop = 0.05;
  int dtau1_points = 26;
  /// excitation-time window in ms; n_blocks range follows per speed
  double texc_min_ms = 2.0;
  double texc_max_ms = 10.0;
  bool operator==(const SpeedTask &) const = default;
};

struct OptimizeTask {
  /// ga, random, simplex, quasi_newton
  std::string method = "ga";
  int runs = 30;
  GAConfig ga;
  /// budget for random, simplex and quasi_newton
  int budget = 1500;
  /// refine the best run with a simplex of this budget (0 = off)
  int refine_budget = 0;
  bool operator==(const OptimizeTask &) const = default;
};

struct CsaBlock {
  double aniso_hz = 0.0;
  double eta = 0.0;
  std::array<double, 3> euler_deg{0.0, 0.0, 0.0};
  bool operator==(const CsaBlock &) const = default;
};

/// Spin system in file units.
struct SpinBlock {
  double larmor_hz = -176.1e6;
  std::array<double, 2> iso_shift_hz{0.0, 0.0};
  std::array<CsaBlock, 2> csa;
  double dipolar_b_hz = -216.0;
  std::array<double, 3> dipolar_euler_deg{0.0, 0.0, 0.0};

  SpinSystem to_system() const;
  bool operator==(const SpinBlock &) const = default;
};

/// 13C2 pair of mono-ammonium maleate: b/2pi = -216 Hz, bond along molecular
/// z, both shielding tensors with aniso = 10307 Hz (10204 Hz is 0.99 of it)
/// and eta = 0.6. The PAS z axis is the normal of the carboxyl plane; the two
/// tensors are mirror images through the plane bisecting the bond.
SpinBlock reference_spin_block();

struct SimBlock {
  double rotor_freq_hz = 10204.0;
  double transmitter_offset_hz = 0.0;
  PowderSpec powder;
  /// 0 selects the default sub-step
  double max_step_us = 0.0;
  bool include_csa = true;
  int threads = 1;

  SimConfig to_config() const;
  bool operator==(const SimBlock &) const = default;
};

/// Base sequence in file units.
struct SequenceBlock {
  double tau1_us = 0.0;
  double tau2_us = 0.0;
  double kappa1_hz = 0.0;
  double kappa2_hz = 0.0;
  double phi1_deg = 0.0;
  double phi2_deg = 0.0;
  int n_blocks = 31;

  SequenceParams to_params() const;
  static SequenceBlock defaults(double rotor_freq_hz, int n_blocks);
  bool operator==(const SequenceBlock &) const = default;
};

struct RunConfig {
  SpinBlock spin = reference_spin_block();
  SimBlock sim;
  SequenceBlock sequence = SequenceBlock::defaults(10204.0, 31);
  /// optimizer genes with bounds (external units)
  std::vector<GeneSpec> genes;
  bool tie_kappa2 = false;
  OptimizeTask optimize;
  BuildupTask buildup;
  Scan1dTask scan1d;
  Scan2dTask scan2d;
  OffsetTask offset;
  SpeedTask speedstudy;
  /// studies run by study_runner, in order
  std::vector<std::string> tasks;

  SpinSystem system() const { return spin.to_system(); }
  SimConfig sim_config() const { return sim.to_config(); }
  SequenceParams params() const { return sequence.to_params(); }
  ParameterSpace space() const;
  bool operator==(const RunConfig &) const = default;
};

inline const std::vector<std::string> &task_names() {
  static const std::vector<std::string> names{"buildup", "scan1d",   "scan2d",
                                              "optimize", "offset", "speedstudy"};
  return names;
}

/// `source` names the text in diagnostics; `base_dir` resolves spin.file.
RunConfig parse_config(const std::string &text, const std::string &source = "config",
                       const std::string &base_dir = ".");
RunConfig load_config(const std::string &path);

/// Fully resolved config; parse_config(emit_config(c)) == c.
std::string emit_config(const RunConfig &c);

/// Spin-system block on its own (the reference data file format).
SpinBlock parse_spin_block(const std::string &text, const std::string &source = "spin");
SpinBlock load_spin_block(const std::string &path);
std::string emit_spin_block(const SpinBlock &s);

}  // namespace c7ga
