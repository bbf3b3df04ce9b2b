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

// Double-quantum filtered C7 experiment:
//
//   I1x+I2x -> (90) -> C7opt -> DQ filter -> (C7opt phase +90) -> (90) -> detect I1x+I2x
//
// The bracketing 90 degree pulses are ideal and instantaneous, the filter is
// an exact coherence-order projection onto orders +-2, and the reconversion
// block continues the rotor phase reached at the end of excitation.

#pragma once

#include <vector>

#include "c7ga/batch.hpp"
#include "c7ga/powder.hpp"
#include "c7ga/sequence.hpp"
#include "c7ga/spin.hpp"

namespace c7ga {

struct SimConfig {
  double rotor_freq_hz = 10204.0;
  double transmitter_offset_hz = 0.0;
  PowderSpec powder;
  /// seconds; zero selects default_max_step(rotor_freq_hz)
  double max_step = 0.0;
  bool include_csa = true;
  int threads = 1;

  void validate() const;
  double effective_max_step() const;

  bool operator==(const SimConfig &) const = default;
};

struct DQFResult {
  /// normalised first FID point, [-1, 1]
  double efficiency = 0.0;
  /// 1 - efficiency, [0, 2]
  double fitness = 1.0;
};

DQFResult make_result(double efficiency);

struct BuildupPoint {
  int n_blocks = 0;
  double excitation_time = 0.0;
  double efficiency = 0.0;
};

struct OffsetPoint {
  double offset_hz = 0.0;
  double efficiency = 0.0;
};

/// Spin system and powder fixed once; evaluates many sequences.
class DqfExperiment {
 public:
  DqfExperiment(const SpinSystem &sys, const SimConfig &cfg);

  DQFResult evaluate(const SequenceParams &p) const;
  /// Efficiency for n_blocks = n_first..n_last with the other parameters of p.
  std::vector<BuildupPoint> buildup(const SequenceParams &p, int n_first, int n_last) const;

  /// Efficiency of a single crystallite, no averaging. Uses the scalar
  /// CrystalliteEvolver rather than the batched kernel.
  double crystallite_efficiency(const SequenceParams &p, std::size_t index) const;

  const SpinSystem &system() const { return sys_; }
  const SimConfig &config() const { return cfg_; }
  std::size_t crystallite_count() const { return powder_.size(); }

 private:
  // [lane][n - n_first]
  std::vector<std::vector<double>> batch_buildup(const SequenceParams &p, std::size_t batch,
                                                 int n_first, int n_last) const;

  SpinSystem sys_;
  SimConfig cfg_;
  std::vector<Crystallite> powder_;
  std::vector<CrystalliteBatch> batches_;
};

/// Efficiency of one crystallite from explicit excitation and reconversion
/// propagators.
double dqf_signal(const Propagator &excitation, const Propagator &reconversion);

DQFResult dqf_efficiency(const SequenceParams &p, const SpinSystem &sys, const SimConfig &cfg);

std::vector<BuildupPoint> buildup_curve(const SequenceParams &p, const SpinSystem &sys,
                                        const SimConfig &cfg, int n_first, int n_last);

/// Both isotropic shifts displaced by each offset in turn.
std::vector<OffsetPoint> offset_profile(const SequenceParams &p, const SpinSystem &sys,
                                        const SimConfig &cfg, const std::vector<double> &offsets);

struct ProfileShape {
  double peak_offset_hz = 0.0;
  double peak = 0.0;
  /// half-maximum crossings, linearly interpolated
  double lower_hz = 0.0;
  double upper_hz = 0.0;
  double fwhm_hz = 0.0;
  /// both crossings found inside the sampled range
  bool bracketed = false;
};

/// Offsets must be sorted ascending.
ProfileShape analyze_profile(const std::vector<OffsetPoint> &profile);

}  // namespace c7ga
