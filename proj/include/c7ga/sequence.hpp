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

// C7(2,1) recoupling blocks and the relaxed seven-parameter family
//
//   { [ (kappa1 tau1)_phi1 (kappa2 tau2)_(phi2 + 180) ]^7 with 2pi/7 phase steps }^n
//
// Durations are seconds, amplitudes Hz, phases radians.

#pragma once

#include <cstddef>

#include "c7ga/pulse.hpp"

namespace c7ga {

struct C7Defaults {
  double rotor_freq_hz = 0.0;
  /// 7 * rotor frequency
  double kappa_c = 0.0;
  /// duration of a 2 pi pulse at kappa_c
  double tau_c = 0.0;
  double phase_increment = 0.0;
  double theta_c = 0.0;
  int big_n = 7;
  int small_n = 2;
  int nu = 1;
};

C7Defaults c7_defaults(double rotor_freq_hz);

struct SequenceParams {
  double tau1 = 0.0;
  double tau2 = 0.0;
  double kappa1 = 0.0;
  double kappa2 = 0.0;
  /// Deviation from the C-element baseline phases (0, 180 degrees), radians.
  double phi1 = 0.0;
  double phi2 = 0.0;
  int n_blocks = 1;

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;

  bool operator==(const SequenceParams &) const = default;
};

/// The unmodified C7(2,1) parameters at a spinning frequency.
SequenceParams default_params(double rotor_freq_hz, int n_blocks);

inline constexpr int kElementsPerBlock = 7;
inline constexpr int kEventsPerBlock = 2 * kElementsPerBlock;

/// One block of 14 events; all blocks of a sequence are identical.
PulseSequence build_c7_block(const SequenceParams &p);
/// n_blocks consecutive blocks, 14 * n_blocks events.
PulseSequence build_c7opt(const SequenceParams &p);
/// The textbook C7(2,1) train, built directly from the symmetry relations.
PulseSequence build_c7(double rotor_freq_hz, int n_blocks);

/// Copy with every phase advanced by shift (radians).
PulseSequence phase_shifted(const PulseSequence &seq, double shift);

double total_duration(const PulseSequence &seq);

/// Departure of a C7 block from rotor synchrony, (7/2)(dtau1 + dtau2).
double asynchrony(double dtau1, double dtau2);
/// 2 pi kappa tau, radians.
double flip_angle(double kappa_hz, double tau);
/// Duration of one block, 7 (tau1 + tau2).
double block_duration(const SequenceParams &p);
/// n_blocks * 7 * (tau1 + tau2)
double excitation_time(const SequenceParams &p);

}  // namespace c7ga
