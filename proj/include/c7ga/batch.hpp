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

// Lock-step propagation of several crystallites.
//
// Crystallites under the same pulse train share the time grid, so the rotor
// phase is common and only the harmonic coefficients differ. The kernel keeps
// every matrix element as a short array over crystallites (lanes), which the
// compiler lowers to SIMD arithmetic (GCC/Clang vector extensions). Results match CrystalliteEvolver to
// round-off.

#pragma once

#include <array>
#include <span>
#include <vector>

#include "c7ga/spin.hpp"

namespace c7ga {

class CrystalliteBatch {
 public:
  static constexpr int kLanes = 8;

  /// At most kLanes orientations; unused lanes replicate the first one.
  CrystalliteBatch(const SpinSystem &sys, std::span<const Orientation> orientations,
                   double rotor_freq_hz, double max_step);

  int size() const { return size_; }

  /// Propagator of each crystallite through `events`, starting at t_start.
  std::vector<Propagator> sequence(std::span<const PulseEvent> events, double t_start) const;

 private:
  typedef double Lane __attribute__((vector_size(kLanes * sizeof(double))));

  struct State {
    // real and imaginary parts, row-major 4x4
    std::array<Lane, 16> re;
    std::array<Lane, 16> im;
  };

  void apply_event(const PulseEvent &ev, double t_start, State &u) const;

  int size_ = 0;
  double omega_r_ = 0.0;
  double max_step_ = 0.0;
  // harmonic coefficients [interaction][c0, c1, s1, c2, s2]
  std::array<std::array<Lane, 5>, 3> coef_{};
  // bound on |H0| without r.f., rad/s
  double static_bound_ = 0.0;
};

}  // namespace c7ga
