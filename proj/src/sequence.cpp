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

#include "c7ga/sequence.hpp"

#include <stdexcept>

#include "c7ga/spin.hpp"

namespace c7ga {

C7Defaults c7_defaults(double rotor_freq_hz) {
  if (!(rotor_freq_hz > 0.0)) throw std::invalid_argument("rotor frequency must be positive");
  C7Defaults d;
  d.rotor_freq_hz = rotor_freq_hz;
  d.kappa_c = 2.0 * d.big_n / d.small_n * rotor_freq_hz;
  d.theta_c = kTwoPi;
  d.tau_c = d.theta_c / (kTwoPi * d.kappa_c);
  d.phase_increment = kTwoPi * d.nu / d.big_n;
  return d;
}

void SequenceParams::validate() const {
  if (!(tau1 > 0.0)) throw std::invalid_argument("tau1 must be positive");
  if (!(tau2 > 0.0)) throw std::invalid_argument("tau2 must be positive");
  if (!(kappa1 > 0.0)) throw std::invalid_argument("kappa1 must be positive");
  if (!(kappa2 > 0.0)) throw std::invalid_argument("kappa2 must be positive");
  if (n_blocks < 1) throw std::invalid_argument("n_blocks must be at least 1");
}

SequenceParams default_params(double rotor_freq_hz, int n_blocks) {
  const C7Defaults d = c7_defaults(rotor_freq_hz);
  SequenceParams p;
  p.tau1 = p.tau2 = d.tau_c;
  p.kappa1 = p.kappa2 = d.kappa_c;
  p.n_blocks = n_blocks;
  return p;
}

PulseSequence build_c7_block(const SequenceParams &p) {
  p.validate();
  const double step = kTwoPi / kElementsPerBlock;
  PulseSequence block;
  block.reserve(kEventsPerBlock);
  for (int e = 0; e < kElementsPerBlock; ++e) {
    block.push_back({p.kappa1, p.phi1 + e * step, p.tau1});
    block.push_back({p.kappa2, p.phi2 + kPi + e * step, p.tau2});
  }
  return block;
}

PulseSequence build_c7opt(const SequenceParams &p) {
  const PulseSequence block = build_c7_block(p);
  PulseSequence seq;
  seq.reserve(block.size() * p.n_blocks);
  for (int b = 0; b < p.n_blocks; ++b) seq.insert(seq.end(), block.begin(), block.end());
  return seq;
}

PulseSequence build_c7(double rotor_freq_hz, int n_blocks) {
  if (n_blocks < 1) throw std::invalid_argument("n_blocks must be at least 1");
  const C7Defaults d = c7_defaults(rotor_freq_hz);
  PulseSequence seq;
  for (int i = 0; i < d.big_n * n_blocks; ++i) {
    const double phi = (i % d.big_n) * d.phase_increment;
    seq.push_back({d.kappa_c, phi, d.tau_c});
    seq.push_back({d.kappa_c, phi + kPi, d.tau_c});
  }
  return seq;
}

PulseSequence phase_shifted(const PulseSequence &seq, double shift) {
  PulseSequence out = seq;
  for (auto &ev : out) ev.phase += shift;
  return out;
}

double total_duration(const PulseSequence &seq) {
  double t = 0.0;
  for (const auto &ev : seq) t += ev.duration;
  return t;
}

double asynchrony(double dtau1, double dtau2) { return 3.5 * (dtau1 + dtau2); }

double flip_angle(double kappa_hz, double tau) { return kTwoPi * kappa_hz * tau; }

double block_duration(const SequenceParams &p) { return kElementsPerBlock * (p.tau1 + p.tau2); }

double excitation_time(const SequenceParams &p) {
  if (p.n_blocks < 1) throw std::invalid_argument("n_blocks must be at least 1");
  return p.n_blocks * block_duration(p);
}

}  // namespace c7ga
