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

#include "c7ga/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "c7ga/parallel.hpp"

namespace c7ga {

namespace {

// Ideal 90 degree pulses: exp(+i pi/2 Fy) takes Fx to Fz, its inverse reads back.
struct Bracket {
  Matrix4c flip;
  Matrix4c read;
  DensityMatrix rho0;
  Matrix4c detect;
  double norm;
};

const Bracket &bracket() {
  static const Bracket b = [] {
    Bracket out;
    const Matrix4c fy = ops::fy();
    const Propagator to_z = step_propagator(-fy, kPi / 2.0);
    out.flip = to_z;
    out.read = to_z.adjoint();
    out.rho0 = ops::fx();
    out.detect = ops::fx();
    out.norm = expectation(out.rho0, out.detect).real();
    return out;
  }();
  return b;
}

// exp(-i phi Fz) U exp(+i phi Fz)
Propagator phase_rotated(const Propagator &u, double phi) {
  Propagator out = u;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      const int dm = kZeemanM[i] - kZeemanM[j];
      if (dm != 0) out(i, j) *= std::polar(1.0, -phi * dm);
    }
  return out;
}

}  // namespace

void SimConfig::validate() const {
  if (!(rotor_freq_hz > 0.0)) throw std::invalid_argument("rotor_freq must be positive");
  if (max_step < 0.0) throw std::invalid_argument("max_step must be non-negative");
  if (powder.gamma_angles < 1) throw std::invalid_argument("powder gamma_angles must be >= 1");
  if (powder.orientations < 1) throw std::invalid_argument("powder orientations must be >= 1");
}

double SimConfig::effective_max_step() const {
  return max_step > 0.0 ? max_step : default_max_step(rotor_freq_hz);
}

DQFResult make_result(double efficiency) { return {efficiency, 1.0 - efficiency}; }

double dqf_signal(const Propagator &excitation, const Propagator &reconversion) {
  const Bracket &b = bracket();
  const DensityMatrix start = evolve(b.rho0, b.flip);
  const DensityMatrix dq = double_quantum_filter(evolve(start, excitation));
  const DensityMatrix end = evolve(evolve(dq, reconversion), b.read);
  return expectation(end, b.detect).real() / b.norm;
}

DqfExperiment::DqfExperiment(const SpinSystem &sys, const SimConfig &cfg)
    : sys_(cfg.include_csa ? sys : sys.without_csa()), cfg_(cfg) {
  sys.validate();
  cfg.validate();
  sys_ = sys_.with_offset(cfg.transmitter_offset_hz);
  powder_ = make_powder(cfg.powder);
  if (powder_.empty()) throw std::invalid_argument("empty powder set");
  std::vector<Orientation> angles;
  for (const auto &c : powder_) angles.push_back(c.angles);
  for (std::size_t i = 0; i < angles.size(); i += CrystalliteBatch::kLanes) {
    const std::size_t n = std::min<std::size_t>(CrystalliteBatch::kLanes, angles.size() - i);
    batches_.emplace_back(sys_, std::span(angles).subspan(i, n), cfg.rotor_freq_hz,
                          cfg.effective_max_step());
  }
}

namespace {

// Blocks are phase-identical, so the k-th block only differs through its
// start time k * t_block. Excitation with n blocks uses k = 0..n-1 and
// reconversion k = n..2n-1.
std::vector<double> window_signals(const std::vector<Propagator> &blocks, int n_first,
                                   int n_last) {
  std::vector<double> out;
  out.reserve(n_last - n_first + 1);
  Propagator exc = Propagator::Identity();
  int done = 0;
  for (int n = n_first; n <= n_last; ++n) {
    for (; done < n; ++done) exc = blocks[done] * exc;
    Propagator rec = Propagator::Identity();
    for (int k = n; k < 2 * n; ++k) rec = blocks[k] * rec;
    out.push_back(dqf_signal(exc, phase_rotated(rec, kPi / 2.0)));
  }
  return out;
}

}  // namespace

std::vector<std::vector<double>> DqfExperiment::batch_buildup(const SequenceParams &p,
                                                              std::size_t batch, int n_first,
                                                              int n_last) const {
  const PulseSequence block = build_c7_block(p);
  const double t_block = block_duration(p);
  const CrystalliteBatch &b = batches_[batch];
  const int count = 2 * n_last;
  std::vector<std::vector<Propagator>> blocks(b.size(), std::vector<Propagator>(count));
  for (int k = 0; k < count; ++k) {
    const auto u = b.sequence(block, k * t_block);
    for (int l = 0; l < b.size(); ++l) blocks[l][k] = u[l];
  }
  std::vector<std::vector<double>> out;
  for (int l = 0; l < b.size(); ++l) out.push_back(window_signals(blocks[l], n_first, n_last));
  return out;
}

double DqfExperiment::crystallite_efficiency(const SequenceParams &p, std::size_t index) const {
  p.validate();
  const CrystalliteEvolver ev(sys_, powder_.at(index).angles, cfg_.rotor_freq_hz,
                              cfg_.effective_max_step());
  const PulseSequence block = build_c7_block(p);
  const double t_block = block_duration(p);
  std::vector<Propagator> blocks(2 * p.n_blocks);
  for (int k = 0; k < 2 * p.n_blocks; ++k) blocks[k] = ev.sequence(block, k * t_block);
  return window_signals(blocks, p.n_blocks, p.n_blocks).front();
}

std::vector<BuildupPoint> DqfExperiment::buildup(const SequenceParams &p, int n_first,
                                                 int n_last) const {
  p.validate();
  if (n_first < 1 || n_last < n_first) throw std::invalid_argument("empty n_blocks range");
  std::vector<std::vector<std::vector<double>>> per(batches_.size());
  parallel_for(batches_.size(), cfg_.threads,
               [&](std::size_t b) { per[b] = batch_buildup(p, b, n_first, n_last); });

  std::vector<BuildupPoint> out;
  for (int n = n_first; n <= n_last; ++n) {
    double sum = 0.0;
    for (std::size_t i = 0; i < powder_.size(); ++i) {
      const std::size_t b = i / CrystalliteBatch::kLanes, l = i % CrystalliteBatch::kLanes;
      sum += powder_[i].weight * per[b][l][n - n_first];
    }
    SequenceParams q = p;
    q.n_blocks = n;
    out.push_back({n, excitation_time(q), sum});
  }
  return out;
}

DQFResult DqfExperiment::evaluate(const SequenceParams &p) const {
  return make_result(buildup(p, p.n_blocks, p.n_blocks).front().efficiency);
}

DQFResult dqf_efficiency(const SequenceParams &p, const SpinSystem &sys, const SimConfig &cfg) {
  return DqfExperiment(sys, cfg).evaluate(p);
}

std::vector<BuildupPoint> buildup_curve(const SequenceParams &p, const SpinSystem &sys,
                                        const SimConfig &cfg, int n_first, int n_last) {
  return DqfExperiment(sys, cfg).buildup(p, n_first, n_last);
}

std::vector<OffsetPoint> offset_profile(const SequenceParams &p, const SpinSystem &sys,
                                        const SimConfig &cfg, const std::vector<double> &offsets) {
  std::vector<OffsetPoint> out;
  out.reserve(offsets.size());
  for (double off : offsets) {
    const DqfExperiment exp(sys.with_offset(off), cfg);
    out.push_back({off, exp.evaluate(p).efficiency});
  }
  return out;
}

ProfileShape analyze_profile(const std::vector<OffsetPoint> &profile) {
  if (profile.empty()) throw std::invalid_argument("empty offset profile");
  ProfileShape s;
  std::size_t peak = 0;
  for (std::size_t i = 1; i < profile.size(); ++i)
    if (profile[i].efficiency > profile[peak].efficiency) peak = i;
  s.peak = profile[peak].efficiency;
  s.peak_offset_hz = profile[peak].offset_hz;
  const double half = 0.5 * s.peak;
  auto crossing = [&](std::size_t inside, std::size_t outside) {
    const auto &a = profile[inside];
    const auto &b = profile[outside];
    const double f = (a.efficiency - half) / (a.efficiency - b.efficiency);
    return a.offset_hz + f * (b.offset_hz - a.offset_hz);
  };
  bool lo = false, hi = false;
  s.lower_hz = profile.front().offset_hz;
  s.upper_hz = profile.back().offset_hz;
  for (std::size_t i = peak; i > 0; --i)
    if (profile[i - 1].efficiency < half) {
      s.lower_hz = crossing(i, i - 1);
      lo = true;
      break;
    }
  for (std::size_t i = peak; i + 1 < profile.size(); ++i)
    if (profile[i + 1].efficiency < half) {
      s.upper_hz = crossing(i, i + 1);
      hi = true;
      break;
    }
  s.bracketed = lo && hi;
  s.fwhm_hz = s.upper_hz - s.lower_hz;
  return s;
}

}  // namespace c7ga
