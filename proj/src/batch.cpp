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

#include "c7ga/batch.hpp"

#include <cmath>
#include <stdexcept>

namespace c7ga {

namespace {

constexpr int W = CrystalliteBatch::kLanes;
using Lane = double __attribute__((vector_size(W * sizeof(double))));
// upper triangle of a symmetric 4x4, row-major
using Sym = std::array<Lane, 10>;

constexpr int kSym[4][4] = {{0, 1, 2, 3}, {1, 4, 5, 6}, {2, 5, 7, 8}, {3, 6, 8, 9}};
constexpr int kRow[10] = {0, 0, 0, 0, 1, 1, 1, 2, 2, 3};
constexpr int kCol[10] = {0, 1, 2, 3, 1, 2, 3, 2, 3, 3};
constexpr bool kDiag[10] = {true, false, false, false, true, false, false, true, false, true};

// c = a b for commuting symmetric a, b (the product is then symmetric)
inline void sym_mul(const Sym &a, const Sym &b, Sym &c) {
  for (int e = 0; e < 10; ++e) {
    const int i = kRow[e], j = kCol[e];
    c[e] = a[kSym[i][0]] * b[kSym[0][j]] + a[kSym[i][1]] * b[kSym[1][j]] +
           a[kSym[i][2]] * b[kSym[2][j]] + a[kSym[i][3]] * b[kSym[3][j]];
  }
}

// k0 I + k1 b1 + k2 b2 + k3 b3
inline void poly(const double *k, const Sym &b1, const Sym &b2, const Sym &b3, Sym &out) {
  for (int e = 0; e < 10; ++e) {
    const double d = kDiag[e] ? k[0] : 0.0;
    out[e] = d + k[1] * b1[e] + k[2] * b2[e] + k[3] * b3[e];
  }
}

constexpr double kc[8] = {1.0,         -1.0 / 2,         1.0 / 24,
                          -1.0 / 720,  1.0 / 40320,      -1.0 / 3628800,
                          1.0 / 479001600, -1.0 / 87178291200.0};
constexpr double ks[8] = {1.0,          -1.0 / 6,           1.0 / 120,
                          -1.0 / 5040,  1.0 / 362880,       -1.0 / 39916800,
                          1.0 / 6227020800.0, -1.0 / 1307674368000.0};

// cos and sin of x scaled by 2^-squarings, squared back up.
void cos_sin(const Sym &x, int squarings, Sym &c, Sym &s) {
  Sym b1, b2, b3, b4, lo, hi;
  sym_mul(x, x, b1);
  sym_mul(b1, b1, b2);
  sym_mul(b2, b1, b3);
  sym_mul(b2, b2, b4);

  poly(kc, b1, b2, b3, lo);
  poly(kc + 4, b1, b2, b3, hi);
  sym_mul(b4, hi, c);
  for (int e = 0; e < 10; ++e) c[e] += lo[e];

  poly(ks, b1, b2, b3, lo);
  poly(ks + 4, b1, b2, b3, hi);
  sym_mul(b4, hi, b1);
  for (int e = 0; e < 10; ++e) b1[e] += lo[e];
  sym_mul(x, b1, s);

  for (int q = 0; q < squarings; ++q) {
    sym_mul(c, c, b1);
    sym_mul(s, s, b2);
    sym_mul(s, c, b3);
    for (int e = 0; e < 10; ++e) {
      c[e] = b1[e] - b2[e];
      s[e] = 2.0 * b3[e];
    }
  }
}

// Multiply row r of (re, im) by exp(i phi m_r).
void scale_rows(std::array<Lane, 16> &re, std::array<Lane, 16> &im, double phi) {
  for (int r = 0; r < 4; ++r) {
    const int m = kZeemanM[r];
    if (m == 0) continue;
    const double cr = std::cos(phi * m), ci = std::sin(phi * m);
    for (int j = 0; j < 4; ++j) {
      const Lane x = re[4 * r + j], y = im[4 * r + j];
      re[4 * r + j] = cr * x - ci * y;
      im[4 * r + j] = ci * x + cr * y;
    }
  }
}

}  // namespace

CrystalliteBatch::CrystalliteBatch(const SpinSystem &sys, std::span<const Orientation> orientations,
                                   double rotor_freq_hz, double max_step)
    : size_(static_cast<int>(orientations.size())),
      omega_r_(kTwoPi * rotor_freq_hz),
      max_step_(max_step) {
  if (size_ < 1 || size_ > kLanes) throw std::invalid_argument("batch size must lie in [1, 8]");
  if (!(rotor_freq_hz > 0.0)) throw std::invalid_argument("rotor frequency must be positive");
  if (!(max_step > 0.0)) throw std::invalid_argument("max_step must be positive");
  std::array<double, 3> peak{};
  for (int l = 0; l < kLanes; ++l) {
    const auto c = RotorModulation(sys, orientations[l < size_ ? l : 0]).coefficients();
    for (int k = 0; k < 3; ++k) {
      double bound = 0.0;
      for (int h = 0; h < 5; ++h) {
        coef_[k][h][l] = c[k][h];
        bound += std::abs(c[k][h]);
      }
      peak[k] = std::max(peak[k], bound);
    }
  }
  // column sums of H0 are below (|w1| + |w2|) / 2 + |wd|
  static_bound_ = 0.5 * (peak[0] + peak[1]) + peak[2];
}

void CrystalliteBatch::apply_event(const PulseEvent &ev, double t_start, State &u) const {
  if (ev.duration < 0.0) throw std::invalid_argument("negative event duration");
  if (ev.amplitude_hz < 0.0) throw std::invalid_argument("negative r.f. amplitude");
  if (ev.duration == 0.0) return;

  const int nsub = std::max(1, static_cast<int>(std::ceil(ev.duration / max_step_ - 1e-9)));
  const double dt = ev.duration / nsub;
  const double rf = kTwoPi * ev.amplitude_hz;
  int squarings = 0;
  for (double n = dt * (rf + static_bound_); n > 1.0; n *= 0.5) ++squarings;
  const double f = std::ldexp(dt, -squarings);
  const double hr = 0.5 * rf * f;

  // exp(-i phi Fz) U0 exp(+i phi Fz) applied to u
  scale_rows(u.re, u.im, ev.phase);

  Sym x, c, s;
  std::array<Lane, 16> nr, ni;
  for (int k = 0; k < nsub; ++k) {
    const double theta = omega_r_ * (t_start + (k + 0.5) * dt);
    const double c1 = std::cos(theta), s1 = std::sin(theta);
    const double c2 = c1 * c1 - s1 * s1, s2 = 2.0 * s1 * c1;
    Lane w[3];
    for (int q = 0; q < 3; ++q) {
      const auto &h = coef_[q];
      w[q] = h[0] + h[1] * c1 + h[2] * s1 + h[3] * c2 + h[4] * s2;
    }
    const Lane sum = 0.5 * f * (w[0] + w[1]);
    const Lane diff = 0.5 * f * (w[0] - w[1]);
    const Lane hd = 0.5 * f * w[2];
    const Lane zero{};
    x[0] = sum + hd;
    x[1] = zero + hr;
    x[2] = zero + hr;
    x[3] = zero;
    x[4] = diff - hd;
    x[5] = -hd;
    x[6] = zero + hr;
    x[7] = -diff - hd;
    x[8] = zero + hr;
    x[9] = -sum + hd;
    cos_sin(x, squarings, c, s);

    // (c - i s)(re + i im)
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        Lane ar{}, ai{};
        for (int m = 0; m < 4; ++m) {
          const Lane cc = c[kSym[i][m]], ss = s[kSym[i][m]];
          const Lane ur = u.re[4 * m + j], ui = u.im[4 * m + j];
          ar += cc * ur + ss * ui;
          ai += cc * ui - ss * ur;
        }
        nr[4 * i + j] = ar;
        ni[4 * i + j] = ai;
      }
    u.re = nr;
    u.im = ni;
  }

  scale_rows(u.re, u.im, -ev.phase);
}

std::vector<Propagator> CrystalliteBatch::sequence(std::span<const PulseEvent> events,
                                                   double t_start) const {
  State u{};
  for (int d = 0; d < 4; ++d) u.re[5 * d] += 1.0;
  double t = t_start;
  for (const auto &ev : events) {
    apply_event(ev, t, u);
    t += ev.duration;
  }
  std::vector<Propagator> out(size_);
  for (int l = 0; l < size_; ++l)
    for (int e = 0; e < 16; ++e) out[l](e / 4, e % 4) = cd(u.re[e][l], u.im[e][l]);
  return out;
}

}  // namespace c7ga
