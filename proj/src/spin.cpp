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

#include "c7ga/spin.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

namespace c7ga {

namespace {

Matrix3d rz(double a) {
  Matrix3d m;
  const double c = std::cos(a), s = std::sin(a);
  m << c, -s, 0, s, c, 0, 0, 0, 1;
  return m;
}

Matrix3d ry(double a) {
  Matrix3d m;
  const double c = std::cos(a), s = std::sin(a);
  m << c, 0, s, 0, 1, 0, -s, 0, c;
  return m;
}

Matrix3d pas_tensor(double aniso, double eta) {
  return Eigen::Vector3d(-0.5 * (1.0 + eta) * aniso, -0.5 * (1.0 - eta) * aniso, aniso)
      .asDiagonal();
}

Matrix4c kron(const Eigen::Matrix2cd &a, const Eigen::Matrix2cd &b) {
  Matrix4c out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return out;
}

Eigen::Matrix2cd pauli_half(char axis) {
  Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
  const cd i(0.0, 1.0);
  switch (axis) {
    case 'x': m << 0.0, 0.5, 0.5, 0.0; break;
    case 'y': m << 0.0, -0.5 * i, 0.5 * i, 0.0; break;
    case 'z': m << 0.5, 0.0, 0.0, -0.5; break;
    default: break;
  }
  return m;
}

// Hamiltonian with the r.f. field along +x; real symmetric in the Zeeman basis.
Matrix4d real_hamiltonian(const InteractionFrequencies &w, double rf) {
  const double sum = 0.5 * (w.cs1 + w.cs2);
  const double diff = 0.5 * (w.cs1 - w.cs2);
  const double hd = 0.5 * w.dipolar;
  const double hr = 0.5 * rf;
  Matrix4d h;
  h << sum + hd, hr, hr, 0.0,
       hr, diff - hd, -hd, hr,
       hr, -hd, -diff - hd, hr,
       0.0, hr, hr, -sum + hd;
  return h;
}

// Conjugation by exp(-i phi Fz), which is diagonal in the Zeeman basis.
void rotate_about_z(Matrix4c &m, double phi) {
  if (phi == 0.0) return;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      const int dm = kZeemanM[i] - kZeemanM[j];
      if (dm != 0) m(i, j) *= std::polar(1.0, -phi * dm);
    }
}

}  // namespace

namespace detail {

void expm_minus_i_symmetric(const Matrix4d &a, Matrix4d &cos_a, Matrix4d &sin_a) {
  // Scale to a 1-norm <= 1; the series through A^15 then truncates below 5e-14.
  double norm = a.cwiseAbs().colwise().sum().maxCoeff();
  int squarings = 0;
  while (norm > 1.0) {
    norm *= 0.5;
    ++squarings;
  }
  const Matrix4d x = std::ldexp(1.0, -squarings) * a;
  const Matrix4d b1 = x * x;
  const Matrix4d b2 = b1 * b1;
  const Matrix4d b3 = b2 * b1;
  const Matrix4d id = Matrix4d::Identity();
  // cos x = sum (-1)^k B^k / (2k)!,  sin x = x sum (-1)^k B^k / (2k+1)!
  static constexpr double kc[8] = {1.0,         -1.0 / 2,         1.0 / 24,
                                   -1.0 / 720,  1.0 / 40320,      -1.0 / 3628800,
                                   1.0 / 479001600, -1.0 / 87178291200.0};
  static constexpr double ks[8] = {1.0,          -1.0 / 6,           1.0 / 120,
                                   -1.0 / 5040,  1.0 / 362880,       -1.0 / 39916800,
                                   1.0 / 6227020800.0, -1.0 / 1307674368000.0};
  cos_a = kc[0] * id + kc[1] * b1 + kc[2] * b2 + kc[3] * b3 +
          b2 * b2 * (kc[4] * id + kc[5] * b1 + kc[6] * b2 + kc[7] * b3);
  const Matrix4d sp = ks[0] * id + ks[1] * b1 + ks[2] * b2 + ks[3] * b3 +
                      b2 * b2 * (ks[4] * id + ks[5] * b1 + ks[6] * b2 + ks[7] * b3);
  sin_a = x * sp;
  for (int k = 0; k < squarings; ++k) {
    // cos and sin of the same matrix commute
    const Matrix4d c2 = cos_a * cos_a - sin_a * sin_a;
    sin_a = 2.0 * (sin_a * cos_a);
    cos_a = c2;
  }
}

}  // namespace detail

Matrix3d rotation_matrix(const EulerAngles &e) {
  return rz(e.alpha) * ry(e.beta) * rz(e.gamma);
}

void SpinSystem::validate() const {
  for (int k = 0; k < 2; ++k) {
    const double eta = csa[k].eta;
    if (!(eta >= 0.0 && eta <= 1.0))
      throw std::invalid_argument("csa_eta_" + std::to_string(k + 1) + " must lie in [0, 1]");
  }
}

SpinSystem SpinSystem::without_csa() const {
  SpinSystem s = *this;
  s.csa[0].aniso_hz = 0.0;
  s.csa[1].aniso_hz = 0.0;
  return s;
}

SpinSystem SpinSystem::with_offset(double offset_hz) const {
  SpinSystem s = *this;
  s.iso_shift_hz[0] += offset_hz;
  s.iso_shift_hz[1] += offset_hz;
  return s;
}

RotorModulation::RotorModulation(const SpinSystem &sys, const Orientation &crystallite) {
  // Frame changes are passive: T_target = R^T T_source R.
  const Matrix3d rc = rotation_matrix(crystallite);
  for (int k = 0; k < 2; ++k) {
    const Matrix3d r = rotation_matrix(sys.csa[k].pas_to_molecule) * rc;
    const Matrix3d t =
        r.transpose() * pas_tensor(kTwoPi * sys.csa[k].aniso_hz, sys.csa[k].eta) * r;
    terms_[k] = expand(t, kTwoPi * sys.iso_shift_hz[k]);
  }
  const Matrix3d rd = rotation_matrix(sys.dipolar_euler) * rc;
  const Matrix3d td = rd.transpose() * pas_tensor(kTwoPi * sys.dipolar_b_hz, 0.0) * rd;
  terms_[2] = expand(td, 0.0);
}

RotorModulation::Harmonics RotorModulation::expand(const Matrix3d &t, double iso) {
  // b(theta)^T T b(theta) with b = (s cos theta, s sin theta, c)
  const double s = std::sin(kMagicAngle), c = std::cos(kMagicAngle);
  Harmonics h;
  h.c0 = iso + s * s * 0.5 * (t(0, 0) + t(1, 1)) + c * c * t(2, 2);
  h.c1 = 2.0 * s * c * t(0, 2);
  h.s1 = 2.0 * s * c * t(1, 2);
  h.c2 = s * s * 0.5 * (t(0, 0) - t(1, 1));
  h.s2 = s * s * t(0, 1);
  return h;
}

InteractionFrequencies RotorModulation::at_phase(double theta) const {
  const double c1 = std::cos(theta), s1 = std::sin(theta);
  const double c2 = c1 * c1 - s1 * s1, s2 = 2.0 * s1 * c1;
  return {terms_[0].eval(c1, s1, c2, s2), terms_[1].eval(c1, s1, c2, s2),
          terms_[2].eval(c1, s1, c2, s2)};
}

std::array<std::array<double, 5>, 3> RotorModulation::coefficients() const {
  std::array<std::array<double, 5>, 3> out{};
  for (int k = 0; k < 3; ++k)
    out[k] = {terms_[k].c0, terms_[k].c1, terms_[k].s1, terms_[k].c2, terms_[k].s2};
  return out;
}

InteractionFrequencies interaction_frequencies(const SpinSystem &sys, const Orientation &o,
                                               double rotor_freq_hz, double t) {
  if (!(rotor_freq_hz > 0.0)) throw std::invalid_argument("rotor frequency must be positive");
  return RotorModulation(sys, o).at_phase(kTwoPi * rotor_freq_hz * t);
}

namespace ops {
Matrix4c i1x() { return kron(pauli_half('x'), Eigen::Matrix2cd::Identity()); }
Matrix4c i1y() { return kron(pauli_half('y'), Eigen::Matrix2cd::Identity()); }
Matrix4c i1z() { return kron(pauli_half('z'), Eigen::Matrix2cd::Identity()); }
Matrix4c i2x() { return kron(Eigen::Matrix2cd::Identity(), pauli_half('x')); }
Matrix4c i2y() { return kron(Eigen::Matrix2cd::Identity(), pauli_half('y')); }
Matrix4c i2z() { return kron(Eigen::Matrix2cd::Identity(), pauli_half('z')); }
Matrix4c fx() { return i1x() + i2x(); }
Matrix4c fy() { return i1y() + i2y(); }
Matrix4c fz() { return i1z() + i2z(); }
Matrix4c identity() { return Matrix4c::Identity(); }
Matrix4c dipolar_secular() { return 2.0 * i1z() * i2z() - i1x() * i2x() - i1y() * i2y(); }
Matrix4c double_quantum_x() {
  const cd i(0.0, 1.0);
  const Matrix4c p1 = i1x() + i * i1y(), p2 = i2x() + i * i2y();
  return p1 * p2 + p1.adjoint() * p2.adjoint();
}
}  // namespace ops

Matrix4c hamiltonian(const InteractionFrequencies &w, double rf_amp_hz, double rf_phase) {
  if (rf_amp_hz < 0.0) throw std::invalid_argument("r.f. amplitude must be non-negative");
  Matrix4c h = real_hamiltonian(w, kTwoPi * rf_amp_hz).cast<cd>();
  rotate_about_z(h, rf_phase);
  // exact Hermiticity
  return 0.5 * (h + h.adjoint());
}

Propagator step_propagator(const Matrix4c &h, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("time step must be positive");
  const double scale = std::max(1.0, h.norm());
  if ((h - h.adjoint()).norm() > 1e-9 * scale)
    throw NumericalError("step_propagator: Hamiltonian is not Hermitian");
  Eigen::SelfAdjointEigenSolver<Matrix4c> es(h);
  if (es.info() != Eigen::Success) throw NumericalError("step_propagator: eigensolver failed");
  Eigen::Matrix<cd, 4, 1> phases;
  for (int k = 0; k < 4; ++k) phases(k) = std::polar(1.0, -es.eigenvalues()(k) * dt);
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

double default_max_step(double rotor_freq_hz) { return 1.0 / (200.0 * rotor_freq_hz); }

CrystalliteEvolver::CrystalliteEvolver(const SpinSystem &sys, const Orientation &o,
                                       double rotor_freq_hz, double max_step)
    : mod_(sys, o), omega_r_(kTwoPi * rotor_freq_hz), max_step_(max_step) {
  if (!(rotor_freq_hz > 0.0)) throw std::invalid_argument("rotor frequency must be positive");
  if (!(max_step > 0.0)) throw std::invalid_argument("max_step must be positive");
}

Propagator CrystalliteEvolver::event(const PulseEvent &ev, double t_start) const {
  if (ev.duration < 0.0) throw std::invalid_argument("negative event duration");
  if (ev.amplitude_hz < 0.0) throw std::invalid_argument("negative r.f. amplitude");
  if (ev.duration == 0.0) return Propagator::Identity();

  const int nsub = std::max(1, static_cast<int>(std::ceil(ev.duration / max_step_ - 1e-9)));
  const double dt = ev.duration / nsub;
  const double rf = kTwoPi * ev.amplitude_hz;

  // The r.f. phase only conjugates the step propagators by exp(-i phi Fz), so
  // the sub-steps are evaluated with the field along x and rotated once.
  // With a real symmetric Hamiltonian, U = Ur + i Ui stays in real arithmetic.
  Matrix4d ur = Matrix4d::Identity();
  Matrix4d ui = Matrix4d::Zero();
  Matrix4d c, s;
  for (int k = 0; k < nsub; ++k) {
    const double t = t_start + (k + 0.5) * dt;
    detail::expm_minus_i_symmetric(real_hamiltonian(mod_.at_phase(omega_r_ * t), rf) * dt, c, s);
    // (c - i s)(ur + i ui)
    const Matrix4d nr = c * ur + s * ui;
    ui = c * ui - s * ur;
    ur = nr;
  }
  Propagator u;
  u.real() = ur;
  u.imag() = ui;
  rotate_about_z(u, ev.phase);
  return u;
}

Propagator CrystalliteEvolver::sequence(std::span<const PulseEvent> events, double t_start) const {
  Propagator u = Propagator::Identity();
  double t = t_start;
  for (const auto &ev : events) {
    u = event(ev, t) * u;
    t += ev.duration;
  }
  return u;
}

Propagator propagate_sequence(const SpinSystem &sys, const Orientation &o, double rotor_freq_hz,
                              std::span<const PulseEvent> events, double t_start,
                              double max_step) {
  if (events.empty()) throw std::invalid_argument("empty pulse sequence");
  return CrystalliteEvolver(sys, o, rotor_freq_hz, max_step).sequence(events, t_start);
}

DensityMatrix coherence_filter(const DensityMatrix &rho, std::span<const int> orders) {
  DensityMatrix out = DensityMatrix::Zero();
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) {
      const int p = kZeemanM[r] - kZeemanM[c];
      if (std::find(orders.begin(), orders.end(), p) != orders.end()) out(r, c) = rho(r, c);
    }
  return out;
}

DensityMatrix double_quantum_filter(const DensityMatrix &rho) {
  static constexpr std::array<int, 2> kDq{2, -2};
  return coherence_filter(rho, kDq);
}

cd expectation(const DensityMatrix &rho, const Matrix4c &op) { return (op.adjoint() * rho).trace(); }

DensityMatrix evolve(const DensityMatrix &rho, const Propagator &u) {
  return u * rho * u.adjoint();
}

}  // namespace c7ga
