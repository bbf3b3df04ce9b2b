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

// Two-spin-1/2 homonuclear system under magic angle spinning.
//
// Everything is expressed in the rotating frame of the transmitter, in the
// Zeeman product basis {|aa>, |ab>, |ba>, |bb>} (a = alpha, b = beta, first
// letter is spin 1). Frequencies at the API boundary are in Hz, internal
// Hamiltonians are in rad/s.

#pragma once

#include <array>
#include <complex>
#include <span>
#include <stdexcept>

#include <Eigen/Core>

#include "c7ga/pulse.hpp"

namespace c7ga {

using cd = std::complex<double>;
using Matrix4c = Eigen::Matrix<cd, 4, 4>;
using Matrix4d = Eigen::Matrix<double, 4, 4>;
using Matrix3d = Eigen::Matrix3d;

/// Density matrices and propagators share the 4x4 complex representation.
using DensityMatrix = Matrix4c;
using Propagator = Matrix4c;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;
/// arccos(1/sqrt(3))
inline constexpr double kMagicAngle = 0.95531661812450927816;

class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// z-y-z Euler angles, radians. Frame transformations are passive: a tensor
/// T given in frame A reads R^T T R in frame B, R = Rz(alpha) Ry(beta) Rz(gamma).
struct EulerAngles {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;

  bool operator==(const EulerAngles &) const = default;
};

/// Crystallite orientation: molecular frame -> rotor frame.
using Orientation = EulerAngles;

Matrix3d rotation_matrix(const EulerAngles &e);

/// Chemical shielding tensor of one spin (Haeberlen convention: the PAS
/// tensor is aniso * diag(-(1+eta)/2, -(1-eta)/2, 1)).
struct CsaTensor {
  double aniso_hz = 0.0;
  double eta = 0.0;
  EulerAngles pas_to_molecule;

  bool operator==(const CsaTensor &) const = default;
};

struct SpinSystem {
  double larmor_hz = -176.1e6;
  std::array<double, 2> iso_shift_hz{0.0, 0.0};
  std::array<CsaTensor, 2> csa;
  /// b/2pi of the secular dipolar coupling, Hz.
  double dipolar_b_hz = 0.0;
  /// Orientation of the internuclear vector (PAS z) in the molecular frame.
  EulerAngles dipolar_euler;

  /// Throws std::invalid_argument when an asymmetry lies outside [0, 1].
  void validate() const;
  /// Copy with both CSA anisotropies zeroed; isotropic shifts are kept.
  SpinSystem without_csa() const;
  /// Copy with both isotropic shifts displaced by offset_hz.
  SpinSystem with_offset(double offset_hz) const;

  bool operator==(const SpinSystem &) const = default;
};

/// Instantaneous coefficients of I1z, I2z and the secular dipolar operator
/// (2 I1z I2z - I1x I2x - I1y I2y), rad/s.
struct InteractionFrequencies {
  double cs1 = 0.0;
  double cs2 = 0.0;
  double dipolar = 0.0;
};

/// Rotor-modulated interaction frequencies of a single crystallite.
///
/// Each coefficient is the lab-frame zz component of a rank-2 tensor whose
/// rotor-frame form is fixed; the magnetic field direction in the rotor
/// frame is (sin bm cos wt, sin bm sin wt, cos bm) with bm the magic angle,
/// so only harmonics 1 and 2 of the rotor phase survive. The crystallite
/// gamma angle and the rotor phase enter only as their sum.
class RotorModulation {
 public:
  RotorModulation(const SpinSystem &sys, const Orientation &crystallite);

  /// Coefficients at rotor phase theta = 2 pi nu_r t (radians).
  InteractionFrequencies at_phase(double theta) const;

  /// [cs1, cs2, dipolar] x [c0, c1, s1, c2, s2]: w = c0 + c1 cos + s1 sin + c2 cos2 + s2 sin2.
  std::array<std::array<double, 5>, 3> coefficients() const;

 private:
  struct Harmonics {
    double c0 = 0.0, c1 = 0.0, s1 = 0.0, c2 = 0.0, s2 = 0.0;
    double eval(double cos1, double sin1, double cos2, double sin2) const {
      return c0 + c1 * cos1 + s1 * sin1 + c2 * cos2 + s2 * sin2;
    }
  };
  static Harmonics expand(const Matrix3d &rotor_tensor, double iso);

  std::array<Harmonics, 3> terms_;
};

InteractionFrequencies interaction_frequencies(const SpinSystem &sys, const Orientation &o,
                                               double rotor_freq_hz, double t);

/// Spin operators in the Zeeman product basis.
namespace ops {
Matrix4c i1x();
Matrix4c i1y();
Matrix4c i1z();
Matrix4c i2x();
Matrix4c i2y();
Matrix4c i2z();
Matrix4c fx();
Matrix4c fy();
Matrix4c fz();
Matrix4c identity();
/// 2 I1z I2z - I1x I2x - I1y I2y
Matrix4c dipolar_secular();
/// I1+ I2+ + I1- I2-
Matrix4c double_quantum_x();
}  // namespace ops

/// Total Zeeman quantum number of each basis state.
inline constexpr std::array<int, 4> kZeemanM{1, 0, 0, -1};

Matrix4c hamiltonian(const InteractionFrequencies &w, double rf_amp_hz, double rf_phase);

/// exp(-i H dt) through a Hermitian eigendecomposition.
/// Throws NumericalError if H is not Hermitian to 1e-9 relative.
Propagator step_propagator(const Matrix4c &h, double dt);

namespace detail {
/// cos(A) and sin(A) of a real symmetric matrix, so exp(-iA) = cos(A) - i sin(A).
/// Truncated Taylor series with scaling and squaring; accurate to round-off.
void expm_minus_i_symmetric(const Matrix4d &a, Matrix4d &cos_a, Matrix4d &sin_a);
}  // namespace detail

/// Default sub-step bound: a 200th of the rotor period.
double default_max_step(double rotor_freq_hz);

/// Time-ordered propagator of a single crystallite through an event list.
///
/// Each event is cut into equal sub-steps no longer than max_step and the
/// Hamiltonian is sampled at sub-step midpoints. The rotor phase follows the
/// absolute time t_start + elapsed.
class CrystalliteEvolver {
 public:
  CrystalliteEvolver(const SpinSystem &sys, const Orientation &o, double rotor_freq_hz,
                     double max_step);

  Propagator event(const PulseEvent &ev, double t_start) const;
  Propagator sequence(std::span<const PulseEvent> events, double t_start) const;

  const RotorModulation &modulation() const { return mod_; }

 private:
  RotorModulation mod_;
  double omega_r_;
  double max_step_;
};

Propagator propagate_sequence(const SpinSystem &sys, const Orientation &o, double rotor_freq_hz,
                              std::span<const PulseEvent> events, double t_start,
                              double max_step);

/// Keep only the elements whose coherence order M(r) - M(c) is listed.
DensityMatrix coherence_filter(const DensityMatrix &rho, std::span<const int> orders);
/// Projection onto coherence orders +2 and -2.
DensityMatrix double_quantum_filter(const DensityMatrix &rho);

/// Tr(op^dagger rho)
cd expectation(const DensityMatrix &rho, const Matrix4c &op);

/// U rho U^dagger
DensityMatrix evolve(const DensityMatrix &rho, const Propagator &u);

}  // namespace c7ga
