/* Copyright 2026 The spinfv Authors. All Rights Reserved.
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

#pragma once

#include <complex>

#include <Eigen/Dense>

namespace spinfv {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using Vec3 = Eigen::Vector3d;

inline constexpr cplx kI{0.0, 1.0};

/// Spin quantum number s, stored as the integer 2s.
///
/// Basis index k = 0..2s corresponds to magnetic number m = s - k, so the top
/// component of every state vector is m = +s.
class SpinLabel {
 public:
  explicit SpinLabel(int twice_spin);

  /// Builds a label from a (half-)integer value such as 1.5.
  static SpinLabel from_value(double s);

  int twice_spin() const noexcept { return twice_spin_; }
  double value() const noexcept { return 0.5 * twice_spin_; }
  int dimension() const noexcept { return twice_spin_ + 1; }
  bool is_integer() const noexcept { return twice_spin_ % 2 == 0; }

  /// Magnetic number at basis index k.
  double m_at(int k) const noexcept { return 0.5 * (twice_spin_ - 2 * k); }

  /// Basis index of magnetic number m; throws DomainError if m is not one of
  /// s, s-1, ..., -s.
  int index_of(double m) const;
  bool contains(double m) const noexcept;

  friend bool operator==(SpinLabel a, SpinLabel b) noexcept {
    return a.twice_spin_ == b.twice_spin_;
  }

 private:
  int twice_spin_;
};

/// Euler angles (phi, theta, psi) in radians; unbounded.
struct EulerAngles {
  double phi = 0.0;
  double theta = 0.0;
  double psi = 0.0;

  bool is_finite() const noexcept;
};

struct SpinOperatorSet {
  CMatrix S1, S2, S3, Splus, Sminus;

  /// S . n for a real 3-vector n.
  CMatrix along(const Vec3& n) const { return n.x() * S1 + n.y() * S2 + n.z() * S3; }
};

SpinOperatorSet build_spin_operators(SpinLabel s);

/// f(s, m) = sqrt((s + m)(s - m + 1)), the matrix element <m|S+|m-1>.
double ladder_coefficient(SpinLabel s, double m);

/// exp(A). Skew-Hermitian input goes through the Hermitian eigendecomposition
/// of iA so the result is unitary to rounding; anything else falls back to
/// Pade scaling-and-squaring.
CMatrix matrix_exponential(const CMatrix& a);

/// exp(-i H t) for Hermitian H.
CMatrix unitary_propagator(const CMatrix& hermitian, double t);

/// Precomputes the S2 eigendecomposition for one spin so that repeated
/// R(Omega) evaluations cost two diagonal phases and one similarity transform.
class Rotor {
 public:
  explicit Rotor(SpinLabel s);

  SpinLabel spin() const noexcept { return spin_; }
  const SpinOperatorSet& operators() const noexcept { return ops_; }

  /// R(Omega) = exp(-i phi S3) exp(-i theta S2) exp(-i psi S3).
  CMatrix rotation(const EulerAngles& omega) const;
  /// exp(-i theta S2) alone.
  CMatrix polar(double theta) const;
  /// Diagonal of exp(-i angle S3).
  CVector azimuthal_phases(double angle) const;

 private:
  SpinLabel spin_;
  SpinOperatorSet ops_;
  CMatrix s2_vectors_;
  Eigen::VectorXd s2_values_;
};

CMatrix rotation_matrix(SpinLabel s, const EulerAngles& omega);

}  // namespace spinfv
