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

#include "spinfv/spin_core.hpp"

#include <cmath>
#include <string>

#include <unsupported/Eigen/MatrixFunctions>

#include "spinfv/error.hpp"

namespace spinfv {

SpinLabel::SpinLabel(int twice_spin) : twice_spin_(twice_spin) {
  if (twice_spin < 0) {
    throw DomainError("twice_spin must be non-negative, got " + std::to_string(twice_spin));
  }
}

SpinLabel SpinLabel::from_value(double s) {
  const double twice = 2.0 * s;
  const double rounded = std::round(twice);
  if (!std::isfinite(s) || std::abs(twice - rounded) > 1e-9 || rounded < 0) {
    throw DomainError("spin must be a non-negative half-integer");
  }
  return SpinLabel(static_cast<int>(rounded));
}

bool SpinLabel::contains(double m) const noexcept {
  const double twice_m = 2.0 * m;
  const double rounded = std::round(twice_m);
  if (!std::isfinite(m) || std::abs(twice_m - rounded) > 1e-9) return false;
  const long t = static_cast<long>(rounded);
  return std::abs(t) <= twice_spin_ && (twice_spin_ - t) % 2 == 0;
}

int SpinLabel::index_of(double m) const {
  if (!contains(m)) {
    throw DomainError("magnetic number " + std::to_string(m) + " is not in the spin-" +
                      std::to_string(value()) + " multiplet");
  }
  return static_cast<int>(std::lround(value() - m));
}

bool EulerAngles::is_finite() const noexcept {
  return std::isfinite(phi) && std::isfinite(theta) && std::isfinite(psi);
}

double ladder_coefficient(SpinLabel s, double m) {
  // valid range is -s+1 <= m <= s, i.e. both m and m-1 in the multiplet
  if (!s.contains(m) || !s.contains(m - 1.0)) {
    throw DomainError("ladder coefficient needs -s+1 <= m <= s");
  }
  const double sv = s.value();
  return std::sqrt((sv + m) * (sv - m + 1.0));
}

SpinOperatorSet build_spin_operators(SpinLabel s) {
  const int d = s.dimension();
  SpinOperatorSet ops;
  ops.S3 = CMatrix::Zero(d, d);
  ops.Splus = CMatrix::Zero(d, d);
  for (int k = 0; k < d; ++k) {
    ops.S3(k, k) = s.m_at(k);
  }
  // S+|m-1> = f(s,m)|m>: row k (m), column k+1 (m-1)
  for (int k = 0; k + 1 < d; ++k) {
    ops.Splus(k, k + 1) = ladder_coefficient(s, s.m_at(k));
  }
  ops.Sminus = ops.Splus.adjoint();
  ops.S1 = 0.5 * (ops.Splus + ops.Sminus);
  ops.S2 = (ops.Splus - ops.Sminus) / (2.0 * kI);
  return ops;
}

CMatrix matrix_exponential(const CMatrix& a) {
  if (a.rows() != a.cols()) throw DomainError("matrix_exponential needs a square matrix");
  if (!a.allFinite()) throw DomainError("matrix_exponential input has non-finite entries");
  if (a.size() == 0) return a;

  const CMatrix h = kI * a;
  const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
  if ((h - h.adjoint()).cwiseAbs().maxCoeff() <= 1e-13 * scale) {
    Eigen::SelfAdjointEigenSolver<CMatrix> eig(0.5 * (h + h.adjoint()));
    const CVector phases =
        eig.eigenvalues().unaryExpr([](double w) { return std::exp(-kI * w); });
    return eig.eigenvectors() * phases.asDiagonal() * eig.eigenvectors().adjoint();
  }
  return a.exp();
}

CMatrix unitary_propagator(const CMatrix& hermitian, double t) {
  return matrix_exponential(-kI * t * hermitian);
}

Rotor::Rotor(SpinLabel s) : spin_(s), ops_(build_spin_operators(s)) {
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(ops_.S2);
  s2_vectors_ = eig.eigenvectors();
  s2_values_ = eig.eigenvalues();
}

CVector Rotor::azimuthal_phases(double angle) const {
  CVector out(spin_.dimension());
  for (int k = 0; k < spin_.dimension(); ++k) {
    out(k) = std::exp(-kI * angle * spin_.m_at(k));
  }
  return out;
}

CMatrix Rotor::polar(double theta) const {
  const CVector phases =
      s2_values_.unaryExpr([theta](double w) { return std::exp(-kI * theta * w); });
  return s2_vectors_ * phases.asDiagonal() * s2_vectors_.adjoint();
}

CMatrix Rotor::rotation(const EulerAngles& omega) const {
  return azimuthal_phases(omega.phi).asDiagonal() * polar(omega.theta) *
         azimuthal_phases(omega.psi).asDiagonal();
}

CMatrix rotation_matrix(SpinLabel s, const EulerAngles& omega) {
  if (!omega.is_finite()) throw DomainError("Euler angles must be finite");
  const SpinOperatorSet ops = build_spin_operators(s);
  return matrix_exponential(-kI * omega.phi * ops.S3) *
         matrix_exponential(-kI * omega.theta * ops.S2) *
         matrix_exponential(-kI * omega.psi * ops.S3);
}

}  // namespace spinfv
