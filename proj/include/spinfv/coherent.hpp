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

#include <span>
#include <variant>

#include "spinfv/spin_core.hpp"

namespace spinfv {

/// Normalized amplitudes c_m of the reference state, ordered m = s, ..., -s.
class FiducialVector {
 public:
  /// Normalizes `raw`. Throws DomainError on wrong length or zero norm.
  static FiducialVector make(SpinLabel spin, std::span<const cplx> raw);
  static FiducialVector make(SpinLabel spin, const CVector& raw);
  /// The S3 eigenstate |m>.
  static FiducialVector number_state(SpinLabel spin, double m);

  SpinLabel spin() const noexcept { return spin_; }
  const CVector& amplitudes() const noexcept { return amps_; }
  cplx amplitude(double m) const { return amps_(spin_.index_of(m)); }

 private:
  FiducialVector(SpinLabel spin, CVector amps) : spin_(spin), amps_(std::move(amps)) {}
  SpinLabel spin_;
  CVector amps_;
};

FiducialVector make_fiducial(SpinLabel spin, std::span<const cplx> raw);

struct CoherentState {
  SpinLabel spin;
  CVector amplitudes;
  EulerAngles omega;
};

CoherentState coherent_state(const FiducialVector& fv, const EulerAngles& omega);

/// |Omega, m> = R(Omega)|m>.
CoherentState rotated_number_state(SpinLabel s, double m, const EulerAngles& omega);

struct NmrHamiltonian {
  double mu = 1.0;
  Vec3 B = Vec3::UnitZ();
};

struct NqrHamiltonian {
  double omega_q = 1.0;
  Vec3 B = Vec3::UnitZ();
};

struct CustomHamiltonian {
  CMatrix H;
};

/// -mu B.S, omega_Q (B.S)^2, or an explicit Hermitian matrix. hbar = 1.
class HamiltonianSpec {
 public:
  using Variant = std::variant<NmrHamiltonian, NqrHamiltonian, CustomHamiltonian>;

  HamiltonianSpec(NmrHamiltonian h) : v_(std::move(h)) {}
  HamiltonianSpec(NqrHamiltonian h) : v_(std::move(h)) {}
  HamiltonianSpec(CustomHamiltonian h) : v_(std::move(h)) {}

  const Variant& variant() const noexcept { return v_; }
  const char* type_name() const noexcept;

  /// Realizes the operator for spin s. Throws DomainError for NQR at s = 1/2,
  /// a custom matrix of the wrong size, or a non-Hermitian custom matrix.
  CMatrix matrix(SpinLabel s) const;

  /// Carried for a time-dependent extension; every shipped variant ignores t.
  CMatrix matrix(SpinLabel s, double /*t*/) const { return matrix(s); }

 private:
  Variant v_;
};

/// A0 and the neighbor-pairing functions A1, A2, A4 of a fiducial vector.
///
/// All three psi-dependent pieces derive from one complex number
/// X = sum_m f(s,m) c_m^* c_{m-1}:  A1(psi) = Re(X e^{i psi}),
/// A4(psi) = Im(X e^{i psi}).
class CoefficientSet {
 public:
  explicit CoefficientSet(const FiducialVector& fv);

  double A0() const noexcept { return a0_; }
  double A1_at(double psi) const noexcept;
  double A4_at(double psi) const noexcept;
  cplx A2_at(const EulerAngles& omega) const noexcept;
  cplx neighbor_sum() const noexcept { return x_; }

 private:
  double a0_ = 0.0;
  cplx x_{};
};

CoefficientSet coefficients(const FiducialVector& fv);

struct SpinExpectation {
  double s3 = 0.0;
  cplx splus{};
  cplx sminus{};
};

SpinExpectation expectation_spin_analytic(const FiducialVector& fv, const EulerAngles& omega);
SpinExpectation expectation_spin_brute(const FiducialVector& fv, const EulerAngles& omega);

double hamiltonian_expectation(const FiducialVector& fv, const EulerAngles& omega,
                               const HamiltonianSpec& h, double t = 0.0);

struct AngleGradient {
  double d_phi = 0.0;
  double d_theta = 0.0;
  double d_psi = 0.0;
};

/// Partial derivatives of H(Omega) from commutator expectations.
AngleGradient hamiltonian_gradient(const FiducialVector& fv, const EulerAngles& omega,
                                   const HamiltonianSpec& h, double t = 0.0);

/// Same, for an already realized Hamiltonian matrix and rotor.
AngleGradient hamiltonian_gradient(const Rotor& rotor, const CMatrix& h, const CVector& fv,
                                   const EulerAngles& omega);

/// (dphi/dt, dtheta/dt, dpsi/dt)
struct AngleRates {
  double phi = 0.0;
  double theta = 0.0;
  double psi = 0.0;
};

/// <Omega| i d/dt |Omega> along the given angle rates:
/// A0 (phidot cos theta + psidot) - A1 phidot sin theta + A4 thetadot.
double topological_term(const FiducialVector& fv, const EulerAngles& omega,
                        const AngleRates& rates);

double lagrangian(const FiducialVector& fv, const EulerAngles& omega, const AngleRates& rates,
                  const HamiltonianSpec& h, double t = 0.0);

}  // namespace spinfv
