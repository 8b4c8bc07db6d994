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

#include "spinfv/coherent.hpp"

#include <cmath>
#include <string>

#include "spinfv/error.hpp"

namespace spinfv {

FiducialVector FiducialVector::make(SpinLabel spin, const CVector& raw) {
  if (raw.size() != spin.dimension()) {
    throw DomainError("fiducial vector for spin " + std::to_string(spin.value()) + " needs " +
                      std::to_string(spin.dimension()) + " amplitudes, got " +
                      std::to_string(raw.size()));
  }
  if (!raw.allFinite()) throw DomainError("fiducial amplitudes must be finite");
  const double norm = raw.norm();
  if (norm <= 0.0) throw DomainError("fiducial vector has zero norm");
  return FiducialVector(spin, raw / norm);
}

FiducialVector FiducialVector::make(SpinLabel spin, std::span<const cplx> raw) {
  CVector v(static_cast<Eigen::Index>(raw.size()));
  for (std::size_t i = 0; i < raw.size(); ++i) v(static_cast<Eigen::Index>(i)) = raw[i];
  return make(spin, v);
}

FiducialVector FiducialVector::number_state(SpinLabel spin, double m) {
  CVector v = CVector::Zero(spin.dimension());
  v(spin.index_of(m)) = 1.0;
  return FiducialVector(spin, std::move(v));
}

FiducialVector make_fiducial(SpinLabel spin, std::span<const cplx> raw) {
  return FiducialVector::make(spin, raw);
}

CoherentState coherent_state(const FiducialVector& fv, const EulerAngles& omega) {
  const Rotor rotor(fv.spin());
  return {fv.spin(), rotor.rotation(omega) * fv.amplitudes(), omega};
}

CoherentState rotated_number_state(SpinLabel s, double m, const EulerAngles& omega) {
  const int k = s.index_of(m);
  const Rotor rotor(s);
  return {s, rotor.rotation(omega).col(k), omega};
}

const char* HamiltonianSpec::type_name() const noexcept {
  switch (v_.index()) {
    case 0: return "nmr";
    case 1: return "nqr";
    default: return "custom";
  }
}

CMatrix HamiltonianSpec::matrix(SpinLabel s) const {
  struct Visitor {
    SpinLabel s;
    CMatrix operator()(const NmrHamiltonian& h) const {
      const SpinOperatorSet ops = build_spin_operators(s);
      return -h.mu * ops.along(h.B);
    }
    CMatrix operator()(const NqrHamiltonian& h) const {
      if (s.twice_spin() < 2) {
        throw DomainError("NQR Hamiltonian needs s >= 1");
      }
      const SpinOperatorSet ops = build_spin_operators(s);
      const CMatrix bs = ops.along(h.B);
      return h.omega_q * bs * bs;
    }
    CMatrix operator()(const CustomHamiltonian& h) const {
      if (h.H.rows() != s.dimension() || h.H.cols() != s.dimension()) {
        throw DomainError("custom Hamiltonian has the wrong dimension for this spin");
      }
      if (!h.H.allFinite()) throw DomainError("custom Hamiltonian has non-finite entries");
      const double scale = std::max(1.0, h.H.cwiseAbs().maxCoeff());
      if ((h.H - h.H.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
        throw DomainError("custom Hamiltonian is not Hermitian");
      }
      return 0.5 * (h.H + h.H.adjoint());
    }
  };
  return std::visit(Visitor{s}, v_);
}

CoefficientSet::CoefficientSet(const FiducialVector& fv) {
  const SpinLabel s = fv.spin();
  const CVector& c = fv.amplitudes();
  for (int k = 0; k < s.dimension(); ++k) {
    a0_ += s.m_at(k) * std::norm(c(k));
  }
  // c(k) is c_m, c(k+1) is c_{m-1}
  for (int k = 0; k + 1 < s.dimension(); ++k) {
    x_ += ladder_coefficient(s, s.m_at(k)) * std::conj(c(k)) * c(k + 1);
  }
}

double CoefficientSet::A1_at(double psi) const noexcept {
  return (x_ * std::exp(kI * psi)).real();
}

double CoefficientSet::A4_at(double psi) const noexcept {
  return (x_ * std::exp(kI * psi)).imag();
}

cplx CoefficientSet::A2_at(const EulerAngles& omega) const noexcept {
  const double ct = std::cos(omega.theta);
  return 0.5 * std::exp(kI * omega.phi) *
         ((1.0 + ct) * std::exp(kI * omega.psi) * x_ -
          (1.0 - ct) * std::exp(-kI * omega.psi) * std::conj(x_));
}

CoefficientSet coefficients(const FiducialVector& fv) { return CoefficientSet(fv); }

SpinExpectation expectation_spin_analytic(const FiducialVector& fv, const EulerAngles& omega) {
  const CoefficientSet a(fv);
  const double st = std::sin(omega.theta);
  const double ct = std::cos(omega.theta);
  SpinExpectation e;
  e.s3 = a.A0() * ct - a.A1_at(omega.psi) * st;
  e.splus = a.A0() * st * std::exp(kI * omega.phi) + a.A2_at(omega);
  e.sminus = std::conj(e.splus);
  return e;
}

SpinExpectation expectation_spin_brute(const FiducialVector& fv, const EulerAngles& omega) {
  const SpinOperatorSet ops = build_spin_operators(fv.spin());
  const CVector state = rotation_matrix(fv.spin(), omega) * fv.amplitudes();
  SpinExpectation e;
  e.s3 = state.dot(ops.S3 * state).real();
  e.splus = state.dot(ops.Splus * state);
  e.sminus = state.dot(ops.Sminus * state);
  return e;
}

double hamiltonian_expectation(const FiducialVector& fv, const EulerAngles& omega,
                               const HamiltonianSpec& h, double t) {
  const CMatrix hm = h.matrix(fv.spin(), t);
  const CVector state = coherent_state(fv, omega).amplitudes;
  return state.dot(hm * state).real();
}

AngleGradient hamiltonian_gradient(const Rotor& rotor, const CMatrix& h, const CVector& fv,
                                   const EulerAngles& omega) {
  const SpinOperatorSet& ops = rotor.operators();
  const CMatrix r = rotor.rotation(omega);
  const CVector state = r * fv;

  // d/dx <H> = i <[K, H]> where d/dx |Omega> = -i K |Omega>
  auto commutator_expectation = [&](const CMatrix& k) {
    const CMatrix comm = k * h - h * k;
    return (kI * state.dot(comm * state)).real();
  };
  const CVector az = rotor.azimuthal_phases(omega.phi);
  const CMatrix s2_rotated = az.asDiagonal() * ops.S2 * az.conjugate().asDiagonal();
  const CMatrix g = r * ops.S3 * r.adjoint();  // the psi generator R S3 R^dagger

  AngleGradient grad;
  grad.d_phi = commutator_expectation(ops.S3);
  grad.d_theta = commutator_expectation(s2_rotated);
  grad.d_psi = commutator_expectation(g);
  return grad;
}

AngleGradient hamiltonian_gradient(const FiducialVector& fv, const EulerAngles& omega,
                                   const HamiltonianSpec& h, double t) {
  const Rotor rotor(fv.spin());
  return hamiltonian_gradient(rotor, h.matrix(fv.spin(), t), fv.amplitudes(), omega);
}

double topological_term(const FiducialVector& fv, const EulerAngles& omega,
                        const AngleRates& rates) {
  const CoefficientSet a(fv);
  const double a3 = -a.A1_at(omega.psi) * rates.phi * std::sin(omega.theta) +
                    a.A4_at(omega.psi) * rates.theta;
  return a.A0() * (rates.phi * std::cos(omega.theta) + rates.psi) + a3;
}

double lagrangian(const FiducialVector& fv, const EulerAngles& omega, const AngleRates& rates,
                  const HamiltonianSpec& h, double t) {
  return topological_term(fv, omega, rates) - hamiltonian_expectation(fv, omega, h, t);
}

}  // namespace spinfv
