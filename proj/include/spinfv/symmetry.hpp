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

#include <cstddef>
#include <optional>
#include <string>
#include <variant>

#include "spinfv/coherent.hpp"
#include "spinfv/kernels.hpp"

namespace spinfv {

/// Thresholds for deciding structural zeros. Algebraic identities sit at
/// rounding level; eigen-membership searches are looser; finite-difference
/// checks looser still.
struct SymmetryTolerances {
  double algebraic = 1e-12;
  double coherence = 1e-10;   // |c_m c_{m-k}^*| treated as zero below this
  double invariance = 1e-10;  // psi-sweep deviation of <H> (relative to ||H||)
  double standard = 1e-10;    // | |c_m| - 1 | for an S3 eigenstate
  double orbit = 1e-8;        // || (S.n - m) fv || for orbit membership
  double finite_difference = 1e-6;
};

/// max over m of |c_m c_{m-k}^*|. Requires 1 <= k <= 2s.
double neighbor_coherence(const FiducialVector& fv, int k);

/// Highest spherical-tensor rank present in a Hermitian operator (0 for a
/// multiple of the identity, 1 for -mu B.S, 2 for (B.S)^2, ...). Found as the
/// widest nonzero band of the operator in a generically rotated frame.
int hamiltonian_tensor_rank(const CMatrix& h, SpinLabel s, double tol = 1e-10);

struct SymmetryReport {
  bool a3_present = false;
  bool topological_weak_symmetry = false;
  bool hamiltonian_psi_invariant = false;
  bool total_weak_symmetry = false;
  double A0 = 0.0;

  struct Evidence {
    double nearest_neighbor_coherence = 0.0;
    double max_coherence_within_rank = 0.0;
    double max_psi_deviation = 0.0;  // numeric sweep of <H>
    int hamiltonian_rank = 0;
  } evidence;
};

/// One column of the weak-symmetry table for a (fiducial vector, Hamiltonian)
/// pair. The psi-invariance of <H> is decided twice: by the coherence rule
/// (no coherence of order <= tensor rank of H) and by a 64-point psi' sweep at
/// 20 fixed pseudo-random Omega. Disagreement throws InternalConsistencyError.
SymmetryReport symmetry_report(const FiducialVector& fv, const HamiltonianSpec& h,
                               const SymmetryTolerances& tol = {},
                               kernels::Execution exec = kernels::Execution::Parallel);

/// max |L(Omega', rates') - L(Omega, rates) - A0 psi'_rate| over sampled
/// (Omega, rates, psi') with Omega' = (phi, theta, psi + psi'). Requires total
/// weak symmetry (DomainError otherwise).
double weak_shift_check(const FiducialVector& fv, const HamiltonianSpec& h,
                        double psi_prime_rate);

/// G = R(Omega) S3 R(Omega)^dagger.
CMatrix generator(SpinLabel s, const EulerAngles& omega);

/// S.n with n = (sin theta cos phi, sin theta sin phi, cos theta).
CMatrix hopf_generator(SpinLabel s, const EulerAngles& omega);

/// || (G - A0) |Omega> ||. Independent of Omega.
double gauss_residual(const FiducialVector& fv, const EulerAngles& omega);

/// || e^{-i A0 psi'} sum c_m |Omega,m> - sum c_m e^{-i m psi'} |Omega,m> ||.
double finite_gauss_check(const FiducialVector& fv, const EulerAngles& omega,
                          double psi_prime);

struct StandardVerdict {
  double m = 0.0;
};
struct OrbitVerdict {
  double m = 0.0;
  Vec3 axis = Vec3::UnitZ();
  double residual = 0.0;
};
struct GenericVerdict {
  double residual = 0.0;
};

struct ClassificationResult {
  std::variant<StandardVerdict, OrbitVerdict, GenericVerdict> verdict;
  double A0 = 0.0;
  bool a0_is_half_integer = false;
  bool a0_zero_exceptional = false;

  bool is_standard() const noexcept { return verdict.index() == 0; }
  bool is_orbit() const noexcept { return verdict.index() == 1; }
  bool is_generic() const noexcept { return verdict.index() == 2; }
  /// The eigenvalue m for Standard/Orbit verdicts.
  std::optional<double> m() const noexcept;
  std::string name() const;
};

struct ClassifyOptions {
  std::size_t grid_points = 20000;
  SymmetryTolerances tol{};
  kernels::Execution exec = kernels::Execution::Parallel;
};

/// Standard |m>, a rotated |m>, or neither.
ClassificationResult classify_fiducial(const FiducialVector& fv, const ClassifyOptions& opts = {});

enum class Subgroup { U1AboutS3, Trivial };

const char* subgroup_label(Subgroup g) noexcept;

struct IsotropyReport {
  Subgroup H_subgroup = Subgroup::Trivial;
  Subgroup H0_subgroup = Subgroup::Trivial;
  int order_checked = 1;
};

/// H: exp(-i psi' S3) stabilizes fv up to a phase. H0: it preserves every
/// expectation of operator words in S+, S-, S3 up to length `order`.
IsotropyReport isotropy_subgroups(const FiducialVector& fv, int order,
                                  const SymmetryTolerances& tol = {});

/// Finite-difference check that shifting the fiducial vector by
/// exp(-i psi'(t) S3) shifts <R^dagger d/dt R> by -i A0 psi'_rate.
/// Requires H0 = U(1) at order 1.
double h0_shift_check(const FiducialVector& fv, const EulerAngles& omega, const AngleRates& rates,
                      double psi_prime_rate);

}  // namespace spinfv
