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

// Data-parallel scans used by the symmetry module. Every kernel has a serial
// reference in kernels::serial and an OpenMP version in kernels::parallel with
// the same signature; both return bit-identical results (per-point work is
// independent and reductions break ties by lowest index).

#include <cstddef>
#include <span>
#include <vector>

#include "spinfv/spin_core.hpp"

namespace spinfv::kernels {

enum class Execution { Serial, Parallel };

/// Deterministic near-uniform points on the unit sphere (golden-angle spiral).
std::vector<Vec3> fibonacci_sphere(std::size_t count);

struct OrbitProbe {
  double residual = 0.0;  // || (S.n - m) fv ||
  double m = 0.0;         // spectrum value nearest to <fv|S.n|fv>
};

/// Eigen-membership residual of fv for the operator S.n.
OrbitProbe orbit_probe(SpinLabel s, const CVector& fv, const Vec3& n);

struct GridMinimum {
  std::size_t index = 0;
  OrbitProbe probe;
};

/// max over (omega_i, shift_j) of |H(phi, theta, psi + shift_j) - H(omega_i)|.
struct SweepInput {
  const CMatrix* hamiltonian;
  const Rotor* rotor;
  const CVector* fv;
  std::span<const EulerAngles> omegas;
  std::span<const double> psi_shifts;
};

namespace serial {
GridMinimum orbit_scan(SpinLabel s, const CVector& fv, std::span<const Vec3> grid);
double psi_sweep(const SweepInput& in);
}  // namespace serial

namespace parallel {
GridMinimum orbit_scan(SpinLabel s, const CVector& fv, std::span<const Vec3> grid);
double psi_sweep(const SweepInput& in);
}  // namespace parallel

GridMinimum orbit_scan(SpinLabel s, const CVector& fv, std::span<const Vec3> grid,
                       Execution exec = Execution::Parallel);
double psi_sweep(const SweepInput& in, Execution exec = Execution::Parallel);

}  // namespace spinfv::kernels
