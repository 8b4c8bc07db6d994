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

#include <omp.h>

#include <cmath>
#include <limits>

#include "spinfv/kernels.hpp"

namespace spinfv::kernels::parallel {

GridMinimum orbit_scan(SpinLabel s, const CVector& fv, std::span<const Vec3> grid) {
  const auto n = static_cast<std::ptrdiff_t>(grid.size());
  GridMinimum best;
  best.probe.residual = std::numeric_limits<double>::infinity();

#pragma omp parallel
  {
    GridMinimum local;
    local.probe.residual = std::numeric_limits<double>::infinity();
#pragma omp for schedule(static) nowait
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      const OrbitProbe p = orbit_probe(s, fv, grid[static_cast<std::size_t>(i)]);
      if (p.residual < local.probe.residual) {
        local.index = static_cast<std::size_t>(i);
        local.probe = p;
      }
    }
#pragma omp critical(spinfv_orbit_scan)
    {
      // lowest index wins ties so the answer matches the serial scan
      if (local.probe.residual < best.probe.residual ||
          (local.probe.residual == best.probe.residual && local.index < best.index)) {
        best = local;
      }
    }
  }
  return best;
}

double psi_sweep(const SweepInput& in) {
  const CMatrix& h = *in.hamiltonian;
  const auto n_omega = static_cast<std::ptrdiff_t>(in.omegas.size());
  const auto n_shift = static_cast<std::ptrdiff_t>(in.psi_shifts.size());
  if (n_omega == 0 || n_shift == 0) return 0.0;

  std::vector<double> h0(in.omegas.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n_omega; ++i) {
    const CVector base = in.rotor->rotation(in.omegas[static_cast<std::size_t>(i)]) * *in.fv;
    h0[static_cast<std::size_t>(i)] = base.dot(h * base).real();
  }

  double worst = 0.0;
#pragma omp parallel for collapse(2) schedule(static) reduction(max : worst)
  for (std::ptrdiff_t i = 0; i < n_omega; ++i) {
    for (std::ptrdiff_t j = 0; j < n_shift; ++j) {
      const EulerAngles& omega = in.omegas[static_cast<std::size_t>(i)];
      const double shift = in.psi_shifts[static_cast<std::size_t>(j)];
      const CVector moved =
          in.rotor->rotation({omega.phi, omega.theta, omega.psi + shift}) * *in.fv;
      worst = std::max(worst, std::abs(moved.dot(h * moved).real() -
                                       h0[static_cast<std::size_t>(i)]));
    }
  }
  return worst;
}

}  // namespace spinfv::kernels::parallel
