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

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "spinfv/kernels.hpp"

namespace spinfv::kernels {

std::vector<Vec3> fibonacci_sphere(std::size_t count) {
  std::vector<Vec3> pts;
  pts.reserve(count);
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (std::size_t i = 0; i < count; ++i) {
    const double z = 1.0 - (2.0 * static_cast<double>(i) + 1.0) / static_cast<double>(count);
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double a = golden * static_cast<double>(i);
    pts.emplace_back(r * std::cos(a), r * std::sin(a), z);
  }
  return pts;
}

OrbitProbe orbit_probe(SpinLabel s, const CVector& fv, const Vec3& n) {
  const int d = s.dimension();
  // S.n = n3 S3 + (n1 - i n2)/2 S+ + (n1 + i n2)/2 S-, applied without forming the matrix
  const cplx up = 0.5 * cplx(n.x(), -n.y());
  const cplx down = 0.5 * cplx(n.x(), n.y());
  CVector v(d);
  for (int k = 0; k < d; ++k) {
    cplx acc = n.z() * s.m_at(k) * fv(k);
    const double mk = s.m_at(k);
    if (k + 1 < d) acc += up * std::sqrt((s.value() + mk) * (s.value() - mk + 1.0)) * fv(k + 1);
    if (k > 0) {
      const double mk1 = s.m_at(k - 1);
      acc += down * std::sqrt((s.value() + mk1) * (s.value() - mk1 + 1.0)) * fv(k - 1);
    }
    v(k) = acc;
  }
  const double mean = fv.dot(v).real() / fv.squaredNorm();
  // nearest spectrum value s, s-1, ..., -s
  double steps = std::round(s.value() - mean);
  steps = std::clamp(steps, 0.0, static_cast<double>(s.twice_spin()));
  const double m = s.value() - steps;
  return {(v - m * fv).norm(), m};
}

namespace serial {

GridMinimum orbit_scan(SpinLabel s, const CVector& fv, std::span<const Vec3> grid) {
  GridMinimum best;
  best.probe.residual = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const OrbitProbe p = orbit_probe(s, fv, grid[i]);
    if (p.residual < best.probe.residual) {
      best.index = i;
      best.probe = p;
    }
  }
  return best;
}

double psi_sweep(const SweepInput& in) {
  const CMatrix& h = *in.hamiltonian;
  double worst = 0.0;
  for (const EulerAngles& omega : in.omegas) {
    const CVector base = in.rotor->rotation(omega) * *in.fv;
    const double h0 = base.dot(h * base).real();
    for (double shift : in.psi_shifts) {
      const CVector moved =
          in.rotor->rotation({omega.phi, omega.theta, omega.psi + shift}) * *in.fv;
      worst = std::max(worst, std::abs(moved.dot(h * moved).real() - h0));
    }
  }
  return worst;
}

}  // namespace serial
}  // namespace spinfv::kernels
