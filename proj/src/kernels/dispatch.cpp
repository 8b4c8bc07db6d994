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

#include "spinfv/kernels.hpp"

namespace spinfv::kernels {

GridMinimum orbit_scan(SpinLabel s, const CVector& fv, std::span<const Vec3> grid,
                       Execution exec) {
  return exec == Execution::Serial ? serial::orbit_scan(s, fv, grid)
                                   : parallel::orbit_scan(s, fv, grid);
}

double psi_sweep(const SweepInput& in, Execution exec) {
  return exec == Execution::Serial ? serial::psi_sweep(in) : parallel::psi_sweep(in);
}

}  // namespace spinfv::kernels
