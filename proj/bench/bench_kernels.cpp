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

#include <benchmark/benchmark.h>

#include <numbers>
#include <random>
#include <vector>

#include "spinfv/coherent.hpp"
#include "spinfv/kernels.hpp"

using namespace spinfv;

namespace {

CVector random_state(int dim, unsigned seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> n;
  CVector v(dim);
  for (int k = 0; k < dim; ++k) v(k) = cplx(n(gen), n(gen));
  return v.normalized();
}

void orbit_scan(benchmark::State& state, kernels::Execution exec) {
  const SpinLabel s(static_cast<int>(state.range(0)));
  const CVector fv = random_state(s.dimension(), 7);
  const std::vector<Vec3> grid = kernels::fibonacci_sphere(20000);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::orbit_scan(s, fv, grid, exec));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(grid.size()));
}

void psi_sweep(benchmark::State& state, kernels::Execution exec) {
  const SpinLabel s(static_cast<int>(state.range(0)));
  const Rotor rotor(s);
  const CVector fv = random_state(s.dimension(), 11);
  const CMatrix h = HamiltonianSpec(NqrHamiltonian{1.0, Vec3(0.3, 0.2, 0.9)}).matrix(s);
  std::vector<EulerAngles> omegas;
  for (int i = 0; i < 20; ++i) omegas.push_back({0.3 * i, 0.1 + 0.14 * i, -0.2 * i});
  std::vector<double> shifts;
  for (int j = 0; j < 64; ++j) shifts.push_back(4.0 * std::numbers::pi * j / 64.0);
  const kernels::SweepInput in{&h, &rotor, &fv, omegas, shifts};
  for (auto _ : state) benchmark::DoNotOptimize(kernels::psi_sweep(in, exec));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(omegas.size() * shifts.size()));
}

}  // namespace

BENCHMARK_CAPTURE(orbit_scan, serial, kernels::Execution::Serial)->Arg(2)->Arg(8)->Arg(20);
BENCHMARK_CAPTURE(orbit_scan, parallel, kernels::Execution::Parallel)->Arg(2)->Arg(8)->Arg(20);
BENCHMARK_CAPTURE(psi_sweep, serial, kernels::Execution::Serial)->Arg(2)->Arg(8)->Arg(20);
BENCHMARK_CAPTURE(psi_sweep, parallel, kernels::Execution::Parallel)->Arg(2)->Arg(8)->Arg(20);

BENCHMARK_MAIN();
