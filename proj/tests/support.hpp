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

#include <cmath>
#include <numbers>
#include <random>

#include "spinfv/dynamics.hpp"

namespace spinfv::testing {

inline std::mt19937_64& rng() {
  static std::mt19937_64 gen(20260915);
  return gen;
}

inline double uniform(double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng());
}

inline EulerAngles random_angles() {
  return {uniform(-2.0 * std::numbers::pi, 2.0 * std::numbers::pi), uniform(0.05, std::numbers::pi - 0.05),
          uniform(-2.0 * std::numbers::pi, 2.0 * std::numbers::pi)};
}

inline CVector random_vector(int dim) {
  std::normal_distribution<double> n(0.0, 1.0);
  CVector v(dim);
  for (int k = 0; k < dim; ++k) v(k) = cplx(n(rng()), n(rng()));
  return v;
}

inline FiducialVector random_fiducial(SpinLabel s) {
  return FiducialVector::make(s, random_vector(s.dimension()));
}

inline CMatrix random_hermitian(int dim) {
  CMatrix a(dim, dim);
  for (int c = 0; c < dim; ++c) a.col(c) = random_vector(dim);
  return 0.5 * (a + a.adjoint());
}

inline double max_abs(const CMatrix& m) { return m.cwiseAbs().maxCoeff(); }

inline FiducialVector real_fiducial(SpinLabel s, std::initializer_list<double> weights) {
  CVector c(s.dimension());
  int k = 0;
  for (double w : weights) c(k++) = std::sqrt(w);
  return FiducialVector::make(s, c);
}

// Fiducial vectors from the symmetry table, built independently of the CLI goldens.
inline FiducialVector fv_ii() { return real_fiducial(SpinLabel(2), {2.0 / 3.0, 0.0, 1.0 / 3.0}); }
inline FiducialVector fv_iv() { return real_fiducial(SpinLabel(2), {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0}); }
inline FiducialVector fv_v() { return real_fiducial(SpinLabel(2), {0.5, 1.0 / 6.0, 1.0 / 3.0}); }
inline FiducialVector fv_vi() {
  return real_fiducial(SpinLabel(3), {2.0 / 3.0, 0.0, 0.0, 1.0 / 3.0});
}

inline CaseParams with_gauge(GaugeProfile g) {
  CaseParams p;
  p.gauge = std::move(g);
  return p;
}

}  // namespace spinfv::testing
