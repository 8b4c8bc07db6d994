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

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "spinfv/coherent.hpp"

namespace spinfv::cli {

struct Rational {
  long num = 0;
  long den = 1;
  double value() const noexcept { return static_cast<double>(num) / static_cast<double>(den); }
  std::string str() const;
};

inline constexpr double kGoldenTolerance = 1e-12;

enum class HamiltonianKind { Nmr, Nqr };

/// A fiducial vector with real amplitudes sqrt(p_k), p given top-down (m = s ... -s).
struct GoldenFiducial {
  int twice_spin = 2;
  std::vector<Rational> weights;
  FiducialVector build() const;
  std::string label() const;
};

struct Table1Column {
  const char* id;
  std::optional<GoldenFiducial> fv;  // empty: every |m> at every spin
  std::vector<HamiltonianKind> hamiltonians;
  std::optional<Rational> A0;  // empty: A0 = m
  bool a3_present;
  bool topological;
  bool hamiltonian_invariant;
  bool total;
};

struct Table2Column {
  const char* id;
  std::optional<GoldenFiducial> fv;  // empty: every |m>
  const char* H;
  const char* H0;
};

const std::vector<Table1Column>& table1_golden();
const std::vector<Table2Column>& table2_golden();

/// Best rational with denominator <= max_den within tol, if any.
std::optional<Rational> as_rational(double x, long max_den = 64, double tol = kGoldenTolerance);

/// The (spin, m) pairs standing in for "arbitrary spin" in column (i).
std::vector<std::pair<SpinLabel, double>> number_state_sample();

}  // namespace spinfv::cli
