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

#include "spinfv/cli/golden.hpp"

#include <cmath>
#include <cstdlib>
#include <numeric>

namespace spinfv::cli {

std::string Rational::str() const {
  if (den == 1) return std::to_string(num);
  return std::to_string(num) + "/" + std::to_string(den);
}

FiducialVector GoldenFiducial::build() const {
  const SpinLabel s(twice_spin);
  CVector c(s.dimension());
  for (int k = 0; k < s.dimension(); ++k) c(k) = std::sqrt(weights.at(k).value());
  return FiducialVector::make(s, c);
}

std::string GoldenFiducial::label() const {
  std::string out = "(";
  for (std::size_t k = 0; k < weights.size(); ++k) {
    if (k) out += "; ";
    const Rational& w = weights[k];
    if (w.num == 0) out += "0";
    else if (w.num == w.den) out += "1";
    else out += "sqrt(" + w.str() + ")";
  }
  return out + ")";
}

namespace {

const GoldenFiducial kFvII{2, {{2, 3}, {0, 1}, {1, 3}}};
const GoldenFiducial kFvIV{2, {{1, 3}, {1, 3}, {1, 3}}};
const GoldenFiducial kFvV{2, {{1, 2}, {1, 6}, {1, 3}}};
const GoldenFiducial kFvVI{3, {{2, 3}, {0, 1}, {0, 1}, {1, 3}}};

using HK = HamiltonianKind;

}  // namespace

const std::vector<Table1Column>& table1_golden() {
  static const std::vector<Table1Column> cols = {
      {"i", std::nullopt, {HK::Nmr, HK::Nqr}, std::nullopt, false, true, true, true},
      {"ii", kFvII, {HK::Nmr}, Rational{1, 3}, false, true, true, true},
      {"iii", kFvII, {HK::Nqr}, Rational{1, 3}, false, true, false, false},
      {"iv", kFvIV, {HK::Nmr}, Rational{0, 1}, true, false, false, false},
      {"v", kFvV, {HK::Nmr}, Rational{1, 6}, true, false, false, false},
      {"vi", kFvVI, {HK::Nmr}, Rational{1, 2}, false, true, true, true},
      {"vii", kFvVI, {HK::Nqr}, Rational{1, 2}, false, true, true, true},
  };
  return cols;
}

const std::vector<Table2Column>& table2_golden() {
  static const std::vector<Table2Column> cols = {
      {"i", std::nullopt, "U(1)", "U(1)"},
      {"ii", kFvII, "1", "U(1)"},
      {"iv", kFvIV, "1", "1"},
  };
  return cols;
}

std::optional<Rational> as_rational(double x, long max_den, double tol) {
  for (long den = 1; den <= max_den; ++den) {
    const long num = std::lround(x * static_cast<double>(den));
    if (std::abs(static_cast<double>(num) / static_cast<double>(den) - x) <= tol) {
      const long g = std::gcd(std::labs(num), den);
      return Rational{num / g, den / g};
    }
  }
  return std::nullopt;
}

std::vector<std::pair<SpinLabel, double>> number_state_sample() {
  std::vector<std::pair<SpinLabel, double>> out;
  for (int twice = 1; twice <= 4; ++twice) {
    const SpinLabel s(twice);
    for (int k = 0; k < s.dimension(); ++k) out.emplace_back(s, s.m_at(k));
  }
  return out;
}

}  // namespace spinfv::cli
