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

#include <catch2/catch_amalgamated.hpp>

#include "spinfv/error.hpp"
#include "spinfv/spin_core.hpp"
#include "support.hpp"

using namespace spinfv;
using namespace spinfv::testing;
using Catch::Approx;

TEST_CASE("spin label maps index to m top-down", "[spin-core]") {
  const SpinLabel s(3);
  CHECK(s.dimension() == 4);
  CHECK(s.m_at(0) == 1.5);
  CHECK(s.m_at(3) == -1.5);
  CHECK(s.index_of(0.5) == 1);
  CHECK_FALSE(s.contains(1.0));
  CHECK_THROWS_AS(s.index_of(2.5), DomainError);
  CHECK(SpinLabel::from_value(1.5) == s);
  CHECK_THROWS_AS(SpinLabel(-1), DomainError);
}

TEST_CASE("spin one-half S3 is diag(1/2, -1/2)", "[spin-core]") {
  const SpinOperatorSet ops = build_spin_operators(SpinLabel(1));
  CHECK(ops.S3(0, 0).real() == 0.5);
  CHECK(ops.S3(1, 1).real() == -0.5);
  CHECK(std::abs(ops.S3(0, 1)) == 0.0);
}

TEST_CASE("operator algebra holds for s up to 4", "[spin-core]") {
  for (int twice = 0; twice <= 8; ++twice) {
    const SpinLabel s(twice);
    const SpinOperatorSet o = build_spin_operators(s);
    CAPTURE(twice);
    CHECK(max_abs(o.S1 * o.S2 - o.S2 * o.S1 - kI * o.S3) < 1e-12);
    CHECK(max_abs(o.S2 * o.S3 - o.S3 * o.S2 - kI * o.S1) < 1e-12);
    CHECK(max_abs(o.S3 * o.S1 - o.S1 * o.S3 - kI * o.S2) < 1e-12);
    CHECK(max_abs(o.S1 - o.S1.adjoint()) == 0.0);
    CHECK(max_abs(o.S2 - o.S2.adjoint()) == 0.0);
    CHECK(max_abs(o.Splus - (o.S1 + kI * o.S2)) < 1e-15);
    CHECK(max_abs(o.Sminus - o.Splus.adjoint()) == 0.0);
    for (int k = 0; k < s.dimension(); ++k) CHECK(o.S3(k, k).real() == s.m_at(k));
    // Casimir s(s+1)
    const CMatrix c = o.S1 * o.S1 + o.S2 * o.S2 + o.S3 * o.S3;
    const double ss = s.value() * (s.value() + 1.0);
    CHECK(max_abs(c - ss * CMatrix::Identity(s.dimension(), s.dimension())) < 1e-12);
  }
}

TEST_CASE("S+ couples m-1 to m with the ladder coefficient", "[spin-core]") {
  const SpinOperatorSet o = build_spin_operators(SpinLabel(2));
  CHECK(o.Splus(0, 1).real() == Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(o.Splus(1, 2).real() == Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(std::abs(o.Splus(1, 0)) == 0.0);
}

TEST_CASE("ladder coefficient values", "[spin-core]") {
  CHECK(ladder_coefficient(SpinLabel(1), 0.5) == Approx(1.0));
  CHECK(ladder_coefficient(SpinLabel(2), 1.0) == Approx(std::sqrt(2.0)));
  for (int twice = 1; twice <= 8; ++twice) {
    const SpinLabel s(twice);
    CHECK(ladder_coefficient(s, -s.value() + 1.0) == Approx(std::sqrt(2.0 * s.value())));
  }
  CHECK_THROWS_AS(ladder_coefficient(SpinLabel(2), -1.0), DomainError);
  CHECK_THROWS_AS(ladder_coefficient(SpinLabel(2), 2.0), DomainError);
  CHECK_THROWS_AS(ladder_coefficient(SpinLabel(2), 0.5), DomainError);
}

TEST_CASE("matrix exponential basics", "[spin-core]") {
  CHECK(max_abs(matrix_exponential(CMatrix::Zero(3, 3)) - CMatrix::Identity(3, 3)) < 1e-15);

  const SpinOperatorSet o = build_spin_operators(SpinLabel(1));
  const double theta = 0.83;
  const CMatrix r = matrix_exponential(-kI * theta * o.S2);
  CMatrix expected(2, 2);
  expected << std::cos(theta / 2), -std::sin(theta / 2), std::sin(theta / 2), std::cos(theta / 2);
  CHECK(max_abs(r - expected) < 1e-14);

  for (int trial = 0; trial < 20; ++trial) {
    const CMatrix a = kI * random_hermitian(5);
    const CMatrix e = matrix_exponential(a);
    CHECK(max_abs(e * matrix_exponential(-a) - CMatrix::Identity(5, 5)) < 1e-12);
    CHECK(max_abs(e * e.adjoint() - CMatrix::Identity(5, 5)) < 1e-12);
  }

  CMatrix bad = CMatrix::Zero(2, 2);
  bad(0, 1) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(matrix_exponential(bad), DomainError);
}

TEST_CASE("matrix exponential of a non-skew-Hermitian matrix", "[spin-core]") {
  CMatrix n = CMatrix::Zero(2, 2);
  n(0, 1) = 1.0;  // nilpotent: exp = I + n
  const CMatrix e = matrix_exponential(n);
  CHECK(max_abs(e - (CMatrix::Identity(2, 2) + n)) < 1e-14);
}

TEST_CASE("rotation at zero angles is the identity", "[spin-core]") {
  for (int twice = 0; twice <= 4; ++twice) {
    const SpinLabel s(twice);
    CHECK(max_abs(rotation_matrix(s, {}) - CMatrix::Identity(s.dimension(), s.dimension())) < 1e-15);
  }
}

TEST_CASE("rotations are unitary with unimodular determinant", "[spin-core][property]") {
  for (int twice = 1; twice <= 8; ++twice) {
    const SpinLabel s(twice);
    const Rotor rotor(s);
    const int d = s.dimension();
    for (int trial = 0; trial < 100; ++trial) {
      const EulerAngles w = random_angles();
      const CMatrix r = rotation_matrix(s, w);
      CHECK(max_abs(r * r.adjoint() - CMatrix::Identity(d, d)) < 1e-12);
      CHECK(std::abs(std::abs(r.determinant()) - 1.0) < 1e-12);
      CHECK(max_abs(rotor.rotation(w) - r) < 1e-12);
    }
  }
}

TEST_CASE("spin one-half rotation about z is a pure phase", "[spin-core]") {
  const double phi = 0.7;
  const double psi = -1.9;
  const CMatrix r = rotation_matrix(SpinLabel(1), {phi, 0.0, psi});
  CHECK(std::abs(r(0, 0) - std::exp(-kI * (phi + psi) / 2.0)) < 1e-15);
  CHECK(std::abs(r(1, 1) - std::exp(kI * (phi + psi) / 2.0)) < 1e-15);
  CHECK(std::abs(r(0, 1)) < 1e-15);
}

TEST_CASE("right multiplication by exp(-i psi' S3) shifts psi", "[spin-core][property]") {
  for (int twice = 1; twice <= 4; ++twice) {
    const SpinLabel s(twice);
    const SpinOperatorSet o = build_spin_operators(s);
    for (int trial = 0; trial < 50; ++trial) {
      const EulerAngles w = random_angles();
      const double shift = uniform(-10.0, 10.0);
      const CMatrix lhs = rotation_matrix(s, w) * matrix_exponential(-kI * shift * o.S3);
      const CMatrix rhs = rotation_matrix(s, {w.phi, w.theta, w.psi + shift});
      CHECK(max_abs(lhs - rhs) < 1e-12);
    }
  }
}

TEST_CASE("non-finite angles are rejected", "[spin-core]") {
  const EulerAngles bad{0.0, std::numeric_limits<double>::infinity(), 0.0};
  CHECK_FALSE(bad.is_finite());
  CHECK_THROWS_AS(rotation_matrix(SpinLabel(2), bad), DomainError);
}

TEST_CASE("unitary propagator", "[spin-core]") {
  const CMatrix h = random_hermitian(4);
  const CMatrix u = unitary_propagator(h, 0.37);
  CHECK(max_abs(u * u.adjoint() - CMatrix::Identity(4, 4)) < 1e-12);
  CHECK(max_abs(u - matrix_exponential(-kI * 0.37 * h)) < 1e-12);
}
