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

#include <numbers>

#include "spinfv/dynamics.hpp"
#include "spinfv/error.hpp"
#include "spinfv/symmetry.hpp"
#include "support.hpp"

using namespace spinfv;
using namespace spinfv::testing;
using Catch::Approx;

namespace {

constexpr double kPi = std::numbers::pi;
const double kCTilde = 2.0 + std::sqrt(6.0);

// Euler-Lagrange residual sum_j (d_j a_i - d_i a_j) qdot_j + d_i H for the
// first-order Lagrangian L = a(q).qdot - H(q), a_i = topological_term(e_i).
Eigen::Vector3d euler_lagrange_residual(const FiducialVector& fv, const HamiltonianSpec& h,
                                        const EulerAngles& w, const AngleRates& r) {
  const double step = 1e-5;
  auto shifted = [&](int j, double d) {
    EulerAngles q = w;
    (j == 0 ? q.phi : j == 1 ? q.theta : q.psi) += d;
    return q;
  };
  auto a = [&](const EulerAngles& q, int i) {
    const AngleRates e{i == 0 ? 1.0 : 0.0, i == 1 ? 1.0 : 0.0, i == 2 ? 1.0 : 0.0};
    return topological_term(fv, q, e);
  };
  Eigen::Matrix3d da;  // da(i, j) = d a_i / d q_j
  Eigen::Vector3d dh;
  for (int j = 0; j < 3; ++j) {
    for (int i = 0; i < 3; ++i) da(i, j) = (a(shifted(j, step), i) - a(shifted(j, -step), i)) / (2 * step);
    dh(j) = (hamiltonian_expectation(fv, shifted(j, step), h) -
             hamiltonian_expectation(fv, shifted(j, -step), h)) / (2 * step);
  }
  const Eigen::Vector3d qdot(r.phi, r.theta, r.psi);
  return (da - da.transpose()) * qdot + dh;
}

// Variational equations for column v under -mu B S3, written out by hand
// with A0 = 1/6, A1 = c cos(psi)/6, A4 = c sin(psi)/6 and
// H = -(mu B/6)(cos theta - c sin theta cos psi), c = 2 + sqrt 6.
Eigen::Vector3d case_v_residual(double mu_b, const EulerAngles& w, const AngleRates& r) {
  const double st = std::sin(w.theta), ct = std::cos(w.theta);
  const double sp = std::sin(w.psi), cp = std::cos(w.psi);
  const double c = kCTilde;
  Eigen::Vector3d res;
  res(0) = (st + c * cp * ct) * r.phi + c * cp * r.psi + mu_b * (st + c * ct * cp);
  res(1) = (st + c * cp * ct) * r.theta - c * sp * st * r.psi;
  res(2) = c * sp * st * r.phi + c * cp * r.theta + mu_b * c * st * sp;
  return res / 6.0;
}

double case_v_energy(double mu_b, const EulerAngles& w) {
  return -(mu_b / 6.0) * (std::cos(w.theta) - kCTilde * std::sin(w.theta) * std::cos(w.psi));
}

}  // namespace

TEST_CASE("gauge profiles", "[dynamics]") {
  CHECK(GaugeProfile::constant().rate_at(3.0) == 0.0);
  CHECK(GaugeProfile::linear(0.5).rate_at(3.0) == 0.5);
  const GaugeProfile tab = GaugeProfile::tabulated({{0.0, 0.0}, {1.0, 2.0}, {3.0, 1.0}});
  CHECK(tab.rate_at(0.5) == 2.0);
  CHECK(tab.rate_at(2.0) == -0.5);
  CHECK(tab.rate_at(5.0) == 0.0);
  CHECK(tab.name() == "tabulated");
  CHECK(GaugeProfile::linear(0.5).name() == "linear(0.5)");
  CHECK_THROWS_AS(GaugeProfile::tabulated({{0.0, 0.0}}), DomainError);
  CHECK_THROWS_AS(GaugeProfile::tabulated({{0.0, 0.0}, {0.0, 1.0}}), DomainError);
}

TEST_CASE("velocity field for |m> under -mu B S3", "[dynamics]") {
  const double mu_b = 1.4;
  const HamiltonianSpec h = NmrHamiltonian{mu_b, Vec3::UnitZ()};
  const VelocityField f = velocity_field(FiducialVector::number_state(SpinLabel(3), 0.5), {0.3, 1.0, 0.2}, h);
  CHECK(f.rates.phi == Approx(-mu_b).epsilon(1e-12));
  CHECK(std::abs(f.rates.theta) < 1e-12);
  CHECK(std::abs(f.rates.psi) < 1e-12);
  CHECK(f.rank == 2);
  REQUIRE(f.null_direction);
  CHECK(std::abs((*f.null_direction)(2) - 1.0) < 1e-12);
  const AngleRates g = apply_gauge(f, 0.8);
  CHECK(g.psi == 0.8);
  CHECK(g.phi == Approx(-mu_b).epsilon(1e-12));
}

TEST_CASE("velocity field for column v admits the uniform precession", "[dynamics]") {
  const double mu_b = 1.0;
  const HamiltonianSpec h = NmrHamiltonian{mu_b, Vec3::UnitZ()};
  const EulerAngles w{0.0, kPi / 3.0, 0.4};
  const VelocityField f = velocity_field(fv_v(), w, h);
  CHECK(f.rank == 2);
  const AngleRates r = apply_gauge(f, 0.0);
  CHECK(r.phi == Approx(-mu_b).epsilon(1e-10));
  CHECK(std::abs(r.theta) < 1e-10);
  CHECK(std::abs(r.psi) < 1e-15);
  CHECK(case_v_residual(mu_b, w, {-mu_b, 0.0, 0.0}).norm() < 1e-15);
  CHECK(case_v_residual(mu_b, w, r).norm() < 1e-10);
}

TEST_CASE("column v energy in closed form", "[dynamics]") {
  const HamiltonianSpec h = NmrHamiltonian{1.3, Vec3::UnitZ()};
  for (int i = 0; i < 20; ++i) {
    const EulerAngles w = random_angles();
    CHECK(hamiltonian_expectation(fv_v(), w, h) == Approx(case_v_energy(1.3, w)).margin(1e-13));
  }
}

TEST_CASE("zero field gives zero rates", "[dynamics]") {
  const VelocityField f = velocity_field(fv_v(), {0.1, 0.9, 0.3}, NmrHamiltonian{1.0, Vec3::Zero()});
  CHECK(f.rates.phi == 0.0);
  CHECK(f.rates.theta == 0.0);
  CHECK(f.rates.psi == 0.0);
}

TEST_CASE("velocity field is rank deficient and solves the Euler-Lagrange equations", "[dynamics][property]") {
  const std::vector<std::pair<FiducialVector, HamiltonianSpec>> pairs = {
      {fv_ii(), NmrHamiltonian{1.0, Vec3(0.3, -0.5, 0.8)}},
      {fv_v(), NmrHamiltonian{0.8, Vec3::UnitZ()}},
      {fv_vi(), NqrHamiltonian{1.0, Vec3(0.1, 0.2, 0.95)}},
      {FiducialVector::number_state(SpinLabel(4), -1.0), NqrHamiltonian{0.6, Vec3(0.5, 0.1, 0.3)}},
  };
  for (const auto& [fv, h] : pairs) {
    for (int i = 0; i < 10; ++i) {
      const EulerAngles w = random_angles();
      const VelocityField f = velocity_field(fv, w, h);
      CHECK(f.rank <= 2);
      for (double gauge_rate : {0.0, 0.7}) {
        const AngleRates r = apply_gauge(f, gauge_rate);
        CHECK(euler_lagrange_residual(fv, h, w, r).norm() < 1e-6);
      }
    }
  }
}

TEST_CASE("a psi-dependent energy without A3 has no solution", "[dynamics]") {
  // fv of column ii has no nearest-neighbour coherence, so the psi row of the
  // system is zero while the quadrupole energy depends on psi
  const HamiltonianSpec h = NqrHamiltonian{1.0, Vec3(0.6, 0.0, 0.8)};
  const EulerAngles w{0.3, 1.0, 0.5};
  REQUIRE(std::abs(hamiltonian_gradient(fv_ii(), w, h).d_psi) > 1e-3);
  CHECK_THROWS_AS(velocity_field(fv_ii(), w, h), NoSolutionError);
  CHECK_THROWS_AS(semiclassical_evolve(fv_ii(), w, h, 1.0, 0.1, GaugeProfile::constant()), NoSolutionError);
}

TEST_CASE("semiclassical evolution of |m>", "[dynamics]") {
  const double mu_b = 1.0;
  const HamiltonianSpec h = NmrHamiltonian{mu_b, Vec3::UnitZ()};
  const EulerAngles w0{0.0, kPi / 3.0, 0.4};
  const SemiclassicalPath p =
      semiclassical_evolve(FiducialVector::number_state(SpinLabel(2), 1.0), w0, h, 10.0, 0.05, GaugeProfile::constant());
  REQUIRE(p.samples.size() == 201);
  for (const PathSample& s : p.samples) {
    CHECK(std::abs(s.omega.phi + mu_b * s.t) < 1e-6);
    CHECK(std::abs(s.omega.theta - w0.theta) < 1e-6);
    CHECK(s.rank_deficient);
  }
  CHECK(p.samples.back().t == 10.0);
}

TEST_CASE("short evolution stays near the start", "[dynamics]") {
  const EulerAngles w0{0.2, 0.9, 0.1};
  const SemiclassicalPath p = semiclassical_evolve(fv_v(), w0, NmrHamiltonian{}, 1e-6, 1e-6, GaugeProfile::constant());
  const EulerAngles& e = p.samples.back().omega;
  CHECK(std::abs(e.phi - w0.phi) < 1e-5);
  CHECK(std::abs(e.theta - w0.theta) < 1e-9);
  CHECK(std::abs(e.psi - w0.psi) < 1e-9);
}

TEST_CASE("evolution argument validation", "[dynamics]") {
  const HamiltonianSpec h = NmrHamiltonian{};
  CHECK_THROWS_AS(semiclassical_evolve(fv_v(), {}, h, 0.0, 0.1, GaugeProfile::constant()), DomainError);
  CHECK_THROWS_AS(semiclassical_evolve(fv_v(), {}, h, 1.0, -0.1, GaugeProfile::constant()), DomainError);
}

TEST_CASE("pole guard rejects steps landing on a pole", "[dynamics]") {
  // precession about x carries a spin in the y-z plane through both poles
  const HamiltonianSpec h = NmrHamiltonian{1.0, Vec3::UnitX()};
  const FiducialVector fv = FiducialVector::number_state(SpinLabel(2), 1.0);
  IntegratorOptions opts;
  opts.pole_guard = 0.2;
  opts.min_step = 1e-6;
  CHECK_THROWS_AS(semiclassical_evolve(fv, {kPi / 2.0, 0.6, 0.0}, h, 7.0, 0.1, GaugeProfile::constant(), opts),
                  IntegrationError);
}

TEST_CASE("full quantum evolution", "[dynamics]") {
  const double mu_b = 0.9;
  const HamiltonianSpec h = NmrHamiltonian{mu_b, Vec3::UnitZ()};
  const EulerAngles w0{0.1, 1.2, 0.4};
  const SpinLabel s(3);
  const FiducialVector fv = FiducialVector::number_state(s, -0.5);
  CHECK((full_quantum_evolve(fv, w0, h, 0.0) - coherent_state(fv, w0).amplitudes).norm() < 1e-14);
  for (double t : {0.3, 2.0, 9.7}) {
    const CVector expected = rotation_matrix(s, {w0.phi - mu_b * t, w0.theta, w0.psi}) * fv.amplitudes();
    CHECK((full_quantum_evolve(fv, w0, h, t) - expected).norm() < 1e-12);
  }
}

TEST_CASE("full quantum evolution conserves norm and energy", "[dynamics][property]") {
  for (int trial = 0; trial < 20; ++trial) {
    const SpinLabel s(1 + trial % 4);
    const FiducialVector fv = random_fiducial(s);
    const HamiltonianSpec h = CustomHamiltonian{random_hermitian(s.dimension())};
    const EulerAngles w0 = random_angles();
    const CMatrix hm = h.matrix(s);
    const CVector a = full_quantum_evolve(fv, w0, h, 0.0);
    const CVector b = full_quantum_evolve(fv, w0, h, uniform(0.0, 20.0));
    CHECK(std::abs(b.norm() - 1.0) < 1e-12);
    CHECK(std::abs(a.dot(hm * a).real() - b.dot(hm * b).real()) < 1e-12);
  }
}

TEST_CASE("ray distance and fidelity", "[dynamics]") {
  const CVector a = random_vector(4).normalized();
  CHECK(ray_distance(a, std::exp(kI * 1.3) * a) < 1e-15);
  CHECK(fidelity(a, std::exp(kI * 1.3) * a) == Approx(1.0));
  CHECK(ray_distance(CVector::Unit(3, 0), CVector::Unit(3, 2)) == 1.0);
  CHECK_THROWS_AS(ray_distance(a, CVector::Unit(3, 0)), DomainError);
  for (int i = 0; i < 20; ++i) {
    const CVector x = random_vector(5).normalized();
    const CVector y = random_vector(5).normalized();
    const double f = fidelity(x, y);
    CHECK(ray_distance(x, y) == Approx(std::sqrt(1.0 - f * f)).epsilon(1e-12));
  }
}

TEST_CASE("propagator phase ratio", "[dynamics]") {
  const HamiltonianSpec h = NmrHamiltonian{1.0, Vec3::UnitZ()};
  const EulerAngles w0{0.0, kPi / 3.0, 0.4};
  const EulerAngles wf{0.5, 0.9, -0.2};
  const FiducialVector half = FiducialVector::number_state(SpinLabel(3), 1.5);
  const FiducialVector one = FiducialVector::number_state(SpinLabel(2), 1.0);

  const PhaseRatio still = propagator_phase_ratio(half, w0, wf, h, 2.0, GaugeProfile::constant());
  CHECK(std::abs(still.ratio - 1.0) < 1e-9);

  const PhaseRatio round_trip = propagator_phase_ratio(half, w0, wf, h, 2.0, GaugeProfile::linear(2.0 * kPi));
  CHECK(round_trip.delta_psi == Approx(4.0 * kPi).epsilon(1e-9));
  CHECK(std::abs(round_trip.ratio - 1.0) < 1e-9);

  const PhaseRatio half_turn = propagator_phase_ratio(half, w0, wf, h, 2.0, GaugeProfile::linear(kPi));
  CHECK(std::abs(half_turn.ratio + 1.0) < 1e-9);  // exp(i 3/2 2pi) = -1

  const PhaseRatio integer = propagator_phase_ratio(one, w0, wf, h, 2.0, GaugeProfile::linear(kPi));
  CHECK(std::abs(integer.ratio - 1.0) < 1e-9);

  const PhaseRatio generic = propagator_phase_ratio(half, w0, wf, h, 1.5, GaugeProfile::linear(0.37));
  CHECK(std::abs(generic.ratio - std::exp(kI * 1.5 * generic.delta_psi)) < 1e-9);

  CHECK_THROWS_AS(propagator_phase_ratio(fv_ii(), w0, wf, h, 1.0, GaugeProfile::constant()), DomainError);
  // final state antipodal to the evolved direction
  const EulerAngles antipode{kPi, kPi - w0.theta, 0.0};
  CHECK_THROWS_AS(propagator_phase_ratio(one, w0, antipode, h, 0.0, GaugeProfile::constant()),
                  UndefinedRatioError);
}

TEST_CASE("gauge choice is irrelevant for |m>", "[dynamics][property]") {
  const HamiltonianSpec h = NmrHamiltonian{1.0, Vec3(0.2, -0.3, 0.9)};
  const FiducialVector fv = FiducialVector::number_state(SpinLabel(3), 0.5);
  const EulerAngles w0{0.0, 1.0, 0.4};
  const Rotor rotor(fv.spin());
  const SemiclassicalPath a = semiclassical_evolve(fv, w0, h, 5.0, 0.1, GaugeProfile::constant());
  const SemiclassicalPath b = semiclassical_evolve(fv, w0, h, 5.0, 0.1, GaugeProfile::linear(1.3));
  const SemiclassicalPath c =
      semiclassical_evolve(fv, w0, h, 5.0, 0.1, GaugeProfile::tabulated({{0.0, 0.0}, {2.0, 3.0}, {5.0, -1.0}}));
  REQUIRE(a.samples.size() == b.samples.size());
  for (std::size_t i = 0; i < a.samples.size(); ++i) {
    const CVector sa = rotor.rotation(a.samples[i].omega) * fv.amplitudes();
    CHECK(ray_distance(sa, rotor.rotation(b.samples[i].omega) * fv.amplitudes()) < 1e-9);
    CHECK(ray_distance(sa, rotor.rotation(c.samples[i].omega) * fv.amplitudes()) < 1e-9);
  }
}

TEST_CASE("gauge choice matters for column ii", "[dynamics][property]") {
  const HamiltonianSpec h = NmrHamiltonian{};
  const FiducialVector fv = fv_ii();
  const EulerAngles w0{0.0, kPi / 3.0, 0.4};
  const Rotor rotor(fv.spin());
  const SemiclassicalPath a = semiclassical_evolve(fv, w0, h, 10.0, 0.1, GaugeProfile::constant());
  const SemiclassicalPath b = semiclassical_evolve(fv, w0, h, 10.0, 0.1, GaugeProfile::linear(0.5));
  double worst = 0.0;
  for (std::size_t i = 0; i < a.samples.size(); ++i) {
    worst = std::max(worst, ray_distance(rotor.rotation(a.samples[i].omega) * fv.amplitudes(),
                                         rotor.rotation(b.samples[i].omega) * fv.amplitudes()));
  }
  CHECK(worst > 1e-3);
}

TEST_CASE("semiclassical energy is conserved", "[dynamics][property]") {
  struct Run {
    FiducialVector fv;
    HamiltonianSpec h;
    EulerAngles w0;
    GaugeProfile gauge;
  };
  const std::vector<Run> runs = {
      {fv_ii(), NmrHamiltonian{1.0, Vec3(0.3, -0.5, 0.8)}, {0.1, 1.0, 0.4}, GaugeProfile::linear(0.3)},
      {fv_v(), NmrHamiltonian{}, {0.0, kPi / 3.0, 0.4}, GaugeProfile::constant()},
      {fv_vi(), NqrHamiltonian{1.0, Vec3(0.4, 0.1, 0.9)}, {0.2, 1.1, 0.0}, GaugeProfile::linear(-0.4)},
      {FiducialVector::number_state(SpinLabel(4), 2.0), NqrHamiltonian{0.5, Vec3(0.3, 0.4, 0.5)},
       {0.0, 0.8, 0.0}, GaugeProfile::constant()},
  };
  for (const Run& r : runs) {
    const SemiclassicalPath p = semiclassical_evolve(r.fv, r.w0, r.h, 10.0, 0.1, r.gauge);
    const double e0 = hamiltonian_expectation(r.fv, r.w0, r.h);
    double drift = 0.0;
    for (const PathSample& s : p.samples) {
      drift = std::max(drift, std::abs(hamiltonian_expectation(r.fv, s.omega, r.h) - e0));
    }
    CHECK(drift < 1e-7);
  }
}

TEST_CASE("trajectory samples are unit vectors with consistent distances", "[dynamics][property]") {
  const TrajectoryResult r = compare_case(CaseId::II, with_gauge(GaugeProfile::linear(0.5)));
  for (const TrajectorySample& s : r.samples) {
    CHECK(std::abs(s.semiclassical.norm() - 1.0) < 1e-9);
    CHECK(std::abs(s.full_quantum.norm() - 1.0) < 1e-9);
    CHECK(s.fidelity >= 0.0);
    CHECK(s.fidelity <= 1.0);
    CHECK(s.ray_distance == Approx(std::sqrt(1.0 - s.fidelity * s.fidelity)).margin(1e-7));
  }
}

TEST_CASE("case i coincides under any gauge", "[dynamics]") {
  for (const GaugeProfile& g : {GaugeProfile::constant(), GaugeProfile::linear(0.5),
                                GaugeProfile::tabulated({{0.0, 0.0}, {4.0, 5.0}, {10.0, -2.0}})}) {
    const TrajectoryResult r = compare_case(CaseId::I, with_gauge(g));
    CHECK(r.max_ray_distance < 1e-6);
    CHECK(r.verdict == Verdict::Coincide);
  }
}

TEST_CASE("case ii depends on the gauge", "[dynamics]") {
  const TrajectoryResult lin = compare_case(CaseId::II, with_gauge(GaugeProfile::linear(0.5)));
  CHECK(lin.max_ray_distance > 0.01);
  CHECK(lin.verdict == Verdict::Diverge);
  const TrajectoryResult flat = compare_case(CaseId::II, {});
  CHECK(flat.max_ray_distance < 1e-6);
  CHECK(flat.verdict == Verdict::Coincide);
}

TEST_CASE("case v follows the uniform precession", "[dynamics]") {
  const CaseParams p;
  const TrajectoryResult r = compare_case(CaseId::V, p);
  CHECK(r.max_ray_distance < 1e-6);
  CHECK(r.verdict == Verdict::Coincide);
  for (const TrajectorySample& s : r.samples) {
    CHECK(std::abs(s.omega.phi + p.mu_B * s.t) < 1e-6);
    CHECK(std::abs(s.omega.theta - p.theta0) < 1e-6);
    CHECK(std::abs(s.omega.psi - p.psi0) < 1e-6);
  }
  for (std::size_t i = 1; i + 1 < r.samples.size(); ++i) {
    const double dt = r.samples[i + 1].t - r.samples[i - 1].t;
    const AngleRates rates{(r.samples[i + 1].omega.phi - r.samples[i - 1].omega.phi) / dt,
                           (r.samples[i + 1].omega.theta - r.samples[i - 1].omega.theta) / dt,
                           (r.samples[i + 1].omega.psi - r.samples[i - 1].omega.psi) / dt};
    CHECK(case_v_residual(p.mu_B, r.samples[i].omega, rates).cwiseAbs().maxCoeff() < 1e-7);
  }
}

TEST_CASE("case ids", "[dynamics]") {
  CHECK(parse_case_id("ii") == CaseId::II);
  CHECK_FALSE(parse_case_id("iii").has_value());
  CHECK(std::string(case_name(CaseId::V)) == "v");
  CHECK(classify_fiducial(case_fiducial(CaseId::I)).is_standard());
  CHECK((case_fiducial(CaseId::II).amplitudes() - fv_ii().amplitudes()).norm() < 1e-15);
  CHECK((case_fiducial(CaseId::V).amplitudes() - fv_v().amplitudes()).norm() < 1e-15);
}
