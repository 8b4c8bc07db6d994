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

#include "spinfv/symmetry.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>

#include "spinfv/error.hpp"

namespace spinfv {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr int kSweepShifts = 64;
constexpr int kSweepOrientations = 20;
constexpr std::uint64_t kSweepSeed = 0x5eed'0f'a11ULL;

std::vector<double> psi_shift_grid() {
  // [0, 4 pi) covers the double cover for half-integer spin
  std::vector<double> g(kSweepShifts);
  for (int j = 0; j < kSweepShifts; ++j) g[j] = 2.0 * kTwoPi * j / kSweepShifts;
  return g;
}

std::vector<EulerAngles> sample_orientations(int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(0.0, kTwoPi);
  std::uniform_real_distribution<double> polar(0.0, std::numbers::pi);
  std::vector<EulerAngles> out(count);
  for (auto& o : out) o = {angle(rng), polar(rng), angle(rng)};
  return out;
}

double max_coherence_up_to(const FiducialVector& fv, int order) {
  double worst = 0.0;
  for (int k = 1; k <= std::min(order, fv.spin().twice_spin()); ++k) {
    worst = std::max(worst, neighbor_coherence(fv, k));
  }
  return worst;
}

bool is_number_state(const FiducialVector& fv, double tol, double* m_out) {
  const CVector& c = fv.amplitudes();
  for (int k = 0; k < c.size(); ++k) {
    if (std::abs(std::abs(c(k)) - 1.0) < tol) {
      if (m_out) *m_out = fv.spin().m_at(k);
      return true;
    }
  }
  return false;
}

// pattern search on the sphere in the tangent plane of the current point
kernels::OrbitProbe refine_axis(SpinLabel s, const CVector& fv, Vec3& n, double initial_step) {
  kernels::OrbitProbe best = kernels::orbit_probe(s, fv, n);
  double step = initial_step;
  for (int iter = 0; iter < 20000 && step > 1e-14 && best.residual > 1e-15; ++iter) {
    const Vec3 helper = std::abs(n.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
    const Vec3 e1 = n.cross(helper).normalized();
    const Vec3 e2 = n.cross(e1);
    bool moved = false;
    static constexpr double dirs[8][2] = {{1, 0},  {-1, 0}, {0, 1},  {0, -1},
                                          {1, 1},  {1, -1}, {-1, 1}, {-1, -1}};
    for (const auto& d : dirs) {
      const Vec3 trial = (n + step * (d[0] * e1 + d[1] * e2)).normalized();
      const kernels::OrbitProbe p = kernels::orbit_probe(s, fv, trial);
      if (p.residual < best.residual) {
        best = p;
        n = trial;
        moved = true;
        break;
      }
    }
    if (!moved) step *= 0.5;
  }
  return best;
}

Vec3 expectation_vector(const FiducialVector& fv) {
  const SpinOperatorSet ops = build_spin_operators(fv.spin());
  const CVector& c = fv.amplitudes();
  return {c.dot(ops.S1 * c).real(), c.dot(ops.S2 * c).real(), c.dot(ops.S3 * c).real()};
}

}  // namespace

double neighbor_coherence(const FiducialVector& fv, int k) {
  const int d = fv.spin().dimension();
  if (k < 1 || k > fv.spin().twice_spin()) {
    throw DomainError("coherence order must satisfy 1 <= k <= 2s");
  }
  const CVector& c = fv.amplitudes();
  double worst = 0.0;
  for (int i = 0; i + k < d; ++i) worst = std::max(worst, std::abs(c(i) * std::conj(c(i + k))));
  return worst;
}

int hamiltonian_tensor_rank(const CMatrix& h, SpinLabel s, double tol) {
  // irrational-looking angles: any fixed generic orientation works
  const Rotor rotor(s);
  const CMatrix r = rotor.rotation({0.7137, 1.1291, 2.3417});
  const CMatrix hr = r.adjoint() * h * r;
  const double scale = std::max(1.0, h.norm());
  const int d = s.dimension();
  for (int band = d - 1; band >= 1; --band) {
    double mag = 0.0;
    for (int i = 0; i + band < d; ++i) mag = std::max(mag, std::abs(hr(i, i + band)));
    if (mag > tol * scale) return band;
  }
  return 0;
}

SymmetryReport symmetry_report(const FiducialVector& fv, const HamiltonianSpec& h,
                               const SymmetryTolerances& tol, kernels::Execution exec) {
  const SpinLabel s = fv.spin();
  const CMatrix hm = h.matrix(s);

  SymmetryReport rep;
  rep.A0 = CoefficientSet(fv).A0();
  rep.evidence.nearest_neighbor_coherence = s.twice_spin() >= 1 ? neighbor_coherence(fv, 1) : 0.0;
  rep.a3_present = rep.evidence.nearest_neighbor_coherence > tol.coherence;
  rep.topological_weak_symmetry = !rep.a3_present;

  rep.evidence.hamiltonian_rank = hamiltonian_tensor_rank(hm, s, tol.coherence);
  rep.evidence.max_coherence_within_rank = max_coherence_up_to(fv, rep.evidence.hamiltonian_rank);
  const bool rule_invariant = rep.evidence.max_coherence_within_rank <= tol.coherence;

  const Rotor rotor(s);
  const std::vector<EulerAngles> omegas = sample_orientations(kSweepOrientations, kSweepSeed);
  const std::vector<double> shifts = psi_shift_grid();
  const kernels::SweepInput in{&hm, &rotor, &fv.amplitudes(), omegas, shifts};
  rep.evidence.max_psi_deviation = kernels::psi_sweep(in, exec);
  const bool sweep_invariant =
      rep.evidence.max_psi_deviation < tol.invariance * std::max(1.0, hm.norm());

  if (rule_invariant != sweep_invariant) {
    std::ostringstream msg;
    msg << "psi-invariance of <H> disagrees between the coherence rule (" << rule_invariant
        << ", max coherence " << rep.evidence.max_coherence_within_rank << " up to order "
        << rep.evidence.hamiltonian_rank << ") and the numeric sweep (" << sweep_invariant
        << ", max deviation " << rep.evidence.max_psi_deviation << ")";
    throw InternalConsistencyError(msg.str());
  }
  rep.hamiltonian_psi_invariant = rule_invariant;
  rep.total_weak_symmetry = rep.topological_weak_symmetry && rep.hamiltonian_psi_invariant;
  return rep;
}

double weak_shift_check(const FiducialVector& fv, const HamiltonianSpec& h,
                        double psi_prime_rate) {
  const SymmetryReport rep = symmetry_report(fv, h);
  if (!rep.total_weak_symmetry) {
    throw DomainError("weak_shift_check requires a Lagrangian with weak psi-symmetry");
  }
  std::mt19937_64 rng(0xa0'5417ULL);
  std::uniform_real_distribution<double> angle(0.0, kTwoPi);
  std::uniform_real_distribution<double> rate(-2.0, 2.0);
  double worst = 0.0;
  for (int i = 0; i < 32; ++i) {
    const EulerAngles omega{angle(rng), 0.5 * angle(rng), angle(rng)};
    const AngleRates rates{rate(rng), rate(rng), rate(rng)};
    const double shift = 2.0 * angle(rng);
    const EulerAngles moved{omega.phi, omega.theta, omega.psi + shift};
    const AngleRates moved_rates{rates.phi, rates.theta, rates.psi + psi_prime_rate};
    const double lhs = lagrangian(fv, moved, moved_rates, h);
    const double rhs = lagrangian(fv, omega, rates, h) + rep.A0 * psi_prime_rate;
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return worst;
}

CMatrix generator(SpinLabel s, const EulerAngles& omega) {
  const Rotor rotor(s);
  const CMatrix r = rotor.rotation(omega);
  return r * rotor.operators().S3 * r.adjoint();
}

CMatrix hopf_generator(SpinLabel s, const EulerAngles& omega) {
  const double st = std::sin(omega.theta);
  const Vec3 n{st * std::cos(omega.phi), st * std::sin(omega.phi), std::cos(omega.theta)};
  return build_spin_operators(s).along(n);
}

double gauss_residual(const FiducialVector& fv, const EulerAngles& omega) {
  const CVector state = coherent_state(fv, omega).amplitudes;
  const double a0 = CoefficientSet(fv).A0();
  return (generator(fv.spin(), omega) * state - a0 * state).norm();
}

double finite_gauss_check(const FiducialVector& fv, const EulerAngles& omega, double psi_prime) {
  const SpinLabel s = fv.spin();
  const Rotor rotor(s);
  const CMatrix r = rotor.rotation(omega);  // columns are |Omega, m>
  const double a0 = CoefficientSet(fv).A0();
  const CVector& c = fv.amplitudes();
  CVector lhs = CVector::Zero(s.dimension());
  CVector rhs = CVector::Zero(s.dimension());
  for (int k = 0; k < s.dimension(); ++k) {
    lhs += std::exp(-kI * a0 * psi_prime) * c(k) * r.col(k);
    rhs += c(k) * std::exp(-kI * s.m_at(k) * psi_prime) * r.col(k);
  }
  return (lhs - rhs).norm();
}

std::optional<double> ClassificationResult::m() const noexcept {
  if (const auto* v = std::get_if<StandardVerdict>(&verdict)) return v->m;
  if (const auto* v = std::get_if<OrbitVerdict>(&verdict)) return v->m;
  return std::nullopt;
}

std::string ClassificationResult::name() const {
  switch (verdict.index()) {
    case 0: return "Standard";
    case 1: return "OrbitOfNumberState";
    default: return "Generic";
  }
}

ClassificationResult classify_fiducial(const FiducialVector& fv, const ClassifyOptions& opts) {
  const SpinLabel s = fv.spin();
  const CVector& c = fv.amplitudes();
  ClassificationResult out;
  out.A0 = CoefficientSet(fv).A0();
  out.a0_is_half_integer = std::abs(2.0 * out.A0 - std::round(2.0 * out.A0)) < opts.tol.coherence;

  double m_std = 0.0;
  if (is_number_state(fv, opts.tol.standard, &m_std)) {
    out.verdict = StandardVerdict{m_std};
    return out;
  }

  // shortcut: for m != 0 an orbit state has <S> = m n
  const Vec3 mean = expectation_vector(fv);
  for (int k = 0; k < s.dimension(); ++k) {
    const double m = s.m_at(k);
    if (m == 0.0 || std::abs(mean.norm() - std::abs(m)) > 1e-6) continue;
    const Vec3 n = (mean / m).normalized();
    const CVector r = build_spin_operators(s).along(n) * c - m * c;
    if (r.norm() < opts.tol.orbit) {
      out.verdict = OrbitVerdict{m, n, r.norm()};
      return out;
    }
  }

  // m = 0 or unresolved: exhaustive sphere scan, then local refinement
  const std::vector<Vec3> grid = kernels::fibonacci_sphere(std::max<std::size_t>(opts.grid_points, 10000));
  const kernels::GridMinimum coarse = kernels::orbit_scan(s, c, grid, opts.exec);
  Vec3 axis = grid[coarse.index];
  const double spacing = std::sqrt(4.0 * std::numbers::pi / static_cast<double>(grid.size()));
  const kernels::OrbitProbe fine = refine_axis(s, c, axis, spacing);
  if (fine.residual < opts.tol.orbit) {
    out.verdict = OrbitVerdict{fine.m, axis, fine.residual};
  } else {
    out.verdict = GenericVerdict{fine.residual};
    out.a0_zero_exceptional = std::abs(out.A0) < opts.tol.coherence;
  }
  return out;
}

const char* subgroup_label(Subgroup g) noexcept {
  return g == Subgroup::U1AboutS3 ? "U(1)" : "1";
}

IsotropyReport isotropy_subgroups(const FiducialVector& fv, int order,
                                  const SymmetryTolerances& tol) {
  if (order < 1) throw DomainError("isotropy order must be >= 1");
  const SpinLabel s = fv.spin();
  IsotropyReport rep;
  rep.order_checked = order;
  rep.H_subgroup =
      is_number_state(fv, tol.standard, nullptr) ? Subgroup::U1AboutS3 : Subgroup::Trivial;

  const bool rule = max_coherence_up_to(fv, order) <= tol.coherence;

  // every word in {S+, S-, S3} of length 1..min(order, 2s)
  const SpinOperatorSet ops = build_spin_operators(s);
  const CMatrix* letters[3] = {&ops.Splus, &ops.Sminus, &ops.S3};
  const CVector& c = fv.amplitudes();
  const std::vector<double> shifts = psi_shift_grid();
  const Rotor rotor(s);
  std::vector<CVector> shifted;
  shifted.reserve(shifts.size());
  for (double sh : shifts) shifted.push_back(rotor.azimuthal_phases(sh).asDiagonal() * c);

  double worst = 0.0;
  const int max_len = std::min(order, s.twice_spin());
  if (max_len > 8) throw DomainError("operator-word sweep is limited to words of length <= 8");
  std::function<void(const CMatrix&, int)> visit = [&](const CMatrix& word, int len) {
    if (len > 0) {
      const cplx ref = c.dot(word * c);
      for (const CVector& hv : shifted) worst = std::max(worst, std::abs(hv.dot(word * hv) - ref));
    }
    if (len == max_len) return;
    for (const CMatrix* l : letters) visit(word * *l, len + 1);
  };
  visit(CMatrix::Identity(s.dimension(), s.dimension()), 0);
  const double scale = std::pow(std::max(1.0, s.value() + 1.0), max_len);
  const bool sweep = worst <= tol.invariance * scale;

  if (rule != sweep) {
    std::ostringstream msg;
    msg << "H0 classification disagrees between the coherence rule (" << rule
        << ") and the operator-word sweep (" << sweep << ", max deviation " << worst << ")";
    throw InternalConsistencyError(msg.str());
  }
  rep.H0_subgroup = rule ? Subgroup::U1AboutS3 : Subgroup::Trivial;
  return rep;
}

double h0_shift_check(const FiducialVector& fv, const EulerAngles& omega, const AngleRates& rates,
                      double psi_prime_rate) {
  if (isotropy_subgroups(fv, 1).H0_subgroup != Subgroup::U1AboutS3) {
    throw DomainError("h0_shift_check requires H0 = U(1)");
  }
  const Rotor rotor(fv.spin());
  const double a0 = CoefficientSet(fv).A0();
  const CVector& c = fv.amplitudes();
  constexpr double dt = 1e-5;

  auto along = [&](double t) {
    return EulerAngles{omega.phi + t * rates.phi, omega.theta + t * rates.theta,
                       omega.psi + t * rates.psi};
  };
  double worst = 0.0;
  for (double shift0 : {0.0, 0.7, 2.9, 5.1, 9.4}) {
    auto chi = [&](double t) -> CVector {
      const CVector h = rotor.azimuthal_phases(shift0 + t * psi_prime_rate).asDiagonal() * c;
      return rotor.rotation(along(t)) * h;
    };
    auto xi = [&](double t) -> CVector { return rotor.rotation(along(t)) * c; };
    const cplx lhs = chi(0.0).dot((chi(dt) - chi(-dt)) / (2.0 * dt));
    const cplx rhs = xi(0.0).dot((xi(dt) - xi(-dt)) / (2.0 * dt)) - kI * a0 * psi_prime_rate;
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return worst;
}

}  // namespace spinfv
