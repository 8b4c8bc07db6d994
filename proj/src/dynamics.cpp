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

#include "spinfv/dynamics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "spinfv/error.hpp"
#include "spinfv/symmetry.hpp"

namespace spinfv {

GaugeProfile GaugeProfile::tabulated(std::vector<std::pair<double, double>> samples) {
  if (samples.size() < 2) throw DomainError("tabulated gauge needs at least two samples");
  for (std::size_t i = 1; i < samples.size(); ++i) {
    if (!(samples[i].first > samples[i - 1].first)) {
      throw DomainError("tabulated gauge times must be strictly increasing");
    }
  }
  return GaugeProfile(Tabulated{std::move(samples)});
}

double GaugeProfile::rate_at(double t) const {
  if (std::holds_alternative<Constant>(v_)) return 0.0;
  if (const auto* l = std::get_if<Linear>(&v_)) return l->rate;
  const auto& s = std::get<Tabulated>(v_).samples;
  if (t < s.front().first || t >= s.back().first) return 0.0;
  const auto it = std::upper_bound(s.begin(), s.end(), t,
                                   [](double x, const auto& p) { return x < p.first; });
  const auto& hi = *it;
  const auto& lo = *(it - 1);
  return (hi.second - lo.second) / (hi.first - lo.first);
}

std::string GaugeProfile::name() const {
  if (std::holds_alternative<Constant>(v_)) return "constant";
  if (const auto* l = std::get_if<Linear>(&v_)) {
    std::ostringstream os;
    os << "linear(" << l->rate << ")";
    return os.str();
  }
  return "tabulated";
}

namespace {

// Realized once per trajectory: rotor, Hamiltonian matrix and coefficients.
class VelocityModel {
 public:
  VelocityModel(const FiducialVector& fv, const HamiltonianSpec& h, VelocityOptions opts)
      : fv_(fv), rotor_(fv.spin()), h_(h.matrix(fv.spin())), coeffs_(fv), opts_(opts) {}

  const CMatrix& hamiltonian() const { return h_; }
  const Rotor& rotor() const { return rotor_; }

  VelocityField solve(const EulerAngles& omega) const {
    const double st = std::sin(omega.theta);
    const double ct = std::cos(omega.theta);
    const double a0 = coeffs_.A0();
    const double a1 = coeffs_.A1_at(omega.psi);
    const double a4 = coeffs_.A4_at(omega.psi);
    const double diag = a0 * st + a1 * ct;

    Eigen::Matrix3d m;
    m << diag, 0.0, a1,
         0.0, diag, -a4 * st,
         a4 * st, a1, 0.0;
    const AngleGradient g = hamiltonian_gradient(rotor_, h_, fv_.amplitudes(), omega);
    const Eigen::Vector3d rhs(-g.d_theta, g.d_phi, g.d_psi);

    Eigen::JacobiSVD<Eigen::Matrix3d> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Eigen::Vector3d sigma = svd.singularValues();
    const double cutoff = opts_.rank_tol * sigma(0);
    int rank = 0;
    Eigen::Vector3d x = Eigen::Vector3d::Zero();
    for (int i = 0; i < 3; ++i) {
      if (sigma(i) > cutoff && sigma(i) > 0.0) {
        x += svd.matrixV().col(i) * (svd.matrixU().col(i).dot(rhs) / sigma(i));
        ++rank;
      }
    }
    const double residual = (m * x - rhs).norm();
    const double allowed = std::max(opts_.consistency_tol * rhs.norm(),
                                    opts_.absolute_floor * std::max(1.0, h_.norm()));
    if (residual > allowed) {
      std::ostringstream msg;
      msg << "variational system inconsistent at (phi, theta, psi) = (" << omega.phi << ", "
          << omega.theta << ", " << omega.psi << "): residual " << residual;
      throw NoSolutionError(msg.str(), residual);
    }

    VelocityField out;
    out.rates = {x(0), x(1), x(2)};
    out.rank = rank;
    if (rank < 3) {
      // dominant null direction: the psi axis projected onto the null space
      Eigen::Vector3d w = Eigen::Vector3d::Zero();
      for (int i = rank; i < 3; ++i) {
        const Eigen::Vector3d v = svd.matrixV().col(i);
        w += v * v(2);
      }
      if (w.norm() < 1e-12) w = svd.matrixV().col(rank);
      w.normalize();
      if (w(2) < 0.0) w = -w;
      out.null_direction = w;
    }
    return out;
  }

 private:
  const FiducialVector& fv_;
  Rotor rotor_;
  CMatrix h_;
  CoefficientSet coeffs_;
  VelocityOptions opts_;
};

// Cached eigendecomposition for exp(-iHt) at many t.
class Propagator {
 public:
  explicit Propagator(const CMatrix& h) {
    Eigen::SelfAdjointEigenSolver<CMatrix> eig(h);
    vectors_ = eig.eigenvectors();
    values_ = eig.eigenvalues();
  }
  CVector apply(const CVector& psi0, double t) const {
    const CVector phases = values_.unaryExpr([t](double w) { return std::exp(-kI * w * t); });
    return vectors_ * (phases.asDiagonal() * (vectors_.adjoint() * psi0));
  }

 private:
  CMatrix vectors_;
  Eigen::VectorXd values_;
};

using State3 = std::array<double, 3>;

State3 to_state(const EulerAngles& o) { return {o.phi, o.theta, o.psi}; }
EulerAngles to_angles(const State3& y) { return {y[0], y[1], y[2]}; }

}  // namespace

VelocityField velocity_field(const FiducialVector& fv, const EulerAngles& omega,
                             const HamiltonianSpec& h, double /*t*/, const VelocityOptions& opts) {
  return VelocityModel(fv, h, opts).solve(omega);
}

AngleRates apply_gauge(const VelocityField& field, double psi_rate) {
  AngleRates r = field.rates;
  if (!field.null_direction) return r;
  const Vec3& w = *field.null_direction;
  if (std::abs(w(2)) < 1e-8) return r;
  const double lambda = (psi_rate - r.psi) / w(2);
  r.phi += lambda * w(0);
  r.theta += lambda * w(1);
  r.psi = psi_rate;
  return r;
}

SemiclassicalPath semiclassical_evolve(const FiducialVector& fv, const EulerAngles& omega0,
                                       const HamiltonianSpec& h, double t_final,
                                       double sample_dt, const GaugeProfile& gauge,
                                       const IntegratorOptions& opts) {
  if (!(t_final > 0.0)) throw DomainError("t_final must be positive");
  if (!(sample_dt > 0.0)) throw DomainError("sample_dt must be positive");
  if (!omega0.is_finite()) throw DomainError("initial angles must be finite");

  const VelocityModel model(fv, h, opts.velocity);
  SemiclassicalPath path;
  IntegratorStats& stats = path.stats;

  auto rhs = [&](double t, const State3& y, int* rank) {
    ++stats.evaluations;
    const VelocityField f = model.solve(to_angles(y));
    if (rank) *rank = f.rank;
    const AngleRates r = apply_gauge(f, gauge.rate_at(t));
    return State3{r.phi, r.theta, r.psi};
  };

  // Dormand-Prince 5(4) tableau
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                          a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                          a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                          b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                          e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

  auto combo = [](const State3& y, double h, std::initializer_list<std::pair<double, const State3*>> terms) {
    State3 out = y;
    for (const auto& [w, k] : terms) {
      for (int i = 0; i < 3; ++i) out[i] += h * w * (*k)[i];
    }
    return out;
  };

  double t = 0.0;
  State3 y = to_state(omega0);
  int rank = 0;
  State3 k1 = rhs(t, y, &rank);
  path.samples.push_back({t, omega0, rank, rank < 3});

  const long n_samples = static_cast<long>(std::ceil(t_final / sample_dt - 1e-12));
  double step = std::min(opts.initial_step, sample_dt);

  for (long s = 1; s <= n_samples; ++s) {
    const double t_target = std::min(t_final, static_cast<double>(s) * sample_dt);
    while (t < t_target) {
      if (stats.accepted + stats.rejected > opts.max_steps) {
        throw IntegrationError("step budget exhausted", t);
      }
      const bool last = t + step >= t_target;
      const double h_step = last ? t_target - t : step;

      const State3 k2 = rhs(t + c2 * h_step, combo(y, h_step, {{a21, &k1}}), nullptr);
      const State3 k3 = rhs(t + c3 * h_step, combo(y, h_step, {{a31, &k1}, {a32, &k2}}), nullptr);
      const State3 k4 =
          rhs(t + c4 * h_step, combo(y, h_step, {{a41, &k1}, {a42, &k2}, {a43, &k3}}), nullptr);
      const State3 k5 = rhs(t + c5 * h_step,
                            combo(y, h_step, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}),
                            nullptr);
      const State3 k6 =
          rhs(t + h_step,
              combo(y, h_step, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}),
              nullptr);
      const State3 y_new =
          combo(y, h_step, {{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
      int new_rank = 0;
      const State3 k7 = rhs(t + h_step, y_new, &new_rank);

      double err = 0.0;
      for (int i = 0; i < 3; ++i) {
        const double e = h_step * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                                   e6 * k6[i] + e7 * k7[i]);
        const double scale = opts.abs_tol + opts.rel_tol * std::max(std::abs(y[i]), std::abs(y_new[i]));
        err = std::max(err, std::abs(e) / scale);
      }

      const bool in_plane = std::abs(k1[0]) > 0.0 || std::abs(k1[1]) > 0.0;
      if (in_plane && std::abs(std::sin(y_new[1])) < opts.pole_guard) {
        ++stats.pole_rejections;
        ++stats.rejected;
        step = 0.5 * h_step;
      } else if (err <= 1.0) {
        ++stats.accepted;
        t = last ? t_target : t + h_step;
        y = y_new;
        k1 = k7;
        rank = new_rank;
        const double grow = err > 0.0 ? 0.9 * std::pow(err, -0.2) : 5.0;
        if (!last) step = h_step * std::clamp(grow, 0.2, 5.0);
        else step = std::max(step, h_step);
      } else {
        ++stats.rejected;
        step = h_step * std::max(0.2, 0.9 * std::pow(err, -0.2));
      }
      if (step < opts.min_step) throw IntegrationError("step size underflow", t);
    }
    path.samples.push_back({t, to_angles(y), rank, rank < 3});
  }
  return path;
}

CVector full_quantum_evolve(const FiducialVector& fv, const EulerAngles& omega0,
                            const HamiltonianSpec& h, double t) {
  const CVector start = coherent_state(fv, omega0).amplitudes;
  return Propagator(h.matrix(fv.spin())).apply(start, t);
}

double fidelity(const CVector& a, const CVector& b) {
  if (a.size() != b.size()) throw DomainError("state dimensions differ");
  return std::min(1.0, std::abs(a.dot(b)));
}

double ray_distance(const CVector& a, const CVector& b) {
  if (a.size() != b.size()) throw DomainError("state dimensions differ");
  // ||b - a<a|b>|| equals sqrt(1 - |<a|b>|^2) for unit vectors without the cancellation
  const CVector ua = a.normalized();
  const CVector ub = b.normalized();
  return std::min(1.0, (ub - ua * ua.dot(ub)).norm());
}

PhaseRatio propagator_phase_ratio(const FiducialVector& fv, const EulerAngles& omega0,
                                  const EulerAngles& omega_f, const HamiltonianSpec& h, double t,
                                  const GaugeProfile& gauge, const IntegratorOptions& opts) {
  const ClassificationResult cls = classify_fiducial(fv);
  if (!cls.is_standard()) throw DomainError("propagator phase ratio needs a standard |m> fiducial");
  const double m = *cls.m();

  const Rotor rotor(fv.spin());
  const CVector bra = rotor.rotation(omega_f) * fv.amplitudes();

  PhaseRatio out;
  EulerAngles omega_t = omega0;
  if (t > 0.0) {
    omega_t = semiclassical_evolve(fv, omega0, h, t, t, gauge, opts).samples.back().omega;
  }
  const CVector sc = rotor.rotation(omega_t) * fv.amplitudes();
  const CVector fq = full_quantum_evolve(fv, omega0, h, t);
  const cplx denom = bra.dot(sc);
  if (std::abs(denom) < 1e-12) {
    throw UndefinedRatioError("semiclassical overlap with the final state vanishes");
  }
  out.ratio = bra.dot(fq) / denom;
  out.delta_psi = omega_t.psi - omega0.psi;
  out.expected = std::exp(kI * m * out.delta_psi);
  if (std::abs(out.ratio - out.expected) > 1e-9) {
    std::ostringstream msg;
    msg << "propagator ratio " << out.ratio << " differs from exp(i m dpsi) = " << out.expected;
    throw InternalConsistencyError(msg.str());
  }
  return out;
}

const char* verdict_name(Verdict v) noexcept {
  switch (v) {
    case Verdict::Coincide: return "coincide";
    case Verdict::Diverge: return "diverge";
    default: return "indeterminate";
  }
}

TrajectoryResult compare_evolutions(const FiducialVector& fv, const HamiltonianSpec& h,
                                    const EulerAngles& omega0, double t_final, double sample_dt,
                                    const GaugeProfile& gauge, const IntegratorOptions& opts) {
  const SemiclassicalPath path = semiclassical_evolve(fv, omega0, h, t_final, sample_dt, gauge, opts);
  const Rotor rotor(fv.spin());
  const Propagator prop(h.matrix(fv.spin()));
  const CVector start = rotor.rotation(omega0) * fv.amplitudes();

  TrajectoryResult out;
  out.stats = path.stats;
  out.samples.reserve(path.samples.size());
  for (const PathSample& p : path.samples) {
    TrajectorySample s;
    s.t = p.t;
    s.omega = p.omega;
    s.rank_deficient = p.rank_deficient;
    s.semiclassical = rotor.rotation(p.omega) * fv.amplitudes();
    s.full_quantum = prop.apply(start, p.t);
    s.fidelity = fidelity(s.semiclassical, s.full_quantum);
    s.ray_distance = ray_distance(s.semiclassical, s.full_quantum);
    out.max_ray_distance = std::max(out.max_ray_distance, s.ray_distance);
    out.samples.push_back(std::move(s));
  }
  if (out.max_ray_distance < kCoincideThreshold) out.verdict = Verdict::Coincide;
  else if (out.max_ray_distance > kDivergeThreshold) out.verdict = Verdict::Diverge;
  else out.verdict = Verdict::Indeterminate;
  return out;
}

std::optional<CaseId> parse_case_id(const std::string& text) {
  if (text == "i") return CaseId::I;
  if (text == "ii") return CaseId::II;
  if (text == "v") return CaseId::V;
  return std::nullopt;
}

const char* case_name(CaseId id) noexcept {
  switch (id) {
    case CaseId::I: return "i";
    case CaseId::II: return "ii";
    default: return "v";
  }
}

FiducialVector case_fiducial(CaseId id) {
  const SpinLabel one(2);
  switch (id) {
    case CaseId::I: return FiducialVector::number_state(one, 1.0);
    case CaseId::II: {
      const CVector c = (CVector(3) << std::sqrt(2.0 / 3.0), 0.0, std::sqrt(1.0 / 3.0)).finished();
      return FiducialVector::make(one, c);
    }
    default: {
      const CVector c = (CVector(3) << std::sqrt(0.5), std::sqrt(1.0 / 6.0), std::sqrt(1.0 / 3.0)).finished();
      return FiducialVector::make(one, c);
    }
  }
}

TrajectoryResult compare_case(CaseId id, const CaseParams& params) {
  const FiducialVector fv = params.fiducial ? *params.fiducial : case_fiducial(id);
  const HamiltonianSpec h = NmrHamiltonian{params.mu_B, Vec3::UnitZ()};
  const EulerAngles omega0{0.0, params.theta0, params.psi0};
  return compare_evolutions(fv, h, omega0, params.t_final, params.sample_dt, params.gauge);
}

}  // namespace spinfv
