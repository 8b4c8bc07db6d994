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

#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "spinfv/coherent.hpp"

namespace spinfv {

/// Choice of dpsi/dt along the null direction of the degenerate
/// variational system.
class GaugeProfile {
 public:
  struct Constant {};
  struct Linear {
    double rate = 0.0;
  };
  struct Tabulated {
    std::vector<std::pair<double, double>> samples;  // (t, psi), t strictly increasing
  };

  static GaugeProfile constant() { return GaugeProfile(Constant{}); }
  static GaugeProfile linear(double rate) { return GaugeProfile(Linear{rate}); }
  /// Throws DomainError unless there are >= 2 samples with strictly increasing t.
  static GaugeProfile tabulated(std::vector<std::pair<double, double>> samples);

  /// Target dpsi/dt at time t. Tabulated profiles use the slope of the
  /// linear interpolant (zero outside the sampled range).
  double rate_at(double t) const;
  std::string name() const;
  bool is_constant() const noexcept { return std::holds_alternative<Constant>(v_); }
  std::optional<double> linear_rate() const noexcept {
    if (const auto* l = std::get_if<Linear>(&v_)) return l->rate;
    return std::nullopt;
  }

 private:
  using Variant = std::variant<Constant, Linear, Tabulated>;
  explicit GaugeProfile(Variant v) : v_(std::move(v)) {}
  Variant v_;
};

struct VelocityOptions {
  double rank_tol = 1e-10;         // relative to the largest singular value
  double consistency_tol = 1e-6;   // least-squares residual relative to ||rhs||
  double absolute_floor = 1e-12;   // residual floor for rhs at rounding level
};

struct VelocityField {
  AngleRates rates;  // minimum-norm solution
  int rank = 0;
  std::optional<Vec3> null_direction;  // (phi, theta, psi) components
};

/// Solves the 3x3 variational system M(Omega) (phidot, thetadot, psidot) =
/// (-dH/dtheta, dH/dphi, dH/dpsi) by SVD. Throws NoSolutionError when the
/// right-hand side has a component outside the range of M.
VelocityField velocity_field(const FiducialVector& fv, const EulerAngles& omega,
                             const HamiltonianSpec& h, double t = 0.0,
                             const VelocityOptions& opts = {});

/// Moves the minimum-norm solution along the null direction so that dpsi/dt
/// equals `psi_rate`. Leaves it unchanged when the null direction has no psi
/// component.
AngleRates apply_gauge(const VelocityField& field, double psi_rate);

struct IntegratorOptions {
  double rel_tol = 1e-9;
  double abs_tol = 1e-12;
  double initial_step = 1e-3;
  double min_step = 1e-13;
  long max_steps = 2'000'000;
  double pole_guard = 1e-8;  // |sin theta| below this rejects a step with in-plane motion
  VelocityOptions velocity{};
};

struct IntegratorStats {
  long accepted = 0;
  long rejected = 0;
  long pole_rejections = 0;
  long evaluations = 0;
};

struct PathSample {
  double t = 0.0;
  EulerAngles omega;
  int rank = 0;
  bool rank_deficient = false;
};

struct SemiclassicalPath {
  std::vector<PathSample> samples;
  IntegratorStats stats;
};

/// Dormand-Prince 5(4) integration of the variational equations, reporting
/// Omega at every multiple of sample_dt up to t_final.
SemiclassicalPath semiclassical_evolve(const FiducialVector& fv, const EulerAngles& omega0,
                                       const HamiltonianSpec& h, double t_final,
                                       double sample_dt, const GaugeProfile& gauge,
                                       const IntegratorOptions& opts = {});

/// exp(-iHt) R(Omega0) fv.
CVector full_quantum_evolve(const FiducialVector& fv, const EulerAngles& omega0,
                            const HamiltonianSpec& h, double t);

/// |<a|b>|
double fidelity(const CVector& a, const CVector& b);
/// sqrt(1 - |<a|b>|^2); 0 iff a and b are the same ray.
double ray_distance(const CVector& a, const CVector& b);

struct PhaseRatio {
  cplx ratio;     // <Omega_f|Omega_FQ(t)> / <Omega_f|Omega_SC(t)>
  cplx expected;  // exp(i m (psi(t) - psi0))
  double delta_psi = 0.0;
};

/// For a standard fiducial vector |m>: the propagator ratio and its
/// predicted gauge phase. Throws DomainError for non-standard fv,
/// UndefinedRatioError when the semiclassical overlap vanishes, and
/// InternalConsistencyError when ratio and prediction differ by > 1e-9.
PhaseRatio propagator_phase_ratio(const FiducialVector& fv, const EulerAngles& omega0,
                                  const EulerAngles& omega_f, const HamiltonianSpec& h, double t,
                                  const GaugeProfile& gauge, const IntegratorOptions& opts = {});

enum class Verdict { Coincide, Diverge, Indeterminate };
const char* verdict_name(Verdict v) noexcept;

struct TrajectorySample {
  double t = 0.0;
  EulerAngles omega;
  CVector semiclassical;
  CVector full_quantum;
  double ray_distance = 0.0;
  double fidelity = 1.0;
  bool rank_deficient = false;
};

struct TrajectoryResult {
  std::vector<TrajectorySample> samples;
  IntegratorStats stats;
  double max_ray_distance = 0.0;
  Verdict verdict = Verdict::Indeterminate;
};

inline constexpr double kCoincideThreshold = 1e-6;
inline constexpr double kDivergeThreshold = 1e-2;

/// Runs both evolutions from the same initial coherent state.
TrajectoryResult compare_evolutions(const FiducialVector& fv, const HamiltonianSpec& h,
                                    const EulerAngles& omega0, double t_final, double sample_dt,
                                    const GaugeProfile& gauge, const IntegratorOptions& opts = {});

/// The three worked cases: (i) |m>, (ii) (sqrt(2/3), 0, sqrt(1/3)),
/// (v) (sqrt(1/2), sqrt(1/6), sqrt(1/3)), all under -mu B S3.
enum class CaseId { I, II, V };

std::optional<CaseId> parse_case_id(const std::string& text);
const char* case_name(CaseId id) noexcept;
FiducialVector case_fiducial(CaseId id);

struct CaseParams {
  double mu_B = 1.0;
  double theta0 = 1.0471975511965976;  // pi/3
  double psi0 = 0.4;
  double t_final = 10.0;
  double sample_dt = 0.05;
  GaugeProfile gauge = GaugeProfile::constant();
  std::optional<FiducialVector> fiducial;  // overrides the case default
};

TrajectoryResult compare_case(CaseId id, const CaseParams& params = {});

}  // namespace spinfv
