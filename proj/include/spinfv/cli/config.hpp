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
#include <vector>

#include "spinfv/dynamics.hpp"
#include "spinfv/symmetry.hpp"

namespace spinfv::cli {

enum class OutputFormat { Markdown, Csv, Json };

std::optional<OutputFormat> parse_output_format(const std::string& text);
const char* output_format_name(OutputFormat f) noexcept;

struct DynamicsConfig {
  EulerAngles omega0{0.0, 1.0471975511965976, 0.4};
  double t_final = 10.0;
  double sample_dt = 0.05;
  GaugeProfile gauge = GaugeProfile::constant();
};

/// One run: a fiducial vector, a Hamiltonian and evolution settings.
/// Read from a JSON document:
///
///   {
///     "twice_spin": 2,
///     "fv": [[0.816496580927726, 0], [0, 0], [0.5773502691896258, 0]],
///     "hamiltonian": {"type": "nmr", "mu": 1, "B": [0, 0, 1]},
///     "dynamics": {"omega0": [0, 1.0472, 0.4], "t_final": 10, "sample_dt": 0.05,
///                  "gauge": {"type": "linear", "rate": 0.5}},
///     "tolerances": {"orbit": 1e-8},
///     "output": "json"
///   }
///
/// Only "twice_spin" and "fv" are required.
struct RunConfig {
  SpinLabel spin{1};
  std::optional<FiducialVector> fv;
  HamiltonianSpec hamiltonian = NmrHamiltonian{};
  DynamicsConfig dynamics;
  SymmetryTolerances tolerances;
  IntegratorOptions integrator;
  std::optional<OutputFormat> output;
  std::vector<std::string> warnings;
};

/// Throws ConfigError on malformed input, unknown keys or a wrong-length fv.
/// An fv whose norm differs from 1 by more than 1e-9 is normalized and a
/// warning recorded.
RunConfig parse_run_config(const std::string& text);
RunConfig load_run_config(const std::string& path);

/// KEY=VAL, KEY one of algebraic, coherence, invariance, standard, orbit,
/// finite_difference, rel_tol, abs_tol, rank_tol, consistency_tol.
void apply_tolerance_override(RunConfig& cfg, const std::string& assignment);

}  // namespace spinfv::cli
