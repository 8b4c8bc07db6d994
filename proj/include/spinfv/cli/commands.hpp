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

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "spinfv/cli/config.hpp"

namespace spinfv::cli {

enum ExitCode : int { kPass = 0, kMismatch = 1, kUsage = 2, kNumerical = 3 };

using Json = nlohmann::ordered_json;

struct Report {
  Json body;           // machine-readable result, emitted as-is for --output json
  std::string markdown;
  std::string csv;
  std::vector<std::string> diffs;  // golden or verdict mismatches
  int exit_code = kPass;
};

Report cmd_table1();
Report cmd_table2();
Report cmd_classify(const RunConfig& cfg);
Report cmd_symmetry(const RunConfig& cfg);

struct EvolveRequest {
  std::optional<CaseId> case_id;  // otherwise a custom run from the config
  RunConfig config;
};

/// Report plus the time-series CSV (t, phi, theta, psi, fidelity, ray_distance).
struct EvolveOutput {
  Report report;
  std::string samples_csv;
};

EvolveOutput cmd_evolve(const EvolveRequest& req);

inline constexpr const char* kSamplesHeader = "t,phi,theta,psi,fidelity,ray_distance";

/// Emits JSON as the CLI prints it (2-space indent, trailing newline).
std::string dump_json(const Json& j);

/// Entry point for the spinfv executable. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace spinfv::cli
