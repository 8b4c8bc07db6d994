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

#include "spinfv/cli/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "spinfv/error.hpp"

namespace spinfv::cli {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.count(key)) throw ConfigError("unknown key '" + key + "' in " + where);
  }
}

double number(const json& j, const std::string& what) {
  if (!j.is_number()) throw ConfigError(what + " must be a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ConfigError(what + " must be finite");
  return v;
}

cplx complex_pair(const json& j, const std::string& what) {
  if (!j.is_array() || j.size() != 2) throw ConfigError(what + " must be an [re, im] pair");
  return {number(j[0], what + " re"), number(j[1], what + " im")};
}

Vec3 vec3(const json& j, const std::string& what) {
  if (!j.is_array() || j.size() != 3) throw ConfigError(what + " must have three entries");
  return {number(j[0], what), number(j[1], what), number(j[2], what)};
}

HamiltonianSpec parse_hamiltonian(const json& j, SpinLabel spin) {
  if (!j.is_object()) throw ConfigError("hamiltonian must be an object");
  reject_unknown(j, {"type", "mu", "omega_q", "B", "matrix"}, "hamiltonian");
  const std::string type = j.value("type", "nmr");
  const Vec3 b = j.contains("B") ? vec3(j["B"], "hamiltonian.B") : Vec3::UnitZ();
  if (type == "nmr") {
    return NmrHamiltonian{j.contains("mu") ? number(j["mu"], "hamiltonian.mu") : 1.0, b};
  }
  if (type == "nqr") {
    if (spin.twice_spin() < 2) throw ConfigError("nqr Hamiltonian needs spin >= 1");
    return NqrHamiltonian{j.contains("omega_q") ? number(j["omega_q"], "hamiltonian.omega_q") : 1.0, b};
  }
  if (type == "custom") {
    if (!j.contains("matrix")) throw ConfigError("custom hamiltonian needs 'matrix'");
    const json& rows = j["matrix"];
    const int d = spin.dimension();
    if (!rows.is_array() || static_cast<int>(rows.size()) != d) {
      throw ConfigError("hamiltonian.matrix must have " + std::to_string(d) + " rows");
    }
    CMatrix h(d, d);
    for (int r = 0; r < d; ++r) {
      if (!rows[r].is_array() || static_cast<int>(rows[r].size()) != d) {
        throw ConfigError("hamiltonian.matrix row " + std::to_string(r) + " must have " +
                          std::to_string(d) + " entries");
      }
      for (int c = 0; c < d; ++c) h(r, c) = complex_pair(rows[r][c], "hamiltonian.matrix entry");
    }
    try {
      HamiltonianSpec spec = CustomHamiltonian{h};
      (void)spec.matrix(spin);
      return spec;
    } catch (const DomainError& e) {
      throw ConfigError(e.what());
    }
  }
  throw ConfigError("hamiltonian.type must be nmr, nqr or custom");
}

GaugeProfile parse_gauge(const json& j) {
  if (!j.is_object()) throw ConfigError("dynamics.gauge must be an object");
  reject_unknown(j, {"type", "rate", "samples"}, "dynamics.gauge");
  const std::string type = j.value("type", "constant");
  if (type == "constant") return GaugeProfile::constant();
  if (type == "linear") {
    if (!j.contains("rate")) throw ConfigError("linear gauge needs 'rate'");
    return GaugeProfile::linear(number(j["rate"], "dynamics.gauge.rate"));
  }
  if (type == "tabulated") {
    if (!j.contains("samples") || !j["samples"].is_array()) {
      throw ConfigError("tabulated gauge needs 'samples' as [[t, psi], ...]");
    }
    std::vector<std::pair<double, double>> s;
    for (const json& p : j["samples"]) {
      if (!p.is_array() || p.size() != 2) throw ConfigError("gauge samples must be [t, psi] pairs");
      s.emplace_back(number(p[0], "gauge sample t"), number(p[1], "gauge sample psi"));
    }
    try {
      return GaugeProfile::tabulated(std::move(s));
    } catch (const DomainError& e) {
      throw ConfigError(e.what());
    }
  }
  throw ConfigError("dynamics.gauge.type must be constant, linear or tabulated");
}

DynamicsConfig parse_dynamics(const json& j) {
  if (!j.is_object()) throw ConfigError("dynamics must be an object");
  reject_unknown(j, {"omega0", "t_final", "sample_dt", "gauge"}, "dynamics");
  DynamicsConfig d;
  if (j.contains("omega0")) {
    const Vec3 o = vec3(j["omega0"], "dynamics.omega0");
    d.omega0 = {o(0), o(1), o(2)};
  }
  if (j.contains("t_final")) d.t_final = number(j["t_final"], "dynamics.t_final");
  if (j.contains("sample_dt")) d.sample_dt = number(j["sample_dt"], "dynamics.sample_dt");
  if (!(d.t_final > 0.0)) throw ConfigError("dynamics.t_final must be positive");
  if (!(d.sample_dt > 0.0)) throw ConfigError("dynamics.sample_dt must be positive");
  if (j.contains("gauge")) d.gauge = parse_gauge(j["gauge"]);
  return d;
}

}  // namespace

std::optional<OutputFormat> parse_output_format(const std::string& text) {
  if (text == "md") return OutputFormat::Markdown;
  if (text == "csv") return OutputFormat::Csv;
  if (text == "json") return OutputFormat::Json;
  return std::nullopt;
}

const char* output_format_name(OutputFormat f) noexcept {
  switch (f) {
    case OutputFormat::Markdown: return "md";
    case OutputFormat::Csv: return "csv";
    default: return "json";
  }
}

RunConfig parse_run_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  reject_unknown(doc, {"twice_spin", "fv", "hamiltonian", "dynamics", "tolerances", "output"},
                 "config");

  RunConfig cfg;
  if (!doc.contains("twice_spin") || !doc["twice_spin"].is_number_integer()) {
    throw ConfigError("config needs an integer 'twice_spin'");
  }
  const int twice = doc["twice_spin"].get<int>();
  if (twice < 1 || twice > 40) throw ConfigError("twice_spin must be in 1..40");
  cfg.spin = SpinLabel(twice);

  if (!doc.contains("fv") || !doc["fv"].is_array()) {
    throw ConfigError("config needs 'fv' as a list of [re, im] pairs");
  }
  const json& amps = doc["fv"];
  if (static_cast<int>(amps.size()) != cfg.spin.dimension()) {
    throw ConfigError("fv has " + std::to_string(amps.size()) + " amplitudes; spin " +
                      std::to_string(cfg.spin.value()) + " needs " +
                      std::to_string(cfg.spin.dimension()));
  }
  CVector c(cfg.spin.dimension());
  for (int k = 0; k < cfg.spin.dimension(); ++k) c(k) = complex_pair(amps[k], "fv entry");
  const double norm = c.norm();
  if (norm == 0.0) throw ConfigError("fv has zero norm");
  if (std::abs(norm - 1.0) > 1e-9) {
    std::ostringstream w;
    w.precision(17);
    w << "fv norm " << norm << " differs from 1; normalizing";
    cfg.warnings.push_back(w.str());
  }
  cfg.fv = FiducialVector::make(cfg.spin, c);

  if (doc.contains("hamiltonian")) cfg.hamiltonian = parse_hamiltonian(doc["hamiltonian"], cfg.spin);
  if (doc.contains("dynamics")) cfg.dynamics = parse_dynamics(doc["dynamics"]);
  if (doc.contains("tolerances")) {
    const json& t = doc["tolerances"];
    if (!t.is_object()) throw ConfigError("tolerances must be an object");
    for (const auto& [key, value] : t.items()) {
      std::ostringstream a;
      a.precision(17);
      a << key << '=' << number(value, "tolerances." + key);
      apply_tolerance_override(cfg, a.str());
    }
  }
  if (doc.contains("output")) {
    if (!doc["output"].is_string()) throw ConfigError("output must be md, csv or json");
    cfg.output = parse_output_format(doc["output"].get<std::string>());
    if (!cfg.output) throw ConfigError("output must be md, csv or json");
  }
  return cfg;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_run_config(buf.str());
}

void apply_tolerance_override(RunConfig& cfg, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError("expected KEY=VAL, got '" + assignment + "'");
  const std::string key = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  double value = 0.0;
  try {
    std::size_t used = 0;
    value = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
  } catch (const std::exception&) {
    throw ConfigError("tolerance '" + key + "' has non-numeric value '" + text + "'");
  }
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw ConfigError("tolerance '" + key + "' must be positive and finite");
  }
  SymmetryTolerances& t = cfg.tolerances;
  IntegratorOptions& i = cfg.integrator;
  if (key == "algebraic") t.algebraic = value;
  else if (key == "coherence") t.coherence = value;
  else if (key == "invariance") t.invariance = value;
  else if (key == "standard") t.standard = value;
  else if (key == "orbit") t.orbit = value;
  else if (key == "finite_difference") t.finite_difference = value;
  else if (key == "rel_tol") i.rel_tol = value;
  else if (key == "abs_tol") i.abs_tol = value;
  else if (key == "rank_tol") i.velocity.rank_tol = value;
  else if (key == "consistency_tol") i.velocity.consistency_tol = value;
  else throw ConfigError("unknown tolerance key '" + key + "'");
}

}  // namespace spinfv::cli
