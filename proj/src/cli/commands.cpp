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

#include "spinfv/cli/commands.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "spinfv/cli/golden.hpp"
#include "spinfv/error.hpp"

namespace spinfv::cli {

namespace {

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string short_num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

std::string spin_text(SpinLabel s) {
  return s.is_integer() ? std::to_string(s.twice_spin() / 2) : std::to_string(s.twice_spin()) + "/2";
}

std::string rational_text(double x) {
  if (const auto r = as_rational(x)) return r->str();
  return fmt17(x);
}

const char* yes_no(bool b) { return b ? "Yes" : "No"; }

HamiltonianSpec make_hamiltonian(HamiltonianKind k) {
  if (k == HamiltonianKind::Nqr) return NqrHamiltonian{};
  return NmrHamiltonian{};
}

const char* kind_text(HamiltonianKind k) { return k == HamiltonianKind::Nqr ? "NQR" : "NMR"; }

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string markdown_table(const std::vector<std::string>& header,
                           const std::vector<std::vector<std::string>>& rows) {
  std::ostringstream md;
  md << '|';
  for (const auto& h : header) md << ' ' << h << " |";
  md << "\n|";
  for (std::size_t i = 0; i < header.size(); ++i) md << "---|";
  md << '\n';
  for (const auto& r : rows) {
    md << '|';
    for (const auto& c : r) {
      std::string cell;
      for (char ch : c) cell += ch == '|' ? std::string("\\|") : std::string(1, ch);
      md << ' ' << cell << " |";
    }
    md << '\n';
  }
  return md.str();
}

std::string csv_table(const std::vector<std::string>& header,
                      const std::vector<std::vector<std::string>>& rows) {
  std::ostringstream csv;
  for (std::size_t i = 0; i < header.size(); ++i) csv << (i ? "," : "") << csv_quote(header[i]);
  csv << '\n';
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) csv << (i ? "," : "") << csv_quote(r[i]);
    csv << '\n';
  }
  return csv.str();
}

Json amplitudes_json(const CVector& c) {
  Json arr = Json::array();
  for (Eigen::Index k = 0; k < c.size(); ++k) arr.push_back({c(k).real(), c(k).imag()});
  return arr;
}

void check_flag(std::vector<std::string>& diffs, const std::string& where, const char* what,
                bool expected, bool got) {
  if (expected != got) {
    diffs.push_back("column (" + where + ") " + what + ": expected " + yes_no(expected) + ", got " +
                    yes_no(got));
  }
}

struct Table1Row {
  std::vector<std::string> cells;
  Json json;
};

Table1Row evaluate_table1_column(const Table1Column& col, std::vector<std::string>& diffs) {
  const std::size_t before = diffs.size();
  Table1Row row;
  const std::string id = col.id;

  auto check_report = [&](const SymmetryReport& r, double a0_expected, const std::string& where) {
    if (std::abs(r.A0 - a0_expected) > kGoldenTolerance) {
      diffs.push_back("column (" + where + ") A0: expected " + rational_text(a0_expected) +
                      ", got " + fmt17(r.A0));
    }
    check_flag(diffs, where, "A3 present", col.a3_present, r.a3_present);
    check_flag(diffs, where, "topological weak symmetry", col.topological, r.topological_weak_symmetry);
    check_flag(diffs, where, "Hamiltonian psi-invariance", col.hamiltonian_invariant,
               r.hamiltonian_psi_invariant);
    check_flag(diffs, where, "total weak symmetry", col.total, r.total_weak_symmetry);
  };

  std::string hams;
  for (HamiltonianKind k : col.hamiltonians) hams += std::string(hams.empty() ? "" : "/") + kind_text(k);

  if (!col.fv) {
    int checked = 0;
    for (const auto& [s, m] : number_state_sample()) {
      const FiducialVector fv = FiducialVector::number_state(s, m);
      for (HamiltonianKind k : col.hamiltonians) {
        if (k == HamiltonianKind::Nqr && s.twice_spin() < 2) continue;
        const SymmetryReport r = symmetry_report(fv, make_hamiltonian(k));
        check_report(r, m, id + ", s=" + spin_text(s) + ", m=" + rational_text(m) + ", " + kind_text(k));
        ++checked;
      }
    }
    row.cells = {id, "any", hams, "|m>", "m", col.a3_present ? "present" : "absent",
                 yes_no(col.topological), yes_no(col.hamiltonian_invariant), yes_no(col.total)};
    row.json = Json{{"column", id},
                    {"spin", "any"},
                    {"hamiltonian", hams},
                    {"fv", "|m>"},
                    {"A0", "m"},
                    {"A0_value", nullptr},
                    {"A3", col.a3_present ? "present" : "absent"},
                    {"topological", yes_no(col.topological)},
                    {"hamiltonian_psi", yes_no(col.hamiltonian_invariant)},
                    {"total", yes_no(col.total)},
                    {"states_checked", checked}};
  } else {
    const FiducialVector fv = col.fv->build();
    const HamiltonianKind k = col.hamiltonians.front();
    const SymmetryReport r = symmetry_report(fv, make_hamiltonian(k));
    check_report(r, col.A0->value(), id);
    row.cells = {id, spin_text(fv.spin()), hams, col.fv->label(), rational_text(r.A0),
                 r.a3_present ? "present" : "absent", yes_no(r.topological_weak_symmetry),
                 yes_no(r.hamiltonian_psi_invariant), yes_no(r.total_weak_symmetry)};
    row.json = Json{{"column", id},
                    {"spin", spin_text(fv.spin())},
                    {"hamiltonian", hams},
                    {"fv", col.fv->label()},
                    {"A0", rational_text(r.A0)},
                    {"A0_value", r.A0},
                    {"A3", r.a3_present ? "present" : "absent"},
                    {"topological", yes_no(r.topological_weak_symmetry)},
                    {"hamiltonian_psi", yes_no(r.hamiltonian_psi_invariant)},
                    {"total", yes_no(r.total_weak_symmetry)},
                    {"states_checked", 1}};
  }
  row.json["pass"] = diffs.size() == before;
  return row;
}

std::optional<Verdict> expected_case_verdict(CaseId id, const GaugeProfile& gauge) {
  if (id != CaseId::II) return Verdict::Coincide;
  if (gauge.is_constant()) return Verdict::Coincide;
  if (const auto rate = gauge.linear_rate()) {
    return *rate == 0.0 ? Verdict::Coincide : Verdict::Diverge;
  }
  return std::nullopt;
}

}  // namespace

std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

Report cmd_table1() {
  Report rep;
  const std::vector<std::string> header = {"column", "spin", "H", "FV", "A0", "A3",
                                           "topological", "Hamiltonian", "total"};
  std::vector<std::vector<std::string>> rows;
  Json cols = Json::array();
  for (const Table1Column& col : table1_golden()) {
    Table1Row r = evaluate_table1_column(col, rep.diffs);
    rows.push_back(std::move(r.cells));
    cols.push_back(std::move(r.json));
  }
  rep.markdown = markdown_table(header, rows);
  rep.csv = csv_table(header, rows);
  rep.body = Json{{"command", "table1"}, {"columns", cols}, {"mismatches", rep.diffs},
                  {"pass", rep.diffs.empty()}};
  rep.exit_code = rep.diffs.empty() ? kPass : kMismatch;
  return rep;
}

Report cmd_table2() {
  Report rep;
  const std::vector<std::string> header = {"column", "FV", "H", "H0"};
  std::vector<std::vector<std::string>> rows;
  Json cols = Json::array();
  for (const Table2Column& col : table2_golden()) {
    const std::size_t before = rep.diffs.size();
    auto check = [&](const FiducialVector& fv, const std::string& where) {
      const IsotropyReport r = isotropy_subgroups(fv, 1);
      const std::string h = subgroup_label(r.H_subgroup);
      const std::string h0 = subgroup_label(r.H0_subgroup);
      if (h != col.H) rep.diffs.push_back("column (" + where + ") H: expected " + col.H + ", got " + h);
      if (h0 != col.H0) {
        rep.diffs.push_back("column (" + where + ") H0: expected " + col.H0 + ", got " + h0);
      }
      return std::pair{h, h0};
    };
    std::string fv_label;
    std::pair<std::string, std::string> got;
    if (!col.fv) {
      fv_label = "|m>";
      for (const auto& [s, m] : number_state_sample()) {
        got = check(FiducialVector::number_state(s, m),
                    std::string(col.id) + ", s=" + spin_text(s) + ", m=" + rational_text(m));
      }
    } else {
      fv_label = col.fv->label();
      got = check(col.fv->build(), col.id);
    }
    rows.push_back({col.id, fv_label, got.first, got.second});
    cols.push_back(Json{{"column", col.id}, {"fv", fv_label}, {"H", got.first}, {"H0", got.second},
                        {"pass", rep.diffs.size() == before}});
  }
  rep.markdown = markdown_table(header, rows);
  rep.csv = csv_table(header, rows);
  rep.body = Json{{"command", "table2"}, {"columns", cols}, {"mismatches", rep.diffs},
                  {"pass", rep.diffs.empty()}};
  rep.exit_code = rep.diffs.empty() ? kPass : kMismatch;
  return rep;
}

Report cmd_classify(const RunConfig& cfg) {
  if (!cfg.fv) throw ConfigError("classify needs a fiducial vector");
  const FiducialVector& fv = *cfg.fv;
  ClassifyOptions opts;
  opts.tol = cfg.tolerances;
  const ClassificationResult r = classify_fiducial(fv, opts);
  const double gauss = gauss_residual(fv, cfg.dynamics.omega0);

  Report rep;
  Json body{{"command", "classify"},
            {"spin", spin_text(fv.spin())},
            {"fv", amplitudes_json(fv.amplitudes())},
            {"classification", r.name()},
            {"m", r.m() ? Json(*r.m()) : Json(nullptr)}};
  if (const auto* o = std::get_if<OrbitVerdict>(&r.verdict)) {
    body["axis"] = {o->axis(0), o->axis(1), o->axis(2)};
    body["orbit_residual"] = o->residual;
  } else if (const auto* g = std::get_if<GenericVerdict>(&r.verdict)) {
    body["orbit_residual"] = g->residual;
  }
  body["gauss_residual"] = gauss;
  body["A0"] = r.A0;
  body["a0_half_integer"] = r.a0_is_half_integer;
  body["a0_zero_exceptional"] = r.a0_zero_exceptional;
  body["warnings"] = cfg.warnings;
  rep.body = body;

  std::vector<std::vector<std::string>> rows = {
      {"spin", spin_text(fv.spin())},
      {"classification", r.name()},
      {"m", r.m() ? rational_text(*r.m()) : "-"},
      {"gauss_residual", fmt17(gauss)},
      {"A0", rational_text(r.A0)},
      {"a0_half_integer", r.a0_is_half_integer ? "true" : "false"},
      {"a0_zero_exceptional", r.a0_zero_exceptional ? "true" : "false"}};
  rep.markdown = markdown_table({"field", "value"}, rows);
  rep.csv = csv_table({"field", "value"}, rows);
  return rep;
}

Report cmd_symmetry(const RunConfig& cfg) {
  if (!cfg.fv) throw ConfigError("symmetry needs a fiducial vector");
  const FiducialVector& fv = *cfg.fv;
  const SymmetryReport r = symmetry_report(fv, cfg.hamiltonian, cfg.tolerances);
  const IsotropyReport iso = isotropy_subgroups(fv, std::max(1, r.evidence.hamiltonian_rank),
                                                cfg.tolerances);
  std::optional<double> shift_residual;
  if (r.total_weak_symmetry) shift_residual = weak_shift_check(fv, cfg.hamiltonian, 0.7);

  Report rep;
  rep.body = Json{{"command", "symmetry"},
                  {"spin", spin_text(fv.spin())},
                  {"hamiltonian", cfg.hamiltonian.type_name()},
                  {"A0", r.A0},
                  {"a3_present", r.a3_present},
                  {"topological_weak_symmetry", r.topological_weak_symmetry},
                  {"hamiltonian_psi_invariant", r.hamiltonian_psi_invariant},
                  {"total_weak_symmetry", r.total_weak_symmetry},
                  {"H", subgroup_label(iso.H_subgroup)},
                  {"H0", subgroup_label(iso.H0_subgroup)},
                  {"isotropy_order", iso.order_checked},
                  {"weak_shift_residual", shift_residual ? Json(*shift_residual) : Json(nullptr)},
                  {"evidence",
                   {{"nearest_neighbor_coherence", r.evidence.nearest_neighbor_coherence},
                    {"max_coherence_within_rank", r.evidence.max_coherence_within_rank},
                    {"max_psi_deviation", r.evidence.max_psi_deviation},
                    {"hamiltonian_rank", r.evidence.hamiltonian_rank}}},
                  {"warnings", cfg.warnings}};
  std::vector<std::vector<std::string>> rows = {
      {"spin", spin_text(fv.spin())},
      {"hamiltonian", cfg.hamiltonian.type_name()},
      {"A0", rational_text(r.A0)},
      {"A3", r.a3_present ? "present" : "absent"},
      {"topological", yes_no(r.topological_weak_symmetry)},
      {"Hamiltonian", yes_no(r.hamiltonian_psi_invariant)},
      {"total", yes_no(r.total_weak_symmetry)},
      {"H", subgroup_label(iso.H_subgroup)},
      {"H0", subgroup_label(iso.H0_subgroup)}};
  rep.markdown = markdown_table({"field", "value"}, rows);
  rep.csv = csv_table({"field", "value"}, rows);
  return rep;
}

EvolveOutput cmd_evolve(const EvolveRequest& req) {
  const RunConfig& cfg = req.config;
  const DynamicsConfig& d = cfg.dynamics;
  std::optional<Verdict> expected;
  TrajectoryResult traj;
  std::string label;
  if (req.case_id) {
    const CaseParams p;
    const FiducialVector fv = case_fiducial(*req.case_id);
    const HamiltonianSpec h = NmrHamiltonian{p.mu_B, Vec3::UnitZ()};
    traj = compare_evolutions(fv, h, {0.0, p.theta0, p.psi0}, p.t_final, p.sample_dt, d.gauge,
                              cfg.integrator);
    expected = expected_case_verdict(*req.case_id, d.gauge);
    label = std::string("case_") + case_name(*req.case_id);
  } else {
    if (!cfg.fv) throw ConfigError("evolve needs --case or a config with a fiducial vector");
    traj = compare_evolutions(*cfg.fv, cfg.hamiltonian, d.omega0, d.t_final, d.sample_dt, d.gauge,
                              cfg.integrator);
    label = "custom";
  }

  EvolveOutput out;
  std::ostringstream csv;
  csv << kSamplesHeader << '\n';
  for (const TrajectorySample& s : traj.samples) {
    csv << fmt17(s.t) << ',' << fmt17(s.omega.phi) << ',' << fmt17(s.omega.theta) << ','
        << fmt17(s.omega.psi) << ',' << fmt17(s.fidelity) << ',' << fmt17(s.ray_distance) << '\n';
  }
  out.samples_csv = csv.str();

  Report& rep = out.report;
  const bool pass = !expected || *expected == traj.verdict;
  if (!pass) {
    rep.diffs.push_back(label + " verdict: expected " + verdict_name(*expected) + ", got " +
                        verdict_name(traj.verdict));
    rep.exit_code = kMismatch;
  }
  std::size_t deficient = 0;
  for (const TrajectorySample& s : traj.samples) deficient += s.rank_deficient ? 1 : 0;
  const EulerAngles& last = traj.samples.back().omega;
  rep.body = Json{{"command", "evolve"},
                  {"run", label},
                  {"gauge", d.gauge.name()},
                  {"samples", traj.samples.size()},
                  {"rank_deficient_samples", deficient},
                  {"final_omega", {last.phi, last.theta, last.psi}},
                  {"max_ray_distance", traj.max_ray_distance},
                  {"verdict", verdict_name(traj.verdict)},
                  {"expected_verdict", expected ? Json(verdict_name(*expected)) : Json(nullptr)},
                  {"pass", pass},
                  {"stats",
                   {{"accepted", traj.stats.accepted},
                    {"rejected", traj.stats.rejected},
                    {"pole_rejections", traj.stats.pole_rejections},
                    {"evaluations", traj.stats.evaluations}}},
                  {"warnings", cfg.warnings}};
  std::vector<std::vector<std::string>> rows = {
      {"run", label},
      {"gauge", d.gauge.name()},
      {"samples", std::to_string(traj.samples.size())},
      {"max_ray_distance", short_num(traj.max_ray_distance)},
      {"verdict", verdict_name(traj.verdict)},
      {"expected_verdict", expected ? verdict_name(*expected) : "-"}};
  rep.markdown = markdown_table({"field", "value"}, rows);
  rep.csv = out.samples_csv;
  return out;
}

namespace {

std::string render(const Report& rep, OutputFormat f) {
  switch (f) {
    case OutputFormat::Markdown: return rep.markdown;
    case OutputFormat::Csv: return rep.csv;
    default: return dump_json(rep.body);
  }
}

void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw ConfigError("cannot write '" + p.string() + "'");
  f << text;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Coherent states built on general fiducial vectors: symmetry tables, "
               "classification and semiclassical dynamics"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string output = "md";
  std::string out_dir;
  std::vector<std::string> tol_overrides;
  app.add_option("--output", output, "md, csv or json")->check(CLI::IsMember({"md", "csv", "json"}));
  app.add_option("--out-dir", out_dir, "Also write reports into this directory");
  app.add_option("--tol-override", tol_overrides, "KEY=VAL tolerance override (repeatable)");

  std::string config_path;
  std::string case_text;
  std::string gauge = "constant";
  double gauge_rate = 0.5;

  app.add_subcommand("table1", "Weak gauge symmetry table");
  app.add_subcommand("table2", "Isotropy subgroup table");
  auto* classify = app.add_subcommand("classify", "Classify a fiducial vector");
  classify->add_option("--config", config_path, "Run config (JSON)")->required();
  auto* symmetry = app.add_subcommand("symmetry", "Weak symmetry report for a config");
  symmetry->add_option("--config", config_path, "Run config (JSON)")->required();
  auto* evolve = app.add_subcommand("evolve", "Semiclassical vs full quantum evolution");
  auto* case_opt = evolve->add_option("--case", case_text, "i, ii or v")
                       ->check(CLI::IsMember({"i", "ii", "v"}));
  auto* config_opt = evolve->add_option("--config", config_path, "Run config (JSON)");
  case_opt->excludes(config_opt);
  evolve->add_option("--gauge", gauge, "constant or linear (with --case)")
      ->check(CLI::IsMember({"constant", "linear"}));
  evolve->add_option("--gauge-rate", gauge_rate, "psi rate for the linear gauge");

  std::vector<const char*> argv;
  argv.push_back("spinfv");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  const auto* sub = app.get_subcommands().front();
  const std::string name = sub->get_name();
  try {
    RunConfig cfg;
    if (!config_path.empty()) cfg = load_run_config(config_path);
    for (const auto& a : tol_overrides) apply_tolerance_override(cfg, a);
    OutputFormat fmt = *parse_output_format(output);
    if (cfg.output && app.get_option("--output")->count() == 0) fmt = *cfg.output;
    for (const auto& w : cfg.warnings) err << "warning: " << w << '\n';

    Report rep;
    std::string samples_csv;
    if (name == "table1") rep = cmd_table1();
    else if (name == "table2") rep = cmd_table2();
    else if (name == "classify") rep = cmd_classify(cfg);
    else if (name == "symmetry") rep = cmd_symmetry(cfg);
    else {
      EvolveRequest req;
      if (!case_text.empty()) {
        req.case_id = parse_case_id(case_text);
      } else if (config_path.empty()) {
        err << "error: evolve needs --case or --config\n";
        return kUsage;
      }
      if (req.case_id || evolve->get_option("--gauge")->count() > 0) {
        cfg.dynamics.gauge =
            gauge == "linear" ? GaugeProfile::linear(gauge_rate) : GaugeProfile::constant();
      }
      req.config = std::move(cfg);
      EvolveOutput eo = cmd_evolve(req);
      rep = std::move(eo.report);
      samples_csv = std::move(eo.samples_csv);
    }

    out << render(rep, fmt);
    if (!out_dir.empty()) {
      std::filesystem::create_directories(out_dir);
      const std::filesystem::path dir(out_dir);
      write_file(dir / (name + "." + output_format_name(fmt)), render(rep, fmt));
      if (name == "evolve") {
        write_file(dir / "evolve_samples.csv", samples_csv);
        write_file(dir / "evolve_summary.json", dump_json(rep.body));
      }
    }
    for (const auto& d : rep.diffs) err << "mismatch: " << d << '\n';
    return rep.exit_code;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kUsage;
  } catch (const IntegrationError& e) {
    err << "integration failed at t = " << fmt17(e.time()) << ": " << e.what() << '\n';
    return kNumerical;
  } catch (const NoSolutionError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  } catch (const InternalConsistencyError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  } catch (const UndefinedRatioError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
}

}  // namespace spinfv::cli
