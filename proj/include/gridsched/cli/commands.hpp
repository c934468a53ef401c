// Copyright 2026 The gridsched Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef GRIDSCHED_CLI_COMMANDS_HPP_
#define GRIDSCHED_CLI_COMMANDS_HPP_

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "gridsched/analysis/checker.hpp"
#include "gridsched/analysis/csv.hpp"
#include "gridsched/analysis/reports.hpp"
#include "gridsched/formulation/build.hpp"
#include "gridsched/grid/case_io.hpp"
#include "gridsched/grid/contingency.hpp"
#include "gridsched/grid/scenarios.hpp"
#include "gridsched/grid/validate.hpp"
#include "gridsched/milp/mps_writer.hpp"
#include "gridsched/solver/branch_and_bound.hpp"
#include "gridsched/solver/solution_file.hpp"

// Workflow behind the command-line tool. Every command returns a process
// exit code and writes its artifacts into the configured output directory.

namespace gridsched::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitChainFailed = 1,
  kExitInfeasible = 2,
  kExitTimeout = 3,
  kExitCheckFailed = 4,
  kExitConfig = 64,
  kExitUnknownVariable = 65,
};

inline constexpr double kInternalCheckTol = 1e-6;
inline constexpr double kImportCheckTol = 1e-4;

enum class SolverMode { kInternal, kExportOnly, kImport };
enum class ScenarioSource { kEmbedded, kCsv, kSynthesize };

struct RunConfig {
  std::string case_path;
  std::string variant = "sscuc";
  double gap = 0.01;
  double time_limit_s = 2500.0;
  std::optional<std::string> contingencies;  // "all", "none" or "3,7,12"
  std::optional<std::string> contingency_limit;
  std::optional<bool> tie_pnr;
  ScenarioSource scenario_source = ScenarioSource::kEmbedded;
  std::string scenario_csv;
  grid::SynthesisSpec synthesis;
  SolverMode solver = SolverMode::kInternal;
  std::string solution_path;
  std::string out_dir = "out";
  std::optional<double> tol;
  bool walltime_in_csv = false;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline const char* to_string(SolverMode m) {
  switch (m) {
    case SolverMode::kInternal: return "internal";
    case SolverMode::kExportOnly: return "export_only";
    case SolverMode::kImport: return "import";
  }
  return "?";
}

/// Existing paths are used as given; otherwise relative paths are looked up
/// in each directory of GRIDSCHED_CASE_DIR (colon separated).
inline std::filesystem::path resolve_case_path(const std::string& path) {
  namespace fs = std::filesystem;
  if (path.empty()) throw ConfigError("no case file given");
  fs::path p(path);
  if (fs::exists(p)) return p;
  if (p.is_relative()) {
    if (const char* env = std::getenv("GRIDSCHED_CASE_DIR")) {
      std::stringstream dirs(env);
      std::string dir;
      while (std::getline(dirs, dir, ':')) {
        if (!dir.empty() && fs::exists(fs::path(dir) / p)) return fs::path(dir) / p;
      }
    }
  }
  throw ConfigError("case file not found: " + path);
}

inline grid::ContingencyPolicy parse_contingency_policy(const std::string& text) {
  grid::ContingencyPolicy p;
  if (text == "all") return p;
  if (text == "none") {
    p.kind = grid::ContingencyPolicyKind::kNone;
    return p;
  }
  p.kind = grid::ContingencyPolicyKind::kExplicit;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    std::size_t used = 0;
    int id = 0;
    try {
      id = std::stoi(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) {
      throw ConfigError("contingencies: expected all, none or a comma separated id list");
    }
    p.lines.push_back(id);
  }
  return p;
}

inline void check_config(const RunConfig& cfg) {
  if (!(cfg.gap >= 0.0 && cfg.gap <= 1.0)) throw ConfigError("gap must lie in [0, 1]");
  if (!(cfg.time_limit_s > 0.0)) throw ConfigError("time limit must be positive");
  if (!formulation::parse_variant(cfg.variant)) {
    throw ConfigError("unknown variant '" + cfg.variant + "'");
  }
  if (cfg.solver == SolverMode::kImport && cfg.solution_path.empty()) {
    throw ConfigError("import mode needs a solution file");
  }
  if (cfg.tol && !(*cfg.tol > 0.0)) throw ConfigError("tolerance must be positive");
}

/// Loads the case and applies command-line overrides. Defects found by
/// validation are configuration errors.
inline grid::Case load_configured_case(const RunConfig& cfg) {
  grid::Case c;
  try {
    c = grid::load_case_file(resolve_case_path(cfg.case_path));
  } catch (const grid::CaseError& e) {
    std::string msg = "case file rejected:";
    for (const auto& m : e.errors()) msg += "\n  " + m;
    throw ConfigError(msg);
  } catch (const std::runtime_error& e) {
    throw ConfigError(e.what());
  }
  if (cfg.contingencies) c.options.contingencies = parse_contingency_policy(*cfg.contingencies);
  if (cfg.contingency_limit) {
    if (*cfg.contingency_limit == "emergency") {
      c.options.contingency_limit = grid::ContingencyLimit::kEmergency;
    } else if (*cfg.contingency_limit == "normal") {
      c.options.contingency_limit = grid::ContingencyLimit::kNormal;
    } else {
      throw ConfigError("contingency limit must be emergency or normal");
    }
  }
  if (cfg.tie_pnr) c.options.tie_pnr_across_scenarios = *cfg.tie_pnr;
  if (cfg.scenario_source == ScenarioSource::kCsv) {
    std::vector<std::string> errors;
    try {
      c.scenarios = grid::parse_scenario_csv(grid::read_text_file(cfg.scenario_csv), c,
                                                     {}, errors);
    } catch (const std::runtime_error& e) {
      errors.push_back(e.what());
    }
    if (!errors.empty()) throw ConfigError("scenario csv rejected: " + errors.front());
  } else if (cfg.scenario_source == ScenarioSource::kSynthesize) {
    try {
      c.scenarios = grid::synthesize_scenarios(c, cfg.synthesis);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("scenario synthesis: ") + e.what());
    }
  }
  grid::ValidationReport rep = grid::validate_case(c);
  if (!rep.ok()) {
    std::string msg = "case is invalid:";
    for (const auto& d : rep.defects) msg += "\n  " + d;
    throw ConfigError(msg);
  }
  return c;
}

inline void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  f << text;
  if (!f) throw ConfigError("cannot write " + path.string());
}

inline std::filesystem::path prepare_out_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) {
    throw ConfigError("cannot create output directory " + dir);
  }
  return dir;
}

inline std::string utc_timestamp() {
  std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

/// Key/value echo of the effective configuration.
class Summary {
 public:
  void add(const std::string& key, const std::string& value) {
    text_ += key;
    text_.append(key.size() < 20 ? 20 - key.size() : 1, ' ');
    text_ += value + "\n";
  }
  void add(const std::string& key, double value) {
    add(key, std::isnan(value) ? std::string("n/a") : analysis::csv_number(value));
  }
  const std::string& text() const { return text_; }

 private:
  std::string text_;
};

inline std::string scenario_source_text(const RunConfig& cfg) {
  switch (cfg.scenario_source) {
    case ScenarioSource::kEmbedded: return "embedded";
    case ScenarioSource::kCsv: return "csv " + cfg.scenario_csv;
    case ScenarioSource::kSynthesize:
      return "synthesize penetration=" + analysis::csv_number(cfg.synthesis.penetration) +
             " blocks=" + std::to_string(cfg.synthesis.blocks) +
             " count=" + std::to_string(cfg.synthesis.count);
  }
  return "?";
}

inline std::string id_list(const std::vector<int>& ids) {
  if (ids.empty()) return "none";
  std::string s;
  for (int id : ids) s += (s.empty() ? "" : ",") + std::to_string(id);
  return s;
}

inline Summary effective_config(const RunConfig& cfg, const grid::Case& c,
                                const formulation::BuiltModel& b, double tol) {
  Summary s;
  s.add("timestamp", utc_timestamp());
  s.add("case", cfg.case_path);
  s.add("case_fingerprint", analysis::case_fingerprint(c));
  s.add("variant", formulation::variant_name(b.variant));
  s.add("solver", to_string(cfg.solver));
  s.add("gap_target", cfg.gap);
  s.add("time_limit_s", cfg.time_limit_s);
  s.add("contingencies", id_list(b.contingencies));
  s.add("contingency_limit",
        c.options.contingency_limit == grid::ContingencyLimit::kEmergency ? "emergency" : "normal");
  s.add("tie_pnr", c.options.tie_pnr_across_scenarios ? "true" : "false");
  s.add("theta_cap_rad", c.options.theta_cap_rad);
  s.add("scenarios", scenario_source_text(cfg));
  s.add("scenario_count", std::to_string(c.scenarios.count()));
  s.add("seed", c.scenarios.seed ? std::to_string(*c.scenarios.seed) : std::string("none"));
  s.add("check_tol", tol);
  s.add("columns", std::to_string(b.model.num_cols()));
  s.add("rows", std::to_string(b.model.num_rows()));
  return s;
}

inline analysis::CheckOptions check_scope(const formulation::BuiltModel& b, double tol) {
  return {b.variant.pnr_enabled, b.variant.cnr_enabled, b.contingencies, tol};
}

struct Loaded {
  grid::Case c;
  formulation::BuiltModel built;
};

inline Loaded load_and_build(const RunConfig& cfg) {
  check_config(cfg);
  grid::Case c = load_configured_case(cfg);
  formulation::Variant v = *formulation::parse_variant(cfg.variant);
  std::vector<int> cont;
  try {
    cont = grid::contingency_list(c).lines;
  } catch (const grid::ContingencyError& e) {
    throw ConfigError(e.what());
  }
  formulation::BuiltModel b = formulation::build(c, v, cont);
  return {std::move(c), std::move(b)};
}

/// Solve, check and report one variant. `report_out` receives the schedule
/// when the run succeeds.
inline int run_solve(const RunConfig& cfg, std::ostream& out, std::ostream& err,
                     analysis::ScheduleReport* report_out = nullptr) {
  namespace fs = std::filesystem;
  try {
    Loaded L = load_and_build(cfg);
    fs::path dir = prepare_out_dir(cfg.out_dir);
    const double tol =
        cfg.tol.value_or(cfg.solver == SolverMode::kImport ? kImportCheckTol : kInternalCheckTol);
    Summary summary = effective_config(cfg, L.c, L.built, tol);

    if (cfg.solver == SolverMode::kExportOnly) {
      milp::ProblemFile pf = milp::write_problem_file(L.built.model);
      write_file(dir / "model.mps", pf.mps);
      write_file(dir / "model.aliases", pf.aliases);
      summary.add("status", "exported");
      write_file(dir / "run.summary", summary.text());
      out << "exported " << L.built.model.num_cols() << " columns, " << L.built.model.num_rows()
          << " rows to " << (dir / "model.mps").string() << "\n";
      return kExitOk;
    }

    std::vector<double> x;
    double objective = 0.0;
    double gap = std::nan("");
    double walltime = std::nan("");
    if (cfg.solver == SolverMode::kInternal) {
      solver::MipOptions opts;
      opts.gap_target = cfg.gap;
      opts.time_limit = cfg.time_limit_s;
      solver::MipResult r = solver::solve_mip(L.built.model, opts);
      summary.add("status", solver::to_string(r.status));
      summary.add("walltime_s", r.walltime_s);
      summary.add("nodes", std::to_string(r.nodes_explored));
      if (!r.has_solution()) {
        write_file(dir / "run.summary", summary.text());
        out << "status " << solver::to_string(r.status) << "\n";
        return r.status == solver::MipStatus::kInfeasible ? kExitInfeasible : kExitTimeout;
      }
      x = std::move(r.assignment);
      objective = r.objective;
      gap = r.gap;
      walltime = r.walltime_s;
    } else {
      solver::ParsedSolution ps =
          solver::parse_solution_file(grid::read_text_file(cfg.solution_path), L.built.model);
      x = std::move(ps.assignment);
      objective = milp::evaluate(L.built.model, x).objective;
      summary.add("status", "imported");
      summary.add("solution", cfg.solution_path);
      summary.add("defaulted_columns", std::to_string(ps.log.size()));
    }

    analysis::ScheduleReport rep = analysis::make_report(
        L.c, formulation::variant_name(L.built.variant), analysis::to_assignment(L.built.model, x),
        check_scope(L.built, tol), objective, gap, walltime);
    summary.add("objective", objective);
    summary.add("gap", gap);
    summary.add("violations", std::to_string(rep.violations.size()));
    summary.add("max_balance_residual", rep.max_balance_residual);
    write_file(dir / "violations.csv", analysis::violations_csv(rep.violations));
    write_file(dir / "run.summary", summary.text());
    if (!rep.violations.empty()) {
      err << "checker rejected the solution: " << rep.violations.size() << " violation(s), first "
          << rep.violations.front().equation << " " << rep.violations.front().coords << "\n";
      return kExitCheckFailed;
    }
    std::vector<analysis::ScheduleReport> one{rep};
    write_file(dir / "costs.csv", analysis::costs_csv(one, cfg.walltime_in_csv));
    write_file(dir / "curtailment.csv", analysis::curtailment_csv(one));
    write_file(dir / "soc.csv", analysis::soc_csv(one));
    write_file(dir / "switching.csv", analysis::switching_csv(one));
    write_file(dir / "report.txt", analysis::render_text(rep));
    write_file(dir / "solution.sol", solver::write_solution_file(L.built.model, x));
    out << rep.variant << " objective " << analysis::csv_number(objective) << ", checked, "
        << "reports in " << dir.string() << "\n";
    if (report_out) *report_out = std::move(rep);
    return kExitOk;
  } catch (const solver::UnknownVariableError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUnknownVariable;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const solver::SolutionFileError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::runtime_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }
}

inline int cmd_solve(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return run_solve(cfg, out, err);
}

/// Checks a solution file without solving; writes violations.csv.
inline int cmd_check(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    if (cfg.solution_path.empty()) throw ConfigError("check needs a solution file");
    Loaded L = load_and_build(cfg);
    std::filesystem::path dir = prepare_out_dir(cfg.out_dir);
    solver::ParsedSolution ps =
        solver::parse_solution_file(grid::read_text_file(cfg.solution_path), L.built.model);
    const double tol = cfg.tol.value_or(kImportCheckTol);
    analysis::CheckResult r = analysis::check_feasibility(
        L.c, analysis::to_assignment(L.built.model, ps.assignment), check_scope(L.built, tol));
    write_file(dir / "violations.csv", analysis::violations_csv(r.violations));
    out << r.violations.size() << " violation(s) at tolerance " << analysis::csv_number(tol)
        << ", " << ps.log.size() << " column(s) defaulted to their lower bound\n";
    return r.feasible() ? kExitOk : kExitCheckFailed;
  } catch (const solver::UnknownVariableError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUnknownVariable;
  } catch (const std::runtime_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }
}

inline std::string lower(std::string s) {
  for (char& ch : s) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  return s;
}

/// Runs each variant into its own subdirectory and checks the relaxation
/// chain across them.
inline int cmd_compare(const RunConfig& base, const std::vector<std::string>& variants,
                       std::ostream& out, std::ostream& err) {
  if (variants.size() < 2) {
    err << "error: compare needs at least two variants\n";
    return kExitConfig;
  }
  std::vector<analysis::ScheduleReport> reports;
  for (const auto& v : variants) {
    RunConfig cfg = base;
    cfg.variant = v;
    cfg.out_dir = (std::filesystem::path(base.out_dir) / lower(v)).string();
    analysis::ScheduleReport rep;
    int code = run_solve(cfg, out, err, &rep);
    if (code != kExitOk) return code;
    reports.push_back(std::move(rep));
  }
  analysis::Comparison cmp = analysis::compare_variants(reports);
  std::string text = "variant    total        gap        walltime_s  curtailment_mw\n";
  char buf[160];
  for (const auto& r : reports) {
    std::snprintf(buf, sizeof buf, "%-10s %-12.2f %-10.4g %-11.2f %.2f\n", r.variant.c_str(),
                  r.cost.total, r.gap, r.walltime_s, r.curtailment.average_mw);
    text += buf;
  }
  for (const auto& ch : cmp.checks) {
    std::snprintf(buf, sizeof buf, "%-8s <= %-8s  %.6g <= %.6g + %.3g  %s\n", ch.richer.c_str(),
                  ch.poorer.c_str(), ch.richer_cost, ch.poorer_cost, ch.slack,
                  ch.holds ? "holds" : "VIOLATED");
    text += buf;
  }
  text += std::string("chain verdict ") + (cmp.verdict ? "pass" : "fail") + "\n";
  try {
    write_file(std::filesystem::path(base.out_dir) / "comparison.csv",
               analysis::comparison_csv(reports, base.walltime_in_csv));
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  out << text;
  return cmp.verdict ? kExitOk : kExitChainFailed;
}

inline std::string fixed3(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

/// Case lint: prints sizes and capacity figures, lists every defect.
inline int cmd_validate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  grid::Case c;
  try {
    c = grid::load_case_file(resolve_case_path(cfg.case_path));
  } catch (const grid::CaseError& e) {
    for (const auto& m : e.errors()) err << "error: " << m << "\n";
    return kExitConfig;
  } catch (const std::runtime_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  grid::ValidationReport rep = grid::validate_case(c);
  out << "case                " << c.name << "\n"
      << "buses               " << c.buses.size() << "\n"
      << "lines               " << c.lines.size() << "\n"
      << "generators          " << c.generators.size() << "\n"
      << "ess units           " << c.ess_units.size() << "\n"
      << "res units           " << c.res_units.size() << "\n"
      << "periods             " << c.horizon << "\n"
      << "scenarios           " << c.scenarios.count() << "\n"
      << "generation capacity " << fixed3(rep.generation_capacity_mw) << " MW\n"
      << "peak demand         " << fixed3(rep.peak_demand_mw) << " MW\n";
  if (c.scenarios.count() > 0 && !c.res_units.empty() && rep.ok()) {
    out << "res penetration     " << fixed3(grid::expected_penetration(c, c.scenarios)) << "\n";
  }
  if (rep.ok()) {
    try {
      grid::ContingencyList cl = grid::contingency_list(c);
      out << "contingencies       " << id_list(cl.lines) << "\n"
          << "bridges excluded    " << id_list(cl.bridges) << "\n";
    } catch (const grid::ContingencyError& e) {
      rep.defects.push_back(e.what());
    }
  }
  for (const auto& d : rep.defects) err << "defect: " << d << "\n";
  out << (rep.defects.empty() ? "valid\n" : "invalid\n");
  return rep.defects.empty() ? kExitOk : kExitConfig;
}

}  // namespace gridsched::cli

#endif  // GRIDSCHED_CLI_COMMANDS_HPP_
