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

#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gridsched/cli/commands.hpp"

namespace {

using gridsched::cli::RunConfig;
using gridsched::cli::ScenarioSource;
using gridsched::cli::SolverMode;

struct Flags {
  RunConfig cfg;
  std::string solver = "internal";
  std::string scenarios_csv;
  double penetration = -1.0;
  bool tie_pnr = false;
  bool untie_pnr = false;
  double tol = 0.0;
  std::vector<std::string> variants;
};

void add_case_flags(CLI::App* cmd, Flags& f) {
  cmd->add_option("case", f.cfg.case_path, "Case file (searched in GRIDSCHED_CASE_DIR)")
      ->required();
  cmd->add_option("--contingencies", f.cfg.contingencies, "all, none or a comma separated list");
  cmd->add_option("--contingency-limit", f.cfg.contingency_limit, "emergency or normal");
  cmd->add_flag("--tie-pnr", f.tie_pnr, "One PNR topology shared by all scenarios");
  cmd->add_flag("--untie-pnr", f.untie_pnr, "Independent PNR topology per scenario");
  cmd->add_option("--scenarios-csv", f.scenarios_csv, "Replace scenarios from a CSV file");
  cmd->add_option("--synthesize", f.penetration, "Synthesize scenarios at this penetration");
  cmd->add_option("--blocks", f.cfg.synthesis.blocks, "Synthesis: constant blocks per horizon");
  cmd->add_option("--seed", f.cfg.synthesis.seed, "Synthesis: random seed");
  cmd->add_option("--scenario-count", f.cfg.synthesis.count, "Synthesis: number of scenarios");
  cmd->add_option("-o,--out", f.cfg.out_dir, "Output directory")->capture_default_str();
}

void add_solve_flags(CLI::App* cmd, Flags& f, bool variant_flag) {
  add_case_flags(cmd, f);
  if (variant_flag) {
    cmd->add_option("-v,--variant", f.cfg.variant, "sscuc, sscuc-p, sscuc-c or sscuc-pc")
        ->capture_default_str();
  }
  cmd->add_option("--gap", f.cfg.gap, "Relative MIP gap target")->capture_default_str();
  cmd->add_option("--time-limit", f.cfg.time_limit_s, "Wall clock limit in seconds")
      ->capture_default_str();
  cmd->add_option("--tol", f.tol, "Checker tolerance");
  cmd->add_flag("--walltime-in-csv", f.cfg.walltime_in_csv,
                "Fill the walltime_s columns (makes CSVs run dependent)");
}

// Folds flag spellings into the RunConfig; returns false on a config error.
bool finish(Flags& f, bool solver_flags) {
  RunConfig& c = f.cfg;
  if (f.tie_pnr && f.untie_pnr) {
    std::cerr << "error: --tie-pnr and --untie-pnr are exclusive\n";
    return false;
  }
  if (f.tie_pnr) c.tie_pnr = true;
  if (f.untie_pnr) c.tie_pnr = false;
  if (!f.scenarios_csv.empty() && f.penetration >= 0) {
    std::cerr << "error: give at most one of --scenarios-csv and --synthesize\n";
    return false;
  }
  if (!f.scenarios_csv.empty()) {
    c.scenario_source = ScenarioSource::kCsv;
    c.scenario_csv = f.scenarios_csv;
  } else if (f.penetration >= 0) {
    c.scenario_source = ScenarioSource::kSynthesize;
    c.synthesis.penetration = f.penetration;
  }
  if (f.tol != 0.0) c.tol = f.tol;
  if (!solver_flags) return true;
  if (f.solver == "internal") {
    c.solver = SolverMode::kInternal;
  } else if (f.solver == "export_only") {
    c.solver = SolverMode::kExportOnly;
  } else if (f.solver == "import") {
    c.solver = SolverMode::kImport;
  } else {
    std::cerr << "error: --solver must be internal, export_only or import\n";
    return false;
  }
  if (c.solver != SolverMode::kImport && !c.solution_path.empty()) {
    std::cerr << "error: --solution only applies to --solver import\n";
    return false;
  }
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  namespace cli = gridsched::cli;
  CLI::App app{"Stochastic unit commitment with network reconfiguration"};
  app.require_subcommand(1);

  Flags f;
  auto* solve = app.add_subcommand("solve", "Build, solve, check and report one variant");
  add_solve_flags(solve, f, true);
  solve->add_option("--solver", f.solver, "internal, export_only or import")->capture_default_str();
  solve->add_option("--solution", f.cfg.solution_path, "Solution file for --solver import");

  auto* exp = app.add_subcommand("export", "Write model.mps and its alias map without solving");
  add_case_flags(exp, f);
  exp->add_option("-v,--variant", f.cfg.variant, "Variant")->capture_default_str();

  auto* check = app.add_subcommand("check", "Check a solution file against a case");
  add_case_flags(check, f);
  check->add_option("-v,--variant", f.cfg.variant, "Variant")->capture_default_str();
  check->add_option("--solution", f.cfg.solution_path, "Solution file")->required();
  check->add_option("--tol", f.tol, "Checker tolerance (default 1e-4)");

  auto* compare = app.add_subcommand("compare", "Solve several variants and check the cost chain");
  add_solve_flags(compare, f, false);
  compare->add_option("--variants", f.variants, "Variants to compare")
      ->delimiter(',')
      ->default_str("sscuc,sscuc-p,sscuc-c,sscuc-pc");

  auto* validate = app.add_subcommand("validate", "Lint a case file");
  validate->add_option("case", f.cfg.case_path, "Case file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : cli::kExitConfig;
  }

  if (*validate) return cli::cmd_validate(f.cfg, std::cout, std::cerr);
  if (*solve) {
    if (!finish(f, true)) return cli::kExitConfig;
    return cli::cmd_solve(f.cfg, std::cout, std::cerr);
  }
  if (*exp) {
    if (!finish(f, false)) return cli::kExitConfig;
    f.cfg.solver = SolverMode::kExportOnly;
    return cli::cmd_solve(f.cfg, std::cout, std::cerr);
  }
  if (*check) {
    if (!finish(f, false)) return cli::kExitConfig;
    return cli::cmd_check(f.cfg, std::cout, std::cerr);
  }
  if (!finish(f, false)) return cli::kExitConfig;
  if (f.variants.empty()) f.variants = {"sscuc", "sscuc-p", "sscuc-c", "sscuc-pc"};
  return cli::cmd_compare(f.cfg, f.variants, std::cout, std::cerr);
}
