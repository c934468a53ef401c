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

#include <gtest/gtest.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>
#include <string>

#include "gridsched/cli/commands.hpp"

namespace gridsched::cli {
namespace {

namespace fs = std::filesystem;

const fs::path kCases = GRIDSCHED_CASE_ROOT;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("gridsched_cli_" + std::to_string(getpid()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  RunConfig config(const std::string& case_name, const std::string& variant) {
    RunConfig cfg;
    cfg.case_path = (kCases / case_name).string();
    cfg.variant = variant;
    cfg.gap = 0.0;
    cfg.out_dir = (dir_ / "out").string();
    return cfg;
  }

  std::string read(const fs::path& p) { return grid::read_text_file(p); }

  void write(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

  fs::path dir_;
  std::ostringstream out_, err_;
};

TEST_F(CliTest, Fig1CorrectiveSwitchIsReported) {
  RunConfig cfg = config("fig1.case", "sscuc-c");
  ASSERT_EQ(cmd_solve(cfg, out_, err_), kExitOk) << err_.str();
  std::string sw = read(dir_ / "out" / "switching.csv");
  EXPECT_NE(sw.find("SSCUC-C,cnr,2,3,0,0\n"), std::string::npos) << sw;
  for (const char* f : {"costs.csv", "curtailment.csv", "soc.csv", "violations.csv", "report.txt",
                        "run.summary", "solution.sol"}) {
    EXPECT_TRUE(fs::exists(dir_ / "out" / f)) << f;
  }
  EXPECT_EQ(read(dir_ / "out" / "violations.csv"), "equation,coords,residual\n");
  std::string summary = read(dir_ / "out" / "run.summary");
  EXPECT_NE(summary.find("case_fingerprint"), std::string::npos);
  EXPECT_NE(summary.find("objective           2370"), std::string::npos) << summary;
}

TEST_F(CliTest, CostsCsvLeavesWalltimeBlankByDefault) {
  RunConfig cfg = config("fig1.case", "sscuc");
  ASSERT_EQ(cmd_solve(cfg, out_, err_), kExitOk);
  std::string costs = read(dir_ / "out" / "costs.csv");
  EXPECT_EQ(costs.substr(0, costs.find('\n')), "variant,total,no_load,start_up,energy,gap,walltime_s");
  EXPECT_EQ(costs.back(), '\n');
  EXPECT_EQ(costs[costs.size() - 2], ',');
  cfg.walltime_in_csv = true;
  ASSERT_EQ(cmd_solve(cfg, out_, err_), kExitOk);
  costs = read(dir_ / "out" / "costs.csv");
  EXPECT_NE(costs[costs.size() - 2], ',');
}

TEST_F(CliTest, ExportOnlyWritesModelWithoutSolving) {
  RunConfig cfg = config("rts24.case", "sscuc-pc");
  cfg.solver = SolverMode::kExportOnly;
  ASSERT_EQ(cmd_solve(cfg, out_, err_), kExitOk) << err_.str();
  EXPECT_TRUE(fs::exists(dir_ / "out" / "model.mps"));
  EXPECT_TRUE(fs::exists(dir_ / "out" / "model.aliases"));
  EXPECT_FALSE(fs::exists(dir_ / "out" / "costs.csv"));
  EXPECT_NE(read(dir_ / "out" / "run.summary").find("seed                2020"), std::string::npos);
}

TEST_F(CliTest, ConfigErrorsExit64) {
  RunConfig cfg = config("fig1.case", "sscuc");
  cfg.gap = -0.1;
  EXPECT_EQ(cmd_solve(cfg, out_, err_), kExitConfig);
  cfg = config("fig1.case", "sscuc-x");
  EXPECT_EQ(cmd_solve(cfg, out_, err_), kExitConfig);
  cfg = config("no_such.case", "sscuc");
  EXPECT_EQ(cmd_solve(cfg, out_, err_), kExitConfig);
  cfg = config("fig1.case", "sscuc");
  cfg.contingencies = "3,x";
  EXPECT_EQ(cmd_solve(cfg, out_, err_), kExitConfig);
  cfg.contingencies = "99";
  EXPECT_EQ(cmd_solve(cfg, out_, err_), kExitConfig);
  cfg = config("fig1.case", "sscuc");
  cfg.solver = SolverMode::kImport;
  EXPECT_EQ(cmd_solve(cfg, out_, err_), kExitConfig);
}

TEST_F(CliTest, CheckAcceptsOwnSolutionAndFlagsSocExcursion) {
  RunConfig cfg = config("sixbus.case", "sscuc");
  ASSERT_EQ(cmd_solve(cfg, out_, err_), kExitOk) << err_.str();
  RunConfig chk = cfg;
  chk.solution_path = (dir_ / "out" / "solution.sol").string();
  chk.out_dir = (dir_ / "chk").string();
  EXPECT_EQ(cmd_check(chk, out_, err_), kExitOk);

  // Push one energy level above the 90 MWh ceiling.
  std::string sol = read(dir_ / "out" / "solution.sol");
  sol = std::regex_replace(sol, std::regex("\nE/e=1/t=1/s=0 [^\n]*"), "\nE/e=1/t=1/s=0 95");
  write(dir_ / "bad.sol", sol);
  chk.solution_path = (dir_ / "bad.sol").string();
  EXPECT_EQ(cmd_check(chk, out_, err_), kExitCheckFailed);
  EXPECT_NE(read(dir_ / "chk" / "violations.csv").find("eq17,e=1/t=1/s=0,"), std::string::npos);
}

TEST_F(CliTest, EmptySolutionDefaultsToLowerBoundsAndFails) {
  RunConfig cfg = config("sixbus.case", "sscuc-pc");
  write(dir_ / "empty.sol", "");
  cfg.solution_path = (dir_ / "empty.sol").string();
  EXPECT_EQ(cmd_check(cfg, out_, err_), kExitCheckFailed);
  std::string v = read(dir_ / "out" / "violations.csv");
  EXPECT_GT(std::count(v.begin(), v.end(), '\n'), 50);
}

TEST_F(CliTest, UnknownVariableExits65) {
  RunConfig cfg = config("fig1.case", "sscuc");
  write(dir_ / "unknown.sol", "P/g=9/t=0/s=0 1\n");
  cfg.solution_path = (dir_ / "unknown.sol").string();
  EXPECT_EQ(cmd_check(cfg, out_, err_), kExitUnknownVariable);
  cfg.solver = SolverMode::kImport;
  EXPECT_EQ(cmd_solve(cfg, out_, err_), kExitUnknownVariable);
}

TEST_F(CliTest, ImportedSolutionIsCheckedAndReported) {
  RunConfig cfg = config("fig1.case", "sscuc-pc");
  ASSERT_EQ(cmd_solve(cfg, out_, err_), kExitOk);
  std::string first = read(dir_ / "out" / "switching.csv");
  RunConfig imp = cfg;
  imp.solver = SolverMode::kImport;
  imp.solution_path = (dir_ / "sol.sol").string();
  fs::copy_file(dir_ / "out" / "solution.sol", imp.solution_path);
  imp.out_dir = (dir_ / "imp").string();
  ASSERT_EQ(cmd_solve(imp, out_, err_), kExitOk) << err_.str();
  EXPECT_EQ(read(dir_ / "imp" / "switching.csv"), first);
  EXPECT_NE(read(dir_ / "imp" / "run.summary").find("check_tol           1e-04"),
            std::string::npos);
}

TEST_F(CliTest, CompareRunsEachVariantAndChecksTheChain) {
  RunConfig cfg = config("sixbus.case", "");
  EXPECT_EQ(cmd_compare(cfg, {"sscuc", "sscuc-p", "sscuc-c", "sscuc-pc"}, out_, err_), kExitOk)
      << err_.str();
  std::string table = read(dir_ / "out" / "comparison.csv");
  EXPECT_EQ(std::count(table.begin(), table.end(), '\n'), 5);
  EXPECT_TRUE(fs::exists(dir_ / "out" / "sscuc-pc" / "costs.csv"));
  EXPECT_NE(out_.str().find("chain verdict pass"), std::string::npos);
  EXPECT_EQ(cmd_compare(cfg, {"sscuc"}, out_, err_), kExitConfig);
}

TEST_F(CliTest, CompareStopsOnMemberFailureAndHonoursOverrides) {
  // Member failures propagate: an invalid variant stops the comparison.
  RunConfig cfg = config("fig1.case", "");
  EXPECT_EQ(cmd_compare(cfg, {"sscuc", "bogus"}, out_, err_), kExitConfig);
  cfg.contingency_limit = "normal";
  EXPECT_EQ(cmd_compare(cfg, {"sscuc", "sscuc-c"}, out_, err_), kExitOk) << err_.str();
}

TEST_F(CliTest, FlagsOverrideCaseOptions) {
  RunConfig cfg = config("sixbus.case", "sscuc-p");
  cfg.contingencies = "none";
  cfg.tie_pnr = true;
  cfg.contingency_limit = "normal";
  ASSERT_EQ(cmd_solve(cfg, out_, err_), kExitOk) << err_.str();
  std::string s = read(dir_ / "out" / "run.summary");
  EXPECT_NE(s.find("contingencies       none"), std::string::npos) << s;
  EXPECT_NE(s.find("tie_pnr             true"), std::string::npos);
  EXPECT_NE(s.find("contingency_limit   normal"), std::string::npos);
}

TEST_F(CliTest, SynthesizedScenariosRecordTheirSeed) {
  RunConfig cfg = config("sixbus.case", "sscuc");
  cfg.scenario_source = ScenarioSource::kSynthesize;
  cfg.synthesis = {0.3, 3, 77, 2};
  ASSERT_EQ(cmd_solve(cfg, out_, err_), kExitOk) << err_.str();
  std::string s = read(dir_ / "out" / "run.summary");
  EXPECT_NE(s.find("seed                77"), std::string::npos) << s;
  EXPECT_NE(s.find("scenarios           synthesize penetration=0.3"), std::string::npos);
  cfg.synthesis.blocks = 2;  // does not divide the horizon
  EXPECT_EQ(cmd_solve(cfg, out_, err_), kExitConfig);
}

TEST_F(CliTest, ScenarioCsvReplacesEmbeddedScenarios) {
  write(dir_ / "sc.csv",
        "scenario,unit,period,capacity_mw\n0,1,0,10\n0,1,1,10\n0,1,2,10\n");
  RunConfig cfg = config("sixbus.case", "sscuc");
  cfg.scenario_source = ScenarioSource::kCsv;
  cfg.scenario_csv = (dir_ / "sc.csv").string();
  ASSERT_EQ(cmd_solve(cfg, out_, err_), kExitOk) << err_.str();
  EXPECT_EQ(read(dir_ / "out" / "curtailment.csv"), "variant,scenario,mw\nSSCUC,0,0\n");
}

TEST_F(CliTest, CaseDirectoryEnvironmentSearch) {
  setenv("GRIDSCHED_CASE_DIR", ("/nonexistent:" + kCases.string()).c_str(), 1);
  EXPECT_EQ(resolve_case_path("fig1.case"), kCases / "fig1.case");
  unsetenv("GRIDSCHED_CASE_DIR");
  EXPECT_THROW(resolve_case_path("fig1.case"), ConfigError);
}

TEST_F(CliTest, ValidateReportsTotalsAndDefects) {
  RunConfig cfg;
  cfg.case_path = (kCases / "rts24.case").string();
  EXPECT_EQ(cmd_validate(cfg, out_, err_), kExitOk);
  EXPECT_NE(out_.str().find("generation capacity 3393.000 MW"), std::string::npos);
  EXPECT_NE(out_.str().find("peak demand         2270.000 MW"), std::string::npos);
  write(dir_ / "bad.case",
        "format_version: 1\nhorizon: 1\nreference_bus: 1\nbuses:\n  - {id: 1, demand: [5]}\n"
        "generators:\n  - {id: 1, bus: 1, pmax: 10, cost: 1}\n"
        "ess:\n  - {id: 1, bus: 1, p_charge_max: 1, p_discharge_max: 1, energy_max: 1, "
        "soc_min: 0.9, soc_max: 0.2, init_energy: 0.5}\n");
  cfg.case_path = (dir_ / "bad.case").string();
  EXPECT_EQ(cmd_validate(cfg, out_, err_), kExitConfig);
  EXPECT_NE(err_.str().find("soc bounds inverted"), std::string::npos) << err_.str();
}

int run_binary(const std::string& args) {
  int status = std::system((std::string(GRIDSCHED_CLI_BINARY) + " " + args + " >/dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

TEST_F(CliTest, BinaryMapsArgumentErrorsTo64) {
  EXPECT_EQ(run_binary("solve --variant sscuc --gap -0.1"), kExitConfig);
  EXPECT_EQ(run_binary("solve " + (kCases / "fig1.case").string() + " --gap -0.1"), kExitConfig);
  EXPECT_EQ(run_binary("frobnicate"), kExitConfig);
  EXPECT_EQ(run_binary("--help"), kExitOk);
  EXPECT_EQ(run_binary("validate " + (kCases / "fig1.case").string()), kExitOk);
  EXPECT_EQ(run_binary("solve " + (kCases / "fig1.case").string() + " --scenarios-csv a.csv " +
                       "--synthesize 0.3"),
            kExitConfig);
}

TEST_F(CliTest, BinarySolvesFig1) {
  EXPECT_EQ(run_binary("solve " + (kCases / "fig1.case").string() + " -v sscuc-c --gap 0 -o " +
                       (dir_ / "bin").string()),
            kExitOk);
  EXPECT_NE(read(dir_ / "bin" / "switching.csv").find("cnr,2,3"), std::string::npos);
}

}  // namespace
}  // namespace gridsched::cli
