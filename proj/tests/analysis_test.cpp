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

#include <filesystem>
#include <algorithm>
#include <map>
#include <set>

#include "gridsched/analysis/checker.hpp"
#include "gridsched/analysis/reports.hpp"
#include "gridsched/formulation/build.hpp"
#include "gridsched/grid/case_io.hpp"
#include "gridsched/solver/branch_and_bound.hpp"

namespace gridsched::analysis {
namespace {

using formulation::Variant;

const std::filesystem::path kCases = GRIDSCHED_CASE_ROOT;

grid::Case fixture(const char* name) { return grid::load_case_file(kCases / name); }

CheckOptions scope_of(const formulation::BuiltModel& b) {
  return {b.variant.pnr_enabled, b.variant.cnr_enabled, b.contingencies, 1e-6};
}

struct Solved {
  formulation::BuiltModel built;
  solver::MipResult result;
  Assignment assignment;
};

Solved solve(const grid::Case& c, Variant v) {
  Solved s{formulation::build(c, v), {}, {}};
  solver::MipOptions opts;
  opts.gap_target = 0.0;
  s.result = solver::solve_mip(s.built.model, opts);
  EXPECT_EQ(s.result.status, solver::MipStatus::kOptimal);
  s.assignment = to_assignment(s.built.model, s.result.assignment);
  return s;
}

// Single generator, one bus, one scenario, flat 100 MW demand.
grid::Case one_unit_case() {
  grid::Case c;
  c.name = "one-unit";
  c.reference_bus = 1;
  c.horizon = 24;
  c.buses.push_back({1, std::vector<double>(24, 100.0)});
  grid::Generator g;
  g.id = 1;
  g.bus = 1;
  g.p_max_mw = 150;
  g.cost_per_mwh = 20;
  g.no_load_cost = 10;
  g.startup_cost = 500;
  g.ramp_hourly_mw = g.ramp_10min_mw = g.ramp_startup_mw = g.ramp_shutdown_mw = 150;
  c.generators.push_back(g);
  c.scenarios.probability = {1.0};
  c.scenarios.capacity_mw = {{}};
  return c;
}

TEST(CheckerTest, SolverOptimaCheckCleanForEveryVariant) {
  for (const char* name : {"fig1.case", "sixbus.case"}) {
    grid::Case c = fixture(name);
    for (Variant v : formulation::kAllVariants) {
      Solved s = solve(c, v);
      CheckResult r = check_feasibility(c, s.assignment, scope_of(s.built));
      EXPECT_TRUE(r.feasible()) << name << " " << formulation::variant_name(v) << ": "
                                << (r.violations.empty() ? "" : r.violations.front().equation);
      EXPECT_LT(r.max_balance_residual, 1e-6);
      // The objective restated from the assignment matches the solver.
      EXPECT_NEAR(cost_breakdown(c, s.assignment).total, s.result.objective,
                  1e-6 * std::max(1.0, s.result.objective));
    }
  }
}

TEST(CheckerTest, DecommittingARunningUnitIsCaught) {
  grid::Case c = fixture("fig1.case");
  Solved s = solve(c, formulation::kSscuc);
  ASSERT_GT(s.assignment.at("u/g=1/t=0"), 0.5);
  s.assignment["u/g=1/t=0"] = 0.0;
  CheckResult r = check_feasibility(c, s.assignment, scope_of(s.built));
  ASSERT_FALSE(r.feasible());
  std::set<std::string> eqs;
  for (const auto& v : r.violations) eqs.insert(v.equation);
  std::string all;
  for (const auto& e : eqs) all += e + " ";
  EXPECT_TRUE(eqs.count("eq3")) << all;  // dispatch plus reserve above u * pmax
}

TEST(CheckerTest, FractionalBinaryIsAnIntegralityViolation) {
  grid::Case c = fixture("fig1.case");
  Solved s = solve(c, formulation::kSscucP);
  s.assignment["zp/k=1/t=0/s=0"] = 0.5;
  CheckResult r = check_feasibility(c, s.assignment, scope_of(s.built));
  bool found = false;
  for (const auto& v : r.violations) found |= v.equation == "integrality";
  EXPECT_TRUE(found);
}

TEST(CheckerTest, AgreesWithModelEvaluationOnPerturbedFlows) {
  grid::Case c = fixture("sixbus.case");
  Solved s = solve(c, formulation::kSscucC);
  std::vector<double> x = s.result.assignment;
  int col = s.built.index.at(formulation::Family::kFlow, {4, 1, 0, 0}).value();
  x[col] += 5.0;
  milp::Evaluation ev = milp::evaluate(s.built.model, x);
  CheckResult r = check_feasibility(c, to_assignment(s.built.model, x), scope_of(s.built));
  EXPECT_FALSE(ev.violations.empty());
  EXPECT_FALSE(r.feasible());
  EXPECT_GT(r.max_balance_residual, 1.0);
}

TEST(CheckerTest, MissingVariablesAreListed) {
  grid::Case c = fixture("fig1.case");
  Solved s = solve(c, formulation::kSscuc);
  s.assignment.erase("P/g=2/t=0/s=0");
  try {
    check_feasibility(c, s.assignment, scope_of(s.built));
    FAIL() << "expected MissingVariables";
  } catch (const MissingVariables& e) {
    ASSERT_EQ(e.names().size(), 1u);
    EXPECT_EQ(e.names()[0], "P/g=2/t=0/s=0");
  }
}

TEST(ReportTest, CostBreakdownOfAHandSchedule) {
  grid::Case c = one_unit_case();
  Assignment a;
  for (int t = 0; t < 24; ++t) {
    a["u/g=1/t=" + std::to_string(t)] = 1.0;
    a["v/g=1/t=" + std::to_string(t)] = t == 0 ? 1.0 : 0.0;
    a["P/g=1/t=" + std::to_string(t) + "/s=0"] = 100.0;
  }
  CostBreakdown cb = cost_breakdown(c, a);
  EXPECT_DOUBLE_EQ(cb.no_load, 240.0);
  EXPECT_DOUBLE_EQ(cb.start_up, 500.0);
  EXPECT_DOUBLE_EQ(cb.energy, 48000.0);
  EXPECT_DOUBLE_EQ(cb.total, 48740.0);
  EXPECT_EQ(scenario_costs(c, a), std::vector<double>{48740.0});
}

TEST(ReportTest, StorageArithmeticAndCycleDepth) {
  grid::Case c = one_unit_case();
  c.horizon = 1;
  c.buses[0].demand_mw = {100.0};
  grid::Generator& g = c.generators[0];
  g.p_max_mw = g.ramp_hourly_mw = g.ramp_10min_mw = g.ramp_startup_mw = g.ramp_shutdown_mw = 400;
  c.generators.push_back(g);
  c.generators[1].id = 2;
  grid::EssUnit e;
  e.id = 1;
  e.bus = 1;
  e.p_charge_max_mw = e.p_discharge_max_mw = 100;
  e.ramp_charge_mw = e.ramp_discharge_mw = 100;
  e.energy_max_mwh = 250;
  e.soc_min = 0.1;
  e.soc_max = 0.9;
  e.eff_charge = 0.9;
  e.init_energy_mwh = 125;
  c.ess_units.push_back(e);
  Assignment a{{"u/g=1/t=0", 1}, {"v/g=1/t=0", 1}, {"r/g=1/t=0/s=0", 200},
               {"P/g=1/t=0/s=0", 200}, {"cha/e=1/t=0/s=0", 100}, {"dis/e=1/t=0/s=0", 0},
               {"E/e=1/t=0/s=0", 215}, {"bcha/e=1/t=0/s=0", 1}, {"bdis/e=1/t=0/s=0", 0},
               {"th/n=1/t=0/s=0", 0}, {"u/g=2/t=0", 1}, {"v/g=2/t=0", 1},
               {"r/g=2/t=0/s=0", 200}, {"P/g=2/t=0/s=0", 0}};
  auto series = ess_report(c, a);
  ASSERT_EQ(series.size(), 1u);
  EXPECT_NEAR(series[0].soc[0], 0.86, 1e-12);
  EXPECT_NEAR(series[0].cycle_depth, 0.18, 1e-12);
  // Unit 1 covers demand and the charge; unit 2 idles as its reserve. 125 + 0.9 * 100 = 215 satisfies the energy balance; 216 does not.
  CheckOptions opts{false, false, {}, 1e-6};
  for (const auto& v : check_feasibility(c, a, opts).violations) {
    ADD_FAILURE() << v.equation << " " << v.coords << " " << v.residual;
  }
  a["E/e=1/t=0/s=0"] = 216;
  bool eq18 = false;
  for (const auto& v : check_feasibility(c, a, opts).violations) eq18 |= v.equation == "eq18";
  EXPECT_TRUE(eq18);
}

TEST(ReportTest, NoRenewablesMeansNoCurtailment) {
  grid::Case c = fixture("fig1.case");
  Solved s = solve(c, formulation::kSscuc);
  CurtailmentReport r = curtailment_report(c, s.assignment);
  EXPECT_EQ(r.per_scenario_mw, std::vector<double>{0.0});
  EXPECT_EQ(r.average_mw, 0.0);
}

TEST(ReportTest, CurtailmentIsCapacityMinusDispatch) {
  grid::Case c = fixture("sixbus.case");
  Solved s = solve(c, formulation::kSscuc);
  CurtailmentReport r = curtailment_report(c, s.assignment);
  double expected = 0.0;
  for (int sc = 0; sc < 2; ++sc) {
    for (int t = 0; t < 3; ++t) {
      std::string w = "W/w=1/t=" + std::to_string(t) + "/s=" + std::to_string(sc);
      expected += 0.5 * (c.scenarios.capacity_mw[sc][0][t] - s.assignment.at(w));
    }
  }
  EXPECT_NEAR(r.average_mw, expected, 1e-9);
  double per_period = 0.0;
  for (double v : r.per_period_mw) per_period += v;
  EXPECT_NEAR(per_period, r.average_mw, 1e-9);
  EXPECT_NEAR(r.average_per_period_mw, r.average_mw / 3, 1e-12);
}

TEST(ReportTest, SwitchingScheduleSkipsTheOutagedLine) {
  grid::Case c = fixture("sixbus.case");
  Solved s = solve(c, formulation::kSscucPC);
  SwitchingSchedule sched = switching_schedule(c, s.assignment, scope_of(s.built));
  ASSERT_FALSE(sched.events.empty());
  EXPECT_TRUE(std::is_sorted(sched.events.begin(), sched.events.end()));
  int total = 0;
  for (const auto& e : sched.events) {
    EXPECT_NE(e.contingency.value_or(-1), e.line);
    EXPECT_TRUE(c.find_line(e.line)->switchable);
  }
  for (auto [line, n] : sched.frequency) total += n;
  EXPECT_EQ(total, static_cast<int>(sched.events.size()));
}

TEST(ReportTest, BindingLinesRespectTheThreshold) {
  grid::Case c = fixture("fig1.case");
  Solved s = solve(c, formulation::kSscucC);
  for (const auto& b : binding_lines(c, s.assignment, s.built.contingencies)) {
    EXPECT_GT(b.count, 0);
    EXPECT_NE(b.contingency.value_or(-1), b.line);
  }
}

TEST(ReportTest, FingerprintTracksContent) {
  grid::Case a = fixture("sixbus.case");
  grid::Case b = fixture("sixbus.case");
  EXPECT_EQ(case_fingerprint(a), case_fingerprint(b));
  EXPECT_EQ(case_fingerprint(a).size(), 16u);
  b.buses[2].demand_mw[0] += 1;
  EXPECT_NE(case_fingerprint(a), case_fingerprint(b));
}

TEST(CompareTest, SixBusChainHolds) {
  grid::Case c = fixture("sixbus.case");
  std::vector<ScheduleReport> reports;
  for (Variant v : formulation::kAllVariants) {
    Solved s = solve(c, v);
    reports.push_back(make_report(c, formulation::variant_name(v), s.assignment, scope_of(s.built),
                                  s.result.objective, s.result.gap, s.result.walltime_s));
    EXPECT_TRUE(reports.back().violations.empty());
  }
  Comparison cmp = compare_variants(reports);
  EXPECT_EQ(cmp.checks.size(), 5u);
  EXPECT_TRUE(cmp.verdict);
  // Network reconfiguration relieves curtailment on this fixture.
  EXPECT_LT(reports[3].curtailment.average_mw, reports[0].curtailment.average_mw);
}

TEST(CompareTest, ViolatedChainAndForeignCasesAreReported) {
  ScheduleReport base, rich;
  base.variant = "SSCUC";
  rich.variant = "SSCUC-P";
  base.case_fingerprint = rich.case_fingerprint = "x";
  base.cost.total = 100;
  rich.cost.total = 101;
  EXPECT_FALSE(compare_variants({base, rich}).verdict);
  rich.gap = 0.02;  // slack 0.02 * 101 covers the excess
  EXPECT_TRUE(compare_variants({base, rich}).verdict);
  rich.case_fingerprint = "y";
  EXPECT_THROW(compare_variants({base, rich}), std::invalid_argument);
  EXPECT_THROW(compare_variants({base}), std::invalid_argument);
}

}  // namespace
}  // namespace gridsched::analysis
