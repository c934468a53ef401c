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
#include <set>

#include "gridsched/formulation/build.hpp"
#include "gridsched/formulation/variable_index.hpp"
#include "gridsched/grid/case_io.hpp"
#include "gridsched/solver/branch_and_bound.hpp"

namespace gridsched::formulation {
namespace {

const std::filesystem::path kCases = GRIDSCHED_CASE_ROOT;

grid::Case fixture(const char* name) { return grid::load_case_file(kCases / name); }

double solve_exact(const milp::Model& m) {
  solver::MipOptions opts;
  opts.gap_target = 0.0;
  solver::MipResult r = solver::solve_mip(m, opts);
  EXPECT_EQ(r.status, solver::MipStatus::kOptimal);
  return r.objective;
}

TEST(NamingTest, CanonicalNamesRoundTrip) {
  EXPECT_EQ(var_name({Family::kGenPower, {1, 0, 0}}), "P/g=1/t=0/s=0");
  EXPECT_EQ(var_name({Family::kGenPowerC, {3, 7, 2, 1}}), "Pc/g=3/c=7/t=2/s=1");
  EXPECT_EQ(var_name({Family::kCommit, {4, 23}}), "u/g=4/t=23");
  EXPECT_EQ(var_name({Family::kSwitchCnr, {2, 3, 0, 0}}), "zc/k=2/c=3/t=0/s=0");
  EXPECT_EQ(var_name({Family::kAngleC, {5, 3, 1, 0}}), "thc/n=5/c=3/t=1/s=0");
  EXPECT_EQ(var_name({Family::kDischargeMode, {1, 4, 1}}), "bdis/e=1/t=4/s=1");
  for (int f = 0; f < kNumFamilies; ++f) {
    VarKey k{static_cast<Family>(f), {11, 22, 33, 44}};
    for (int i = arity(k.family); i < 4; ++i) k.coords[i] = 0;
    auto parsed = parse_var_name(var_name(k));
    ASSERT_TRUE(parsed.has_value()) << var_name(k);
    EXPECT_EQ(*parsed, k);
  }
  EXPECT_FALSE(parse_var_name("P/g=1/t=0").has_value());
  EXPECT_FALSE(parse_var_name("P/g=1/t=0/s=0/x=1").has_value());
  EXPECT_FALSE(parse_var_name("Q/g=1/t=0/s=0").has_value());
  EXPECT_FALSE(parse_var_name("u/t=1/g=0").has_value());
}

TEST(NamingTest, CommitmentHasNoScenarioCoordinate) {
  EXPECT_EQ(std::string(family_info(Family::kCommit).labels), "gt");
  EXPECT_EQ(std::string(family_info(Family::kStartup).labels), "gt");
  BuiltModel b = build(fixture("sixbus.case"), kSscucPC);
  for (milp::ColId col : b.index.columns_of(Family::kCommit)) {
    EXPECT_EQ(b.model.variable(col).name.find("/s="), std::string::npos);
  }
}

TEST(VariantTest, NamesAndParsing) {
  EXPECT_EQ(variant_name(kSscuc), "SSCUC");
  EXPECT_EQ(variant_name(kSscucPC), "SSCUC-PC");
  EXPECT_EQ(parse_variant("sscuc-c"), kSscucC);
  EXPECT_EQ(parse_variant("SSCUC-P"), kSscucP);
  EXPECT_FALSE(parse_variant("sscuc-x").has_value());
}

TEST(BigMTest, FormulaExamples) {
  grid::Case c = fixture("fig1.case");
  c.lines[0].susceptance_pu = 0.0;
  c.lines[0].limit_normal_mw = 175;
  EXPECT_DOUBLE_EQ(big_m_value(c, 0), 1.75);
  c.lines[0].susceptance_pu = 10.0;
  EXPECT_DOUBLE_EQ(big_m_value(c, 0), 13.75);
  c.lines[0].susceptance_pu = -10.0;
  EXPECT_DOUBLE_EQ(big_m_value(c, 0), 13.75);
}

TEST(TagTest, EquationNumbers) {
  EXPECT_EQ(equation_number("eq25/n=1/t=0/s=0"), 25);
  EXPECT_EQ(equation_number("eq4"), 4);
  EXPECT_EQ(equation_number("eq23/k=1/t=0/s=0/upper"), 23);
  EXPECT_EQ(equation_number("theta_box"), -1);
  EXPECT_EQ(equation_number("eqx"), -1);
  EXPECT_EQ(equation_number("eq2x"), -1);
}

TEST(BuildTest, TableOneConformanceOnFullFixture) {
  grid::Case c = fixture("sixbus.case");
  for (Variant v : kAllVariants) {
    BuiltModel b = build(c, v);
    std::set<int> want;
    for (int e : variant_equations(v)) want.insert(e);
    EXPECT_EQ(equations_present(b.model), want) << variant_name(v);
  }
}

TEST(BuildTest, Fig1TagsStayInsideTableOne) {
  grid::Case c = fixture("fig1.case");
  for (Variant v : kAllVariants) {
    BuiltModel b = build(c, v);
    std::set<int> allowed;
    for (int e : variant_equations(v)) allowed.insert(e);
    for (int e : equations_present(b.model)) {
      EXPECT_TRUE(allowed.count(e)) << variant_name(v) << " has eq" << e;
    }
  }
  BuiltModel p = build(c, kSscucP);
  EXPECT_FALSE(p.index.columns_of(Family::kSwitchPnr).empty());
  EXPECT_TRUE(p.index.columns_of(Family::kSwitchCnr).empty());
  std::set<int> eqs = equations_present(p.model);
  for (int e : {21, 22, 23, 24}) EXPECT_TRUE(eqs.count(e)) << e;
  for (int e : {19, 20}) EXPECT_FALSE(eqs.count(e)) << e;
}

TEST(BuildTest, ColumnCountMatchesClosedForm) {
  for (const char* name : {"fig1.case", "sixbus.case"}) {
    grid::Case c = fixture(name);
    for (Variant v : kAllVariants) {
      for (std::vector<int> cont : {std::vector<int>{}, grid::contingency_list(c).lines,
                                    std::vector<int>{1, 2}}) {
        BuiltModel b = build(c, v, cont);
        EXPECT_EQ(b.model.num_cols(), expected_column_count(c, v, static_cast<int64_t>(cont.size())))
            << name << " " << variant_name(v) << " C=" << cont.size();
        EXPECT_EQ(b.index.size(), b.model.num_cols());
      }
    }
  }
}

TEST(BuildTest, IndexIsABijection) {
  BuiltModel b = build(fixture("sixbus.case"), kSscucPC);
  for (int j = 0; j < b.model.num_cols(); ++j) {
    const VarKey& k = b.index.key(milp::ColId(j));
    EXPECT_EQ(b.index.find(k), milp::ColId(j));
    EXPECT_EQ(var_name(k), b.model.variable(milp::ColId(j)).name);
  }
}

TEST(BuildTest, OutagedLineIsPinned) {
  grid::Case c = fixture("fig1.case");
  c.lines[2].switchable = true;
  BuiltModel b = build(c, kSscucC);
  auto f = b.model.variable(b.index.at(Family::kFlowC, {3, 3, 0, 0}));
  EXPECT_EQ(f.lower, 0.0);
  EXPECT_EQ(f.upper, 0.0);
  auto z = b.model.variable(b.index.at(Family::kSwitchCnr, {3, 3, 0, 0}));
  EXPECT_EQ(z.upper, 0.0);
  // The cardinality row counts every switchable line except the outage.
  auto row = b.model.find_row("eq42/c=3/t=0/s=0");
  ASSERT_TRUE(row.has_value());
  EXPECT_EQ(b.model.row_columns(row->value()).size(), 3u);
  EXPECT_FALSE(b.model.find_row("eq39/k=3/c=3/t=0/s=0").has_value());
}

TEST(BuildTest, SingleScenarioObjectiveIsDeterministicCost) {
  grid::Case c = fixture("fig1.case");
  BuiltModel b = build(c, kSscuc);
  for (const auto& g : c.generators) {
    EXPECT_DOUBLE_EQ(b.model.objective()[b.index.at(Family::kGenPower, {g.id, 0, 0}).value()],
                     g.cost_per_mwh);
    EXPECT_DOUBLE_EQ(b.model.objective()[b.index.at(Family::kCommit, {g.id, 0}).value()],
                     g.no_load_cost);
  }
}

TEST(BuildTest, EmergencyAndNormalLimitSwitch) {
  grid::Case c = fixture("fig1.case");
  BuiltModel em = build(c, kSscuc);
  EXPECT_DOUBLE_EQ(em.model.variable(em.index.at(Family::kFlowC, {4, 3, 0, 0})).upper, 110.0);
  c.options.contingency_limit = grid::ContingencyLimit::kNormal;
  BuiltModel nm = build(c, kSscuc);
  EXPECT_DOUBLE_EQ(nm.model.variable(nm.index.at(Family::kFlowC, {4, 3, 0, 0})).upper, 100.0);
}

// Hand-derived optimum: losing line 3 sends 60% of the bus 1 to bus 4
// transfer over line 4 (110 MW emergency), so G2 must supply
// 200 - 110/0.6 MW after the outage. Its 10 MW ten-minute ramp means it
// already runs 10 MW less than that in the base case.
TEST(BuildTest, Fig1OptimaMatchHandCalculation) {
  grid::Case c = fixture("fig1.case");
  const double fixed = 100 + 200 + 20 + 50;  // G1 and G3 no-load plus start-up
  const double p2 = 200.0 - 110.0 / 0.6 - 10.0;
  EXPECT_NEAR(solve_exact(build(c, kSscuc).model), fixed + 10 * (200 - p2) + 50 * p2, 1e-6);
  EXPECT_NEAR(solve_exact(build(c, kSscucC).model), fixed + 10 * 200, 1e-6);
}

TEST(PinTest, PinningSwitchesClosedRecoversSscuc) {
  grid::Case six = fixture("sixbus.case");
  double base = solve_exact(build(six, kSscuc).model);
  BuiltModel p = build(six, kSscucP);
  milp::Model pinned = pin_topology(p.model, p.index, pin_all(p.model, p.index, Family::kSwitchPnr, 1));
  EXPECT_NEAR(solve_exact(pinned), base, 1e-6);

  grid::Case fig = fixture("fig1.case");
  double fig_base = solve_exact(build(fig, kSscuc).model);
  BuiltModel cc = build(fig, kSscucC);
  milp::Model closed = pin_topology(cc.model, cc.index, pin_all(cc.model, cc.index, Family::kSwitchCnr, 1));
  EXPECT_NEAR(solve_exact(closed), fig_base, 1e-6);
}

TEST(PinTest, OpeningLineTwoAfterOutageIsOptimal) {
  grid::Case fig = fixture("fig1.case");
  BuiltModel cc = build(fig, kSscucC);
  double free_opt = solve_exact(cc.model);
  milp::Model pinned =
      pin_topology(cc.model, cc.index, {{VarKey{Family::kSwitchCnr, {2, 3, 0, 0}}, 0.0}});
  EXPECT_NEAR(solve_exact(pinned), free_opt, 1e-6);
}

TEST(PinTest, RejectsBadTargets) {
  BuiltModel cc = build(fixture("fig1.case"), kSscucC);
  EXPECT_THROW(pin_topology(cc.model, cc.index, {{VarKey{Family::kSwitchCnr, {9, 3, 0, 0}}, 0.0}}),
               std::invalid_argument);
  EXPECT_THROW(pin_topology(cc.model, cc.index, {{VarKey{Family::kGenPower, {1, 0, 0}}, 1.0}}),
               std::invalid_argument);
  EXPECT_THROW(pin_topology(cc.model, cc.index, {{VarKey{Family::kSwitchCnr, {2, 3, 0, 0}}, 0.5}}),
               std::invalid_argument);
}

TEST(BuildTest, TiedPnrIsScenarioIndependent) {
  grid::Case c = fixture("sixbus.case");
  c.options.tie_pnr_across_scenarios = true;
  BuiltModel b = build(c, kSscucP);
  solver::MipOptions opts;
  opts.gap_target = 0.0;
  solver::MipResult r = solver::solve_mip(b.model, opts);
  ASSERT_EQ(r.status, solver::MipStatus::kOptimal);
  for (const auto& l : c.lines) {
    if (!l.switchable) continue;
    for (int t = 0; t < c.horizon; ++t) {
      EXPECT_EQ(r.assignment[b.index.at(Family::kSwitchPnr, {l.id, t, 0}).value()],
                r.assignment[b.index.at(Family::kSwitchPnr, {l.id, t, 1}).value()]);
    }
  }
  c.options.tie_pnr_across_scenarios = false;
  EXPECT_LE(solve_exact(build(c, kSscucP).model), r.objective + 1e-6);
}

TEST(BuildTest, DeterministicRebuild) {
  grid::Case c = fixture("sixbus.case");
  BuiltModel a = build(c, kSscucPC);
  BuiltModel b = build(c, kSscucPC);
  EXPECT_EQ(a.model.tags(), b.model.tags());
  ASSERT_EQ(a.model.num_nonzeros(), b.model.num_nonzeros());
  for (int i = 0; i < a.model.num_rows(); ++i) {
    auto ac = a.model.row_columns(i), bc = b.model.row_columns(i);
    auto av = a.model.row_values(i), bv = b.model.row_values(i);
    ASSERT_TRUE(std::equal(ac.begin(), ac.end(), bc.begin(), bc.end()));
    ASSERT_TRUE(std::equal(av.begin(), av.end(), bv.begin(), bv.end()));
  }
}

}  // namespace
}  // namespace gridsched::formulation
