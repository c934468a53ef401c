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

#include <random>

#include "gridsched/milp/model.hpp"
#include "gridsched/solver/simplex.hpp"

namespace gridsched::solver {
namespace {

using milp::ColId;
using milp::Model;
using milp::Sense;
using milp::VarKind;

TEST(SimplexTest, LowerBoundingRow) {
  Model m;
  ColId x = m.add_variable("x", VarKind::kContinuous, 0, 10);
  m.set_objective(x, 1.0);
  m.add_constraint({{x, 1.0}}, Sense::kGreaterEqual, 3, "r");
  m.freeze();
  LpResult r = solve_lp(m);
  ASSERT_EQ(r.status, LpStatus::kOptimal);
  EXPECT_NEAR(r.objective, 3.0, 1e-9);
  EXPECT_NEAR(r.dual[0], 1.0, 1e-9);
}

TEST(SimplexTest, DetectsUnbounded) {
  Model m;
  ColId x = m.add_variable("x", VarKind::kContinuous, 0, milp::kInf);
  m.set_objective(x, -1.0);
  m.freeze();
  EXPECT_EQ(solve_lp(m).status, LpStatus::kUnbounded);
}

TEST(SimplexTest, DetectsInfeasible) {
  Model m;
  ColId x = m.add_variable("x", VarKind::kContinuous, 0, 1);
  ColId y = m.add_variable("y", VarKind::kContinuous, 0, 1);
  m.add_constraint({{x, 1}, {y, 1}}, Sense::kGreaterEqual, 3, "r");
  m.freeze();
  EXPECT_EQ(solve_lp(m).status, LpStatus::kInfeasible);
}

TEST(SimplexTest, FreeVariablesAndEqualities) {
  // min |a| style: x - y = 2, x free, y in [0, 5], min x + 3y.
  Model m;
  ColId x = m.add_variable("x", VarKind::kContinuous, -milp::kInf, milp::kInf);
  ColId y = m.add_variable("y", VarKind::kContinuous, 0, 5);
  m.set_objective(x, 1.0);
  m.set_objective(y, 3.0);
  m.add_constraint({{x, 1}, {y, -1}}, Sense::kEqual, 2, "r");
  m.freeze();
  LpResult r = solve_lp(m);
  ASSERT_EQ(r.status, LpStatus::kOptimal);
  EXPECT_NEAR(r.objective, 2.0, 1e-9);
  EXPECT_NEAR(r.primal[0], 2.0, 1e-9);
}

// Builds a random LP that is feasible by construction (rows are slack at a
// random interior point) with every column boxed, so it is never unbounded.
Model random_lp(std::mt19937& rng, int n, int m) {
  std::uniform_real_distribution<double> u(-1, 1);
  Model model;
  std::vector<double> x0(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    double lo = -5 + 5 * u(rng);
    double hi = lo + 1 + 8 * (u(rng) + 1);
    model.add_variable("x" + std::to_string(j), VarKind::kContinuous, lo, hi);
    x0[j] = lo + (hi - lo) * (0.25 + 0.5 * (u(rng) + 1) / 2);
    model.set_objective(ColId(j), 10 * u(rng));
  }
  for (int i = 0; i < m; ++i) {
    std::vector<milp::Term> terms;
    double act = 0;
    for (int j = 0; j < n; ++j) {
      if (u(rng) > 0.2) continue;
      double c = 5 * u(rng);
      terms.push_back({ColId(j), c});
      act += c * x0[j];
    }
    int kind = static_cast<int>(rng() % 3);
    Sense s = kind == 0 ? Sense::kLessEqual : kind == 1 ? Sense::kGreaterEqual : Sense::kEqual;
    double rhs = s == Sense::kLessEqual ? act + std::abs(u(rng))
                 : s == Sense::kGreaterEqual ? act - std::abs(u(rng)) : act;
    model.add_constraint(terms, s, rhs, "r" + std::to_string(i));
  }
  model.freeze();
  return model;
}

// Certificate check: primal feasible and the Lagrangian dual bound built from
// the returned duals matches the primal objective.
TEST(SimplexTest, RandomLpsCarryOptimalityCertificates) {
  std::mt19937 rng(2024);
  for (int trial = 0; trial < 200; ++trial) {
    int n = 2 + static_cast<int>(rng() % 25);
    int m = 1 + static_cast<int>(rng() % 25);
    Model model = random_lp(rng, n, m);
    LpResult r = solve_lp(model);
    ASSERT_EQ(r.status, LpStatus::kOptimal) << "trial " << trial;
    auto ev = milp::evaluate(model, r.primal, 1e-7);
    EXPECT_TRUE(ev.violations.empty()) << "trial " << trial;
    EXPECT_NEAR(ev.objective, r.objective, 1e-7);
    auto lo = model.lower_bounds();
    auto hi = model.upper_bounds();
    EXPECT_LE(relative_duality_gap(model, lo, hi, r), 1e-6) << "trial " << trial;
  }
}

TEST(SimplexTest, WarmStartMatchesColdStartAfterBoundChange) {
  std::mt19937 rng(99);
  for (int trial = 0; trial < 50; ++trial) {
    Model model = random_lp(rng, 15, 12);
    BoundedSimplex simplex(model);
    auto lo = model.lower_bounds();
    auto hi = model.upper_bounds();
    LpResult first = simplex.solve(lo, hi);
    ASSERT_EQ(first.status, LpStatus::kOptimal);
    int j = static_cast<int>(rng() % 15);
    hi[j] = lo[j] + 0.3 * (first.primal[j] - lo[j]);
    LpResult warm = simplex.solve(lo, hi, &first.basis);
    LpResult cold = simplex.solve(lo, hi);
    ASSERT_EQ(warm.status, cold.status);
    if (cold.status == LpStatus::kOptimal) {
      EXPECT_NEAR(warm.objective, cold.objective, 1e-7 * std::max(1.0, std::abs(cold.objective)));
    }
  }
}

TEST(SimplexTest, InconsistentBoundsAreInfeasible) {
  Model m;
  m.add_variable("x", VarKind::kContinuous, 0, 1);
  m.freeze();
  BoundedSimplex simplex(m);
  std::vector<double> lo{2}, hi{1};
  EXPECT_EQ(simplex.solve(lo, hi).status, LpStatus::kInfeasible);
}

}  // namespace
}  // namespace gridsched::solver
