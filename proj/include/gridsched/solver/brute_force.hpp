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

#ifndef GRIDSCHED_SOLVER_BRUTE_FORCE_HPP_
#define GRIDSCHED_SOLVER_BRUTE_FORCE_HPP_

#include <chrono>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "gridsched/milp/model.hpp"
#include "gridsched/solver/branch_and_bound.hpp"
#include "gridsched/solver/simplex.hpp"

namespace gridsched::solver {

inline constexpr int kDefaultBruteForceBinaries = 20;

/// Binary columns whose bounds still leave a choice.
inline std::vector<int> free_binaries(const milp::Model& model) {
  std::vector<int> out;
  for (int j = 0; j < model.num_cols(); ++j) {
    const auto& v = model.variables()[j];
    if (v.kind == milp::VarKind::kBinary && v.lower != v.upper) out.push_back(j);
  }
  return out;
}

/// Exhaustive oracle: solves the LP for every 0/1 assignment of the free
/// binaries and keeps the best. Pinned binaries stay at their pinned value.
inline MipResult brute_force_mip(const milp::Model& model,
                                 int max_binaries = kDefaultBruteForceBinaries) {
  if (!model.frozen()) throw milp::ModelError("brute_force_mip needs a frozen model");
  const std::vector<int> bins = free_binaries(model);
  if (static_cast<int>(bins.size()) > max_binaries) {
    throw std::invalid_argument("brute_force_mip: " + std::to_string(bins.size()) +
                                " free binaries exceed the limit of " +
                                std::to_string(max_binaries));
  }
  const auto start = std::chrono::steady_clock::now();
  BoundedSimplex simplex(model);
  std::vector<double> lo = model.lower_bounds();
  std::vector<double> hi = model.upper_bounds();

  MipResult res;
  const uint64_t count = uint64_t{1} << bins.size();
  Basis last;
  bool have_basis = false;
  for (uint64_t mask = 0; mask < count; ++mask) {
    for (std::size_t b = 0; b < bins.size(); ++b) {
      double v = (mask >> b) & 1U ? 1.0 : 0.0;
      lo[bins[b]] = hi[bins[b]] = v;
    }
    LpResult lp = simplex.solve(lo, hi, have_basis ? &last : nullptr);
    if (lp.status == LpStatus::kNumericallyStuck) lp = simplex.solve(lo, hi);
    ++res.nodes_explored;
    res.lp_iterations += lp.iterations;
    if (lp.status == LpStatus::kNumericallyStuck) {
      throw std::runtime_error("brute_force_mip: LP numerically stuck");
    }
    if (lp.status == LpStatus::kUnbounded) {
      throw std::runtime_error("brute_force_mip: unbounded LP");
    }
    if (lp.status != LpStatus::kOptimal) continue;
    last = lp.basis;
    have_basis = true;
    if (lp.objective < res.objective - 1e-9 * std::max(1.0, std::abs(lp.objective))) {
      res.objective = lp.objective;
      res.assignment = lp.primal;
      for (int j : bins) res.assignment[j] = lo[j];
    }
  }
  res.walltime_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (res.assignment.empty()) {
    res.status = MipStatus::kInfeasible;
    return res;
  }
  // Pinned binaries may carry tiny LP noise; snap them too.
  snap_and_pick_branch(model, res.assignment);
  res.status = MipStatus::kOptimal;
  res.bound = res.objective;
  res.gap = 0.0;
  return res;
}

}  // namespace gridsched::solver

#endif  // GRIDSCHED_SOLVER_BRUTE_FORCE_HPP_
