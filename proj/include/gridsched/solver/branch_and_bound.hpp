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

#ifndef GRIDSCHED_SOLVER_BRANCH_AND_BOUND_HPP_
#define GRIDSCHED_SOLVER_BRANCH_AND_BOUND_HPP_

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <queue>
#include <stdexcept>
#include <utility>
#include <vector>

#include "gridsched/milp/model.hpp"
#include "gridsched/solver/simplex.hpp"

namespace gridsched::solver {

enum class MipStatus { kOptimal, kFeasibleGap, kInfeasible, kTimeoutNoSolution };

inline const char* to_string(MipStatus s) {
  switch (s) {
    case MipStatus::kOptimal:
      return "optimal";
    case MipStatus::kFeasibleGap:
      return "feasible_gap";
    case MipStatus::kInfeasible:
      return "infeasible";
    case MipStatus::kTimeoutNoSolution:
      return "timeout_no_solution";
  }
  return "?";
}

inline constexpr double kGapEpsilon = 1e-9;
inline constexpr double kIntegralitySnap = 1e-6;

struct MipResult {
  MipStatus status = MipStatus::kTimeoutNoSolution;
  double objective = kInf;
  double bound = -kInf;
  double gap = kInf;
  std::vector<double> assignment;
  int64_t nodes_explored = 0;
  int64_t lp_iterations = 0;
  double walltime_s = 0.0;

  bool has_solution() const {
    return status == MipStatus::kOptimal || status == MipStatus::kFeasibleGap;
  }
};

inline double relative_gap(double objective, double bound) {
  if (!std::isfinite(objective)) return kInf;
  if (!std::isfinite(bound)) return kInf;
  return std::max(0.0, objective - bound) / std::max(std::abs(objective), kGapEpsilon);
}

struct NodeReport {
  int64_t nodes = 0;
  double bound = -kInf;
  double incumbent = kInf;
};

struct MipOptions {
  double gap_target = 0.01;
  int64_t node_limit = 0;   // 0 = unlimited
  double time_limit = 0.0;  // seconds of wall clock, 0 = unlimited
  // Called after every processed node; used for monitoring and tests.
  std::function<void(const NodeReport&)> on_node;
  // Optional: called with every optimal node LP so callers can sample
  // duality certificates.
  std::function<void(std::span<const double> lower, std::span<const double> upper,
                     const LpResult&)>
      on_lp;
};

/// Rounds binaries that are within kIntegralitySnap of 0 or 1. Returns the
/// index of the most fractional remaining binary (lowest index on ties), or
/// -1 when every binary is integral.
inline int snap_and_pick_branch(const milp::Model& model, std::vector<double>& x) {
  int pick = -1;
  double best = 0.0;
  const auto& vars = model.variables();
  for (int j = 0; j < model.num_cols(); ++j) {
    if (vars[j].kind != milp::VarKind::kBinary) continue;
    double v = x[j];
    if (std::abs(v) <= kIntegralitySnap) {
      x[j] = 0.0;
      continue;
    }
    if (std::abs(v - 1.0) <= kIntegralitySnap) {
      x[j] = 1.0;
      continue;
    }
    double frac = std::min(v, 1.0 - v);
    if (frac > best) {
      best = frac;
      pick = j;
    }
  }
  return pick;
}

/// Best-first branch and bound on LP relaxations.
///
/// The open node with the lowest parent bound is processed next (ties by
/// creation order). Branching is on the most fractional binary, lowest column
/// index first. Each child warm-starts its LP from the parent's final basis.
inline MipResult solve_mip(const milp::Model& model, const MipOptions& opts = {}) {
  if (!model.frozen()) throw milp::ModelError("solve_mip needs a frozen model");
  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(Clock::now() - start).count();
  };

  struct Node {
    double bound;
    int64_t id;
    std::vector<std::pair<int, double>> fixes;
    std::shared_ptr<const Basis> basis;
  };
  struct Worse {
    bool operator()(const Node& a, const Node& b) const {
      if (a.bound != b.bound) return a.bound > b.bound;
      return a.id > b.id;
    }
  };

  BoundedSimplex simplex(model);
  const std::vector<double> root_lo = model.lower_bounds();
  const std::vector<double> root_hi = model.upper_bounds();

  MipResult res;
  std::priority_queue<Node, std::vector<Node>, Worse> open;
  open.push(Node{-kInf, 0, {}, nullptr});
  int64_t next_id = 1;
  double incumbent = kInf;
  double reported_bound = -kInf;
  bool limits_hit = false;
  bool root_infeasible_or_unbounded = false;

  std::vector<double> lo, hi;
  auto prune_tol = [](double inc) {
    return std::isfinite(inc) ? 1e-9 * std::max(1.0, std::abs(inc)) : 0.0;
  };
  auto global_bound = [&] {
    double b = open.empty() ? incumbent : std::min(open.top().bound, incumbent);
    return b;
  };

  while (!open.empty()) {
    if ((opts.node_limit > 0 && res.nodes_explored >= opts.node_limit) ||
        (opts.time_limit > 0 && elapsed() >= opts.time_limit)) {
      limits_hit = true;
      break;
    }
    if (std::isfinite(incumbent) &&
        relative_gap(incumbent, global_bound()) <= opts.gap_target &&
        opts.gap_target > 0) {
      break;
    }
    Node node = open.top();
    open.pop();
    if (node.bound >= incumbent - prune_tol(incumbent)) continue;

    lo = root_lo;
    hi = root_hi;
    for (auto [col, v] : node.fixes) lo[col] = hi[col] = v;
    LpResult lp = simplex.solve(lo, hi, node.basis.get());
    if (lp.status == LpStatus::kNumericallyStuck) lp = simplex.solve(lo, hi);
    ++res.nodes_explored;
    res.lp_iterations += lp.iterations;

    if (lp.status == LpStatus::kNumericallyStuck) {
      throw std::runtime_error("LP relaxation numerically stuck at node " +
                               std::to_string(node.id));
    }
    if (lp.status == LpStatus::kUnbounded) {
      if (node.id == 0) {
        root_infeasible_or_unbounded = true;
        break;
      }
      throw std::runtime_error("unbounded LP relaxation below the root");
    }
    if (lp.status == LpStatus::kOptimal) {
      if (opts.on_lp) opts.on_lp(lo, hi, lp);
      if (lp.objective < incumbent - prune_tol(incumbent)) {
        std::vector<double> x = lp.primal;
        int branch = snap_and_pick_branch(model, x);
        if (branch < 0) {
          incumbent = lp.objective;
          res.assignment = std::move(x);
        } else {
          auto basis = std::make_shared<const Basis>(std::move(lp.basis));
          for (double v : {0.0, 1.0}) {
            Node child{lp.objective, next_id++, node.fixes, basis};
            child.fixes.emplace_back(branch, v);
            open.push(std::move(child));
          }
        }
      }
    }
    reported_bound = std::max(reported_bound, global_bound());
    if (opts.on_node) {
      opts.on_node(NodeReport{res.nodes_explored, reported_bound, incumbent});
    }
  }

  res.walltime_s = elapsed();
  if (root_infeasible_or_unbounded) {
    throw std::runtime_error("LP relaxation of the root is unbounded");
  }
  if (!std::isfinite(incumbent)) {
    res.status = limits_hit ? MipStatus::kTimeoutNoSolution : MipStatus::kInfeasible;
    res.bound = limits_hit ? std::max(reported_bound, global_bound()) : kInf;
    return res;
  }
  res.objective = incumbent;
  res.bound = std::min(incumbent, std::max(reported_bound, global_bound()));
  res.gap = relative_gap(incumbent, res.bound);
  res.status = (open.empty() || res.gap <= 0.0) ? MipStatus::kOptimal
                                                 : MipStatus::kFeasibleGap;
  if (res.status == MipStatus::kOptimal) {
    res.bound = incumbent;
    res.gap = 0.0;
  }
  return res;
}

}  // namespace gridsched::solver

#endif  // GRIDSCHED_SOLVER_BRANCH_AND_BOUND_HPP_
