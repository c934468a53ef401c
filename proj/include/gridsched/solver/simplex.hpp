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

#ifndef GRIDSCHED_SOLVER_SIMPLEX_HPP_
#define GRIDSCHED_SOLVER_SIMPLEX_HPP_

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "gridsched/milp/model.hpp"

namespace gridsched::solver {

using milp::kInf;

enum class LpStatus { kOptimal, kInfeasible, kUnbounded, kNumericallyStuck };

inline const char* to_string(LpStatus s) {
  switch (s) {
    case LpStatus::kOptimal:
      return "optimal";
    case LpStatus::kInfeasible:
      return "infeasible";
    case LpStatus::kUnbounded:
      return "unbounded";
    case LpStatus::kNumericallyStuck:
      return "numerically_stuck";
  }
  return "?";
}

enum class VarStatus : uint8_t { kBasic, kAtLower, kAtUpper, kFree };

// Status of every structural column followed by every row logical.
struct Basis {
  std::vector<VarStatus> status;
};

struct LpResult {
  LpStatus status = LpStatus::kNumericallyStuck;
  double objective = 0.0;
  std::vector<double> primal;        // per column
  std::vector<double> dual;          // per row
  std::vector<double> reduced_cost;  // per column
  int64_t iterations = 0;
  Basis basis;
};

struct SimplexOptions {
  double primal_tol = 1e-9;
  double dual_tol = 1e-9;
  double pivot_tol = 1e-9;
  int refactor_interval = 100;
  int degenerate_before_bland = 60;
  int64_t max_iterations = 0;  // 0 picks a size-dependent default
};

/// Objective of the Lagrangian dual built from row duals `dual` and the given
/// column bounds. Reduced costs are recomputed from the model data, so the
/// value is independent of the primal solution that produced the duals.
inline double dual_objective(const milp::Model& model,
                             std::span<const double> lower,
                             std::span<const double> upper,
                             std::span<const double> dual,
                             double zero_tol = 1e-9) {
  const int n = model.num_cols();
  std::vector<double> d(model.objective().begin(), model.objective().end());
  for (int i = 0; i < model.num_rows(); ++i) {
    auto cols = model.row_columns(i);
    auto vals = model.row_values(i);
    for (std::size_t k = 0; k < cols.size(); ++k) d[cols[k]] -= dual[i] * vals[k];
  }
  auto term = [&](double dk, double lo, double hi) {
    if (std::abs(dk) <= zero_tol) {
      // Treat as zero but still account for the finite bound it sits at.
      if (dk > 0 && std::isfinite(lo)) return dk * lo;
      if (dk < 0 && std::isfinite(hi)) return dk * hi;
      return 0.0;
    }
    if (dk > 0) return std::isfinite(lo) ? dk * lo : -kInf;
    return std::isfinite(hi) ? dk * hi : -kInf;
  };
  double obj = 0.0;
  for (int j = 0; j < n; ++j) obj += term(d[j], lower[j], upper[j]);
  for (int i = 0; i < model.num_rows(); ++i) {
    double lo = -kInf, hi = kInf;
    switch (model.sense(i)) {
      case milp::Sense::kLessEqual:
        hi = model.rhs(i);
        break;
      case milp::Sense::kGreaterEqual:
        lo = model.rhs(i);
        break;
      case milp::Sense::kEqual:
        lo = hi = model.rhs(i);
        break;
    }
    obj += term(dual[i], lo, hi);
  }
  return obj;
}

/// Revised primal simplex over columns with explicit lower and upper bounds.
///
/// Each row i is written a_i x - s_i = 0 with the logical s_i carrying the
/// row bounds, so the all-logical basis is always a valid start. Phase 1
/// minimizes the sum of basic bound infeasibilities and is re-entered
/// automatically whenever a refactorization exposes drift. The basis is kept
/// as a sparse LU (Eigen) plus a product-form eta file between refactors.
/// Pricing is Dantzig with a switch to Bland's rule after a run of
/// degenerate pivots; the ratio test is Harris' two-pass variant.
class BoundedSimplex {
 public:
  explicit BoundedSimplex(const milp::Model& model, SimplexOptions opts = {})
      : model_(&model), opts_(opts), n_(model.num_cols()), m_(model.num_rows()) {
    build_columns();
    if (opts_.max_iterations <= 0) {
      opts_.max_iterations = 50LL * (n_ + m_) + 10000;
    }
  }

  LpResult solve() {
    auto lo = model_->lower_bounds();
    auto hi = model_->upper_bounds();
    return solve(lo, hi, nullptr);
  }

  LpResult solve(std::span<const double> lower, std::span<const double> upper,
                 const Basis* warm = nullptr) {
    LpResult res;
    setup_bounds(lower, upper);
    for (int k = 0; k < n_ + m_; ++k) {
      if (lo_[k] > hi_[k] + opts_.primal_tol) {
        res.status = LpStatus::kInfeasible;
        return res;
      }
    }
    if (warm == nullptr || !load_basis(*warm)) slack_basis();
    if (!refactor()) {
      slack_basis();
      refactor();
    }
    res.status = iterate(res.iterations);
    if (res.status == LpStatus::kOptimal) extract(res);
    res.basis.status = status_;
    return res;
  }

 private:
  struct Eta {
    int row;
    double pivot;
    std::vector<int> idx;
    std::vector<double> val;
  };

  void build_columns() {
    col_start_.assign(static_cast<std::size_t>(n_) + 1, 0);
    for (int i = 0; i < m_; ++i) {
      for (int32_t c : model_->row_columns(i)) ++col_start_[c + 1];
    }
    for (int j = 0; j < n_; ++j) col_start_[j + 1] += col_start_[j];
    col_row_.resize(static_cast<std::size_t>(col_start_[n_]));
    col_val_.resize(col_row_.size());
    std::vector<int> fill(col_start_.begin(), col_start_.end() - 1);
    for (int i = 0; i < m_; ++i) {
      auto cols = model_->row_columns(i);
      auto vals = model_->row_values(i);
      for (std::size_t k = 0; k < cols.size(); ++k) {
        int pos = fill[cols[k]]++;
        col_row_[pos] = i;
        col_val_[pos] = vals[k];
      }
    }
    cost_.assign(static_cast<std::size_t>(n_ + m_), 0.0);
    auto c = model_->objective();
    std::copy(c.begin(), c.end(), cost_.begin());
  }

  void setup_bounds(std::span<const double> lower, std::span<const double> upper) {
    lo_.assign(static_cast<std::size_t>(n_ + m_), 0.0);
    hi_.assign(static_cast<std::size_t>(n_ + m_), 0.0);
    std::copy(lower.begin(), lower.end(), lo_.begin());
    std::copy(upper.begin(), upper.end(), hi_.begin());
    for (int i = 0; i < m_; ++i) {
      double r = model_->rhs(i);
      switch (model_->sense(i)) {
        case milp::Sense::kLessEqual:
          lo_[n_ + i] = -kInf;
          hi_[n_ + i] = r;
          break;
        case milp::Sense::kGreaterEqual:
          lo_[n_ + i] = r;
          hi_[n_ + i] = kInf;
          break;
        case milp::Sense::kEqual:
          lo_[n_ + i] = hi_[n_ + i] = r;
          break;
      }
    }
  }

  void place_nonbasic(int k, VarStatus preferred) {
    VarStatus s = preferred;
    if (s == VarStatus::kAtLower && !std::isfinite(lo_[k])) s = VarStatus::kAtUpper;
    if (s == VarStatus::kAtUpper && !std::isfinite(hi_[k])) {
      s = std::isfinite(lo_[k]) ? VarStatus::kAtLower : VarStatus::kFree;
    }
    if (s == VarStatus::kFree && std::isfinite(lo_[k])) s = VarStatus::kAtLower;
    if (s == VarStatus::kFree && std::isfinite(hi_[k])) s = VarStatus::kAtUpper;
    status_[k] = s;
    x_[k] = s == VarStatus::kAtLower ? lo_[k] : s == VarStatus::kAtUpper ? hi_[k] : 0.0;
  }

  void slack_basis() {
    status_.assign(static_cast<std::size_t>(n_ + m_), VarStatus::kAtLower);
    x_.assign(static_cast<std::size_t>(n_ + m_), 0.0);
    head_.resize(static_cast<std::size_t>(m_));
    for (int j = 0; j < n_; ++j) place_nonbasic(j, VarStatus::kAtLower);
    for (int i = 0; i < m_; ++i) {
      head_[i] = n_ + i;
      status_[n_ + i] = VarStatus::kBasic;
    }
  }

  bool load_basis(const Basis& b) {
    if (static_cast<int>(b.status.size()) != n_ + m_) return false;
    int basics = 0;
    for (VarStatus s : b.status) basics += s == VarStatus::kBasic;
    if (basics != m_) return false;
    status_ = b.status;
    x_.assign(static_cast<std::size_t>(n_ + m_), 0.0);
    head_.clear();
    for (int k = 0; k < n_ + m_; ++k) {
      if (status_[k] == VarStatus::kBasic) {
        head_.push_back(k);
      } else {
        place_nonbasic(k, status_[k]);
      }
    }
    return true;
  }

  bool refactor() {
    etas_.clear();
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<std::size_t>(m_) * 3);
    for (int r = 0; r < m_; ++r) {
      int k = head_[r];
      if (k < n_) {
        for (int p = col_start_[k]; p < col_start_[k + 1]; ++p) {
          trip.emplace_back(col_row_[p], r, col_val_[p]);
        }
      } else {
        trip.emplace_back(k - n_, r, -1.0);
      }
    }
    Eigen::SparseMatrix<double> B(m_, m_);
    B.setFromTriplets(trip.begin(), trip.end());
    B.makeCompressed();
    if (m_ == 0) return true;
    lu_.analyzePattern(B);
    lu_.factorize(B);
    if (lu_.info() != Eigen::Success) return false;
    compute_basic_values();
    return true;
  }

  void compute_basic_values() {
    std::vector<double> rhs(static_cast<std::size_t>(m_), 0.0);
    for (int k = 0; k < n_ + m_; ++k) {
      if (status_[k] == VarStatus::kBasic || x_[k] == 0.0) continue;
      if (k < n_) {
        for (int p = col_start_[k]; p < col_start_[k + 1]; ++p) {
          rhs[col_row_[p]] -= col_val_[p] * x_[k];
        }
      } else {
        rhs[k - n_] += x_[k];
      }
    }
    ftran(rhs);
    for (int r = 0; r < m_; ++r) x_[head_[r]] = rhs[r];
  }

  void ftran(std::vector<double>& v) const {
    if (m_ == 0) return;
    Eigen::Map<Eigen::VectorXd> vm(v.data(), m_);
    Eigen::VectorXd sol = lu_.solve(vm);
    vm = sol;
    for (const Eta& e : etas_) {
      double xr = v[e.row] / e.pivot;
      if (xr != 0.0) {
        for (std::size_t t = 0; t < e.idx.size(); ++t) v[e.idx[t]] -= e.val[t] * xr;
      }
      v[e.row] = xr;
    }
  }

  void btran(std::vector<double>& v) {
    if (m_ == 0) return;
    for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
      double s = v[it->row];
      for (std::size_t t = 0; t < it->idx.size(); ++t) s -= v[it->idx[t]] * it->val[t];
      v[it->row] = s / it->pivot;
    }
    Eigen::Map<Eigen::VectorXd> vm(v.data(), m_);
    Eigen::VectorXd sol = lu_.transpose().solve(vm);
    vm = sol;
  }

  void load_column(int k, std::vector<double>& a) const {
    std::fill(a.begin(), a.end(), 0.0);
    if (k < n_) {
      for (int p = col_start_[k]; p < col_start_[k + 1]; ++p) a[col_row_[p]] = col_val_[p];
    } else {
      a[k - n_] = -1.0;
    }
  }

  double column_dot(int k, const std::vector<double>& y) const {
    if (k >= n_) return -y[k - n_];
    double s = 0.0;
    for (int p = col_start_[k]; p < col_start_[k + 1]; ++p) s += col_val_[p] * y[col_row_[p]];
    return s;
  }

  LpStatus iterate(int64_t& iters) {
    std::vector<double> y(static_cast<std::size_t>(m_));
    std::vector<double> alpha(static_cast<std::size_t>(m_));
    std::vector<signed char> infeas(static_cast<std::size_t>(m_));
    int degenerate_run = 0;
    int refactor_failures = 0;
    const double ptol = opts_.primal_tol;

    while (true) {
      if (iters >= opts_.max_iterations) return LpStatus::kNumericallyStuck;
      if (static_cast<int>(etas_.size()) >= opts_.refactor_interval) {
        if (!refactor_or_recover(refactor_failures)) return LpStatus::kNumericallyStuck;
      }

      // Phase selection from the current basic values.
      bool phase1 = false;
      for (int r = 0; r < m_; ++r) {
        int k = head_[r];
        signed char f = 0;
        if (x_[k] < lo_[k] - ptol) f = -1;
        else if (x_[k] > hi_[k] + ptol) f = 1;
        infeas[r] = f;
        phase1 |= f != 0;
      }
      for (int r = 0; r < m_; ++r) {
        y[r] = phase1 ? static_cast<double>(infeas[r]) : cost_[head_[r]];
      }
      btran(y);

      // Pricing.
      const bool bland = degenerate_run >= opts_.degenerate_before_bland;
      int enter = -1;
      int dir = 0;
      double best = 0.0;
      for (int k = 0; k < n_ + m_; ++k) {
        VarStatus s = status_[k];
        if (s == VarStatus::kBasic) continue;
        if (lo_[k] == hi_[k]) continue;
        double d = (phase1 ? 0.0 : cost_[k]) - column_dot(k, y);
        int kdir = 0;
        if ((s == VarStatus::kAtLower || s == VarStatus::kFree) && d < -opts_.dual_tol) kdir = 1;
        else if ((s == VarStatus::kAtUpper || s == VarStatus::kFree) && d > opts_.dual_tol) kdir = -1;
        if (kdir == 0) continue;
        if (bland) {
          enter = k;
          dir = kdir;
          break;
        }
        if (std::abs(d) > best) {
          best = std::abs(d);
          enter = k;
          dir = kdir;
        }
      }

      if (enter < 0) {
        if (!etas_.empty()) {
          // Confirm on a fresh factorization before declaring termination.
          if (!refactor_or_recover(refactor_failures)) return LpStatus::kNumericallyStuck;
          continue;
        }
        return phase1 ? LpStatus::kInfeasible : LpStatus::kOptimal;
      }

      load_column(enter, alpha);
      ftran(alpha);

      // Ratio test.
      double theta_max = kInf;
      for (int r = 0; r < m_; ++r) {
        if (std::abs(alpha[r]) <= opts_.pivot_tol) continue;
        double rate = -dir * alpha[r];
        int k = head_[r];
        double lim = kInf;
        if (rate < 0) {
          if (infeas[r] > 0) lim = (x_[k] - hi_[k] + ptol) / -rate;
          else if (infeas[r] == 0 && std::isfinite(lo_[k])) lim = (x_[k] - lo_[k] + ptol) / -rate;
        } else {
          if (infeas[r] < 0) lim = (lo_[k] - x_[k] + ptol) / rate;
          else if (infeas[r] == 0 && std::isfinite(hi_[k])) lim = (hi_[k] - x_[k] + ptol) / rate;
        }
        theta_max = std::min(theta_max, lim);
      }
      const double flip = hi_[enter] - lo_[enter];

      int leave_row = -1;
      double theta = 0.0;
      double leave_value = 0.0;
      bool leave_at_upper = false;
      if (std::isfinite(flip) && flip <= theta_max) {
        theta = flip;
      } else if (!std::isfinite(theta_max)) {
        if (phase1) return LpStatus::kNumericallyStuck;
        if (!etas_.empty()) {
          if (!refactor_or_recover(refactor_failures)) return LpStatus::kNumericallyStuck;
          continue;
        }
        return LpStatus::kUnbounded;
      } else {
        double best_pivot = 0.0;
        double best_ratio = kInf;
        for (int r = 0; r < m_; ++r) {
          if (std::abs(alpha[r]) <= opts_.pivot_tol) continue;
          double rate = -dir * alpha[r];
          int k = head_[r];
          double target;
          bool to_upper;
          if (rate < 0) {
            if (infeas[r] < 0) continue;
            to_upper = infeas[r] > 0;
            target = to_upper ? hi_[k] : lo_[k];
          } else {
            if (infeas[r] > 0) continue;
            to_upper = infeas[r] == 0;
            target = to_upper ? hi_[k] : lo_[k];
          }
          if (!std::isfinite(target)) continue;
          double ratio = std::max(0.0, (target - x_[k]) / rate);
          if (ratio > theta_max) continue;
          bool take;
          if (bland) {
            take = ratio < best_ratio - 1e-12 ||
                   (ratio <= best_ratio + 1e-12 && leave_row >= 0 && k < head_[leave_row]);
          } else {
            take = std::abs(alpha[r]) > best_pivot;
          }
          if (take) {
            best_pivot = std::abs(alpha[r]);
            best_ratio = ratio;
            leave_row = r;
            theta = ratio;
            leave_value = target;
            leave_at_upper = to_upper;
          }
        }
        if (leave_row < 0) return LpStatus::kNumericallyStuck;
      }

      ++iters;
      degenerate_run = theta < 1e-12 ? degenerate_run + 1 : 0;

      x_[enter] += dir * theta;
      if (theta != 0.0) {
        for (int r = 0; r < m_; ++r) {
          if (alpha[r] != 0.0) x_[head_[r]] -= dir * theta * alpha[r];
        }
      }
      if (leave_row < 0) {
        status_[enter] = dir > 0 ? VarStatus::kAtUpper : VarStatus::kAtLower;
        x_[enter] = dir > 0 ? hi_[enter] : lo_[enter];
        continue;
      }

      int leaving = head_[leave_row];
      x_[leaving] = leave_value;
      status_[leaving] = (leave_at_upper && lo_[leaving] != hi_[leaving])
                             ? VarStatus::kAtUpper
                             : VarStatus::kAtLower;
      head_[leave_row] = enter;
      status_[enter] = VarStatus::kBasic;

      Eta e;
      e.row = leave_row;
      e.pivot = alpha[leave_row];
      for (int r = 0; r < m_; ++r) {
        if (r != leave_row && alpha[r] != 0.0) {
          e.idx.push_back(r);
          e.val.push_back(alpha[r]);
        }
      }
      etas_.push_back(std::move(e));
    }
  }

  bool refactor_or_recover(int& failures) {
    if (refactor()) return true;
    if (++failures > 3) return false;
    slack_basis();
    return refactor();
  }

  void extract(LpResult& res) {
    res.primal.assign(x_.begin(), x_.begin() + n_);
    std::vector<double> y(static_cast<std::size_t>(m_));
    for (int r = 0; r < m_; ++r) y[r] = cost_[head_[r]];
    btran(y);
    res.dual = y;
    res.reduced_cost.resize(static_cast<std::size_t>(n_));
    for (int j = 0; j < n_; ++j) {
      res.reduced_cost[j] =
          status_[j] == VarStatus::kBasic ? 0.0 : cost_[j] - column_dot(j, y);
    }
    res.objective = 0.0;
    for (int j = 0; j < n_; ++j) res.objective += cost_[j] * res.primal[j];
  }

  const milp::Model* model_;
  SimplexOptions opts_;
  int n_;
  int m_;

  std::vector<int> col_start_;
  std::vector<int> col_row_;
  std::vector<double> col_val_;
  std::vector<double> cost_;

  std::vector<double> lo_;
  std::vector<double> hi_;
  std::vector<double> x_;
  std::vector<VarStatus> status_;
  std::vector<int> head_;
  std::vector<Eta> etas_;
  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu_;
};

/// Solves the LP given by the model with binaries treated as continuous on
/// their bounds.
inline LpResult solve_lp(const milp::Model& model, SimplexOptions opts = {}) {
  BoundedSimplex simplex(model, opts);
  return simplex.solve();
}

/// |primal - dual| scaled by max(1, |primal|).
inline double relative_duality_gap(const milp::Model& model,
                                   std::span<const double> lower,
                                   std::span<const double> upper,
                                   const LpResult& res) {
  double d = dual_objective(model, lower, upper, res.dual);
  return std::abs(res.objective - d) / std::max(1.0, std::abs(res.objective));
}

}  // namespace gridsched::solver

#endif  // GRIDSCHED_SOLVER_SIMPLEX_HPP_
