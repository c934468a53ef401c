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

#ifndef GRIDSCHED_MILP_MODEL_HPP_
#define GRIDSCHED_MILP_MODEL_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace gridsched::milp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kFeasibilityTol = 1e-6;
inline constexpr double kZeroCoefficientTol = 1e-9;

// Thin integer wrapper so column and row ids cannot be mixed up.
template <class Tag>
class StrongIndex {
 public:
  constexpr StrongIndex() = default;
  constexpr explicit StrongIndex(int32_t v) : value_(v) {}
  constexpr int32_t value() const { return value_; }
  constexpr auto operator<=>(const StrongIndex&) const = default;

 private:
  int32_t value_ = -1;
};

using ColId = StrongIndex<struct ColTag>;
using RowId = StrongIndex<struct RowTag>;

enum class VarKind { kContinuous, kBinary };
enum class Sense { kLessEqual, kEqual, kGreaterEqual };

class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Variable {
  std::string name;
  VarKind kind = VarKind::kContinuous;
  double lower = 0.0;
  double upper = kInf;
  // Equation family that produced the bounds, e.g. "eq20/k=3/t=0/s=1".
  std::string bound_tag;
};

struct Term {
  ColId col;
  double coef = 0.0;
};

struct LinearConstraint {
  std::vector<Term> terms;
  Sense sense = Sense::kLessEqual;
  double rhs = 0.0;
  std::string tag;
};

/// Sparse MILP in minimization form. Rows are stored row-major; variable
/// bounds live on the columns. The model is built incrementally and then
/// frozen, after which only read access and copy-with-changes are allowed.
class Model {
 public:
  Model() = default;

  ColId add_variable(std::string name, VarKind kind, double lower,
                     double upper, std::string bound_tag = {}) {
    require_mutable();
    if (std::isnan(lower) || std::isnan(upper) || lower > upper) {
      throw ModelError("inverted or NaN bounds for variable '" + name + "'");
    }
    if (kind == VarKind::kBinary && !binary_bounds_ok(lower, upper)) {
      throw ModelError("binary variable '" + name +
                       "' must have bounds within {0,1}");
    }
    ColId id(static_cast<int32_t>(vars_.size()));
    auto [it, inserted] = col_by_name_.emplace(name, id);
    if (!inserted) throw ModelError("duplicate variable name '" + name + "'");
    vars_.push_back(Variable{std::move(name), kind, lower, upper,
                             std::move(bound_tag)});
    objective_.push_back(0.0);
    return id;
  }

  /// Appends a row. Repeated columns are merged and coefficients with
  /// magnitude below kZeroCoefficientTol are dropped.
  RowId add_constraint(std::span<const Term> terms, Sense sense, double rhs,
                       std::string tag) {
    require_mutable();
    if (!std::isfinite(rhs)) throw ModelError("non-finite rhs in " + tag);
    std::vector<Term> merged;
    merged.reserve(terms.size());
    for (const Term& t : terms) {
      check_col(t.col);
      if (!std::isfinite(t.coef)) {
        throw ModelError("non-finite coefficient in " + tag);
      }
      merged.push_back(t);
    }
    std::sort(merged.begin(), merged.end(),
              [](const Term& a, const Term& b) { return a.col < b.col; });
    std::size_t out = 0;
    for (std::size_t i = 0; i < merged.size(); ++i) {
      if (out > 0 && merged[out - 1].col == merged[i].col) {
        merged[out - 1].coef += merged[i].coef;
      } else {
        merged[out++] = merged[i];
      }
    }
    merged.resize(out);
    std::erase_if(merged, [](const Term& t) {
      return std::abs(t.coef) < kZeroCoefficientTol;
    });

    RowId id(static_cast<int32_t>(senses_.size()));
    if (!tag.empty()) {
      auto [it, inserted] = row_by_tag_.emplace(tag, id);
      if (!inserted) throw ModelError("duplicate constraint tag '" + tag + "'");
    }
    for (const Term& t : merged) {
      row_cols_.push_back(t.col.value());
      row_vals_.push_back(t.coef);
    }
    row_start_.push_back(static_cast<int64_t>(row_cols_.size()));
    senses_.push_back(sense);
    rhs_.push_back(rhs);
    tags_.push_back(std::move(tag));
    return id;
  }

  RowId add_constraint(std::initializer_list<Term> terms, Sense sense,
                       double rhs, std::string tag) {
    return add_constraint(std::span<const Term>(terms.begin(), terms.size()),
                          sense, rhs, std::move(tag));
  }

  void set_objective(ColId col, double coef) {
    require_mutable();
    check_col(col);
    if (!std::isfinite(coef)) throw ModelError("non-finite objective coef");
    objective_[static_cast<std::size_t>(col.value())] = coef;
  }

  void add_objective(ColId col, double coef) {
    require_mutable();
    check_col(col);
    objective_[static_cast<std::size_t>(col.value())] += coef;
  }

  void freeze() { frozen_ = true; }
  bool frozen() const { return frozen_; }

  int num_cols() const { return static_cast<int>(vars_.size()); }
  int num_rows() const { return static_cast<int>(senses_.size()); }
  int64_t num_nonzeros() const { return static_cast<int64_t>(row_cols_.size()); }

  const Variable& variable(ColId col) const {
    check_col(col);
    return vars_[static_cast<std::size_t>(col.value())];
  }
  const std::vector<Variable>& variables() const { return vars_; }

  std::optional<ColId> find_column(std::string_view name) const {
    auto it = col_by_name_.find(std::string(name));
    if (it == col_by_name_.end()) return std::nullopt;
    return it->second;
  }
  std::optional<RowId> find_row(std::string_view tag) const {
    auto it = row_by_tag_.find(std::string(tag));
    if (it == row_by_tag_.end()) return std::nullopt;
    return it->second;
  }

  // Row access.
  std::span<const int32_t> row_columns(int row) const {
    auto b = static_cast<std::size_t>(row_start_[row]);
    auto e = static_cast<std::size_t>(row_start_[row + 1]);
    return {row_cols_.data() + b, e - b};
  }
  std::span<const double> row_values(int row) const {
    auto b = static_cast<std::size_t>(row_start_[row]);
    auto e = static_cast<std::size_t>(row_start_[row + 1]);
    return {row_vals_.data() + b, e - b};
  }
  Sense sense(int row) const { return senses_[row]; }
  double rhs(int row) const { return rhs_[row]; }
  const std::string& tag(int row) const { return tags_[row]; }
  const std::vector<std::string>& tags() const { return tags_; }

  LinearConstraint constraint(RowId row) const {
    LinearConstraint c;
    auto cols = row_columns(row.value());
    auto vals = row_values(row.value());
    for (std::size_t i = 0; i < cols.size(); ++i) {
      c.terms.push_back(Term{ColId(cols[i]), vals[i]});
    }
    c.sense = senses_[row.value()];
    c.rhs = rhs_[row.value()];
    c.tag = tags_[row.value()];
    return c;
  }

  std::span<const double> objective() const { return objective_; }

  int num_binaries() const {
    return static_cast<int>(std::count_if(
        vars_.begin(), vars_.end(),
        [](const Variable& v) { return v.kind == VarKind::kBinary; }));
  }

  std::vector<double> lower_bounds() const {
    std::vector<double> out;
    out.reserve(vars_.size());
    for (const auto& v : vars_) out.push_back(v.lower);
    return out;
  }
  std::vector<double> upper_bounds() const {
    std::vector<double> out;
    out.reserve(vars_.size());
    for (const auto& v : vars_) out.push_back(v.upper);
    return out;
  }

  /// Frozen copy whose listed columns have bounds pinned to the given value.
  Model with_fixed(std::span<const std::pair<ColId, double>> pins) const {
    Model copy = *this;
    for (const auto& [col, value] : pins) {
      check_col(col);
      Variable& v = copy.vars_[static_cast<std::size_t>(col.value())];
      if (v.kind == VarKind::kBinary && value != 0.0 && value != 1.0) {
        throw ModelError("binary '" + v.name + "' pinned to non-binary value");
      }
      v.lower = value;
      v.upper = value;
    }
    copy.frozen_ = true;
    return copy;
  }

  /// Frozen copy with every binary turned into a continuous column.
  Model relaxed() const {
    Model copy = *this;
    for (Variable& v : copy.vars_) v.kind = VarKind::kContinuous;
    copy.frozen_ = true;
    return copy;
  }

 private:
  static bool binary_bounds_ok(double lo, double hi) {
    auto is01 = [](double x) { return x == 0.0 || x == 1.0; };
    return is01(lo) && is01(hi);
  }

  void require_mutable() const {
    if (frozen_) throw ModelError("model is frozen");
  }
  void check_col(ColId col) const {
    if (col.value() < 0 || col.value() >= num_cols()) {
      throw ModelError("unknown column " + std::to_string(col.value()));
    }
  }

  std::vector<Variable> vars_;
  std::vector<double> objective_;
  std::unordered_map<std::string, ColId> col_by_name_;

  std::vector<int64_t> row_start_{0};
  std::vector<int32_t> row_cols_;
  std::vector<double> row_vals_;
  std::vector<Sense> senses_;
  std::vector<double> rhs_;
  std::vector<std::string> tags_;
  std::unordered_map<std::string, RowId> row_by_tag_;

  bool frozen_ = false;
};

struct Violation {
  std::string tag;
  double amount = 0.0;
};

struct Evaluation {
  double objective = 0.0;
  std::vector<Violation> violations;
};

inline double row_activity(const Model& model, int row,
                           std::span<const double> x) {
  double act = 0.0;
  auto cols = model.row_columns(row);
  auto vals = model.row_values(row);
  for (std::size_t i = 0; i < cols.size(); ++i) {
    act += vals[i] * x[static_cast<std::size_t>(cols[i])];
  }
  return act;
}

inline double row_residual(Sense sense, double activity, double rhs) {
  switch (sense) {
    case Sense::kLessEqual:
      return std::max(0.0, activity - rhs);
    case Sense::kGreaterEqual:
      return std::max(0.0, rhs - activity);
    case Sense::kEqual:
      return std::abs(activity - rhs);
  }
  return 0.0;
}

/// Objective value and every violated row, bound, or integrality condition.
/// Rows without a tag are reported as "row<index>".
inline Evaluation evaluate(const Model& model, std::span<const double> x,
                           double tol = kFeasibilityTol) {
  if (static_cast<int>(x.size()) != model.num_cols()) {
    throw ModelError("assignment covers " + std::to_string(x.size()) +
                     " of " + std::to_string(model.num_cols()) + " columns");
  }
  Evaluation ev;
  auto obj = model.objective();
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (std::isnan(x[j])) {
      throw ModelError("missing value for column '" +
                       model.variables()[j].name + "'");
    }
    ev.objective += obj[j] * x[j];
  }
  for (int i = 0; i < model.num_rows(); ++i) {
    double r = row_residual(model.sense(i), row_activity(model, i, x),
                            model.rhs(i));
    if (r > tol) {
      const std::string& tag = model.tag(i);
      ev.violations.push_back(
          {tag.empty() ? "row" + std::to_string(i) : tag, r});
    }
  }
  for (std::size_t j = 0; j < x.size(); ++j) {
    const Variable& v = model.variables()[j];
    double out = std::max(v.lower - x[j], x[j] - v.upper);
    if (out > tol) {
      ev.violations.push_back(
          {v.bound_tag.empty() ? "bound/" + v.name : v.bound_tag, out});
    }
    if (v.kind == VarKind::kBinary) {
      double frac = std::min(std::abs(x[j]), std::abs(x[j] - 1.0));
      if (frac > tol) ev.violations.push_back({"integrality/" + v.name, frac});
    }
  }
  return ev;
}

/// Copy of a frozen model with all binaries continuous on their bounds.
inline Model lp_relaxation(const Model& model) {
  if (!model.frozen()) throw ModelError("lp_relaxation needs a frozen model");
  return model.relaxed();
}

}  // namespace gridsched::milp

#endif  // GRIDSCHED_MILP_MODEL_HPP_
