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

#ifndef GRIDSCHED_MILP_MPS_WRITER_HPP_
#define GRIDSCHED_MILP_MPS_WRITER_HPP_

#include <charconv>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gridsched/milp/model.hpp"

namespace gridsched::milp {

// Fixed MPS allows 8-character names, so every column and row is written
// under a positional alias (C0000000, R0000000) and the sidecar maps it back.
inline constexpr int kMaxAliasIndex = 9'999'999;

inline std::string column_alias(int col) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "C%07d", col);
  return buf;
}

inline std::string row_alias(int row) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "R%07d", row);
  return buf;
}

/// Column index encoded in an alias of the form C0000000, if it is one.
inline std::optional<int> parse_column_alias(std::string_view s) {
  if (s.size() != 8 || s[0] != 'C') return std::nullopt;
  int v = 0;
  auto [p, ec] = std::from_chars(s.data() + 1, s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) return std::nullopt;
  return v;
}

/// Shortest text of at most 12 characters for the numeric MPS fields.
inline std::string mps_number(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  std::string s(buf, p);
  if (s.size() <= 12) return s;
  for (int prec = 12; prec >= 1; --prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::string_view(buf).size() <= 12) return buf;
  }
  throw ModelError("cannot format number for MPS field");
}

struct ProblemFile {
  std::string mps;
  std::string aliases;  // "<alias> <full-name>" per line
};

namespace detail {

inline void pad_to(std::string& line, std::size_t col) {
  if (line.size() < col) line.append(col - line.size(), ' ');
}

// Field layout of fixed MPS: 2-3, 5-12, 15-22, 25-36, 40-47, 50-61
// (1-based). Positions below are 0-based starting offsets.
inline std::string fixed_line(std::string_view f1, std::string_view f2,
                              std::string_view f3, std::string_view f4,
                              std::string_view f5 = {}) {
  std::string line(" ");
  line += f1;
  pad_to(line, 4);
  line += f2;
  if (!f3.empty() || !f4.empty() || !f5.empty()) {
    pad_to(line, 14);
    line += f3;
  }
  if (!f4.empty()) {
    pad_to(line, 24);
    std::string num(f4);
    if (num.size() < 12) line.append(12 - num.size(), ' ');
    line += num;
  }
  if (!f5.empty()) {
    pad_to(line, 39);
    line += f5;
  }
  line += '\n';
  return line;
}

inline char sense_code(Sense s) {
  switch (s) {
    case Sense::kLessEqual:
      return 'L';
    case Sense::kEqual:
      return 'E';
    case Sense::kGreaterEqual:
      return 'G';
  }
  return 'E';
}

}  // namespace detail

/// Writes the frozen model as fixed-format MPS. Output is a pure function of
/// the model, so identical models give identical bytes.
inline ProblemFile write_problem_file(const Model& model,
                                      std::string_view name = "GRIDSCHD") {
  if (!model.frozen()) throw ModelError("write_problem_file needs a frozen model");
  if (model.num_cols() > kMaxAliasIndex || model.num_rows() > kMaxAliasIndex) {
    throw ModelError("model too large for fixed MPS aliases");
  }
  using detail::fixed_line;
  const int n = model.num_cols();
  const int m = model.num_rows();

  // Column-major view of the rows.
  std::vector<int64_t> start(static_cast<std::size_t>(n) + 1, 0);
  for (int i = 0; i < m; ++i) {
    for (int32_t c : model.row_columns(i)) ++start[static_cast<std::size_t>(c) + 1];
  }
  for (int j = 0; j < n; ++j) start[j + 1] += start[j];
  std::vector<int32_t> rows(static_cast<std::size_t>(start[n]));
  std::vector<double> vals(static_cast<std::size_t>(start[n]));
  {
    std::vector<int64_t> fill(start.begin(), start.end() - 1);
    for (int i = 0; i < m; ++i) {
      auto cols = model.row_columns(i);
      auto v = model.row_values(i);
      for (std::size_t k = 0; k < cols.size(); ++k) {
        auto pos = static_cast<std::size_t>(fill[cols[k]]++);
        rows[pos] = i;
        vals[pos] = v[k];
      }
    }
  }

  ProblemFile out;
  std::string& s = out.mps;
  s += "NAME          ";
  s += name;
  s += '\n';
  s += "ROWS\n";
  s += fixed_line("N", "OBJ", {}, {});
  for (int i = 0; i < m; ++i) {
    s += fixed_line(std::string(1, detail::sense_code(model.sense(i))),
                    row_alias(i), {}, {});
  }

  s += "COLUMNS\n";
  bool in_int = false;
  int marker = 0;
  auto obj = model.objective();
  for (int j = 0; j < n; ++j) {
    const bool is_bin = model.variables()[j].kind == VarKind::kBinary;
    if (is_bin != in_int) {
      char mk[16];
      std::snprintf(mk, sizeof mk, "M%07d", marker++);
      s += fixed_line({}, mk, "'MARKER'", {}, is_bin ? "'INTORG'" : "'INTEND'");
      in_int = is_bin;
    }
    const std::string alias = column_alias(j);
    bool wrote = false;
    if (obj[j] != 0.0) {
      s += fixed_line({}, alias, "OBJ", mps_number(obj[j]));
      wrote = true;
    }
    for (auto k = start[j]; k < start[j + 1]; ++k) {
      s += fixed_line({}, alias, row_alias(rows[k]), mps_number(vals[k]));
      wrote = true;
    }
    if (!wrote) {
      // Columns with no entries still need to be declared.
      s += fixed_line({}, alias, "OBJ", "0");
    }
  }
  if (in_int) {
    char mk[16];
    std::snprintf(mk, sizeof mk, "M%07d", marker++);
    s += fixed_line({}, mk, "'MARKER'", {}, "'INTEND'");
  }

  s += "RHS\n";
  for (int i = 0; i < m; ++i) {
    if (model.rhs(i) != 0.0) {
      s += fixed_line({}, "RHS", row_alias(i), mps_number(model.rhs(i)));
    }
  }

  s += "BOUNDS\n";
  for (int j = 0; j < n; ++j) {
    const Variable& v = model.variables()[j];
    const std::string alias = column_alias(j);
    if (v.kind == VarKind::kBinary && v.lower == 0.0 && v.upper == 1.0) {
      s += fixed_line("BV", "BND", alias, {});
      continue;
    }
    if (v.lower == v.upper) {
      s += fixed_line("FX", "BND", alias, mps_number(v.lower));
      continue;
    }
    if (v.lower == -kInf && v.upper == kInf) {
      s += fixed_line("FR", "BND", alias, {});
      continue;
    }
    if (v.lower == -kInf) {
      s += fixed_line("MI", "BND", alias, {});
    } else if (v.lower != 0.0) {
      s += fixed_line("LO", "BND", alias, mps_number(v.lower));
    }
    if (v.upper != kInf) {
      s += fixed_line("UP", "BND", alias, mps_number(v.upper));
    }
  }
  s += "ENDATA\n";

  for (int j = 0; j < n; ++j) {
    out.aliases += column_alias(j);
    out.aliases += ' ';
    out.aliases += model.variables()[j].name;
    out.aliases += '\n';
  }
  for (int i = 0; i < m; ++i) {
    out.aliases += row_alias(i);
    out.aliases += ' ';
    out.aliases += model.tag(i).empty() ? "row" + std::to_string(i) : model.tag(i);
    out.aliases += '\n';
  }
  return out;
}

}  // namespace gridsched::milp

#endif  // GRIDSCHED_MILP_MPS_WRITER_HPP_
