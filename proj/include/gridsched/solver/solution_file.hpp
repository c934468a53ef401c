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

#ifndef GRIDSCHED_SOLVER_SOLUTION_FILE_HPP_
#define GRIDSCHED_SOLVER_SOLUTION_FILE_HPP_

#include <charconv>
#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "gridsched/milp/model.hpp"
#include "gridsched/milp/mps_writer.hpp"

namespace gridsched::solver {

class SolutionFileError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnknownVariableError : public SolutionFileError {
 public:
  using SolutionFileError::SolutionFileError;
};

struct ParsedSolution {
  std::vector<double> assignment;  // per column
  std::vector<std::string> log;    // one line per defaulted column
};

/// Reads `<name-or-alias> <value>` lines. Blank lines and text after '#'
/// are ignored. Columns not mentioned default to their lower bound (0 when
/// the lower bound is infinite).
inline ParsedSolution parse_solution_file(std::string_view text,
                                          const milp::Model& model) {
  const int n = model.num_cols();
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  ParsedSolution out;
  out.assignment.assign(static_cast<std::size_t>(n), 0.0);

  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::string name, value;
    if (!(ls >> name)) continue;
    if (!(ls >> value)) {
      throw SolutionFileError("line " + std::to_string(line_no) + ": missing value");
    }
    std::string extra;
    if (ls >> extra) {
      throw SolutionFileError("line " + std::to_string(line_no) + ": trailing text");
    }
    int col = -1;
    if (auto c = model.find_column(name)) {
      col = c->value();
    } else if (auto a = milp::parse_column_alias(name); a && *a < n) {
      col = *a;
    } else {
      throw UnknownVariableError("line " + std::to_string(line_no) +
                                 ": unknown variable '" + name + "'");
    }
    double v = 0.0;
    const char* b = value.data();
    const char* e = b + value.size();
    auto [p, ec] = std::from_chars(b, e, v);
    if (ec != std::errc() || p != e) {
      throw SolutionFileError("line " + std::to_string(line_no) +
                              ": unparsable value '" + value + "'");
    }
    out.assignment[col] = v;
    seen[col] = 1;
  }
  for (int j = 0; j < n; ++j) {
    if (seen[j]) continue;
    const auto& var = model.variables()[j];
    double v = std::isfinite(var.lower) ? var.lower : 0.0;
    out.assignment[j] = v;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out.log.push_back("defaulted " + var.name + " to " + buf);
  }
  return out;
}

/// One `<name> <value>` line per column, values printed round-trip exact.
inline std::string write_solution_file(const milp::Model& model,
                                       std::span<const double> x) {
  std::string s;
  char buf[64];
  for (int j = 0; j < model.num_cols(); ++j) {
    s += model.variables()[j].name;
    std::snprintf(buf, sizeof buf, " %.17g\n", x[j]);
    s += buf;
  }
  return s;
}

}  // namespace gridsched::solver

#endif  // GRIDSCHED_SOLVER_SOLUTION_FILE_HPP_
