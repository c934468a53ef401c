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

#ifndef GRIDSCHED_GRID_CONTINGENCY_HPP_
#define GRIDSCHED_GRID_CONTINGENCY_HPP_

#include <stdexcept>
#include <string>
#include <vector>

#include "gridsched/grid/case.hpp"
#include "gridsched/grid/validate.hpp"

namespace gridsched::grid {

class ContingencyError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct ContingencyList {
  std::vector<int> lines;    // line ids, case order
  std::vector<int> bridges;  // candidates dropped because they disconnect
};

/// True when taking `line_pos` out of service splits the bus graph.
inline bool is_bridge(const Case& c, int line_pos) {
  return !buses_connected(c, [line_pos](int k) { return k != line_pos; });
}

/// Single-line outages to study. Bridges are never returned. For the
/// all-lines policy only lines flagged as outage candidates are considered;
/// an explicit list is honoured as given (minus bridges) in case order.
inline ContingencyList contingency_list(const Case& c, const ContingencyPolicy& policy) {
  ContingencyList out;
  if (policy.kind == ContingencyPolicyKind::kNone) return out;
  std::vector<char> wanted(c.lines.size(), 0);
  if (policy.kind == ContingencyPolicyKind::kAllLines) {
    for (std::size_t k = 0; k < c.lines.size(); ++k) {
      wanted[k] = c.lines[k].outage_candidate ? 1 : 0;
    }
  } else {
    for (int id : policy.lines) {
      int k = c.line_position(id);
      if (k < 0) throw ContingencyError("unknown contingency line " + std::to_string(id));
      wanted[k] = 1;
    }
  }
  for (std::size_t k = 0; k < c.lines.size(); ++k) {
    if (!wanted[k]) continue;
    if (is_bridge(c, static_cast<int>(k))) {
      out.bridges.push_back(c.lines[k].id);
    } else {
      out.lines.push_back(c.lines[k].id);
    }
  }
  return out;
}

inline ContingencyList contingency_list(const Case& c) {
  return contingency_list(c, c.options.contingencies);
}

}  // namespace gridsched::grid

#endif  // GRIDSCHED_GRID_CONTINGENCY_HPP_
