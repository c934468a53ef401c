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

#ifndef GRIDSCHED_FORMULATION_VARIABLE_INDEX_HPP_
#define GRIDSCHED_FORMULATION_VARIABLE_INDEX_HPP_

#include <array>
#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "gridsched/milp/model.hpp"

namespace gridsched::formulation {

// Column families. Entity coordinates are case ids (generator, line,
// contingency line, bus, RES, ESS); t and s are zero-based positions.
enum class Family {
  kGenPower,        // P/g/t/s
  kGenPowerC,       // Pc/g/c/t/s
  kFlow,            // F/k/t/s
  kFlowC,           // Fc/k/c/t/s
  kResPower,        // W/w/t/s
  kResPowerC,       // Wc/w/c/t/s
  kCharge,          // cha/e/t/s
  kChargeC,         // chac/e/c/t/s
  kDischarge,       // dis/e/t/s
  kDischargeC,      // disc/e/c/t/s
  kEnergy,          // E/e/t/s
  kEnergyC,         // Ec/e/c/t/s
  kReserve,         // r/g/t/s
  kCommit,          // u/g/t
  kStartup,         // v/g/t
  kSwitchPnr,       // zp/k/t/s
  kSwitchCnr,       // zc/k/c/t/s
  kAngle,           // th/n/t/s
  kAngleC,          // thc/n/c/t/s
  kChargeMode,      // bcha/e/t/s
  kDischargeMode,   // bdis/e/t/s
};

inline constexpr int kNumFamilies = 21;

struct FamilyInfo {
  const char* prefix;
  const char* labels;  // one letter per coordinate
  bool binary;
};

inline const FamilyInfo& family_info(Family f) {
  static const std::array<FamilyInfo, kNumFamilies> table = {{
      {"P", "gts", false},     {"Pc", "gcts", false},   {"F", "kts", false},
      {"Fc", "kcts", false},   {"W", "wts", false},     {"Wc", "wcts", false},
      {"cha", "ets", false},   {"chac", "ects", false}, {"dis", "ets", false},
      {"disc", "ects", false}, {"E", "ets", false},     {"Ec", "ects", false},
      {"r", "gts", false},     {"u", "gt", true},       {"v", "gt", true},
      {"zp", "kts", true},     {"zc", "kcts", true},    {"th", "nts", false},
      {"thc", "ncts", false},  {"bcha", "ets", true},   {"bdis", "ets", true},
  }};
  return table[static_cast<std::size_t>(f)];
}

inline int arity(Family f) { return static_cast<int>(std::string_view(family_info(f).labels).size()); }

struct VarKey {
  Family family = Family::kGenPower;
  std::array<int, 4> coords{};  // unused trailing entries stay 0

  bool operator==(const VarKey&) const = default;
};

struct VarKeyHash {
  std::size_t operator()(const VarKey& k) const {
    std::size_t h = static_cast<std::size_t>(k.family);
    for (int c : k.coords) h = h * 1000003u ^ std::hash<int>{}(c);
    return h;
  }
};

/// Canonical column name, e.g. `Pc/g=3/c=7/t=0/s=1`.
inline std::string var_name(const VarKey& k) {
  const FamilyInfo& info = family_info(k.family);
  std::string s = info.prefix;
  for (int i = 0; info.labels[i] != '\0'; ++i) {
    s += '/';
    s += info.labels[i];
    s += '=';
    s += std::to_string(k.coords[i]);
  }
  return s;
}

/// Inverse of var_name; nullopt for anything that is not a canonical name.
inline std::optional<VarKey> parse_var_name(std::string_view name) {
  auto slash = name.find('/');
  if (slash == std::string_view::npos) return std::nullopt;
  std::string_view prefix = name.substr(0, slash);
  for (int f = 0; f < kNumFamilies; ++f) {
    const FamilyInfo& info = family_info(static_cast<Family>(f));
    if (prefix != info.prefix) continue;
    VarKey key{static_cast<Family>(f), {}};
    std::string_view rest = name.substr(slash);
    for (int i = 0; info.labels[i] != '\0'; ++i) {
      if (rest.size() < 4 || rest[0] != '/' || rest[1] != info.labels[i] || rest[2] != '=') {
        return std::nullopt;
      }
      rest.remove_prefix(3);
      std::size_t len = 0;
      bool neg = !rest.empty() && rest[0] == '-';
      std::size_t i0 = neg ? 1 : 0;
      long long v = 0;
      for (len = i0; len < rest.size() && rest[len] >= '0' && rest[len] <= '9'; ++len) {
        v = v * 10 + (rest[len] - '0');
        if (v > 2147483647LL) return std::nullopt;
      }
      if (len == i0) return std::nullopt;
      key.coords[i] = static_cast<int>(neg ? -v : v);
      rest.remove_prefix(len);
    }
    if (!rest.empty()) return std::nullopt;
    return key;
  }
  return std::nullopt;
}

/// Bijection between (family, coordinates) and model columns.
class VariableIndex {
 public:
  void add(const VarKey& key, milp::ColId col) {
    if (col.value() != static_cast<int>(keys_.size())) {
      throw std::logic_error("variable index must be filled in column order");
    }
    if (!by_key_.emplace(key, col.value()).second) {
      throw std::logic_error("duplicate variable key " + var_name(key));
    }
    keys_.push_back(key);
  }

  std::optional<milp::ColId> find(const VarKey& key) const {
    auto it = by_key_.find(key);
    if (it == by_key_.end()) return std::nullopt;
    return milp::ColId(it->second);
  }

  std::optional<milp::ColId> find(Family f, std::array<int, 4> coords) const {
    return find(VarKey{f, coords});
  }

  /// Throws std::out_of_range for a key that has no column.
  milp::ColId at(Family f, std::array<int, 4> coords) const {
    auto c = find(f, coords);
    if (!c) throw std::out_of_range("no column " + var_name(VarKey{f, coords}));
    return *c;
  }

  const VarKey& key(milp::ColId col) const { return keys_.at(static_cast<std::size_t>(col.value())); }
  const std::vector<VarKey>& keys() const { return keys_; }
  int size() const { return static_cast<int>(keys_.size()); }

  std::vector<milp::ColId> columns_of(Family f) const {
    std::vector<milp::ColId> out;
    for (std::size_t j = 0; j < keys_.size(); ++j) {
      if (keys_[j].family == f) out.emplace_back(static_cast<int32_t>(j));
    }
    return out;
  }

 private:
  std::vector<VarKey> keys_;
  std::unordered_map<VarKey, int, VarKeyHash> by_key_;
};

}  // namespace gridsched::formulation

#endif  // GRIDSCHED_FORMULATION_VARIABLE_INDEX_HPP_
