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

// Case files are YAML documents with `format_version: 1`. Leading `#` lines
// form the provenance header and survive a load/save round trip.

#ifndef GRIDSCHED_GRID_CASE_IO_HPP_
#define GRIDSCHED_GRID_CASE_IO_HPP_

#include <yaml-cpp/yaml.h>

#include <charconv>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "gridsched/grid/case.hpp"
#include "gridsched/grid/scenarios.hpp"
#include "gridsched/grid/validate.hpp"

namespace gridsched::grid {

inline constexpr int kCaseFormatVersion = 1;

class CaseError : public std::runtime_error {
 public:
  explicit CaseError(std::vector<std::string> errors)
      : std::runtime_error(join(errors)), errors_(std::move(errors)) {}

  const std::vector<std::string>& errors() const { return errors_; }

 private:
  static std::string join(const std::vector<std::string>& e) {
    std::string s;
    for (const auto& x : e) s += (s.empty() ? "" : "\n") + x;
    return s;
  }
  std::vector<std::string> errors_;
};

namespace detail {

// Reads typed fields out of YAML maps while collecting every problem.
class FieldReader {
 public:
  explicit FieldReader(std::vector<std::string>& errors) : errors_(errors) {}

  void error(const std::string& path, const std::string& what) {
    errors_.push_back(path + ": " + what);
  }

  void expect_keys(const YAML::Node& map, const std::string& path,
                   std::initializer_list<std::string_view> allowed) {
    if (!map.IsMap()) {
      error(path, "expected a mapping");
      return;
    }
    for (const auto& kv : map) {
      std::string key = kv.first.Scalar();
      bool ok = false;
      for (auto a : allowed) ok |= key == a;
      if (!ok) error(path, "unknown key '" + key + "'");
    }
  }

  template <class T>
  std::optional<T> scalar(const YAML::Node& node, const std::string& path) {
    if (!node.IsScalar()) {
      error(path, "expected a scalar");
      return std::nullopt;
    }
    try {
      return node.as<T>();
    } catch (const YAML::Exception&) {
      error(path, "cannot parse '" + node.Scalar() + "'");
      return std::nullopt;
    }
  }

  template <class T>
  T required(const YAML::Node& map, const char* key, const std::string& path) {
    if (!map.IsMap() || !map[key]) {
      error(path, std::string("missing '") + key + "'");
      return T{};
    }
    return scalar<T>(map[key], path + "." + key).value_or(T{});
  }

  template <class T>
  T optional(const YAML::Node& map, const char* key, const std::string& path, T fallback) {
    if (!map.IsMap() || !map[key]) return fallback;
    return scalar<T>(map[key], path + "." + key).value_or(fallback);
  }

  std::vector<double> numbers(const YAML::Node& node, const std::string& path) {
    std::vector<double> out;
    if (!node || !node.IsSequence()) {
      error(path, "expected a list of numbers");
      return out;
    }
    for (std::size_t i = 0; i < node.size(); ++i) {
      out.push_back(scalar<double>(node[i], path + "[" + std::to_string(i) + "]").value_or(0));
    }
    return out;
  }

 private:
  std::vector<std::string>& errors_;
};

inline std::string leading_comment(std::string_view text) {
  std::string out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    if (line.empty() || line[0] != '#') break;
    line.remove_prefix(1);
    if (!line.empty() && line[0] == ' ') line.remove_prefix(1);
    out.append(line);
    out.push_back('\n');
    pos = end + 1;
  }
  return out;
}

inline std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    while (!cell.empty() && (cell.back() == ' ' || cell.back() == '\r')) cell.pop_back();
    while (!cell.empty() && cell.front() == ' ') cell.erase(cell.begin());
    cells.push_back(cell);
  }
  return cells;
}

}  // namespace detail

/// Parses a `scenario,unit,period,capacity_mw` table. Scenario and period
/// are zero-based; unit is the RES id. Probabilities default to equal.
inline ScenarioSet parse_scenario_csv(std::string_view text, const Case& c,
                                      const std::vector<double>& probabilities,
                                      std::vector<std::string>& errors) {
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  std::map<std::tuple<int, int, int>, double> cells;
  int max_s = -1;
  bool header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r" || line[0] == '#') continue;
    auto f = detail::split_csv(line);
    std::string where = "scenario csv line " + std::to_string(line_no);
    if (!header) {
      if (f != std::vector<std::string>{"scenario", "unit", "period", "capacity_mw"}) {
        errors.push_back(where + ": expected header scenario,unit,period,capacity_mw");
        return {};
      }
      header = true;
      continue;
    }
    if (f.size() != 4) {
      errors.push_back(where + ": expected 4 fields");
      continue;
    }
    int s = 0, w = 0, t = 0;
    double v = 0;
    auto num = [&](const std::string& x, auto& out) {
      auto [p, ec] = std::from_chars(x.data(), x.data() + x.size(), out);
      return ec == std::errc() && p == x.data() + x.size();
    };
    if (!num(f[0], s) || !num(f[1], w) || !num(f[2], t) || !num(f[3], v)) {
      errors.push_back(where + ": unparsable field");
      continue;
    }
    if (s < 0 || t < 0 || t >= c.horizon) {
      errors.push_back(where + ": scenario or period out of range");
      continue;
    }
    if (!cells.emplace(std::make_tuple(s, w, t), v).second) {
      errors.push_back(where + ": duplicate entry");
    }
    max_s = std::max(max_s, s);
  }
  if (!header) errors.push_back("scenario csv: missing header");
  ScenarioSet out;
  const int S = probabilities.empty() ? max_s + 1 : static_cast<int>(probabilities.size());
  out.probability = probabilities.empty() ? std::vector<double>(S > 0 ? S : 0, S > 0 ? 1.0 / S : 0)
                                          : probabilities;
  out.capacity_mw.assign(S > 0 ? S : 0, {});
  for (int s = 0; s < S; ++s) {
    out.capacity_mw[s].assign(c.res_units.size(), std::vector<double>(c.horizon, 0.0));
    for (std::size_t w = 0; w < c.res_units.size(); ++w) {
      for (int t = 0; t < c.horizon; ++t) {
        auto it = cells.find({s, c.res_units[w].id, t});
        if (it == cells.end()) {
          errors.push_back("scenario csv: no capacity for scenario " + std::to_string(s) +
                           ", unit " + std::to_string(c.res_units[w].id) + ", period " +
                           std::to_string(t));
        } else {
          out.capacity_mw[s][w][t] = it->second;
        }
      }
    }
  }
  for (const auto& [key, v] : cells) {
    auto [s, w, t] = key;
    bool known = false;
    for (const ResUnit& r : c.res_units) known |= r.id == w;
    if (!known || s >= S) {
      errors.push_back("scenario csv: entry for unknown scenario " + std::to_string(s) +
                       " or unit " + std::to_string(w));
      break;
    }
  }
  return out;
}

inline std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Parses and validates a case. Relative scenario CSV paths resolve against
/// `base_dir`. Throws CaseError listing every schema and semantic problem.
inline Case load_case(std::string_view text, const std::filesystem::path& base_dir = {}) {
  std::vector<std::string> errors;
  detail::FieldReader rd(errors);
  YAML::Node root;
  try {
    root = YAML::Load(std::string(text));
  } catch (const YAML::Exception& e) {
    throw CaseError({std::string("parse error: ") + e.what()});
  }
  if (!root.IsMap()) throw CaseError({"parse error: top level must be a mapping"});

  Case c;
  c.header_comment = detail::leading_comment(text);
  rd.expect_keys(root, "case",
                 {"format_version", "name", "horizon", "period_hours", "base_mva",
                  "reference_bus", "options", "buses", "lines", "generators", "ess", "res",
                  "scenarios"});
  int version = rd.required<int>(root, "format_version", "case");
  if (root["format_version"] && version != kCaseFormatVersion) {
    errors.push_back("case.format_version: unsupported version " + std::to_string(version));
  }
  c.name = rd.optional<std::string>(root, "name", "case", "");
  c.horizon = rd.optional<int>(root, "horizon", "case", 24);
  c.period_hours = rd.optional<double>(root, "period_hours", "case", 1.0);
  c.base_mva = rd.optional<double>(root, "base_mva", "case", 100.0);
  c.reference_bus = rd.required<int>(root, "reference_bus", "case");

  if (YAML::Node o = root["options"]) {
    rd.expect_keys(o, "options",
                   {"theta_cap", "contingency_limit", "tie_pnr_across_scenarios",
                    "contingencies"});
    c.options.theta_cap_rad = rd.optional<double>(o, "theta_cap", "options", 0.6);
    std::string lim = rd.optional<std::string>(o, "contingency_limit", "options", "emergency");
    if (lim == "emergency") {
      c.options.contingency_limit = ContingencyLimit::kEmergency;
    } else if (lim == "normal") {
      c.options.contingency_limit = ContingencyLimit::kNormal;
    } else {
      rd.error("options.contingency_limit", "expected 'emergency' or 'normal'");
    }
    c.options.tie_pnr_across_scenarios =
        rd.optional<bool>(o, "tie_pnr_across_scenarios", "options", false);
    if (YAML::Node cn = o["contingencies"]) {
      if (cn.IsSequence()) {
        c.options.contingencies.kind = ContingencyPolicyKind::kExplicit;
        for (std::size_t i = 0; i < cn.size(); ++i) {
          auto id = rd.scalar<int>(cn[i], "options.contingencies[" + std::to_string(i) + "]");
          if (id) c.options.contingencies.lines.push_back(*id);
        }
      } else if (cn.IsScalar() && cn.Scalar() == "all") {
        c.options.contingencies.kind = ContingencyPolicyKind::kAllLines;
      } else if (cn.IsScalar() && cn.Scalar() == "none") {
        c.options.contingencies.kind = ContingencyPolicyKind::kNone;
      } else {
        rd.error("options.contingencies", "expected 'all', 'none' or a list of line ids");
      }
    }
  }

  auto each = [&](const char* section, auto&& fn) {
    YAML::Node seq = root[section];
    if (!seq) return;
    if (!seq.IsSequence()) {
      rd.error(section, "expected a list");
      return;
    }
    for (std::size_t i = 0; i < seq.size(); ++i) {
      fn(seq[i], std::string(section) + "[" + std::to_string(i) + "]");
    }
  };

  each("buses", [&](const YAML::Node& n, const std::string& p) {
    rd.expect_keys(n, p, {"id", "demand"});
    Bus b;
    b.id = rd.required<int>(n, "id", p);
    b.demand_mw = rd.numbers(n["demand"], p + ".demand");
    c.buses.push_back(std::move(b));
  });

  each("lines", [&](const YAML::Node& n, const std::string& p) {
    rd.expect_keys(n, p, {"id", "from", "to", "b", "x", "limit", "emergency", "switchable",
                          "outage"});
    Line l;
    l.id = rd.required<int>(n, "id", p);
    l.from_bus = rd.required<int>(n, "from", p);
    l.to_bus = rd.required<int>(n, "to", p);
    if (n.IsMap() && n["b"] && n["x"]) {
      rd.error(p, "give either 'b' or 'x', not both");
    } else if (n.IsMap() && n["x"]) {
      double x = rd.required<double>(n, "x", p);
      if (x == 0) {
        rd.error(p + ".x", "reactance must be nonzero");
      } else {
        l.susceptance_pu = 1.0 / x;
      }
    } else {
      l.susceptance_pu = rd.required<double>(n, "b", p);
    }
    l.limit_normal_mw = rd.required<double>(n, "limit", p);
    l.limit_emergency_mw = rd.optional<double>(n, "emergency", p, l.limit_normal_mw);
    l.switchable = rd.optional<bool>(n, "switchable", p, true);
    l.outage_candidate = rd.optional<bool>(n, "outage", p, true);
    c.lines.push_back(l);
  });

  each("generators", [&](const YAML::Node& n, const std::string& p) {
    rd.expect_keys(n, p, {"id", "bus", "pmin", "pmax", "cost", "no_load", "startup",
                          "ramp_hr", "ramp_10", "ramp_su", "ramp_sd", "min_up", "min_down",
                          "init_on", "init_power"});
    Generator g;
    g.id = rd.required<int>(n, "id", p);
    g.bus = rd.required<int>(n, "bus", p);
    g.p_min_mw = rd.optional<double>(n, "pmin", p, 0.0);
    g.p_max_mw = rd.required<double>(n, "pmax", p);
    g.cost_per_mwh = rd.required<double>(n, "cost", p);
    g.no_load_cost = rd.optional<double>(n, "no_load", p, 0.0);
    g.startup_cost = rd.optional<double>(n, "startup", p, 0.0);
    g.ramp_hourly_mw = rd.optional<double>(n, "ramp_hr", p, g.p_max_mw);
    g.ramp_10min_mw = rd.optional<double>(n, "ramp_10", p, g.p_max_mw);
    g.ramp_startup_mw = rd.optional<double>(n, "ramp_su", p, g.p_max_mw);
    g.ramp_shutdown_mw = rd.optional<double>(n, "ramp_sd", p, g.p_max_mw);
    g.min_up_h = rd.optional<int>(n, "min_up", p, 1);
    g.min_down_h = rd.optional<int>(n, "min_down", p, 1);
    g.init_on = rd.optional<bool>(n, "init_on", p, false);
    g.init_power_mw = rd.optional<double>(n, "init_power", p, 0.0);
    c.generators.push_back(g);
  });

  each("ess", [&](const YAML::Node& n, const std::string& p) {
    rd.expect_keys(n, p, {"id", "bus", "p_charge_max", "p_discharge_max", "ramp_charge",
                          "ramp_discharge", "soc_min", "soc_max", "energy_max",
                          "eff_charge", "eff_discharge", "init_energy"});
    EssUnit e;
    e.id = rd.required<int>(n, "id", p);
    e.bus = rd.required<int>(n, "bus", p);
    e.p_charge_max_mw = rd.required<double>(n, "p_charge_max", p);
    e.p_discharge_max_mw = rd.required<double>(n, "p_discharge_max", p);
    e.ramp_charge_mw = rd.optional<double>(n, "ramp_charge", p, e.p_charge_max_mw);
    e.ramp_discharge_mw = rd.optional<double>(n, "ramp_discharge", p, e.p_discharge_max_mw);
    e.soc_min = rd.optional<double>(n, "soc_min", p, 0.0);
    e.soc_max = rd.optional<double>(n, "soc_max", p, 1.0);
    e.energy_max_mwh = rd.required<double>(n, "energy_max", p);
    e.eff_charge = rd.optional<double>(n, "eff_charge", p, 1.0);
    e.eff_discharge = rd.optional<double>(n, "eff_discharge", p, 1.0);
    e.init_energy_mwh = rd.optional<double>(n, "init_energy", p, 0.5 * e.energy_max_mwh);
    c.ess_units.push_back(e);
  });

  each("res", [&](const YAML::Node& n, const std::string& p) {
    rd.expect_keys(n, p, {"id", "bus"});
    c.res_units.push_back(ResUnit{rd.required<int>(n, "id", p), rd.required<int>(n, "bus", p)});
  });

  YAML::Node sc = root["scenarios"];
  if (!sc) {
    if (c.res_units.empty()) {
      c.scenarios.probability = {1.0};
      c.scenarios.capacity_mw = {{}};
    } else {
      errors.push_back("case: missing 'scenarios'");
    }
  } else {
    rd.expect_keys(sc, "scenarios", {"probabilities", "capacity", "csv", "synthesize"});
    std::vector<double> probs;
    if (sc.IsMap() && sc["probabilities"]) {
      probs = rd.numbers(sc["probabilities"], "scenarios.probabilities");
    }
    int sources = sc.IsMap() ? (sc["capacity"] ? 1 : 0) + (sc["csv"] ? 1 : 0) +
                                   (sc["synthesize"] ? 1 : 0)
                             : 0;
    if (sources > 1) {
      rd.error("scenarios", "give exactly one of 'capacity', 'csv' or 'synthesize'");
    } else if (sc.IsMap() && sc["synthesize"]) {
      YAML::Node sy = sc["synthesize"];
      rd.expect_keys(sy, "scenarios.synthesize", {"penetration", "blocks", "seed", "count"});
      SynthesisSpec spec;
      spec.penetration = rd.required<double>(sy, "penetration", "scenarios.synthesize");
      spec.blocks = rd.optional<int>(sy, "blocks", "scenarios.synthesize", spec.blocks);
      spec.seed = rd.optional<uint64_t>(sy, "seed", "scenarios.synthesize", spec.seed);
      spec.count = rd.optional<int>(sy, "count", "scenarios.synthesize", spec.count);
      if (!probs.empty()) rd.error("scenarios", "synthesized scenarios are equiprobable");
      bool demand_ok = true;
      for (const Bus& b : c.buses) demand_ok &= static_cast<int>(b.demand_mw.size()) == c.horizon;
      if (demand_ok) {
        try {
          c.scenarios = synthesize_scenarios(c, spec);
        } catch (const std::invalid_argument& e) {
          rd.error("scenarios.synthesize", e.what());
        }
      }
    } else if (sc.IsMap() && sc["csv"]) {
      auto file = rd.scalar<std::string>(sc["csv"], "scenarios.csv");
      if (file) {
        std::filesystem::path path(*file);
        if (path.is_relative()) path = base_dir / path;
        try {
          c.scenarios = parse_scenario_csv(read_text_file(path), c, probs, errors);
        } catch (const std::runtime_error& e) {
          rd.error("scenarios.csv", e.what());
        }
      }
    } else {
      c.scenarios.probability = probs.empty() ? std::vector<double>{1.0} : probs;
      const int S = c.scenarios.count();
      c.scenarios.capacity_mw.assign(
          S, std::vector<std::vector<double>>(c.res_units.size(),
                                              std::vector<double>(c.horizon, 0.0)));
      std::set<std::pair<int, int>> seen;
      YAML::Node cap = sc.IsMap() ? sc["capacity"] : YAML::Node();
      if (cap && !cap.IsSequence()) rd.error("scenarios.capacity", "expected a list");
      for (std::size_t i = 0; cap && cap.IsSequence() && i < cap.size(); ++i) {
        std::string p = "scenarios.capacity[" + std::to_string(i) + "]";
        rd.expect_keys(cap[i], p, {"scenario", "unit", "mw"});
        int s = rd.required<int>(cap[i], "scenario", p);
        int w = rd.required<int>(cap[i], "unit", p);
        auto mw = rd.numbers(cap[i]["mw"], p + ".mw");
        int wpos = -1;
        for (std::size_t k = 0; k < c.res_units.size(); ++k) {
          if (c.res_units[k].id == w) wpos = static_cast<int>(k);
        }
        if (s < 0 || s >= S) {
          rd.error(p, "scenario index out of range");
        } else if (wpos < 0) {
          rd.error(p, "unknown RES unit " + std::to_string(w));
        } else if (static_cast<int>(mw.size()) != c.horizon) {
          rd.error(p, "expected " + std::to_string(c.horizon) + " values");
        } else if (!seen.insert({s, wpos}).second) {
          rd.error(p, "duplicate entry");
        } else {
          c.scenarios.capacity_mw[s][wpos] = mw;
        }
      }
      for (int s = 0; s < S; ++s) {
        for (std::size_t k = 0; k < c.res_units.size(); ++k) {
          if (!seen.count({s, static_cast<int>(k)})) {
            errors.push_back("scenarios.capacity: missing scenario " + std::to_string(s) +
                             ", unit " + std::to_string(c.res_units[k].id));
          }
        }
      }
    }
  }

  ValidationReport rep = validate_case(c);
  errors.insert(errors.end(), rep.defects.begin(), rep.defects.end());
  if (!errors.empty()) throw CaseError(std::move(errors));
  return c;
}

inline Case load_case_file(const std::filesystem::path& path) {
  std::string text;
  try {
    text = read_text_file(path);
  } catch (const std::runtime_error& e) {
    throw CaseError({e.what()});
  }
  return load_case(text, path.parent_path());
}

namespace detail {

inline std::string fmt_number(double v) {
  char buf[32];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

inline YAML::Emitter& number_list(YAML::Emitter& out, const std::vector<double>& v) {
  out << YAML::Flow << YAML::BeginSeq;
  for (double x : v) out << fmt_number(x);
  return out << YAML::EndSeq;
}

}  // namespace detail

/// Writes a case in the canonical layout. Scenario capacities are always
/// written inline.
inline std::string save_case(const Case& c) {
  using detail::fmt_number;
  YAML::Emitter out;
  out << YAML::BeginMap;
  out << YAML::Key << "format_version" << YAML::Value << kCaseFormatVersion;
  out << YAML::Key << "name" << YAML::Value << c.name;
  out << YAML::Key << "horizon" << YAML::Value << c.horizon;
  out << YAML::Key << "period_hours" << YAML::Value << fmt_number(c.period_hours);
  out << YAML::Key << "base_mva" << YAML::Value << fmt_number(c.base_mva);
  out << YAML::Key << "reference_bus" << YAML::Value << c.reference_bus;

  out << YAML::Key << "options" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "theta_cap" << YAML::Value << fmt_number(c.options.theta_cap_rad);
  out << YAML::Key << "contingency_limit" << YAML::Value
      << (c.options.contingency_limit == ContingencyLimit::kEmergency ? "emergency" : "normal");
  out << YAML::Key << "tie_pnr_across_scenarios" << YAML::Value
      << c.options.tie_pnr_across_scenarios;
  out << YAML::Key << "contingencies" << YAML::Value;
  switch (c.options.contingencies.kind) {
    case ContingencyPolicyKind::kAllLines:
      out << "all";
      break;
    case ContingencyPolicyKind::kNone:
      out << "none";
      break;
    case ContingencyPolicyKind::kExplicit:
      out << YAML::Flow << c.options.contingencies.lines;
      break;
  }
  out << YAML::EndMap;

  auto kv = [&](const char* k, auto v) { out << YAML::Key << k << YAML::Value << v; };
  auto kd = [&](const char* k, double v) { kv(k, fmt_number(v)); };

  out << YAML::Key << "buses" << YAML::Value << YAML::BeginSeq;
  for (const Bus& b : c.buses) {
    out << YAML::Flow << YAML::BeginMap;
    kv("id", b.id);
    out << YAML::Key << "demand" << YAML::Value;
    detail::number_list(out, b.demand_mw);
    out << YAML::EndMap;
  }
  out << YAML::EndSeq;

  out << YAML::Key << "lines" << YAML::Value << YAML::BeginSeq;
  for (const Line& l : c.lines) {
    out << YAML::Flow << YAML::BeginMap;
    kv("id", l.id);
    kv("from", l.from_bus);
    kv("to", l.to_bus);
    kd("b", l.susceptance_pu);
    kd("limit", l.limit_normal_mw);
    kd("emergency", l.limit_emergency_mw);
    kv("switchable", l.switchable);
    kv("outage", l.outage_candidate);
    out << YAML::EndMap;
  }
  out << YAML::EndSeq;

  out << YAML::Key << "generators" << YAML::Value << YAML::BeginSeq;
  for (const Generator& g : c.generators) {
    out << YAML::Flow << YAML::BeginMap;
    kv("id", g.id);
    kv("bus", g.bus);
    kd("pmin", g.p_min_mw);
    kd("pmax", g.p_max_mw);
    kd("cost", g.cost_per_mwh);
    kd("no_load", g.no_load_cost);
    kd("startup", g.startup_cost);
    kd("ramp_hr", g.ramp_hourly_mw);
    kd("ramp_10", g.ramp_10min_mw);
    kd("ramp_su", g.ramp_startup_mw);
    kd("ramp_sd", g.ramp_shutdown_mw);
    kv("min_up", g.min_up_h);
    kv("min_down", g.min_down_h);
    kv("init_on", g.init_on);
    kd("init_power", g.init_power_mw);
    out << YAML::EndMap;
  }
  out << YAML::EndSeq;

  out << YAML::Key << "ess" << YAML::Value << YAML::BeginSeq;
  for (const EssUnit& e : c.ess_units) {
    out << YAML::Flow << YAML::BeginMap;
    kv("id", e.id);
    kv("bus", e.bus);
    kd("p_charge_max", e.p_charge_max_mw);
    kd("p_discharge_max", e.p_discharge_max_mw);
    kd("ramp_charge", e.ramp_charge_mw);
    kd("ramp_discharge", e.ramp_discharge_mw);
    kd("soc_min", e.soc_min);
    kd("soc_max", e.soc_max);
    kd("energy_max", e.energy_max_mwh);
    kd("eff_charge", e.eff_charge);
    kd("eff_discharge", e.eff_discharge);
    kd("init_energy", e.init_energy_mwh);
    out << YAML::EndMap;
  }
  out << YAML::EndSeq;

  out << YAML::Key << "res" << YAML::Value << YAML::BeginSeq;
  for (const ResUnit& w : c.res_units) {
    out << YAML::Flow << YAML::BeginMap;
    kv("id", w.id);
    kv("bus", w.bus);
    out << YAML::EndMap;
  }
  out << YAML::EndSeq;

  out << YAML::Key << "scenarios" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "probabilities" << YAML::Value;
  detail::number_list(out, c.scenarios.probability);
  out << YAML::Key << "capacity" << YAML::Value << YAML::BeginSeq;
  for (int s = 0; s < c.scenarios.count(); ++s) {
    for (std::size_t w = 0; w < c.res_units.size(); ++w) {
      out << YAML::Flow << YAML::BeginMap;
      kv("scenario", s);
      kv("unit", c.res_units[w].id);
      out << YAML::Key << "mw" << YAML::Value;
      detail::number_list(out, c.scenarios.capacity_mw[s][w]);
      out << YAML::EndMap;
    }
  }
  out << YAML::EndSeq << YAML::EndMap;
  out << YAML::EndMap;

  std::string text;
  std::istringstream hdr(c.header_comment);
  std::string line;
  while (std::getline(hdr, line)) text += line.empty() ? "#\n" : "# " + line + "\n";
  text += out.c_str();
  text += "\n";
  return text;
}

/// Scenario capacities in the CSV layout read by parse_scenario_csv.
inline std::string save_scenario_csv(const Case& c) {
  std::string s = "scenario,unit,period,capacity_mw\n";
  for (int sc = 0; sc < c.scenarios.count(); ++sc) {
    for (std::size_t w = 0; w < c.res_units.size(); ++w) {
      for (int t = 0; t < c.horizon; ++t) {
        s += std::to_string(sc) + "," + std::to_string(c.res_units[w].id) + "," +
             std::to_string(t) + "," + detail::fmt_number(c.scenarios.capacity_mw[sc][w][t]) +
             "\n";
      }
    }
  }
  return s;
}

}  // namespace gridsched::grid

#endif  // GRIDSCHED_GRID_CASE_IO_HPP_
