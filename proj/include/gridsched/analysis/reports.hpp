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

#ifndef GRIDSCHED_ANALYSIS_REPORTS_HPP_
#define GRIDSCHED_ANALYSIS_REPORTS_HPP_

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "gridsched/analysis/checker.hpp"
#include "gridsched/grid/case.hpp"
#include "gridsched/grid/case_io.hpp"

namespace gridsched::analysis {

namespace detail {

inline double lookup(const Assignment& a, const std::string& name) {
  auto it = a.find(name);
  if (it == a.end()) throw MissingVariables({name});
  return it->second;
}

inline std::string key(const char* prefix, std::initializer_list<std::pair<char, int>> cs) {
  return std::string(prefix) + "/" + coord_text(cs);
}

}  // namespace detail

/// FNV-1a over the canonical saved form of a case.
inline std::string case_fingerprint(const grid::Case& c) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : grid::save_case(c)) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
  return buf;
}

struct CostBreakdown {
  double no_load = 0.0;
  double start_up = 0.0;
  double energy = 0.0;  // probability weighted
  double total = 0.0;
};

inline CostBreakdown cost_breakdown(const grid::Case& c, const Assignment& a) {
  CostBreakdown out;
  for (const auto& g : c.generators) {
    for (int t = 0; t < c.horizon; ++t) {
      out.no_load += g.no_load_cost * detail::lookup(a, detail::key("u", {{'g', g.id}, {'t', t}}));
      out.start_up += g.startup_cost * detail::lookup(a, detail::key("v", {{'g', g.id}, {'t', t}}));
      for (int s = 0; s < c.scenarios.count(); ++s) {
        out.energy += c.scenarios.probability[s] * g.cost_per_mwh *
                      detail::lookup(a, detail::key("P", {{'g', g.id}, {'t', t}, {'s', s}}));
      }
    }
  }
  out.total = out.no_load + out.start_up + out.energy;
  return out;
}

/// Commitment cost plus the energy cost of one scenario.
inline std::vector<double> scenario_costs(const grid::Case& c, const Assignment& a) {
  CostBreakdown cb = cost_breakdown(c, a);
  std::vector<double> out(static_cast<std::size_t>(c.scenarios.count()), cb.no_load + cb.start_up);
  for (int s = 0; s < c.scenarios.count(); ++s) {
    for (const auto& g : c.generators) {
      for (int t = 0; t < c.horizon; ++t) {
        out[s] += g.cost_per_mwh *
                  detail::lookup(a, detail::key("P", {{'g', g.id}, {'t', t}, {'s', s}}));
      }
    }
  }
  return out;
}

struct CurtailmentReport {
  std::vector<double> per_scenario_mw;  // sum over units and periods
  double average_mw = 0.0;              // probability weighted over scenarios
  std::vector<double> per_period_mw;    // expected curtailment in each period
  double average_per_period_mw = 0.0;   // average_mw / horizon
};

/// Base-case curtailment only; contingency dispatch is not counted.
inline CurtailmentReport curtailment_report(const grid::Case& c, const Assignment& a) {
  CurtailmentReport r;
  const int S = c.scenarios.count();
  r.per_scenario_mw.assign(static_cast<std::size_t>(S), 0.0);
  r.per_period_mw.assign(static_cast<std::size_t>(c.horizon), 0.0);
  for (int s = 0; s < S; ++s) {
    for (std::size_t w = 0; w < c.res_units.size(); ++w) {
      for (int t = 0; t < c.horizon; ++t) {
        double used = detail::lookup(a, detail::key("W", {{'w', c.res_units[w].id}, {'t', t}, {'s', s}}));
        double cut = std::max(0.0, c.scenarios.capacity_mw[s][w][t] - used);
        r.per_scenario_mw[s] += cut;
        r.per_period_mw[t] += c.scenarios.probability[s] * cut;
      }
    }
    r.average_mw += c.scenarios.probability[s] * r.per_scenario_mw[s];
  }
  r.average_per_period_mw = c.horizon > 0 ? r.average_mw / c.horizon : 0.0;
  return r;
}

struct EssSeries {
  int ess = 0;
  int scenario = 0;
  std::vector<double> soc;   // end-of-period state of charge, fraction
  double cycle_depth = 0.0;  // half the total variation, starting from the initial SOC
};

inline std::vector<EssSeries> ess_report(const grid::Case& c, const Assignment& a) {
  std::vector<EssSeries> out;
  for (const auto& e : c.ess_units) {
    for (int s = 0; s < c.scenarios.count(); ++s) {
      EssSeries ser{e.id, s, {}, 0.0};
      double prev = e.init_energy_mwh / e.energy_max_mwh;
      for (int t = 0; t < c.horizon; ++t) {
        double soc = detail::lookup(a, detail::key("E", {{'e', e.id}, {'t', t}, {'s', s}})) /
                     e.energy_max_mwh;
        ser.cycle_depth += std::abs(soc - prev) / 2.0;
        ser.soc.push_back(soc);
        prev = soc;
      }
      out.push_back(std::move(ser));
    }
  }
  return out;
}

inline double total_cycle_depth(const std::vector<EssSeries>& series) {
  double d = 0.0;
  for (const auto& s : series) d += s.cycle_depth;
  return d;
}

enum class SwitchKind { kPnr, kCnr };

struct SwitchEvent {
  SwitchKind kind = SwitchKind::kPnr;
  int line = 0;
  std::optional<int> contingency;
  int period = 0;
  int scenario = 0;

  auto operator<=>(const SwitchEvent&) const = default;
};

struct SwitchingSchedule {
  std::vector<SwitchEvent> events;
  std::map<int, int> frequency;  // line id -> number of open events
};

/// Every open switch (value below 0.5) except the outaged line itself.
inline SwitchingSchedule switching_schedule(const grid::Case& c, const Assignment& a,
                                            const CheckOptions& scope) {
  SwitchingSchedule out;
  for (const auto& l : c.lines) {
    if (!l.switchable) continue;
    for (int t = 0; t < c.horizon; ++t) {
      for (int s = 0; s < c.scenarios.count(); ++s) {
        if (scope.pnr &&
            detail::lookup(a, detail::key("zp", {{'k', l.id}, {'t', t}, {'s', s}})) < 0.5) {
          out.events.push_back({SwitchKind::kPnr, l.id, std::nullopt, t, s});
        }
        if (!scope.cnr) continue;
        for (int cid : scope.contingencies) {
          if (cid == l.id) continue;
          if (detail::lookup(a, detail::key("zc", {{'k', l.id}, {'c', cid}, {'t', t}, {'s', s}})) <
              0.5) {
            out.events.push_back({SwitchKind::kCnr, l.id, cid, t, s});
          }
        }
      }
    }
  }
  std::sort(out.events.begin(), out.events.end());
  for (const auto& e : out.events) ++out.frequency[e.line];
  return out;
}

struct BindingLine {
  int line = 0;
  std::optional<int> contingency;  // empty for the base case
  int count = 0;                   // (t, s) pairs at or above the threshold
};

inline std::vector<BindingLine> binding_lines(const grid::Case& c, const Assignment& a,
                                              const std::vector<int>& contingencies,
                                              double threshold = 0.99) {
  std::vector<BindingLine> out;
  auto scan = [&](const grid::Line& l, std::optional<int> cid, double limit) {
    int n = 0;
    for (int t = 0; t < c.horizon; ++t) {
      for (int s = 0; s < c.scenarios.count(); ++s) {
        double f = cid ? detail::lookup(a, detail::key("Fc", {{'k', l.id}, {'c', *cid}, {'t', t}, {'s', s}}))
                       : detail::lookup(a, detail::key("F", {{'k', l.id}, {'t', t}, {'s', s}}));
        if (std::abs(f) >= threshold * limit - 1e-9) ++n;
      }
    }
    if (n > 0) out.push_back({l.id, cid, n});
  };
  for (const auto& l : c.lines) scan(l, std::nullopt, l.limit_normal_mw);
  for (int cid : contingencies) {
    for (const auto& l : c.lines) {
      if (l.id == cid) continue;
      scan(l, cid,
           c.options.contingency_limit == grid::ContingencyLimit::kEmergency ? l.limit_emergency_mw
                                                                             : l.limit_normal_mw);
    }
  }
  return out;
}

struct ScheduleReport {
  std::string variant;
  std::string case_fingerprint;
  double objective = 0.0;
  double gap = 0.0;
  double walltime_s = 0.0;
  CostBreakdown cost;
  std::vector<double> scenario_cost;
  CurtailmentReport curtailment;
  std::vector<EssSeries> ess;
  SwitchingSchedule switching;
  std::vector<BindingLine> binding;
  std::vector<Violation> violations;
  double max_balance_residual = 0.0;
};

inline ScheduleReport make_report(const grid::Case& c, const std::string& variant,
                                  const Assignment& a, const CheckOptions& scope,
                                  double objective, double gap, double walltime_s) {
  ScheduleReport r;
  r.variant = variant;
  r.case_fingerprint = case_fingerprint(c);
  r.objective = objective;
  r.gap = gap;
  r.walltime_s = walltime_s;
  CheckResult chk = check_feasibility(c, a, scope);
  r.violations = std::move(chk.violations);
  r.max_balance_residual = chk.max_balance_residual;
  r.cost = cost_breakdown(c, a);
  r.scenario_cost = scenario_costs(c, a);
  r.curtailment = curtailment_report(c, a);
  r.ess = ess_report(c, a);
  r.switching = switching_schedule(c, a, scope);
  r.binding = binding_lines(c, a, scope.contingencies);
  return r;
}

struct ChainCheck {
  std::string richer;  // variant with more switching freedom
  std::string poorer;
  double richer_cost = 0.0;
  double poorer_cost = 0.0;
  double slack = 0.0;
  bool holds = false;
};

struct Comparison {
  std::vector<const ScheduleReport*> rows;
  std::vector<ChainCheck> checks;
  bool verdict = true;
};

/// Checks each available relaxation pair: a variant with more switching
/// freedom may not cost more than one with less, up to the sum of their
/// relative gaps (plus 1e-6 absolute).
inline Comparison compare_variants(const std::vector<ScheduleReport>& reports) {
  if (reports.size() < 2) throw std::invalid_argument("need at least two reports to compare");
  for (const auto& r : reports) {
    if (r.case_fingerprint != reports.front().case_fingerprint) {
      throw std::invalid_argument("reports come from different cases");
    }
  }
  Comparison cmp;
  for (const auto& r : reports) cmp.rows.push_back(&r);
  auto find = [&](const char* name) -> const ScheduleReport* {
    for (const auto& r : reports) {
      if (r.variant == name) return &r;
    }
    return nullptr;
  };
  const std::pair<const char*, const char*> pairs[] = {{"SSCUC-P", "SSCUC"},
                                                       {"SSCUC-C", "SSCUC"},
                                                       {"SSCUC-PC", "SSCUC-P"},
                                                       {"SSCUC-PC", "SSCUC-C"},
                                                       {"SSCUC-PC", "SSCUC"}};
  for (auto [rich, poor] : pairs) {
    const ScheduleReport* a = find(rich);
    const ScheduleReport* b = find(poor);
    if (!a || !b) continue;
    ChainCheck ch{rich, poor, a->cost.total, b->cost.total, 0.0, false};
    ch.slack = (a->gap + b->gap) * std::max(std::abs(a->cost.total), std::abs(b->cost.total)) + 1e-6;
    ch.holds = ch.richer_cost <= ch.poorer_cost + ch.slack;
    cmp.verdict = cmp.verdict && ch.holds;
    cmp.checks.push_back(ch);
  }
  return cmp;
}

}  // namespace gridsched::analysis

#endif  // GRIDSCHED_ANALYSIS_REPORTS_HPP_
