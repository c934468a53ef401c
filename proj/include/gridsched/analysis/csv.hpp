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

#ifndef GRIDSCHED_ANALYSIS_CSV_HPP_
#define GRIDSCHED_ANALYSIS_CSV_HPP_

#include <charconv>
#include <cmath>
#include <string>
#include <vector>

#include "gridsched/analysis/reports.hpp"

// Report tables. Every writer is a pure function of its input, so equal
// reports produce equal bytes. Wall time is nondeterministic and is left
// blank unless the caller opts in.

namespace gridsched::analysis {

/// Shortest round-trip text; NaN becomes an empty field.
inline std::string csv_number(double v) {
  if (std::isnan(v)) return {};
  if (v == 0.0) v = 0.0;  // drop the sign of -0
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline std::string costs_csv(const std::vector<ScheduleReport>& reports, bool with_walltime = false) {
  std::string s = "variant,total,no_load,start_up,energy,gap,walltime_s\n";
  for (const auto& r : reports) {
    s += r.variant + "," + csv_number(r.cost.total) + "," + csv_number(r.cost.no_load) + "," +
         csv_number(r.cost.start_up) + "," + csv_number(r.cost.energy) + "," + csv_number(r.gap) +
         "," + (with_walltime ? csv_number(r.walltime_s) : std::string()) + "\n";
  }
  return s;
}

inline std::string curtailment_csv(const std::vector<ScheduleReport>& reports) {
  std::string s = "variant,scenario,mw\n";
  for (const auto& r : reports) {
    for (std::size_t i = 0; i < r.curtailment.per_scenario_mw.size(); ++i) {
      s += r.variant + "," + std::to_string(i) + "," +
           csv_number(r.curtailment.per_scenario_mw[i]) + "\n";
    }
  }
  return s;
}

inline std::string soc_csv(const std::vector<ScheduleReport>& reports) {
  std::string s = "variant,ess,scenario,period,soc\n";
  for (const auto& r : reports) {
    for (const auto& e : r.ess) {
      for (std::size_t t = 0; t < e.soc.size(); ++t) {
        s += r.variant + "," + std::to_string(e.ess) + "," + std::to_string(e.scenario) + "," +
             std::to_string(t) + "," + csv_number(e.soc[t]) + "\n";
      }
    }
  }
  return s;
}

inline std::string switching_csv(const std::vector<ScheduleReport>& reports) {
  std::string s = "variant,kind,line,contingency,period,scenario\n";
  for (const auto& r : reports) {
    for (const auto& e : r.switching.events) {
      s += r.variant + "," + (e.kind == SwitchKind::kPnr ? "pnr" : "cnr") + "," +
           std::to_string(e.line) + "," +
           (e.contingency ? std::to_string(*e.contingency) : std::string()) + "," +
           std::to_string(e.period) + "," + std::to_string(e.scenario) + "\n";
    }
  }
  return s;
}

inline std::string violations_csv(const std::vector<Violation>& violations) {
  std::string s = "equation,coords,residual\n";
  for (const auto& v : violations) {
    s += v.equation + "," + v.coords + "," + csv_number(v.residual) + "\n";
  }
  return s;
}

inline std::string comparison_csv(const std::vector<ScheduleReport>& reports,
                                  bool with_walltime = false) {
  std::string s = "variant,total,gap,walltime_s,average_curtailment_mw,cycle_depth\n";
  for (const auto& r : reports) {
    s += r.variant + "," + csv_number(r.cost.total) + "," + csv_number(r.gap) + "," +
         (with_walltime ? csv_number(r.walltime_s) : std::string()) + "," +
         csv_number(r.curtailment.average_mw) + "," + csv_number(total_cycle_depth(r.ess)) + "\n";
  }
  return s;
}

/// Human-readable summary of one schedule (no wall time).
inline std::string render_text(const ScheduleReport& r) {
  std::string s;
  s += "variant            " + r.variant + "\n";
  s += "case fingerprint   " + r.case_fingerprint + "\n";
  s += "objective          " + csv_number(r.objective) + "\n";
  s += "gap                " + (std::isnan(r.gap) ? std::string("n/a") : csv_number(r.gap)) + "\n";
  s += "cost no-load       " + csv_number(r.cost.no_load) + "\n";
  s += "cost start-up      " + csv_number(r.cost.start_up) + "\n";
  s += "cost energy        " + csv_number(r.cost.energy) + "\n";
  s += "cost total         " + csv_number(r.cost.total) + "\n";
  for (std::size_t i = 0; i < r.scenario_cost.size(); ++i) {
    s += "  scenario " + std::to_string(i) + " cost  " + csv_number(r.scenario_cost[i]) + "\n";
  }
  s += "curtailment (avg)  " + csv_number(r.curtailment.average_mw) + " MW over the horizon, " +
       csv_number(r.curtailment.average_per_period_mw) + " MW per period\n";
  s += "ess cycle depth    " + csv_number(total_cycle_depth(r.ess)) + "\n";
  s += "open-line events   " + std::to_string(r.switching.events.size()) + "\n";
  for (auto [line, n] : r.switching.frequency) {
    s += "  line " + std::to_string(line) + " opened " + std::to_string(n) + " time(s)\n";
  }
  s += "binding lines      " + std::to_string(r.binding.size()) + "\n";
  for (const auto& b : r.binding) {
    s += "  line " + std::to_string(b.line) +
         (b.contingency ? " after outage of " + std::to_string(*b.contingency) : std::string()) +
         ": " + std::to_string(b.count) + " period-scenario(s)\n";
  }
  s += "max balance resid  " + csv_number(r.max_balance_residual) + "\n";
  s += "violations         " + std::to_string(r.violations.size()) + "\n";
  return s;
}

}  // namespace gridsched::analysis

#endif  // GRIDSCHED_ANALYSIS_CSV_HPP_
