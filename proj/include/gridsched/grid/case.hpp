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

#ifndef GRIDSCHED_GRID_CASE_HPP_
#define GRIDSCHED_GRID_CASE_HPP_

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace gridsched::grid {

struct Bus {
  int id = 0;
  std::vector<double> demand_mw;  // one value per period
};

struct Line {
  int id = 0;
  int from_bus = 0;  // sending end
  int to_bus = 0;    // receiving end
  double susceptance_pu = 0.0;
  double limit_normal_mw = 0.0;
  double limit_emergency_mw = 0.0;
  bool switchable = true;
  bool outage_candidate = true;
};

struct Generator {
  int id = 0;
  int bus = 0;
  double p_min_mw = 0.0;
  double p_max_mw = 0.0;
  double cost_per_mwh = 0.0;
  double no_load_cost = 0.0;
  double startup_cost = 0.0;
  double ramp_hourly_mw = 0.0;
  double ramp_10min_mw = 0.0;
  double ramp_startup_mw = 0.0;
  double ramp_shutdown_mw = 0.0;
  int min_up_h = 1;
  int min_down_h = 1;
  bool init_on = false;
  double init_power_mw = 0.0;
};

struct EssUnit {
  int id = 0;
  int bus = 0;
  double p_charge_max_mw = 0.0;
  double p_discharge_max_mw = 0.0;
  double ramp_charge_mw = 0.0;
  double ramp_discharge_mw = 0.0;
  double soc_min = 0.0;
  double soc_max = 1.0;
  double energy_max_mwh = 0.0;
  double eff_charge = 1.0;
  double eff_discharge = 1.0;
  double init_energy_mwh = 0.0;
};

struct ResUnit {
  int id = 0;
  int bus = 0;
};

// capacity_mw[s][unit position][t], unit position follows Case::res_units.
struct ScenarioSet {
  std::vector<double> probability;
  std::vector<std::vector<std::vector<double>>> capacity_mw;
  std::optional<std::uint64_t> seed;  // set when the profiles were synthesized

  int count() const { return static_cast<int>(probability.size()); }
};

enum class ContingencyLimit { kEmergency, kNormal };

enum class ContingencyPolicyKind { kAllLines, kExplicit, kNone };

struct ContingencyPolicy {
  ContingencyPolicyKind kind = ContingencyPolicyKind::kAllLines;
  std::vector<int> lines;  // only for kExplicit
};

struct CaseOptions {
  double theta_cap_rad = 0.6;
  ContingencyLimit contingency_limit = ContingencyLimit::kEmergency;
  bool tie_pnr_across_scenarios = false;
  ContingencyPolicy contingencies;
};

struct Case {
  std::string name;
  int horizon = 24;
  double period_hours = 1.0;
  double base_mva = 100.0;
  int reference_bus = 0;
  std::vector<Bus> buses;
  std::vector<Line> lines;
  std::vector<Generator> generators;
  std::vector<EssUnit> ess_units;
  std::vector<ResUnit> res_units;
  ScenarioSet scenarios;
  CaseOptions options;
  // Free-form provenance comment written at the top of saved files.
  std::string header_comment;

  const Bus* find_bus(int id) const { return find(buses, id); }
  const Line* find_line(int id) const { return find(lines, id); }

  int bus_position(int id) const { return position(buses, id); }
  int line_position(int id) const { return position(lines, id); }

  double demand(int bus_pos, int t) const { return buses[bus_pos].demand_mw[t]; }

  double total_demand(int t) const {
    double s = 0.0;
    for (const Bus& b : buses) s += b.demand_mw[t];
    return s;
  }

  double peak_demand() const {
    double peak = 0.0;
    for (int t = 0; t < horizon; ++t) peak = std::max(peak, total_demand(t));
    return peak;
  }

  double generation_capacity() const {
    double s = 0.0;
    for (const Generator& g : generators) s += g.p_max_mw;
    return s;
  }

 private:
  template <class T>
  static const T* find(const std::vector<T>& v, int id) {
    auto it = std::find_if(v.begin(), v.end(), [id](const T& x) { return x.id == id; });
    return it == v.end() ? nullptr : &*it;
  }
  template <class T>
  static int position(const std::vector<T>& v, int id) {
    auto it = std::find_if(v.begin(), v.end(), [id](const T& x) { return x.id == id; });
    return it == v.end() ? -1 : static_cast<int>(it - v.begin());
  }
};

}  // namespace gridsched::grid

#endif  // GRIDSCHED_GRID_CASE_HPP_
