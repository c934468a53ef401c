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

#ifndef GRIDSCHED_GRID_VALIDATE_HPP_
#define GRIDSCHED_GRID_VALIDATE_HPP_

#include <cmath>
#include <queue>
#include <set>
#include <string>
#include <vector>

#include "gridsched/grid/case.hpp"

namespace gridsched::grid {

struct ValidationReport {
  std::vector<std::string> defects;
  double generation_capacity_mw = 0.0;
  double peak_demand_mw = 0.0;

  bool ok() const { return defects.empty(); }
};

/// True when the buses stay connected using only lines for which
/// `in_service(line position)` holds.
template <class InService>
bool buses_connected(const Case& c, InService in_service) {
  const int nb = static_cast<int>(c.buses.size());
  if (nb == 0) return true;
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(nb));
  for (int k = 0; k < static_cast<int>(c.lines.size()); ++k) {
    if (!in_service(k)) continue;
    int a = c.bus_position(c.lines[k].from_bus);
    int b = c.bus_position(c.lines[k].to_bus);
    if (a < 0 || b < 0) continue;
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  std::vector<char> seen(static_cast<std::size_t>(nb), 0);
  std::queue<int> q;
  q.push(0);
  seen[0] = 1;
  int reached = 1;
  while (!q.empty()) {
    int u = q.front();
    q.pop();
    for (int v : adj[u]) {
      if (!seen[v]) {
        seen[v] = 1;
        ++reached;
        q.push(v);
      }
    }
  }
  return reached == nb;
}

/// Checks every structural invariant of a case. Defects are returned as
/// data; nothing throws.
inline ValidationReport validate_case(const Case& c) {
  ValidationReport rep;
  auto& d = rep.defects;
  auto defect = [&](std::string s) { d.push_back(std::move(s)); };

  if (c.horizon < 1) defect("horizon must be at least 1 period");
  if (!(c.period_hours > 0)) defect("period_hours must be positive");
  if (!(c.base_mva > 0)) defect("base_mva must be positive");

  std::set<int> ids;
  for (const Bus& b : c.buses) {
    if (!ids.insert(b.id).second) defect("bus " + std::to_string(b.id) + ": duplicate id");
    if (static_cast<int>(b.demand_mw.size()) != c.horizon) {
      defect("bus " + std::to_string(b.id) + ": demand has " +
             std::to_string(b.demand_mw.size()) + " periods, horizon is " +
             std::to_string(c.horizon));
    }
    for (double v : b.demand_mw) {
      if (!(v >= 0)) {
        defect("bus " + std::to_string(b.id) + ": negative demand");
        break;
      }
    }
  }
  if (c.buses.empty()) defect("case has no buses");
  if (c.find_bus(c.reference_bus) == nullptr) {
    defect("reference bus " + std::to_string(c.reference_bus) + " does not exist");
  }

  auto bus_ref = [&](const std::string& who, int bus) {
    if (c.find_bus(bus) == nullptr) {
      defect(who + ": dangling bus reference " + std::to_string(bus));
    }
  };

  ids.clear();
  for (const Line& l : c.lines) {
    std::string who = "line " + std::to_string(l.id);
    if (!ids.insert(l.id).second) defect(who + ": duplicate id");
    bus_ref(who, l.from_bus);
    bus_ref(who, l.to_bus);
    if (l.from_bus == l.to_bus) defect(who + ": from bus equals to bus");
    if (!(l.limit_normal_mw > 0)) defect(who + ": normal limit must be positive");
    if (!(l.limit_emergency_mw >= l.limit_normal_mw)) {
      defect(who + ": emergency limit below normal limit");
    }
    if (!std::isfinite(l.susceptance_pu)) defect(who + ": susceptance not finite");
  }

  ids.clear();
  for (const Generator& g : c.generators) {
    std::string who = "generator " + std::to_string(g.id);
    if (!ids.insert(g.id).second) defect(who + ": duplicate id");
    bus_ref(who, g.bus);
    if (!(g.p_min_mw >= 0 && g.p_min_mw <= g.p_max_mw)) {
      defect(who + ": need 0 <= p_min <= p_max");
    }
    if (g.ramp_hourly_mw < 0 || g.ramp_10min_mw < 0 || g.ramp_startup_mw < 0 ||
        g.ramp_shutdown_mw < 0) {
      defect(who + ": negative ramp limit");
    }
    if (g.min_up_h < 1 || g.min_down_h < 1) defect(who + ": min up/down must be >= 1");
    if (!g.init_on && g.init_power_mw != 0) defect(who + ": offline with nonzero power");
    if (g.init_on && (g.init_power_mw < g.p_min_mw || g.init_power_mw > g.p_max_mw)) {
      defect(who + ": initial power outside [p_min, p_max]");
    }
  }

  ids.clear();
  for (const EssUnit& e : c.ess_units) {
    std::string who = "ess " + std::to_string(e.id);
    if (!ids.insert(e.id).second) defect(who + ": duplicate id");
    bus_ref(who, e.bus);
    if (e.soc_min > e.soc_max) {
      defect(who + ": soc bounds inverted");
    } else if (e.soc_min < 0 || e.soc_max > 1) {
      defect(who + ": soc bounds outside [0, 1]");
    }
    if (!(e.eff_charge > 0 && e.eff_charge <= 1) ||
        !(e.eff_discharge > 0 && e.eff_discharge <= 1)) {
      defect(who + ": efficiency outside (0, 1]");
    }
    if (e.p_charge_max_mw < 0 || e.p_discharge_max_mw < 0 || e.ramp_charge_mw < 0 ||
        e.ramp_discharge_mw < 0 || e.energy_max_mwh < 0) {
      defect(who + ": negative rating");
    }
    if (e.soc_min <= e.soc_max &&
        (e.init_energy_mwh < e.soc_min * e.energy_max_mwh - 1e-9 ||
         e.init_energy_mwh > e.soc_max * e.energy_max_mwh + 1e-9)) {
      defect(who + ": initial energy outside the soc window");
    }
  }

  ids.clear();
  for (const ResUnit& w : c.res_units) {
    std::string who = "res " + std::to_string(w.id);
    if (!ids.insert(w.id).second) defect(who + ": duplicate id");
    bus_ref(who, w.bus);
  }

  const ScenarioSet& sc = c.scenarios;
  if (sc.count() < 1) defect("scenario set is empty");
  double psum = 0.0;
  for (double p : sc.probability) {
    if (!(p >= 0)) defect("scenario probability must be nonnegative");
    psum += p;
  }
  if (sc.count() >= 1 && std::abs(psum - 1.0) > 1e-9) {
    defect("scenario probabilities sum to " + std::to_string(psum) + ", expected 1");
  }
  if (static_cast<int>(sc.capacity_mw.size()) != sc.count()) {
    defect("scenario capacity table does not match the scenario count");
  } else {
    for (int s = 0; s < sc.count(); ++s) {
      if (sc.capacity_mw[s].size() != c.res_units.size()) {
        defect("scenario " + std::to_string(s) + ": capacity missing for some RES units");
        continue;
      }
      for (std::size_t w = 0; w < c.res_units.size(); ++w) {
        const auto& prof = sc.capacity_mw[s][w];
        if (static_cast<int>(prof.size()) != c.horizon) {
          defect("scenario " + std::to_string(s) + ", res " +
                 std::to_string(c.res_units[w].id) + ": wrong period count");
        }
        for (double v : prof) {
          if (!(v >= 0)) {
            defect("scenario " + std::to_string(s) + ", res " +
                   std::to_string(c.res_units[w].id) + ": negative capacity");
            break;
          }
        }
      }
    }
  }

  if (c.options.contingencies.kind == ContingencyPolicyKind::kExplicit) {
    for (int id : c.options.contingencies.lines) {
      if (c.find_line(id) == nullptr) {
        defect("contingency list names unknown line " + std::to_string(id));
      }
    }
  }
  if (!(c.options.theta_cap_rad > 0)) defect("theta cap must be positive");

  if (!c.buses.empty() && !buses_connected(c, [](int) { return true; })) {
    defect("bus graph is disconnected");
  }

  rep.generation_capacity_mw = c.generation_capacity();
  bool demand_ok = true;
  for (const Bus& b : c.buses) demand_ok &= static_cast<int>(b.demand_mw.size()) == c.horizon;
  if (demand_ok && c.horizon >= 1) {
    rep.peak_demand_mw = c.peak_demand();
    double ess_dis = 0.0;
    for (const EssUnit& e : c.ess_units) ess_dis += e.p_discharge_max_mw;
    if (rep.generation_capacity_mw + ess_dis < rep.peak_demand_mw) {
      defect("generation plus storage capacity is below peak demand");
    }
  }
  return rep;
}

}  // namespace gridsched::grid

#endif  // GRIDSCHED_GRID_VALIDATE_HPP_
