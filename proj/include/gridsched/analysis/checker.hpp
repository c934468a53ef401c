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

// Feasibility checker for a named assignment. It restates every scheduling
// constraint directly from the case data and deliberately shares no code
// with the model builder, so the two can audit each other.

#ifndef GRIDSCHED_ANALYSIS_CHECKER_HPP_
#define GRIDSCHED_ANALYSIS_CHECKER_HPP_

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "gridsched/grid/case.hpp"
#include "gridsched/milp/model.hpp"

namespace gridsched::analysis {

using Assignment = std::unordered_map<std::string, double>;

/// Name to value map for every column of a model.
inline Assignment to_assignment(const milp::Model& model, std::span<const double> x) {
  Assignment a;
  a.reserve(x.size());
  for (int j = 0; j < model.num_cols(); ++j) a.emplace(model.variables()[j].name, x[j]);
  return a;
}

struct CheckOptions {
  bool pnr = false;
  bool cnr = false;
  std::vector<int> contingencies;  // outaged line ids
  double tol = 1e-6;
};

struct Violation {
  std::string equation;  // e.g. "eq25", "integrality", "theta_box"
  std::string coords;    // e.g. "n=1/t=0/s=0"
  double residual = 0.0;
};

class MissingVariables : public std::invalid_argument {
 public:
  explicit MissingVariables(std::vector<std::string> names)
      : std::invalid_argument("assignment lacks " + std::to_string(names.size()) +
                              " variable(s), first: " + names.front()),
        names_(std::move(names)) {}
  const std::vector<std::string>& names() const { return names_; }

 private:
  std::vector<std::string> names_;
};

namespace detail {

using Coords = std::initializer_list<std::pair<char, int>>;

inline std::string coord_text(Coords cs) {
  std::string s;
  for (auto [k, v] : cs) {
    if (!s.empty()) s += '/';
    s += k;
    s += '=';
    s += std::to_string(v);
  }
  return s;
}

class Checker {
 public:
  Checker(const grid::Case& c, const Assignment& a, const CheckOptions& o)
      : c_(c), a_(a), o_(o), T_(c.horizon), S_(c.scenarios.count()) {}

  std::vector<Violation> run() {
    generators();
    storage();
    for (int t = 0; t < T_; ++t) {
      for (int s = 0; s < S_; ++s) network(t, s);
    }
    for (int cid : o_.contingencies) {
      for (int t = 0; t < T_; ++t) {
        for (int s = 0; s < S_; ++s) contingency(cid, t, s);
      }
    }
    if (!missing_.empty()) {
      throw MissingVariables(std::vector<std::string>(missing_.begin(), missing_.end()));
    }
    return std::move(out_);
  }

  double max_balance_residual() const { return max_balance_; }

 private:
  double val(const char* prefix, Coords cs) {
    std::string name = std::string(prefix) + "/" + coord_text(cs);
    auto it = a_.find(name);
    if (it == a_.end()) {
      missing_.insert(name);
      return 0.0;
    }
    return it->second;
  }

  double binary(const char* prefix, Coords cs) {
    double v = val(prefix, cs);
    double d = std::min(std::abs(v), std::abs(v - 1.0));
    if (d > o_.tol) out_.push_back({"integrality", std::string(prefix) + "/" + coord_text(cs), d});
    return v;
  }

  void le(double lhs, double rhs, const std::string& eq, Coords cs) {
    double r = lhs - rhs;
    if (r > o_.tol) out_.push_back({eq, coord_text(cs), r});
  }
  void ge(double lhs, double rhs, const std::string& eq, Coords cs) { le(rhs, lhs, eq, cs); }
  void eq(double lhs, double rhs, const std::string& e, Coords cs) {
    double r = std::abs(lhs - rhs);
    if (r > o_.tol) out_.push_back({e, coord_text(cs), r});
  }

  void generators() {
    for (const auto& g : c_.generators) {
      const double u0 = g.init_on ? 1.0 : 0.0;
      std::vector<double> u(T_), v(T_);
      for (int t = 0; t < T_; ++t) {
        u[t] = binary("u", {{'g', g.id}, {'t', t}});
        v[t] = binary("v", {{'g', g.id}, {'t', t}});
      }
      for (int t = 0; t < T_; ++t) {
        Coords gt = {{'g', g.id}, {'t', t}};
        double up = 0.0;
        for (int q = std::max(0, t - g.min_up_h + 1); q <= t; ++q) up += v[q];
        le(up, u[t], "eq8", gt);
        if (t + 1 <= T_ - g.min_down_h) {
          double down = 0.0;
          for (int q = t + 1; q <= t + g.min_down_h; ++q) down += v[q];
          le(down, 1.0 - u[t], "eq9", gt);
        }
        ge(v[t], u[t] - (t > 0 ? u[t - 1] : u0), "eq10", gt);
      }
      for (int s = 0; s < S_; ++s) {
        double p_prev = g.init_power_mw;
        for (int t = 0; t < T_; ++t) {
          Coords cs = {{'g', g.id}, {'t', t}, {'s', s}};
          double p = val("P", cs);
          double r = val("r", cs);
          double u_prev = t > 0 ? u[t - 1] : u0;
          ge(p, g.p_min_mw * u[t], "eq2", cs);
          le(p + r, g.p_max_mw * u[t], "eq3", cs);
          ge(r, 0.0, "eq4", cs);
          le(r, g.ramp_10min_mw * u[t], "eq4", cs);
          double total_r = 0.0;
          for (const auto& q : c_.generators) total_r += val("r", {{'g', q.id}, {'t', t}, {'s', s}});
          ge(total_r, p + r, "eq5", cs);
          le(p - p_prev, g.ramp_hourly_mw * u_prev + g.ramp_startup_mw * v[t], "eq6", cs);
          le(p_prev - p,
             g.ramp_hourly_mw * u[t] + g.ramp_shutdown_mw * (v[t] - u[t] + u_prev), "eq7", cs);
          p_prev = p;
        }
      }
    }
    for (std::size_t w = 0; w < c_.res_units.size(); ++w) {
      for (int t = 0; t < T_; ++t) {
        for (int s = 0; s < S_; ++s) {
          Coords cs = {{'w', c_.res_units[w].id}, {'t', t}, {'s', s}};
          double p = val("W", cs);
          ge(p, 0.0, "eq11", cs);
          le(p, c_.scenarios.capacity_mw[s][w][t], "eq11", cs);
        }
      }
    }
  }

  void storage() {
    const double dt = c_.period_hours;
    for (const auto& e : c_.ess_units) {
      for (int s = 0; s < S_; ++s) {
        double ch_prev = 0.0, di_prev = 0.0, e_prev = e.init_energy_mwh;
        for (int t = 0; t < T_; ++t) {
          Coords cs = {{'e', e.id}, {'t', t}, {'s', s}};
          double bc = binary("bcha", cs);
          double bd = binary("bdis", cs);
          double ch = val("cha", cs);
          double di = val("dis", cs);
          double en = val("E", cs);
          le(bc + bd, 1.0, "eq12", cs);
          ge(ch, 0.0, "eq13", cs);
          le(ch, e.p_charge_max_mw * bc, "eq13", cs);
          le(std::abs(ch - ch_prev) * dt, e.ramp_charge_mw, "eq14", cs);
          ge(di, 0.0, "eq15", cs);
          le(di, e.p_discharge_max_mw * bd, "eq15", cs);
          le(std::abs(di - di_prev) * dt, e.ramp_discharge_mw, "eq16", cs);
          ge(en, e.soc_min * e.energy_max_mwh, "eq17", cs);
          le(en, e.soc_max * e.energy_max_mwh, "eq17", cs);
          eq(en, e_prev + dt * (e.eff_charge * ch - di / e.eff_discharge), "eq18", cs);
          ch_prev = ch;
          di_prev = di;
          e_prev = en;
        }
      }
    }
  }

  // One line of one network copy. `z` is 1 for lines that cannot switch.
  void line(const grid::Line& l, double flow, double theta_from, double theta_to, double z,
            bool switching, double limit, int eq_def, Coords cs) {
    auto name = [](int e) { return "eq" + std::to_string(e); };
    const double def = flow - c_.base_mva * l.susceptance_pu * (theta_from - theta_to);
    if (!switching) {
      eq(def, 0.0, name(eq_def), cs);
      le(std::abs(flow), limit, name(eq_def + 1), cs);
      return;
    }
    const double m = c_.base_mva * std::abs(l.susceptance_pu) * 2.0 * c_.options.theta_cap_rad +
                     limit;
    ge(def + (1.0 - z) * m, 0.0, name(eq_def), cs);
    le(def - (1.0 - z) * m, 0.0, name(eq_def + 1), cs);
    le(std::abs(flow), z * limit, name(eq_def + 2), cs);
  }

  void angles(int bus, Coords cs, double theta) {
    if (bus == c_.reference_bus) {
      eq(theta, 0.0, "theta_ref", cs);
    } else {
      le(std::abs(theta), c_.options.theta_cap_rad, "theta_box", cs);
    }
  }

  void network(int t, int s) {
    std::unordered_map<int, double> theta;
    for (const auto& b : c_.buses) {
      Coords cs = {{'n', b.id}, {'t', t}, {'s', s}};
      theta[b.id] = val("th", cs);
      angles(b.id, cs, theta[b.id]);
    }
    std::unordered_map<int, double> flow;
    double opened = 0.0;
    for (const auto& l : c_.lines) {
      Coords cs = {{'k', l.id}, {'t', t}, {'s', s}};
      double f = val("F", cs);
      flow[l.id] = f;
      double z = 1.0;
      if (o_.pnr && l.switchable) {
        z = binary("zp", cs);
        opened += 1.0 - z;
        if (c_.options.tie_pnr_across_scenarios && s > 0) {
          eq(z, val("zp", {{'k', l.id}, {'t', t}, {'s', 0}}), "pnr_tie", cs);
        }
      }
      line(l, f, theta[l.from_bus], theta[l.to_bus], z, o_.pnr, l.limit_normal_mw,
           o_.pnr ? 21 : 19, cs);
    }
    if (o_.pnr) le(opened, 1.0, "eq24", {{'t', t}, {'s', s}});
    balance(t, s, -1, flow, "eq25");
  }

  void balance(int t, int s, int cid, const std::unordered_map<int, double>& flow,
               const char* eq_name) {
    const bool post = cid >= 0;
    for (const auto& b : c_.buses) {
      double lhs = 0.0;
      double rhs = b.demand_mw[t];
      for (const auto& g : c_.generators) {
        if (g.bus != b.id) continue;
        lhs += post ? val("Pc", {{'g', g.id}, {'c', cid}, {'t', t}, {'s', s}})
                    : val("P", {{'g', g.id}, {'t', t}, {'s', s}});
      }
      for (const auto& w : c_.res_units) {
        if (w.bus != b.id) continue;
        rhs -= post ? val("Wc", {{'w', w.id}, {'c', cid}, {'t', t}, {'s', s}})
                    : val("W", {{'w', w.id}, {'t', t}, {'s', s}});
      }
      for (const auto& e : c_.ess_units) {
        if (e.bus != b.id) continue;
        if (post) {
          rhs += val("chac", {{'e', e.id}, {'c', cid}, {'t', t}, {'s', s}}) -
                 val("disc", {{'e', e.id}, {'c', cid}, {'t', t}, {'s', s}});
        } else {
          rhs += val("cha", {{'e', e.id}, {'t', t}, {'s', s}}) -
                 val("dis", {{'e', e.id}, {'t', t}, {'s', s}});
        }
      }
      for (const auto& l : c_.lines) {
        if (l.to_bus == b.id) lhs += flow.at(l.id);
        if (l.from_bus == b.id) lhs -= flow.at(l.id);
      }
      double r = std::abs(lhs - rhs);
      max_balance_ = std::max(max_balance_, r);
      if (post) {
        eq(lhs, rhs, eq_name, {{'n', b.id}, {'c', cid}, {'t', t}, {'s', s}});
      } else {
        eq(lhs, rhs, eq_name, {{'n', b.id}, {'t', t}, {'s', s}});
      }
    }
  }

  void contingency(int cid, int t, int s) {
    const double dt = c_.period_hours;
    for (const auto& g : c_.generators) {
      Coords cs = {{'g', g.id}, {'c', cid}, {'t', t}, {'s', s}};
      double u = val("u", {{'g', g.id}, {'t', t}});
      double p = val("P", {{'g', g.id}, {'t', t}, {'s', s}});
      double pc = val("Pc", cs);
      le(p - pc, g.ramp_10min_mw * u, "eq26", cs);
      le(pc - p, g.ramp_10min_mw * u, "eq27", cs);
      ge(pc, g.p_min_mw * u, "eq28", cs);
      le(pc, g.p_max_mw * u, "eq29", cs);
    }
    // Printed for (w,t,s); applied to each contingency copy.
    for (std::size_t w = 0; w < c_.res_units.size(); ++w) {
      Coords cs = {{'w', c_.res_units[w].id}, {'c', cid}, {'t', t}, {'s', s}};
      double p = val("Wc", cs);
      ge(p, 0.0, "eq30", cs);
      le(p, c_.scenarios.capacity_mw[s][w][t], "eq30", cs);
    }
    for (const auto& e : c_.ess_units) {
      Coords cs = {{'e', e.id}, {'c', cid}, {'t', t}, {'s', s}};
      Coords base = {{'e', e.id}, {'t', t}, {'s', s}};
      double chc = val("chac", cs), dic = val("disc", cs), enc = val("Ec", cs);
      double ch = val("cha", base), di = val("dis", base), en = val("E", base);
      ge(chc, 0.0, "eq31", cs);
      le(chc, e.p_charge_max_mw * val("bcha", base), "eq31", cs);
      le(std::abs(chc - ch) * dt, e.ramp_charge_mw, "eq32", cs);
      ge(dic, 0.0, "eq33", cs);
      le(dic, e.p_discharge_max_mw * val("bdis", base), "eq33", cs);
      le(std::abs(dic - di) * dt, e.ramp_discharge_mw, "eq34", cs);
      // Printed for (e,t,s); every contingency copy is bounded.
      ge(enc, e.soc_min * e.energy_max_mwh, "eq35", cs);
      le(enc, e.soc_max * e.energy_max_mwh, "eq35", cs);
      eq(enc, en + dt * (e.eff_charge * chc - dic / e.eff_discharge), "eq36", cs);
    }
    std::unordered_map<int, double> theta;
    for (const auto& b : c_.buses) {
      Coords cs = {{'n', b.id}, {'c', cid}, {'t', t}, {'s', s}};
      theta[b.id] = val("thc", cs);
      angles(b.id, cs, theta[b.id]);
    }
    std::unordered_map<int, double> flow;
    double opened = 0.0;
    for (const auto& l : c_.lines) {
      Coords cs = {{'k', l.id}, {'c', cid}, {'t', t}, {'s', s}};
      double f = val("Fc", cs);
      flow[l.id] = f;
      if (l.id == cid) {
        eq(f, 0.0, "outage", cs);
        if (o_.cnr && l.switchable) eq(binary("zc", cs), 0.0, "outage", cs);
        continue;
      }
      double z = 1.0;
      if (o_.cnr && l.switchable) {
        z = binary("zc", cs);
        opened += 1.0 - z;
      }
      double limit = c_.options.contingency_limit == grid::ContingencyLimit::kEmergency
                         ? l.limit_emergency_mw
                         : l.limit_normal_mw;
      line(l, f, theta[l.from_bus], theta[l.to_bus], z, o_.cnr, limit, o_.cnr ? 39 : 37, cs);
    }
    if (o_.cnr) le(opened, 1.0, "eq42", {{'c', cid}, {'t', t}, {'s', s}});
    balance(t, s, cid, flow, "eq43");
  }

  const grid::Case& c_;
  const Assignment& a_;
  const CheckOptions& o_;
  int T_;
  int S_;
  std::vector<Violation> out_;
  std::set<std::string> missing_;
  double max_balance_ = 0.0;
};

}  // namespace detail

struct CheckResult {
  std::vector<Violation> violations;
  double max_balance_residual = 0.0;  // over every nodal balance

  bool feasible() const { return violations.empty(); }
};

/// Checks every applicable scheduling constraint at absolute tolerance
/// `opts.tol`. Throws MissingVariables when a needed value is absent.
inline CheckResult check_feasibility(const grid::Case& c, const Assignment& a,
                                     const CheckOptions& opts) {
  detail::Checker ck(c, a, opts);
  CheckResult r;
  r.violations = ck.run();
  r.max_balance_residual = ck.max_balance_residual();
  return r;
}

}  // namespace gridsched::analysis

#endif  // GRIDSCHED_ANALYSIS_CHECKER_HPP_
