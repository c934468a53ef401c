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

#ifndef GRIDSCHED_FORMULATION_BUILD_HPP_
#define GRIDSCHED_FORMULATION_BUILD_HPP_

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include "gridsched/formulation/variable_index.hpp"
#include "gridsched/grid/case.hpp"
#include "gridsched/grid/contingency.hpp"
#include "gridsched/milp/model.hpp"

namespace gridsched::formulation {

struct Variant {
  bool pnr_enabled = false;
  bool cnr_enabled = false;

  bool operator==(const Variant&) const = default;
};

inline constexpr Variant kSscuc{false, false};
inline constexpr Variant kSscucP{true, false};
inline constexpr Variant kSscucC{false, true};
inline constexpr Variant kSscucPC{true, true};
inline constexpr Variant kAllVariants[] = {kSscuc, kSscucP, kSscucC, kSscucPC};

inline std::string variant_name(Variant v) {
  if (v.pnr_enabled && v.cnr_enabled) return "SSCUC-PC";
  if (v.pnr_enabled) return "SSCUC-P";
  if (v.cnr_enabled) return "SSCUC-C";
  return "SSCUC";
}

/// Accepts the names above in any letter case.
inline std::optional<Variant> parse_variant(std::string_view text) {
  std::string s(text);
  for (char& ch : s) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
  for (Variant v : kAllVariants) {
    if (variant_name(v) == s) return v;
  }
  return std::nullopt;
}

/// Equation numbers each variant must contain.
inline std::vector<int> variant_equations(Variant v) {
  std::vector<int> eqs;
  auto range = [&](int a, int b) {
    for (int i = a; i <= b; ++i) eqs.push_back(i);
  };
  range(1, 18);
  if (v.pnr_enabled) {
    range(21, 25);
  } else {
    range(19, 20);
    eqs.push_back(25);
  }
  range(26, 36);
  if (v.cnr_enabled) {
    range(39, 43);
  } else {
    range(37, 38);
    eqs.push_back(43);
  }
  return eqs;
}

/// Leading equation number of a tag such as `eq25/n=1/t=0/s=0`, or -1.
inline int equation_number(std::string_view tag) {
  if (tag.size() < 3 || tag.substr(0, 2) != "eq") return -1;
  int v = 0;
  std::size_t i = 2;
  for (; i < tag.size() && tag[i] >= '0' && tag[i] <= '9'; ++i) v = v * 10 + (tag[i] - '0');
  if (i == 2 || (i < tag.size() && tag[i] != '/')) return -1;
  return v;
}

/// Equation numbers found in row tags and column bound tags, plus 1 when
/// the objective is nonzero.
inline std::set<int> equations_present(const milp::Model& m) {
  std::set<int> out;
  for (const auto& t : m.tags()) {
    if (int e = equation_number(t); e > 0) out.insert(e);
  }
  for (const auto& v : m.variables()) {
    if (int e = equation_number(v.bound_tag); e > 0) out.insert(e);
  }
  for (double c : m.objective()) {
    if (c != 0.0) {
      out.insert(1);
      break;
    }
  }
  return out;
}

/// Per-unit big-M for line position k under the given flow limit:
/// |b_k| * 2 * theta_cap + limit / base.
inline double big_m_value(const grid::Case& c, int k, double limit_mw) {
  return std::abs(c.lines[k].susceptance_pu) * 2.0 * c.options.theta_cap_rad +
         limit_mw / c.base_mva;
}

inline double big_m_value(const grid::Case& c, int k) {
  return big_m_value(c, k, c.lines[k].limit_normal_mw);
}

inline double contingency_limit_mw(const grid::Case& c, int k) {
  return c.options.contingency_limit == grid::ContingencyLimit::kEmergency
             ? c.lines[k].limit_emergency_mw
             : c.lines[k].limit_normal_mw;
}

/// Closed-form column count for a case, variant and contingency count.
inline int64_t expected_column_count(const grid::Case& c, Variant v, int64_t C) {
  const int64_t G = static_cast<int64_t>(c.generators.size());
  const int64_t K = static_cast<int64_t>(c.lines.size());
  const int64_t W = static_cast<int64_t>(c.res_units.size());
  const int64_t E = static_cast<int64_t>(c.ess_units.size());
  const int64_t N = static_cast<int64_t>(c.buses.size());
  const int64_t T = c.horizon;
  const int64_t S = c.scenarios.count();
  int64_t Ks = 0;
  for (const auto& l : c.lines) Ks += l.switchable ? 1 : 0;
  int64_t n = G * T * 2 + G * T * S * 2 + G * C * T * S + K * T * S + K * C * T * S +
              W * T * S + W * C * T * S + E * T * S * 5 + E * C * T * S * 3 + N * T * S +
              N * C * T * S;
  if (v.pnr_enabled) n += Ks * T * S;
  if (v.cnr_enabled) n += Ks * C * T * S;
  return n;
}

struct BuiltModel {
  milp::Model model;
  VariableIndex index;
  Variant variant;
  std::vector<int> contingencies;  // outaged line ids, in build order
};

namespace detail {

using milp::ColId;
using milp::Sense;
using milp::Term;
using milp::VarKind;

inline std::string row_tag(int eq, std::initializer_list<std::pair<char, int>> coords,
                           std::string_view part = {}) {
  std::string s = "eq" + std::to_string(eq);
  for (auto [label, v] : coords) {
    s += '/';
    s += label;
    s += '=';
    s += std::to_string(v);
  }
  if (!part.empty()) {
    s += '/';
    s.append(part);
  }
  return s;
}

class Builder {
 public:
  Builder(const grid::Case& c, Variant v, std::vector<int> contingencies)
      : c_(c), v_(v), T_(c.horizon), S_(c.scenarios.count()) {
    out_.variant = v;
    out_.contingencies = std::move(contingencies);
    for (int id : out_.contingencies) cpos_.push_back(c.line_position(id));
  }

  BuiltModel run() {
    add_columns();
    add_objective();
    add_generator_rows();
    add_ess_rows();
    add_network_rows();
    add_contingency_rows();
    out_.model.freeze();
    return std::move(out_);
  }

 private:
  ColId col(Family f, std::array<int, 4> coords, VarKind kind, double lo, double hi,
            std::string bound_tag = {}) {
    VarKey key{f, coords};
    ColId id = out_.model.add_variable(var_name(key), kind, lo, hi, std::move(bound_tag));
    out_.index.add(key, id);
    return id;
  }

  ColId at(Family f, std::array<int, 4> coords) const { return out_.index.at(f, coords); }

  void row(std::vector<Term>& terms, Sense sense, double rhs, std::string tag) {
    out_.model.add_constraint(terms, sense, rhs, std::move(tag));
    terms.clear();
  }

  void add_columns() {
    const double cap = c_.options.theta_cap_rad;
    for (const auto& g : c_.generators) {
      for (int t = 0; t < T_; ++t) col(Family::kCommit, {g.id, t}, VarKind::kBinary, 0, 1);
    }
    for (const auto& g : c_.generators) {
      for (int t = 0; t < T_; ++t) col(Family::kStartup, {g.id, t}, VarKind::kBinary, 0, 1);
    }
    for_gts(Family::kGenPower, [&](const grid::Generator& g) {
      return std::pair{0.0, g.p_max_mw};
    }, "eq2");
    for_gts(Family::kReserve, [&](const grid::Generator& g) {
      return std::pair{0.0, g.ramp_10min_mw};
    }, "eq4");
    for (std::size_t w = 0; w < c_.res_units.size(); ++w) {
      for (int t = 0; t < T_; ++t) {
        for (int s = 0; s < S_; ++s) {
          col(Family::kResPower, {c_.res_units[w].id, t, s}, VarKind::kContinuous, 0,
              c_.scenarios.capacity_mw[s][w][t], "eq11");
        }
      }
    }
    for (const auto& e : c_.ess_units) {
      for (int t = 0; t < T_; ++t) {
        for (int s = 0; s < S_; ++s) {
          col(Family::kCharge, {e.id, t, s}, VarKind::kContinuous, 0, e.p_charge_max_mw, "eq13");
          col(Family::kDischarge, {e.id, t, s}, VarKind::kContinuous, 0, e.p_discharge_max_mw,
              "eq15");
          col(Family::kEnergy, {e.id, t, s}, VarKind::kContinuous,
              e.soc_min * e.energy_max_mwh, e.soc_max * e.energy_max_mwh, "eq17");
          col(Family::kChargeMode, {e.id, t, s}, VarKind::kBinary, 0, 1);
          col(Family::kDischargeMode, {e.id, t, s}, VarKind::kBinary, 0, 1);
        }
      }
    }
    for (const auto& l : c_.lines) {
      for (int t = 0; t < T_; ++t) {
        for (int s = 0; s < S_; ++s) {
          col(Family::kFlow, {l.id, t, s}, VarKind::kContinuous, -l.limit_normal_mw,
              l.limit_normal_mw, v_.pnr_enabled ? "eq23" : "eq20");
        }
      }
    }
    if (v_.pnr_enabled) {
      for (const auto& l : c_.lines) {
        if (!l.switchable) continue;
        for (int t = 0; t < T_; ++t) {
          for (int s = 0; s < S_; ++s) col(Family::kSwitchPnr, {l.id, t, s}, VarKind::kBinary, 0, 1);
        }
      }
    }
    for (const auto& b : c_.buses) {
      bool ref = b.id == c_.reference_bus;
      for (int t = 0; t < T_; ++t) {
        for (int s = 0; s < S_; ++s) {
          col(Family::kAngle, {b.id, t, s}, VarKind::kContinuous, ref ? 0.0 : -cap,
              ref ? 0.0 : cap, ref ? "theta_ref" : "theta_box");
        }
      }
    }

    for (std::size_t ci = 0; ci < cpos_.size(); ++ci) {
      const int cid = out_.contingencies[ci];
      for (const auto& g : c_.generators) {
        for (int t = 0; t < T_; ++t) {
          for (int s = 0; s < S_; ++s) {
            col(Family::kGenPowerC, {g.id, cid, t, s}, VarKind::kContinuous, 0, g.p_max_mw,
                "eq28");
          }
        }
      }
      for (std::size_t k = 0; k < c_.lines.size(); ++k) {
        const auto& l = c_.lines[k];
        double lim = contingency_limit_mw(c_, static_cast<int>(k));
        bool out = l.id == cid;
        for (int t = 0; t < T_; ++t) {
          for (int s = 0; s < S_; ++s) {
            col(Family::kFlowC, {l.id, cid, t, s}, VarKind::kContinuous, out ? 0.0 : -lim,
                out ? 0.0 : lim, out ? "outage" : (v_.cnr_enabled ? "eq41" : "eq38"));
          }
        }
      }
      // Printed for (w,t,s); the post-contingency copy needs every c too.
      for (std::size_t w = 0; w < c_.res_units.size(); ++w) {
        for (int t = 0; t < T_; ++t) {
          for (int s = 0; s < S_; ++s) {
            col(Family::kResPowerC, {c_.res_units[w].id, cid, t, s}, VarKind::kContinuous, 0,
                c_.scenarios.capacity_mw[s][w][t], "eq30");
          }
        }
      }
      for (const auto& e : c_.ess_units) {
        for (int t = 0; t < T_; ++t) {
          for (int s = 0; s < S_; ++s) {
            col(Family::kChargeC, {e.id, cid, t, s}, VarKind::kContinuous, 0, e.p_charge_max_mw,
                "eq31");
            col(Family::kDischargeC, {e.id, cid, t, s}, VarKind::kContinuous, 0,
                e.p_discharge_max_mw, "eq33");
            // eq35 is printed for (e,t,s) but bounds every contingency copy.
            col(Family::kEnergyC, {e.id, cid, t, s}, VarKind::kContinuous,
                e.soc_min * e.energy_max_mwh, e.soc_max * e.energy_max_mwh, "eq35");
          }
        }
      }
      if (v_.cnr_enabled) {
        for (const auto& l : c_.lines) {
          if (!l.switchable) continue;
          // The outaged line cannot be reclosed.
          double hi = l.id == cid ? 0.0 : 1.0;
          for (int t = 0; t < T_; ++t) {
            for (int s = 0; s < S_; ++s) {
              col(Family::kSwitchCnr, {l.id, cid, t, s}, VarKind::kBinary, 0, hi,
                  l.id == cid ? "outage" : "");
            }
          }
        }
      }
      for (const auto& b : c_.buses) {
        bool ref = b.id == c_.reference_bus;
        for (int t = 0; t < T_; ++t) {
          for (int s = 0; s < S_; ++s) {
            col(Family::kAngleC, {b.id, cid, t, s}, VarKind::kContinuous, ref ? 0.0 : -cap,
                ref ? 0.0 : cap, ref ? "theta_ref" : "theta_box");
          }
        }
      }
    }
  }

  template <class Bounds>
  void for_gts(Family f, Bounds bounds, const char* tag) {
    for (const auto& g : c_.generators) {
      auto [lo, hi] = bounds(g);
      for (int t = 0; t < T_; ++t) {
        for (int s = 0; s < S_; ++s) col(f, {g.id, t, s}, VarKind::kContinuous, lo, hi, tag);
      }
    }
  }

  void add_objective() {
    auto& m = out_.model;
    for (const auto& g : c_.generators) {
      for (int t = 0; t < T_; ++t) {
        m.add_objective(at(Family::kCommit, {g.id, t}), g.no_load_cost);
        m.add_objective(at(Family::kStartup, {g.id, t}), g.startup_cost);
        for (int s = 0; s < S_; ++s) {
          m.add_objective(at(Family::kGenPower, {g.id, t, s}),
                          c_.scenarios.probability[s] * g.cost_per_mwh);
        }
      }
    }
  }

  void add_generator_rows() {
    std::vector<Term> r;
    for (const auto& g : c_.generators) {
      const double u0 = g.init_on ? 1.0 : 0.0;
      for (int t = 0; t < T_; ++t) {
        ColId u = at(Family::kCommit, {g.id, t});
        ColId v = at(Family::kStartup, {g.id, t});
        // Truncated at the horizon start; earlier history is assumed feasible.
        for (int q = std::max(0, t - g.min_up_h + 1); q <= t; ++q) {
          r.push_back({at(Family::kStartup, {g.id, q}), 1.0});
        }
        r.push_back({u, -1.0});
        row(r, Sense::kLessEqual, 0.0, row_tag(8, {{'g', g.id}, {'t', t}}));
        if (t + 1 <= T_ - g.min_down_h) {
          for (int q = t + 1; q <= t + g.min_down_h; ++q) {
            r.push_back({at(Family::kStartup, {g.id, q}), 1.0});
          }
          r.push_back({u, 1.0});
          row(r, Sense::kLessEqual, 1.0, row_tag(9, {{'g', g.id}, {'t', t}}));
        }
        r.push_back({v, 1.0});
        r.push_back({u, -1.0});
        if (t > 0) {
          r.push_back({at(Family::kCommit, {g.id, t - 1}), 1.0});
          row(r, Sense::kGreaterEqual, 0.0, row_tag(10, {{'g', g.id}, {'t', t}}));
        } else {
          row(r, Sense::kGreaterEqual, -u0, row_tag(10, {{'g', g.id}, {'t', t}}));
        }
      }
    }

    for (const auto& g : c_.generators) {
      const double u0 = g.init_on ? 1.0 : 0.0;
      const double p0 = g.init_power_mw;
      for (int t = 0; t < T_; ++t) {
        ColId u = at(Family::kCommit, {g.id, t});
        ColId v = at(Family::kStartup, {g.id, t});
        for (int s = 0; s < S_; ++s) {
          ColId p = at(Family::kGenPower, {g.id, t, s});
          ColId rs = at(Family::kReserve, {g.id, t, s});
          auto tag = [&](int eq) { return row_tag(eq, {{'g', g.id}, {'t', t}, {'s', s}}); };
          r = {{p, 1.0}, {u, -g.p_min_mw}};
          row(r, Sense::kGreaterEqual, 0.0, tag(2));
          r = {{p, 1.0}, {rs, 1.0}, {u, -g.p_max_mw}};
          row(r, Sense::kLessEqual, 0.0, tag(3));
          r = {{rs, 1.0}, {u, -g.ramp_10min_mw}};
          row(r, Sense::kLessEqual, 0.0, tag(4));
          for (const auto& q : c_.generators) r.push_back({at(Family::kReserve, {q.id, t, s}), 1.0});
          r.push_back({p, -1.0});
          r.push_back({rs, -1.0});
          row(r, Sense::kGreaterEqual, 0.0, tag(5));
          // Period -1 values come from the initial conditions.
          r = {{p, 1.0}, {v, -g.ramp_startup_mw}};
          if (t > 0) {
            r.push_back({at(Family::kGenPower, {g.id, t - 1, s}), -1.0});
            r.push_back({at(Family::kCommit, {g.id, t - 1}), -g.ramp_hourly_mw});
            row(r, Sense::kLessEqual, 0.0, tag(6));
          } else {
            row(r, Sense::kLessEqual, p0 + g.ramp_hourly_mw * u0, tag(6));
          }
          r = {{p, -1.0}, {u, -g.ramp_hourly_mw + g.ramp_shutdown_mw}, {v, -g.ramp_shutdown_mw}};
          if (t > 0) {
            r.push_back({at(Family::kGenPower, {g.id, t - 1, s}), 1.0});
            r.push_back({at(Family::kCommit, {g.id, t - 1}), -g.ramp_shutdown_mw});
            row(r, Sense::kLessEqual, 0.0, tag(7));
          } else {
            row(r, Sense::kLessEqual, -p0 + g.ramp_shutdown_mw * u0, tag(7));
          }
        }
      }
    }
  }

  void add_ess_rows() {
    std::vector<Term> r;
    const double dt = c_.period_hours;
    for (const auto& e : c_.ess_units) {
      for (int t = 0; t < T_; ++t) {
        for (int s = 0; s < S_; ++s) {
          auto tag = [&](int eq, std::string_view part = {}) {
            return row_tag(eq, {{'e', e.id}, {'t', t}, {'s', s}}, part);
          };
          ColId bc = at(Family::kChargeMode, {e.id, t, s});
          ColId bd = at(Family::kDischargeMode, {e.id, t, s});
          ColId ch = at(Family::kCharge, {e.id, t, s});
          ColId di = at(Family::kDischarge, {e.id, t, s});
          ColId en = at(Family::kEnergy, {e.id, t, s});
          r = {{bc, 1.0}, {bd, 1.0}};
          row(r, Sense::kLessEqual, 1.0, tag(12));
          r = {{ch, 1.0}, {bc, -e.p_charge_max_mw}};
          row(r, Sense::kLessEqual, 0.0, tag(13));
          r = {{di, 1.0}, {bd, -e.p_discharge_max_mw}};
          row(r, Sense::kLessEqual, 0.0, tag(15));
          // Charge and discharge are zero before the first period.
          for (auto [eq, fam, x, rate] : {std::tuple{14, Family::kCharge, ch, e.ramp_charge_mw},
                                          std::tuple{16, Family::kDischarge, di,
                                                     e.ramp_discharge_mw}}) {
            for (int dir : {1, -1}) {
              r = {{x, dt}};
              if (t > 0) r.push_back({at(fam, {e.id, t - 1, s}), -dt});
              row(r, dir > 0 ? Sense::kLessEqual : Sense::kGreaterEqual, dir * rate,
                  tag(eq, dir > 0 ? "up" : "down"));
            }
          }
          r = {{en, 1.0}, {ch, -dt * e.eff_charge}, {di, dt / e.eff_discharge}};
          if (t > 0) {
            r.push_back({at(Family::kEnergy, {e.id, t - 1, s}), -1.0});
            row(r, Sense::kEqual, 0.0, tag(18));
          } else {
            row(r, Sense::kEqual, e.init_energy_mwh, tag(18));
          }
        }
      }
    }
  }

  // Flow definition rows for one network copy. `z` returns the switch
  // column or nullopt for a line that stays closed.
  template <class FlowCol, class AngleCol, class SwitchCol, class Tag>
  void flow_rows(int k, bool switching, double limit_mw, FlowCol flow, AngleCol angle,
                 SwitchCol z, Tag tag, int eq_def, int eq_lim) {
    const auto& l = c_.lines[k];
    std::vector<Term> r;
    const double bb = c_.base_mva * l.susceptance_pu;
    ColId f = flow();
    ColId a = angle(l.from_bus);
    ColId b = angle(l.to_bus);
    if (!switching) {
      r = {{f, 1.0}, {a, -bb}, {b, bb}};
      row(r, Sense::kEqual, 0.0, tag(eq_def, ""));
      return;
    }
    const double M = c_.base_mva * big_m_value(c_, k, limit_mw);
    std::optional<ColId> zc = z();
    // (1 - z) M moved to the right-hand side; z = 1 for fixed lines.
    r = {{f, 1.0}, {a, -bb}, {b, bb}};
    if (zc) r.push_back({*zc, -M});
    row(r, Sense::kGreaterEqual, zc ? -M : 0.0, tag(eq_def, ""));
    r = {{f, 1.0}, {a, -bb}, {b, bb}};
    if (zc) r.push_back({*zc, M});
    row(r, Sense::kLessEqual, zc ? M : 0.0, tag(eq_def + 1, ""));
    if (zc) {
      r = {{f, 1.0}, {*zc, -limit_mw}};
      row(r, Sense::kLessEqual, 0.0, tag(eq_lim, "upper"));
      r = {{f, 1.0}, {*zc, limit_mw}};
      row(r, Sense::kGreaterEqual, 0.0, tag(eq_lim, "lower"));
    }
  }

  template <class Gen, class Res, class Cha, class Dis, class Flow>
  void balance_rows(int t, Gen gen, Res res, Cha cha, Dis dis, Flow flow,
                    const std::function<std::string(int)>& tag) {
    std::vector<Term> r;
    for (const auto& b : c_.buses) {
      for (const auto& g : c_.generators) {
        if (g.bus == b.id) r.push_back({gen(g.id), 1.0});
      }
      for (const auto& w : c_.res_units) {
        if (w.bus == b.id) r.push_back({res(w.id), 1.0});
      }
      for (const auto& e : c_.ess_units) {
        if (e.bus != b.id) continue;
        r.push_back({cha(e.id), -1.0});
        r.push_back({dis(e.id), 1.0});
      }
      for (const auto& l : c_.lines) {
        if (l.to_bus == b.id) r.push_back({flow(l.id), 1.0});
        if (l.from_bus == b.id) r.push_back({flow(l.id), -1.0});
      }
      row(r, Sense::kEqual, b.demand_mw[t], tag(b.id));
    }
  }

  void add_network_rows() {
    std::vector<Term> r;
    for (int t = 0; t < T_; ++t) {
      for (int s = 0; s < S_; ++s) {
        for (int k = 0; k < static_cast<int>(c_.lines.size()); ++k) {
          const auto& l = c_.lines[k];
          flow_rows(
              k, v_.pnr_enabled, l.limit_normal_mw,
              [&] { return at(Family::kFlow, {l.id, t, s}); },
              [&](int n) { return at(Family::kAngle, {n, t, s}); },
              [&]() -> std::optional<ColId> {
                if (!l.switchable) return std::nullopt;
                return at(Family::kSwitchPnr, {l.id, t, s});
              },
              [&](int eq, std::string_view part) {
                return row_tag(eq, {{'k', l.id}, {'t', t}, {'s', s}}, part);
              },
              v_.pnr_enabled ? 21 : 19, 23);
        }
        if (v_.pnr_enabled) {
          // Printed as "for all k,t,s" although it sums over k: one row per (t,s).
          int count = 0;
          for (const auto& l : c_.lines) {
            if (!l.switchable) continue;
            r.push_back({at(Family::kSwitchPnr, {l.id, t, s}), -1.0});
            ++count;
          }
          if (count > 0) row(r, Sense::kLessEqual, 1.0 - count, row_tag(24, {{'t', t}, {'s', s}}));
          if (c_.options.tie_pnr_across_scenarios && s > 0) {
            for (const auto& l : c_.lines) {
              if (!l.switchable) continue;
              r = {{at(Family::kSwitchPnr, {l.id, t, s}), 1.0},
                   {at(Family::kSwitchPnr, {l.id, t, 0}), -1.0}};
              std::string tag = "pnr_tie/k=" + std::to_string(l.id) + "/t=" +
                                std::to_string(t) + "/s=" + std::to_string(s);
              row(r, Sense::kEqual, 0.0, std::move(tag));
            }
          }
        }
        balance_rows(
            t, [&](int g) { return at(Family::kGenPower, {g, t, s}); },
            [&](int w) { return at(Family::kResPower, {w, t, s}); },
            [&](int e) { return at(Family::kCharge, {e, t, s}); },
            [&](int e) { return at(Family::kDischarge, {e, t, s}); },
            [&](int k) { return at(Family::kFlow, {k, t, s}); },
            [&](int n) { return row_tag(25, {{'n', n}, {'t', t}, {'s', s}}); });
      }
    }
  }

  void add_contingency_rows() {
    std::vector<Term> r;
    const double dt = c_.period_hours;
    for (std::size_t ci = 0; ci < cpos_.size(); ++ci) {
      const int cid = out_.contingencies[ci];
      for (int t = 0; t < T_; ++t) {
        for (int s = 0; s < S_; ++s) {
          for (const auto& g : c_.generators) {
            auto tag = [&](int eq) {
              return row_tag(eq, {{'g', g.id}, {'c', cid}, {'t', t}, {'s', s}});
            };
            ColId u = at(Family::kCommit, {g.id, t});
            ColId p = at(Family::kGenPower, {g.id, t, s});
            ColId pc = at(Family::kGenPowerC, {g.id, cid, t, s});
            r = {{p, 1.0}, {pc, -1.0}, {u, -g.ramp_10min_mw}};
            row(r, Sense::kLessEqual, 0.0, tag(26));
            r = {{pc, 1.0}, {p, -1.0}, {u, -g.ramp_10min_mw}};
            row(r, Sense::kLessEqual, 0.0, tag(27));
            r = {{pc, 1.0}, {u, -g.p_min_mw}};
            row(r, Sense::kGreaterEqual, 0.0, tag(28));
            r = {{pc, 1.0}, {u, -g.p_max_mw}};
            row(r, Sense::kLessEqual, 0.0, tag(29));
          }
          for (const auto& e : c_.ess_units) {
            auto tag = [&](int eq, std::string_view part = {}) {
              return row_tag(eq, {{'e', e.id}, {'c', cid}, {'t', t}, {'s', s}}, part);
            };
            ColId ch = at(Family::kCharge, {e.id, t, s});
            ColId di = at(Family::kDischarge, {e.id, t, s});
            ColId chc = at(Family::kChargeC, {e.id, cid, t, s});
            ColId dic = at(Family::kDischargeC, {e.id, cid, t, s});
            r = {{chc, 1.0}, {at(Family::kChargeMode, {e.id, t, s}), -e.p_charge_max_mw}};
            row(r, Sense::kLessEqual, 0.0, tag(31));
            r = {{dic, 1.0}, {at(Family::kDischargeMode, {e.id, t, s}), -e.p_discharge_max_mw}};
            row(r, Sense::kLessEqual, 0.0, tag(33));
            for (auto [eq, x, base, rate] :
                 {std::tuple{32, chc, ch, e.ramp_charge_mw},
                  std::tuple{34, dic, di, e.ramp_discharge_mw}}) {
              for (int dir : {1, -1}) {
                r = {{x, dt}, {base, -dt}};
                row(r, dir > 0 ? Sense::kLessEqual : Sense::kGreaterEqual, dir * rate,
                    tag(eq, dir > 0 ? "up" : "down"));
              }
            }
            // Anchored at the base-case energy of the same period.
            r = {{at(Family::kEnergyC, {e.id, cid, t, s}), 1.0},
                 {at(Family::kEnergy, {e.id, t, s}), -1.0},
                 {chc, -dt * e.eff_charge},
                 {dic, dt / e.eff_discharge}};
            row(r, Sense::kEqual, 0.0, tag(36));
          }
          int count = 0;
          for (int k = 0; k < static_cast<int>(c_.lines.size()); ++k) {
            const auto& l = c_.lines[k];
            if (l.id == cid) continue;  // flow pinned to zero, no definition rows
            flow_rows(
                k, v_.cnr_enabled, contingency_limit_mw(c_, k),
                [&] { return at(Family::kFlowC, {l.id, cid, t, s}); },
                [&](int n) { return at(Family::kAngleC, {n, cid, t, s}); },
                [&]() -> std::optional<ColId> {
                  if (!l.switchable) return std::nullopt;
                  return at(Family::kSwitchCnr, {l.id, cid, t, s});
                },
                [&](int eq, std::string_view part) {
                  return row_tag(eq, {{'k', l.id}, {'c', cid}, {'t', t}, {'s', s}}, part);
                },
                v_.cnr_enabled ? 39 : 37, 41);
            if (v_.cnr_enabled && l.switchable) {
              r.push_back({at(Family::kSwitchCnr, {l.id, cid, t, s}), -1.0});
              ++count;
            }
          }
          if (count > 0) {
            // Printed as "for all k,c,t,s" although it sums over k: one row per (c,t,s).
            row(r, Sense::kLessEqual, 1.0 - count,
                row_tag(42, {{'c', cid}, {'t', t}, {'s', s}}));
          }
          r.clear();
          balance_rows(
              t, [&](int g) { return at(Family::kGenPowerC, {g, cid, t, s}); },
              [&](int w) { return at(Family::kResPowerC, {w, cid, t, s}); },
              [&](int e) { return at(Family::kChargeC, {e, cid, t, s}); },
              [&](int e) { return at(Family::kDischargeC, {e, cid, t, s}); },
              [&](int k) { return at(Family::kFlowC, {k, cid, t, s}); },
              [&](int n) {
                return row_tag(43, {{'n', n}, {'c', cid}, {'t', t}, {'s', s}});
              });
        }
      }
    }
  }

  const grid::Case& c_;
  Variant v_;
  int T_;
  int S_;
  std::vector<int> cpos_;
  BuiltModel out_;
};

}  // namespace detail

/// Compiles a validated case into the MILP for `variant`, studying the
/// given line outages.
inline BuiltModel build(const grid::Case& c, Variant variant, std::vector<int> contingencies) {
  for (int id : contingencies) {
    if (c.find_line(id) == nullptr) {
      throw std::invalid_argument("unknown contingency line " + std::to_string(id));
    }
  }
  return detail::Builder(c, variant, std::move(contingencies)).run();
}

/// Uses the case's own contingency policy.
inline BuiltModel build(const grid::Case& c, Variant variant) {
  return build(c, variant, grid::contingency_list(c).lines);
}

/// Frozen copy of `model` with the given binary columns pinned.
inline milp::Model pin_topology(const milp::Model& model, const VariableIndex& index,
                                const std::vector<std::pair<VarKey, double>>& assignments) {
  std::vector<std::pair<milp::ColId, double>> pins;
  for (const auto& [key, value] : assignments) {
    auto col = index.find(key);
    if (!col) throw std::invalid_argument("unknown coordinate " + var_name(key));
    if (model.variable(*col).kind != milp::VarKind::kBinary) {
      throw std::invalid_argument(var_name(key) + " is not binary");
    }
    if (value != 0.0 && value != 1.0) {
      throw std::invalid_argument(var_name(key) + " pinned to a non-binary value");
    }
    pins.emplace_back(*col, value);
  }
  return model.with_fixed(pins);
}

/// Pins every free column of a switch family to `value`.
inline std::vector<std::pair<VarKey, double>> pin_all(const milp::Model& model,
                                                      const VariableIndex& index, Family f,
                                                      double value) {
  std::vector<std::pair<VarKey, double>> out;
  for (milp::ColId col : index.columns_of(f)) {
    const auto& v = model.variable(col);
    if (v.lower == v.upper) continue;
    out.emplace_back(index.key(col), value);
  }
  return out;
}

}  // namespace gridsched::formulation

#endif  // GRIDSCHED_FORMULATION_BUILD_HPP_
