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

#ifndef GRIDSCHED_GRID_SCENARIOS_HPP_
#define GRIDSCHED_GRID_SCENARIOS_HPP_

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "gridsched/grid/case.hpp"

namespace gridsched::grid {

struct SynthesisSpec {
  double penetration = 0.48;
  int blocks = 6;  // piecewise-constant blocks over the horizon
  uint64_t seed = 2020;
  int count = 4;  // number of scenarios
};

namespace detail {
// mt19937_64 output is fixed by the standard; the distributions are not,
// so uniforms are derived from raw bits to stay portable.
inline double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}
}  // namespace detail

/// Equiprobable RES capacity scenarios whose expected energy equals
/// `penetration` times the total demand energy.
inline ScenarioSet synthesize_scenarios(const Case& c, const SynthesisSpec& spec) {
  if (!(spec.penetration >= 0.0 && spec.penetration <= 1.0)) {
    throw std::invalid_argument("penetration must lie in [0, 1]");
  }
  if (spec.count < 1) throw std::invalid_argument("scenario count must be positive");
  if (spec.blocks < 1 || c.horizon % spec.blocks != 0) {
    throw std::invalid_argument("blocks must divide the horizon of " +
                                std::to_string(c.horizon) + " periods");
  }
  const int S = spec.count;
  const int W = static_cast<int>(c.res_units.size());
  const int T = c.horizon;
  const int block_len = T / spec.blocks;
  if (W == 0 && spec.penetration > 0.0) {
    throw std::invalid_argument("positive penetration needs at least one RES unit");
  }

  ScenarioSet out;
  out.seed = spec.seed;
  out.probability.assign(static_cast<std::size_t>(S), 1.0 / S);
  out.capacity_mw.assign(
      static_cast<std::size_t>(S),
      std::vector<std::vector<double>>(static_cast<std::size_t>(W),
                                       std::vector<double>(static_cast<std::size_t>(T), 0.0)));
  if (W == 0) return out;

  std::mt19937_64 rng(spec.seed);
  double expected = 0.0;
  for (int s = 0; s < S; ++s) {
    double level = 0.6 + 0.8 * detail::unit_uniform(rng);
    for (int w = 0; w < W; ++w) {
      for (int b = 0; b < spec.blocks; ++b) {
        double v = level * (0.3 + 0.7 * detail::unit_uniform(rng));
        for (int t = b * block_len; t < (b + 1) * block_len; ++t) {
          out.capacity_mw[s][w][t] = v;
          expected += out.probability[s] * v;
        }
      }
    }
  }
  double demand_energy = 0.0;
  for (int t = 0; t < T; ++t) demand_energy += c.total_demand(t);
  double scale = expected > 0.0 ? spec.penetration * demand_energy / expected : 0.0;
  for (auto& per_unit : out.capacity_mw) {
    for (auto& prof : per_unit) {
      for (double& v : prof) v *= scale;
    }
  }
  return out;
}

/// Expected RES energy over expected demand energy.
inline double expected_penetration(const Case& c, const ScenarioSet& sc) {
  double res = 0.0, dem = 0.0;
  for (int s = 0; s < sc.count(); ++s) {
    for (const auto& prof : sc.capacity_mw[s]) {
      for (double v : prof) res += sc.probability[s] * v;
    }
  }
  for (int t = 0; t < c.horizon; ++t) dem += c.total_demand(t);
  return dem > 0.0 ? res / dem : 0.0;
}

}  // namespace gridsched::grid

#endif  // GRIDSCHED_GRID_SCENARIOS_HPP_
