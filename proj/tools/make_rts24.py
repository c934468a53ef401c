#!/usr/bin/env python3
# Copyright 2026 The gridsched Authors
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Writes cases/rts24.case from the IEEE RTS 24-bus data tables."""

import pathlib
import sys

PEAK_MW = 2270.0

# Winter weekday hourly load, percent of the daily peak.
SHAPE = [67, 63, 60, 59, 59, 60, 74, 86, 95, 96, 96, 95,
         95, 95, 93, 94, 99, 100, 100, 96, 91, 83, 73, 63]

# Bus share of the 2850 MW system peak.
BUS_PEAK = {1: 108, 2: 97, 3: 180, 4: 74, 5: 71, 6: 136, 7: 125, 8: 171,
            9: 175, 10: 195, 13: 265, 14: 194, 15: 317, 16: 100, 18: 333,
            19: 181, 20: 128}

# (from, to, x pu, normal MVA, emergency MVA)
BRANCHES = [
    (1, 2, 0.0139, 175, 200), (1, 3, 0.2112, 175, 200), (1, 5, 0.0845, 175, 200),
    (2, 4, 0.1267, 175, 200), (2, 6, 0.1920, 175, 200), (3, 9, 0.1190, 175, 200),
    (3, 24, 0.0839, 400, 480), (4, 9, 0.1037, 175, 200), (5, 10, 0.0883, 175, 200),
    (6, 10, 0.0605, 175, 200), (7, 8, 0.0614, 175, 200), (8, 9, 0.1651, 175, 200),
    (8, 10, 0.1651, 175, 200), (9, 11, 0.0839, 400, 480), (9, 12, 0.0839, 400, 480),
    (10, 11, 0.0839, 400, 480), (10, 12, 0.0839, 400, 480), (11, 13, 0.0476, 500, 600),
    (11, 14, 0.0418, 500, 600), (12, 13, 0.0476, 500, 600), (12, 23, 0.0966, 500, 600),
    (13, 23, 0.0865, 500, 600), (14, 16, 0.0389, 500, 600), (15, 16, 0.0173, 500, 600),
    (15, 21, 0.0490, 500, 600), (15, 21, 0.0490, 500, 600), (15, 24, 0.0519, 500, 600),
    (16, 17, 0.0259, 500, 600), (16, 19, 0.0231, 500, 600), (17, 18, 0.0144, 500, 600),
    (17, 22, 0.1053, 500, 600), (18, 21, 0.0259, 500, 600), (18, 21, 0.0259, 500, 600),
    (19, 20, 0.0396, 500, 600), (19, 20, 0.0396, 500, 600), (20, 23, 0.0216, 500, 600),
    (20, 23, 0.0216, 500, 600), (21, 22, 0.0678, 500, 600),
]

# type: pmax, pmin, cost $/MWh, no-load $/h, start-up $, hourly ramp, 10-min ramp,
# min up, min down. The 12 MW oil units are derated to 9.6 MW.
UNIT = {
    "U12": (9.6, 2.4, 56.56, 86.39, 703, 9.6, 9.6, 4, 2),
    "U20": (20, 16, 130.0, 400.68, 60, 20, 20, 1, 1),
    "U50": (50, 10, 0.0, 0.0, 0, 50, 50, 1, 1),
    "U76": (76, 15.2, 16.08, 212.31, 1600, 76, 20, 8, 4),
    "U100": (100, 25, 43.66, 781.52, 3000, 100, 70, 8, 8),
    "U155": (155, 54.3, 12.39, 382.24, 4000, 155, 30, 8, 8),
    "U197": (197, 69, 48.58, 832.76, 5000, 180, 30, 12, 10),
    "U350": (350, 140, 11.85, 665.11, 8000, 240, 40, 24, 48),
    "U400": (400, 100, 4.42, 395.37, 10000, 400, 200, 1, 1),
    "SYNC": (0, 0, 0.0, 0.0, 0, 0, 0, 1, 1),
}

GENERATORS = ([(1, "U20")] * 2 + [(1, "U76")] * 2 + [(2, "U20")] * 2 + [(2, "U76")] * 2 +
              [(7, "U100")] * 3 + [(13, "U197")] * 3 + [(14, "SYNC")] +
              [(15, "U12")] * 5 + [(15, "U155"), (16, "U155"), (18, "U400"), (21, "U400")] +
              [(22, "U50")] * 6 + [(23, "U155")] * 2 + [(23, "U350")])

HEADER = """\
# IEEE RTS 24-bus system with renewable and storage additions.
# Network, unit ratings and unit parameters follow the RTS data tables.
# The five 12 MW oil units are derated to 9.6 MW so conventional capacity
# totals 3393 MW. Unit 15 is the bus 14 synchronous condenser (0 MW).
# Unit costs are linearized RTS heat-rate costs; an approximation.
# Load uses the RTS winter weekday hourly shape scaled to a 2270 MW peak,
# distributed by the RTS bus shares; an approximation.
# Storage at buses 14 and 23: 220 MW, 100 MW/h ramps, SOC 20-90 percent,
# efficiency 0.9, 250 MWh, starting half full.
# Renewables at buses 16 and 21. The four equiprobable scenarios are
# synthesized at 48 percent average penetration, constant over 4-hour
# blocks, with seed 2020; rts24_scenarios.csv holds the same profiles.
# Regenerate with tools/make_rts24.py.
"""


def num(v):
    return repr(round(v, 10)).rstrip("0").rstrip(".") if isinstance(v, float) else str(v)


def main(out):
    scale = PEAK_MW / sum(BUS_PEAK.values())
    lines = [HEADER + "format_version: 1", "name: rts24", "horizon: 24",
             "reference_bus: 13", "options:", "  contingencies: all", "buses:"]
    for b in range(1, 25):
        peak = BUS_PEAK.get(b, 0) * scale
        demand = ", ".join(num(peak * s / 100.0) for s in SHAPE)
        lines.append(f"  - {{id: {b}, demand: [{demand}]}}")
    lines.append("lines:")
    for k, (f, t, x, lim, em) in enumerate(BRANCHES, start=1):
        lines.append(f"  - {{id: {k}, from: {f}, to: {t}, x: {x}, limit: {lim}, emergency: {em}}}")
    lines.append("generators:")
    for g, (bus, kind) in enumerate(GENERATORS, start=1):
        pmax, pmin, c, nl, su, rhr, r10, ut, dt = UNIT[kind]
        lines.append(
            f"  - {{id: {g}, bus: {bus}, pmin: {num(pmin)}, pmax: {num(pmax)}, cost: {num(c)}, "
            f"no_load: {num(nl)}, startup: {su}, ramp_hr: {num(rhr)}, ramp_10: {num(r10)}, "
            f"min_up: {ut}, min_down: {dt}}}")
    lines.append("ess:")
    for e, bus in enumerate((14, 23), start=1):
        lines.append(
            f"  - {{id: {e}, bus: {bus}, p_charge_max: 220, p_discharge_max: 220, "
            "ramp_charge: 100, ramp_discharge: 100, soc_min: 0.2, soc_max: 0.9, "
            "energy_max: 250, eff_charge: 0.9, eff_discharge: 0.9}")
    lines.append("res:")
    lines.append("  - {id: 1, bus: 16}")
    lines.append("  - {id: 2, bus: 21}")
    lines.append("scenarios:")
    lines.append("  synthesize: {penetration: 0.48, blocks: 6, seed: 2020, count: 4}")
    assert len(BRANCHES) == 38 and len(GENERATORS) == 33
    assert abs(sum(UNIT[k][0] for _, k in GENERATORS) - 3393) < 1e-9
    pathlib.Path(out).write_text("\n".join(lines) + "\n")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "cases/rts24.case")
