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
"""Export/import bridge to HiGHS.

For each variant: `gridsched export` writes model.mps, HiGHS solves it and
the column values are written back as OUT/<variant>/solution.sol (by
column alias) together with the achieved relative gap in OUT/<variant>/gap.
The directory is then accepted by `gridsched solve --solver import` and by
`acceptance --external OUT`.
"""

import argparse
import pathlib
import subprocess
import sys

VARIANTS = ["sscuc", "sscuc-p", "sscuc-c", "sscuc-pc"]


def solve_one(args, variant):
    out = pathlib.Path(args.out) / variant
    subprocess.run([args.gridsched, "export", args.case, "-v", variant, "-o", str(out)]
                   + (["--contingencies", args.contingencies] if args.contingencies else []),
                   check=True)
    import highspy

    h = highspy.Highs()
    h.setOptionValue("mip_rel_gap", args.gap)
    h.setOptionValue("time_limit", float(args.time_limit))
    h.setOptionValue("threads", args.threads)
    h.readModel(str(out / "model.mps"))
    h.run()
    info = h.getInfo()
    status = h.modelStatusToString(h.getModelStatus())
    if info.primal_solution_status != 2:  # kSolutionStatusFeasible
        print(f"{variant}: {status}, no feasible solution", file=sys.stderr)
        return False
    values = h.getSolution().col_value
    lp = h.getLp()
    names = lp.col_names_
    with open(out / "solution.sol", "w") as f:
        for name, v in zip(names, values):
            f.write(f"{name} {v!r}\n")
    (out / "gap").write_text(f"{info.mip_gap!r}\n")
    print(f"{variant}: {status}, objective {info.objective_function_value:.6f}, "
          f"gap {info.mip_gap:.6g}")
    return True


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("case")
    p.add_argument("out")
    p.add_argument("--variants", default=",".join(VARIANTS))
    p.add_argument("--gap", type=float, default=0.01)
    p.add_argument("--time-limit", type=float, default=2500)
    p.add_argument("--threads", type=int, default=0)
    p.add_argument("--contingencies", help="override the case contingency policy")
    p.add_argument("--gridsched", default="build/tools/gridsched")
    args = p.parse_args()
    ok = all([solve_one(args, v) for v in args.variants.split(",")])
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
