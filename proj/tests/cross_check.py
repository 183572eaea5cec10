#!/usr/bin/env python3
"""Optional external-solver stage: LP and MPS exports of the same instances
must reach the same optimum under an independent solver, and that optimum
must match the toolkit's own exact cost. Skips (exit 77) when scipy is not
available."""

import json
import os
import subprocess
import sys
import tempfile

try:
    import scipy.optimize  # noqa: F401
    if not hasattr(scipy.optimize, "milp"):
        sys.exit(77)
except ImportError:
    sys.exit(77)

CLI = os.environ["NBA_CLI"]
CHECKER = os.environ["NBA_CROSS_CHECKER"]


def run(args, **kwargs):
    return subprocess.run(args, capture_output=True, text=True, **kwargs)


def main():
    failures = 0
    with tempfile.TemporaryDirectory() as tmp:
        for seed in range(1, 9):
            spec_path = os.path.join(tmp, "spec.json")
            with open(spec_path, "w") as fh:
                json.dump({"schema": "nba-genspec/1", "kind": "generic", "seed": seed,
                           "n": 3, "p": 1, "edge_density_pct": 70,
                           "max_sources": 2, "max_dests": 2}, fh)
            inst = os.path.join(tmp, "inst.json")
            assert run([CLI, "gen", "--spec", spec_path, "--out", inst]).returncode == 0

            solve = run([CLI, "solve", "--instance", inst, "--strategy", "exact"])
            exact_cost = None
            if solve.returncode == 0:
                cost = json.loads(solve.stdout)["cost"]
                exact_cost = float(cost) if isinstance(cost, (int, float)) else (
                    float(cost.split("/")[0]) / float(cost.split("/")[1]))

            values = {}
            for fmt in ("lp", "mps"):
                model = os.path.join(tmp, f"model.{fmt}")
                assert run([CLI, "export-milp", "--instance", inst, "--format", fmt,
                            "--out", model]).returncode == 0
                res = run([sys.executable, CHECKER, model])
                if res.returncode == 1:
                    values[fmt] = None  # infeasible
                elif res.returncode == 0:
                    values[fmt] = float(res.stdout.strip())
                else:
                    print(f"seed {seed} {fmt}: checker failed: {res.stderr}")
                    failures += 1
                    values[fmt] = "error"

            if values.get("lp") != "error" and values.get("mps") != "error":
                lp_v, mps_v = values["lp"], values["mps"]
                if (lp_v is None) != (mps_v is None):
                    print(f"seed {seed}: LP/MPS feasibility disagreement")
                    failures += 1
                elif lp_v is not None and abs(lp_v - mps_v) > 1e-6:
                    print(f"seed {seed}: LP {lp_v} vs MPS {mps_v}")
                    failures += 1
                elif lp_v is not None and exact_cost is not None and abs(lp_v - exact_cost) > 1e-6:
                    print(f"seed {seed}: external {lp_v} vs exact {exact_cost}")
                    failures += 1
                elif (lp_v is None) != (exact_cost is None):
                    print(f"seed {seed}: external/exact feasibility disagreement")
                    failures += 1
                else:
                    print(f"seed {seed}: ok ({'infeasible' if lp_v is None else lp_v})")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
