#!/usr/bin/env python3
"""Run the full verification battery and collect the reports in one place.

Drives every subcommand of the ``projqm`` CLI with a shared seed, then
prints a one-line digest per report.  Exit status is nonzero if any check
in any report failed, so this doubles as a CI entry point:

    python3 scripts/run_verification.py --out out/verify --seed 7
"""

from __future__ import annotations

import argparse
import json
import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from projqm.cli import main as cli_main  # noqa: E402

BATTERY = [
    ["kahler-audit", "--dims", "2,3,4,5,8", "--trials", "25"],
    ["geodesic-verify", "--ambient-dims", "2,3,4", "--pairs", "12",
     "--certificates", "2"],
    ["two-slit"],
    ["evolve", "--hamiltonian", "sigma_z", "--start", "plus",
     "--t-end", "1.5", "--dt", "1e-3", "--track", "sigma_x,sigma_y"],
    ["demo-spin"],
]


def run(outdir: str, seed: int) -> int:
    failures = 0
    for args in BATTERY:
        name = args[0]
        subdir = os.path.join(outdir, name)
        code = cli_main(args + ["--seed", str(seed), "--out", subdir])
        report_path = os.path.join(subdir, f"{name}.json")
        if code == 0 and os.path.exists(report_path):
            with open(report_path) as fh:
                report = json.load(fh)
            n = len(report["entries"])
            worst = max((e["residual"] for e in report["entries"]),
                        default=0.0)
            print(f"[ok]   {name:17s} {n:3d} checks, worst residual {worst:.3e}")
        else:
            failures += 1
            print(f"[FAIL] {name:17s} exit code {code}")
    return failures


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="out/verify", help="report directory")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    failures = run(args.out, args.seed)
    if failures:
        print(f"{failures} command(s) failed", file=sys.stderr)
        return 1
    print("all verification reports pass")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
