#!/usr/bin/env python3
"""Cubic-moment scan over a q-list, CSV out; the input for the defect plots.

    python scripts/run_moment_scan.py --q-list 101,211,401,809 --out scan_cubic.csv
"""
import argparse
import sys

from momentlab.cli import run


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--q-list", default="101,211,401,809")
    ap.add_argument("--ell", type=int, default=1)
    ap.add_argument("--omega1", default="0")
    ap.add_argument("--omega2", default="0")
    ap.add_argument("--out", default="scan_cubic.csv")
    a = ap.parse_args()
    return run(["scan", "--q-list", a.q_list, "--experiment", "cubic",
                "--ell", str(a.ell), "--omega1", a.omega1, "--omega2", a.omega2,
                "--out", a.out])


if __name__ == "__main__":
    sys.exit(main())
