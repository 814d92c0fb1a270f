#!/usr/bin/env python3
"""Exhaustive correlation scan at small q and the non-vanishing census.

    python scripts/run_correlation_census.py --q-corr 13 --q-census 809
"""
import argparse
import sys

from momentlab.cli import run


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--q-corr", type=int, default=13)
    ap.add_argument("--q-census", type=int, default=809)
    ap.add_argument("--threshold", type=float, default=1.45)
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--out", default="correlation_scan.csv")
    a = ap.parse_args()
    rc = run(["correlation", "scan", "--q", str(a.q_corr), "--kernel", "kl3",
              "--omega", "0", "--mode", "exhaustive",
              "--threshold", str(a.threshold), "--out", a.out])
    rc |= run(["census", "--q", str(a.q_census), "--seed", str(a.seed)])
    return rc


if __name__ == "__main__":
    sys.exit(main())
