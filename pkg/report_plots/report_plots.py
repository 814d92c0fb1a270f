#!/usr/bin/env python3
"""Figures from momentlab scan CSVs.

    report_plots.py --in <csv> --kind <kind> --out <png>

Kinds and the schemas they expect:

  moment_trend   scan schema (q,...,defect,...): log-log defect vs q
  exponent_fit   scan schema: same plot plus a printed least-squares slope of
                 log(defect) against log(q)
  census_bar     scan schema with re = proportion: bar chart per q
  corr_hist      correlation schema (gamma_a,...,abs_corr,class): class
                 histogram of |C|

This tool reads CSV only and never invokes the producing binary, so the
primary acceptance suite runs without it.  Rendering is deterministic: fixed
figure size, fixed dpi, rows taken in file order, axes derived from the data
alone.  A header that does not match the kind's schema is a hard error that
prints the column diff and exits nonzero.
"""

from __future__ import annotations

import argparse
import csv
import sys
from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

SCAN_SCHEMA = ["q", "ell", "omega1_idx", "omega2_idx", "re", "im",
               "main_term", "defect", "seconds"]
CORR_SCHEMA = ["gamma_a", "gamma_b", "gamma_c", "gamma_d", "abs_corr", "class"]

KIND_SCHEMAS = {
    "moment_trend": SCAN_SCHEMA,
    "exponent_fit": SCAN_SCHEMA,
    "census_bar": SCAN_SCHEMA,
    "corr_hist": CORR_SCHEMA,
}

FIGSIZE = (6.4, 4.2)
DPI = 120


@dataclass
class PlotJob:
    input_csv: str
    kind: str
    output_image: str


class SchemaMismatch(RuntimeError):
    pass


def load_rows(path: str, schema: list[str]) -> list[dict]:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if header != schema:
            missing = [c for c in schema if c not in header]
            extra = [c for c in header if c not in schema]
            raise SchemaMismatch(
                f"header mismatch for this plot kind:\n  expected: {schema}\n"
                f"  found:    {header}\n  missing:  {missing}\n  extra:    {extra}")
        rows = [dict(zip(header, row)) for row in reader]
    if not rows:
        raise SchemaMismatch("CSV has a header but no data rows")
    return rows


def fit_exponent(qs: np.ndarray, defects: np.ndarray) -> float:
    """Least-squares slope of log(defect) against log(q); deterministic."""
    slope, _ = np.polyfit(np.log(qs), np.log(defects), 1)
    return float(slope)


def render(job: PlotJob) -> float | None:
    """Produce the image; returns the printed slope for exponent_fit."""
    rows = load_rows(job.input_csv, KIND_SCHEMAS[job.kind])
    fig, ax = plt.subplots(figsize=FIGSIZE, dpi=DPI)
    slope = None

    if job.kind in ("moment_trend", "exponent_fit"):
        qs = np.array([float(r["q"]) for r in rows])
        defects = np.array([float(r["defect"]) for r in rows])
        ax.loglog(qs, defects, "o-", color="#1f4e79")
        ax.set_xlabel("q")
        ax.set_ylabel("defect")
        ax.set_title("moment defect vs modulus")
        if job.kind == "exponent_fit":
            slope = fit_exponent(qs, defects)
            ref = defects[0] * (qs / qs[0]) ** slope
            ax.loglog(qs, ref, "--", color="#c55a11",
                      label=f"slope {slope:.3f}")
            ax.legend()
            print(f"slope = {slope:.6f}")
    elif job.kind == "census_bar":
        qs = [r["q"] for r in rows]
        props = [float(r["re"]) for r in rows]
        ax.bar(range(len(qs)), props, color="#2e7d32")
        ax.set_xticks(range(len(qs)), qs)
        ax.set_ylim(0, 1)
        ax.set_xlabel("q")
        ax.set_ylabel("proportion")
        ax.set_title("non-vanishing census")
    elif job.kind == "corr_hist":
        classes = [r["class"] for r in rows]
        vals = np.array([float(r["abs_corr"]) for r in rows])
        uniq = sorted(set(classes))
        ax.hist([vals[[c == u for c in classes]] for u in uniq],
                bins=24, stacked=True, label=uniq)
        ax.set_xlabel("|C(K, omega; gamma)|")
        ax.set_ylabel("count")
        ax.set_title("correlation scan by class")
        ax.legend(fontsize=8)
    else:
        raise ValueError(f"unknown kind {job.kind!r}")

    fig.tight_layout()
    fig.savefig(job.output_image)
    plt.close(fig)
    return slope


def main(argv: list[str] | None = None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--in", dest="input_csv", required=True)
    ap.add_argument("--kind", required=True, choices=sorted(KIND_SCHEMAS))
    ap.add_argument("--out", dest="output_image", required=True)
    a = ap.parse_args(argv)
    job = PlotJob(input_csv=a.input_csv, kind=a.kind, output_image=a.output_image)
    try:
        render(job)
    except SchemaMismatch as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0 if Path(a.output_image).exists() else 1


if __name__ == "__main__":
    sys.exit(main())
