#!/usr/bin/env python3
"""Map the backflow regimes of the simplest line state N (x - a) / (x + i)^2.

Sweeps the zero position a over a lower-half-plane grid and classifies each
point by the structure of its backflow report: no backflow, one finite
interval, or a pair of half-infinite intervals. The boundary is the circle
|a + 5i/4| = 3/4 together with the line Im(a) = -2. Writes a CSV of
(re_a, im_a, regime, interval_lo, interval_hi).
"""

import argparse
import math
import sys

import numpy as np

from backflow import contwave as cw
from backflow.cli import write_csv


def classify(report: cw.BackflowReport) -> int:
    if not report.intervals:
        return 0
    if len(report.intervals) == 1 and all(map(math.isfinite, report.intervals[0])):
        return 1
    return 2


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--output", default="backflow_region_map.csv")
    ap.add_argument("--grid", type=int, default=40, help="points per axis")
    ap.add_argument("--re", type=float, nargs=2, default=(-2.0, 2.0))
    ap.add_argument("--im", type=float, nargs=2, default=(-3.0, -0.05))
    args = ap.parse_args()

    rows = []
    for re in np.linspace(*args.re, args.grid):
        for im in np.linspace(*args.im, args.grid):
            a = complex(re, im)
            if abs(a + 1j) < 1e-6:  # the zero would collide with the pole
                continue
            spec = cw.RationalSpec(zeros=(cw.Root(a),), poles=(cw.Root(-1j, 2),))
            report = cw.backflow_intervals(cw.make_line_wavefunction(spec))
            regime = classify(report)
            lo, hi = report.intervals[0] if report.intervals else (math.nan, math.nan)
            rows.append((re, im, regime, lo, hi))

    cols = [np.array(col) for col in zip(*rows)]
    write_csv(args.output, ["re_a", "im_a", "regime", "interval_lo", "interval_hi"], cols)
    counts = np.bincount(cols[2].astype(int), minlength=3)
    print(
        f"{len(rows)} points -> no backflow: {counts[0]}, finite interval: {counts[1]}, "
        f"half-infinite pair: {counts[2]}  (written to {args.output})"
    )
    return 0


if __name__ == "__main__":
    sys.exit(main())
