#!/usr/bin/env python3
"""Probe how the amplitude price of backflow grows with pole distance.

Designs exp(-ix) on (-x0, x0) with a single pole of order m+1 at -ib for a
sweep of b values, then fits the log-log slope of the peak-to-interval
amplitude ratio. The ratio is expected to scale roughly like b^m / m!.
"""

import argparse
import math
import sys

import numpy as np

from backflow.padegen import amplitude_scaling_probe


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--m", type=int, default=8, help="numerator degree")
    ap.add_argument("--x0", type=float, default=math.pi, help="interval half-width")
    ap.add_argument(
        "--b",
        type=float,
        nargs="+",
        default=[3 * math.pi, 6 * math.pi, 12 * math.pi, 15 * math.pi],
        help="pole distances to sweep",
    )
    args = ap.parse_args()

    pairs = amplitude_scaling_probe(args.m, args.b, args.x0)
    print(f"{'b':>12}  {'ratio':>12}  {'b^m/m!':>12}")
    for b, ratio in pairs:
        print(f"{b:12.4f}  {ratio:12.4e}  {b**args.m / math.factorial(args.m):12.4e}")
    if len(pairs) >= 2:
        slope = np.polyfit(
            np.log([b for b, _ in pairs]), np.log([r for _, r in pairs]), 1
        )[0]
        print(f"\nlog-log slope: {slope:.3f}  (numerator degree m = {args.m})")
    return 0


if __name__ == "__main__":
    sys.exit(main())
