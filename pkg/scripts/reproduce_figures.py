#!/usr/bin/env python3
"""Emit the CSV/JSON datasets behind the four reference figures.

Each figure gets per-panel CSV files (density, wave number, current,
spectrum; the designed-profile figure gets density + Re/Im traces per pole
distance) plus a JSON report with the backflow intervals and normalization.
"""

import argparse
import sys

from backflow.cli import cmd_figure


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--outdir", default="figure_data", help="output directory")
    ap.add_argument("--samples", type=int, default=2001)
    ap.add_argument(
        "--figures", type=int, nargs="+", default=[1, 2, 3, 4], help="figure ids to emit"
    )
    args = ap.parse_args()
    for fig in args.figures:
        rc = cmd_figure(fig, args.outdir, args.samples)
        if rc != 0:
            return rc
        print(f"figure {fig}: datasets written to {args.outdir}/")
    return 0


if __name__ == "__main__":
    sys.exit(main())
