#!/usr/bin/env python3
"""Emit gap-sign maps over (x, a) for a sweep of shift values b.

Each CSV row is one (x, a) cell with sign in {-1, 0, 1}; 0 marks cells
below the certainty floor.  Plotting sign against (x, a) reconstructs the
two-regime picture: for b near 0 the strip rows switch between the
"+,-" and "+,-,+" shapes, and the violating "+,-,+,-" rows appear just
below the upper strip boundary.

Usage:
    python scripts/sweep_sign_map.py --outdir maps/
"""

import argparse
import pathlib
import sys

from transform_orders import HazardVector, sign_map


def parse_rates(text):
    return tuple(float(tok) for tok in text.split(","))


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--lambda", dest="lam", type=parse_rates, default=(2.0, 3.0))
    parser.add_argument("--theta", type=parse_rates, default=(1.5, 3.5))
    parser.add_argument("--b-values", type=lambda s: [float(t) for t in s.split(",")],
                        default=[0.0, 0.0125, 0.05])
    parser.add_argument("--x-max", type=float, default=25.0)
    parser.add_argument("--resolution", type=int, default=41)
    parser.add_argument("--outdir", default="sign_maps")
    args = parser.parse_args()

    lam, theta = HazardVector(args.lam), HazardVector(args.theta)
    t1 = theta.rates[0]
    a_range = (t1 / (2.0 * lam.rates[-1]), 1.1)
    outdir = pathlib.Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)

    for b in args.b_values:
        smap = sign_map(lam, theta, b, a_range, (0.0, args.x_max), args.resolution)
        path = outdir / f"sign_map_b{b:g}.csv"
        with open(path, "w") as fh:
            fh.write("x,a,sign\n")
            for a, row in zip(smap.a_values, smap.signs):
                for x, s in zip(smap.x_values, row):
                    fh.write(f"{x!r},{a!r},{s}\n")
        n_neg = sum(row.count(-1) for row in smap.signs)
        n_pos = sum(row.count(1) for row in smap.signs)
        print(f"b={b:<8g} -> {path}  ({n_pos} positive, {n_neg} negative cells)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
