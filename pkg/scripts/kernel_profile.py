#!/usr/bin/env python3
"""Sweep the kernel over an (r, eta) grid at fixed times and write a CSV.

Intended for downstream plotting: one row per grid point with both
representations and their relative difference.  Example:

    python scripts/kernel_profile.py --t 0.5,1 --n-r 25 --n-eta 9 -o profile.csv
"""

import argparse
import math
import sys
import time

from octads.cli import write_records
from octads.subelliptic_kernel import heat_kernel_rep1, heat_kernel_rep2


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--t", default="1.0", help="comma list of times")
    ap.add_argument("--r-max", type=float, default=2.5)
    ap.add_argument("--n-r", type=int, default=21)
    ap.add_argument("--n-eta", type=int, default=9)
    ap.add_argument("-o", "--output", default=None)
    args = ap.parse_args()

    times = [float(x) for x in args.t.split(",")]
    rs = [args.r_max * i / (args.n_r - 1) for i in range(args.n_r)]
    etas = [math.pi * i / (args.n_eta - 1) for i in range(args.n_eta)]

    start = time.time()
    rows = []
    for t in times:
        for r in rs:
            for eta in etas:
                k1 = heat_kernel_rep1(t, r, eta)
                k2 = heat_kernel_rep2(t, r, eta)
                rows.append({
                    "t": t, "r": r, "eta": eta,
                    "p_rep1": k1.value, "p_rep2": k2.value,
                    "rel_diff": abs(k1.value - k2.value) / abs(k2.value),
                })
    fields = ["t", "r", "eta", "p_rep1", "p_rep2", "rel_diff"]
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            write_records(rows, fields, "csv", fh)
    else:
        write_records(rows, fields, "csv", sys.stdout)
    print(f"# {len(rows)} points in {time.time() - start:.1f}s", file=sys.stderr)


if __name__ == "__main__":
    main()
