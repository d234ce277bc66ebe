#!/usr/bin/env python3
"""Calibration tables for the multiple-test correction.

Prints the adjusted significance grid (k x p), optionally the step structure
of the rejection probability around a chosen cell (the achievable plateau
values), and analytic-vs-simulated rejection curves.
"""
import argparse
import sys

import numpy as np

from fair_topk import adjust_significance, emit_curve_data, rejection_probability


def grid(ks, ps, alpha):
    print(f"alpha_target={alpha}")
    header = "k      " + "".join(f"p={p:<11g}" for p in ps)
    print(header)
    for k in ks:
        cells = []
        for p in ps:
            r = adjust_significance(k, p, alpha)
            cell = f"{r.alpha_adj:.4f}" if r.feasible else f"({r.alpha_adj:.4f})"
            cells.append(f"{cell:<13}")
        print(f"{k:<7}" + "".join(cells))
    print("(parenthesized: no alpha_adj reaches the target within tolerance;")
    print(" the conservative, under-rejecting value is shown)")


def scan(k, p, alpha_lo, alpha_hi, steps):
    """Show the plateau structure of rejection(alpha_adj): each distinct value."""
    print(f"step structure of rejection probability, k={k} p={p}")
    last = None
    for alpha in np.linspace(alpha_lo, alpha_hi, steps):
        r = rejection_probability(k, p, float(alpha))
        if last is None or r != last:
            print(f"  alpha_adj={alpha:.6f}  rejection={r:.6f}")
            last = r


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--alpha", type=float, default=0.1)
    parser.add_argument("--ks", type=int, nargs="+", default=[40, 100, 1000, 1500])
    parser.add_argument(
        "--ps", type=float, nargs="+", default=[0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7]
    )
    parser.add_argument("--scan", type=int, default=None, metavar="K",
                        help="also scan the rejection step structure at this k")
    parser.add_argument("--scan-p", type=float, default=0.5)
    parser.add_argument("--curves", action="store_true",
                        help="emit analytic-vs-simulated curve CSV on stdout")
    args = parser.parse_args()

    grid(args.ks, args.ps, args.alpha)
    if args.scan:
        scan(args.scan, args.scan_p, 0.001, args.alpha, 400)
    if args.curves:
        k = args.ks[-1]
        alphas = [adjust_significance(k, p, args.alpha).alpha_adj for p in args.ps[:3]]
        emit_curve_data(k, args.ps[:3], alphas, sys.stdout, trials=2000)


if __name__ == "__main__":
    main()
