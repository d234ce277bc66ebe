#!/usr/bin/env python3
"""Time the constrained ranker across pool sizes to check near-linear scaling."""
import argparse
import time

import numpy as np

from fair_topk import CandidatePool, adjust_significance, fair_topk


def pool_of(n, rng):
    return CandidatePool(
        np.arange(n, dtype=np.int64),
        rng.random(n),
        rng.random(n) < 0.5,
    )


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--k", type=int, default=1500)
    parser.add_argument("--ns", type=int, nargs="+", default=[100_000, 1_000_000, 4_000_000])
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()

    alpha_adj = adjust_significance(args.k, 0.5, 0.1).alpha_adj
    rng = np.random.default_rng(11)
    print(f"k={args.k} alpha_adj={alpha_adj:.6f}")
    base = None
    for n in args.ns:
        pool = pool_of(n, rng)
        best = min(
            _timed(pool, args.k, alpha_adj) for _ in range(args.repeats)
        )
        ratio = "" if base is None else f"  (x{best / base[1] / (n / base[0]):.2f} vs linear)"
        if base is None:
            base = (n, best)
        print(f"n={n:>9,}  best of {args.repeats}: {best:.3f}s{ratio}")


def _timed(pool, k, alpha_adj):
    started = time.perf_counter()
    fair_topk(pool, k, 0.5, alpha_adj)
    return time.perf_counter() - started


if __name__ == "__main__":
    main()
