"""Numerically stable binomial distribution primitives.

Everything statistical in this package reduces to binomial tail evaluations
at trial counts up to a few thousand, where naive factorial formulas overflow
and recurrences started at x=0 underflow.  The probability mass vector is
therefore seeded at the distribution mode (computed in log space) and grown
outward with the multiplicative recurrence

    pmf(x+1) = pmf(x) * (n - x) / (x + 1) * p / (1 - p),

and cumulative probabilities are compensated sums of those terms.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

__all__ = ["BinomialParams", "pmf", "pmf_vector", "cdf", "percent_point", "minimum_counts"]

# Incremental recurrences (minimum_counts) shed accumulated rounding by
# recomputing from the mode-seeded vector every this many trials.
_REFRESH_EVERY = 256
# Comparisons against alpha closer than this are re-decided with the
# compensated-summation cdf so recurrence drift cannot flip them.
_BOUNDARY_EPS = 1e-9


@dataclass(frozen=True)
class BinomialParams:
    """Parameters (trials, success_prob) of a binomial distribution."""

    trials: int
    success_prob: float

    def __post_init__(self):
        if self.trials < 0:
            raise ValueError("trials must be non-negative")
        if not 0.0 < self.success_prob < 1.0:
            raise ValueError("success_prob must lie in the open interval (0, 1)")


def _check_support(x: int, params: BinomialParams) -> None:
    if not 0 <= x <= params.trials:
        raise ValueError(f"x={x} outside support [0, {params.trials}]")


@lru_cache(maxsize=512)
def _pmf_vector(trials: int, p: float) -> np.ndarray:
    """Full probability mass vector of Bin(trials, p), mode-seeded."""
    if trials == 0:
        out = np.array([1.0])
        out.setflags(write=False)
        return out
    n = trials
    mode = min(max(int((n + 1) * p), 0), n)
    log_mode = (
        math.lgamma(n + 1)
        - math.lgamma(mode + 1)
        - math.lgamma(n - mode + 1)
        + mode * math.log(p)
        + (n - mode) * math.log1p(-p)
    )
    out = np.empty(n + 1)
    out[mode] = math.exp(log_mode)
    odds = p / (1.0 - p)
    if mode < n:
        x = np.arange(mode, n)
        out[mode + 1 :] = out[mode] * np.cumprod((n - x) / (x + 1) * odds)
    if mode > 0:
        x = np.arange(mode, 0, -1)
        out[mode - 1 :: -1] = out[mode] * np.cumprod(x / (n - x + 1) / odds)
    out.setflags(write=False)
    return out


def pmf_vector(params: BinomialParams) -> np.ndarray:
    """Read-only vector v with v[x] = Pr(X = x) for X ~ Bin(params)."""
    return _pmf_vector(params.trials, params.success_prob)


def pmf(x: int, params: BinomialParams) -> float:
    """Pr(X = x) for X ~ Bin(trials, success_prob)."""
    _check_support(x, params)
    return float(pmf_vector(params)[x])


def cdf(x: int, params: BinomialParams) -> float:
    """F(x; trials, p) = Pr(X <= x), accumulated with compensated summation."""
    _check_support(x, params)
    if x == params.trials:
        return 1.0
    return min(1.0, math.fsum(pmf_vector(params)[: x + 1]))


def percent_point(alpha: float, params: BinomialParams) -> int:
    """Smallest integer x with F(x; trials, p) strictly greater than alpha.

    This is the minimum protected count at which a prefix of the given
    length passes the fair-representation test at significance alpha.
    """
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must lie in the open interval (0, 1)")
    partial = np.cumsum(pmf_vector(params))
    x = int(np.searchsorted(partial, alpha, side="right"))
    # cumsum is not compensated; re-decide the boundary with the exact cdf.
    while x > 0 and cdf(x - 1, params) > alpha:
        x -= 1
    while cdf(x, params) <= alpha:
        x += 1
    return x


def minimum_counts(k: int, p: float, alpha: float) -> np.ndarray:
    """percent_point(alpha, (i, p)) for every prefix length i = 1..k, in O(k).

    Carries F(m; i, p) and Pr(X = m; i, p) across trial counts with the
    one-step identities

        F(m; i, p)   = F(m; i-1, p) - p * pmf(m; i-1, p)
        pmf(m; i, p) = pmf(m; i-1, p) * (1-p) * i / (i - m)

    and bumps m while the carried cdf is <= alpha.  Positions where the
    comparison is within ``_BOUNDARY_EPS`` of alpha are re-decided exactly,
    and the carried pair is refreshed from scratch periodically, so the
    result matches per-position percent_point calls bit-for-bit.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if not 0.0 < p < 1.0:
        raise ValueError("p must lie in the open interval (0, 1)")
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must lie in the open interval (0, 1)")
    q = 1.0 - p
    odds = p / q
    out = np.empty(k, dtype=np.int64)
    m = 0
    pmf_m = 1.0  # Pr(X = m) at the current trial count
    cdf_m = 1.0  # F(m) at the current trial count
    for i in range(1, k + 1):
        cdf_m -= p * pmf_m
        pmf_m *= q * i / (i - m)
        if abs(cdf_m - alpha) < _BOUNDARY_EPS:
            params = BinomialParams(i, p)
            cdf_m, pmf_m = cdf(m, params), pmf(m, params)
        while cdf_m <= alpha:
            m += 1
            pmf_m *= (i - m + 1) / m * odds
            cdf_m += pmf_m
            if abs(cdf_m - alpha) < _BOUNDARY_EPS:
                params = BinomialParams(i, p)
                cdf_m, pmf_m = cdf(m, params), pmf(m, params)
        out[i - 1] = m
        if i % _REFRESH_EVERY == 0:
            params = BinomialParams(i, p)
            cdf_m, pmf_m = cdf(m, params), pmf(m, params)
    out.setflags(write=False)
    return out
