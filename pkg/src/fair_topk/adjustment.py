"""Type-I error of the ranked fairness test, and significance adjustment.

The k per-prefix binomial tests are positively dependent, so a target overall
rejection probability alpha for fairly-generated rankings requires a smaller
per-test significance alpha_adj.  The exact rejection probability is computed
by a survival-vector recursion and alpha_adj is found by bisection.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np

from .binomial import minimum_counts
from .candidates import RankedSequence
from .fairness import verify_ranked_group_fairness

__all__ = [
    "AdjustmentResult",
    "SimulationResult",
    "rejection_probability",
    "adjust_significance",
    "simulate_rejection_rate",
]

SEARCH_FLOOR = 1e-10  # lower bracket of the bisection
BRACKET_WIDTH = 1e-6  # bisection stops at this interval width
FEASIBILITY_TOL = 1e-3  # max shortfall (target - achieved) still called feasible


def _validate(k: int, p: float, alpha: float, name: str = "alpha_adj") -> None:
    if k < 1:
        raise ValueError("k must be >= 1")
    if not 0.0 < p < 1.0:
        raise ValueError("p must lie in the open interval (0, 1)")
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"{name} must lie in the open interval (0, 1)")


def rejection_probability(k: int, p: float, alpha_adj: float) -> float:
    """Probability that a fairly-generated ranking fails the fairness test.

    The generative model draws a protected candidate independently with
    probability p at each of the k positions.  Walk those positions carrying
    S, where S[c] is the probability of having exactly c protected so far
    while every prefix requirement has been met; counts at or above the final
    requirement m(k) pool in an absorbing top bucket.  At each position the
    vector takes a Bernoulli step, and where the requirement increments to v
    the newly infeasible entry S[v-1] is zeroed (entries below v-1 are already
    zero because requirements grow by at most 1).  The answer is 1 - sum(S).
    Positions after the last increment only shuffle mass between surviving
    counts, so the walk stops there.
    """
    _validate(k, p, alpha_adj)
    minima = minimum_counts(k, p, alpha_adj)
    top = int(minima[-1])
    if top == 0:
        return 0.0
    q = 1.0 - p
    increments = np.flatnonzero(np.diff(minima, prepend=0) == 1)
    last_position = int(increments[-1]) + 1
    S = np.zeros(top + 1)
    S[0] = 1.0
    required = 0
    for position in range(1, last_position + 1):
        stepped = S * q
        stepped[1:] += S[:-1] * p
        stepped[top] += S[top] * p  # absorbing: the top bucket never steps down
        req = int(minima[position - 1])
        if req > required:
            stepped[req - 1] = 0.0
            required = req
        S = stepped
    # rounding can leave the survivor sum a hair above 1; never report < 0
    return max(0.0, 1.0 - math.fsum(S))


@dataclass(frozen=True)
class AdjustmentResult:
    """Outcome of calibrating alpha_adj against a target overall alpha.

    ``alpha_adj`` is always the largest per-test significance whose rejection
    probability stays at or below the target (the conservative side).  When
    the step structure of the test leaves a shortfall larger than
    ``FEASIBILITY_TOL``, ``feasible`` is False and the conservative value is
    still returned so callers can proceed with an under-rejecting test.
    """

    k: int
    p: float
    alpha_target: float
    alpha_adj: float
    achieved_rejection_prob: float
    feasible: bool
    search_iterations: int

    def __post_init__(self):
        if not 0.0 < self.alpha_adj < 1.0:
            raise ValueError("alpha_adj must lie in the open interval (0, 1)")


def adjust_significance(k: int, p: float, alpha_target: float) -> AdjustmentResult:
    """Bisect for the per-test significance meeting a target rejection rate.

    The rejection probability is monotone non-decreasing in alpha_adj (a
    larger per-test significance only raises minimum counts), which is what
    justifies bisection on (SEARCH_FLOOR, alpha_target].
    """
    _validate(k, p, alpha_target, name="alpha_target")
    evaluations = 0

    def rejection(a: float) -> float:
        nonlocal evaluations
        evaluations += 1
        return rejection_probability(k, p, a)

    hi = alpha_target
    r_hi = rejection(hi)
    if r_hi <= alpha_target:
        # No correction needed (or possible): the target itself under-rejects.
        return AdjustmentResult(
            k, p, alpha_target, hi, r_hi,
            feasible=(alpha_target - r_hi) <= FEASIBILITY_TOL,
            search_iterations=evaluations,
        )
    lo = SEARCH_FLOOR
    r_lo = rejection(lo)
    if r_lo > alpha_target:
        # Unreachable for sane targets: rejection <= k * alpha_adj = k * 1e-10.
        return AdjustmentResult(
            k, p, alpha_target, lo, r_lo, feasible=False,
            search_iterations=evaluations,
        )
    while hi - lo > BRACKET_WIDTH:
        mid = (lo + hi) / 2.0
        r = rejection(mid)
        if r <= alpha_target:
            lo, r_lo = mid, r
        else:
            hi = mid
    return AdjustmentResult(
        k, p, alpha_target, lo, r_lo,
        feasible=(alpha_target - r_lo) <= FEASIBILITY_TOL,
        search_iterations=evaluations,
    )


@dataclass(frozen=True)
class SimulationResult:
    estimate: float
    stderr: float
    trials: int
    rejections: int


def simulate_rejection_rate(
    k: int,
    p_generator: float,
    p_test: float,
    alpha_adj: float,
    trials: int,
    seed: Union[int, Sequence[int]] = 0,
) -> SimulationResult:
    """Monte Carlo rejection rate of the fairness test on generated rankings.

    Each trial draws a synthetic ranking (protected flag Bernoulli(p_generator)
    per position) and verifies it at (p_test, alpha_adj).  Trial t derives its
    random stream from (seed, t), so results do not depend on scheduling.
    """
    from .baselines import yang_stoyanovich_generate  # local: avoid module cycle

    _validate(k, p_generator, alpha_adj)
    if trials < 1:
        raise ValueError("trials must be >= 1")
    base = [seed] if isinstance(seed, (int, np.integer)) else list(seed)
    rejections = 0
    for t in range(trials):
        ranking = yang_stoyanovich_generate(k, p_generator, seed=base + [t])
        if not verify_ranked_group_fairness(ranking, p_test, alpha_adj).fair:
            rejections += 1
    estimate = rejections / trials
    stderr = math.sqrt(estimate * (1.0 - estimate) / trials)
    return SimulationResult(estimate, stderr, trials, rejections)
