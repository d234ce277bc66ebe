"""Ranked group fairness: minimum-count tables and the verification test.

A ranking of length k is fair for target proportion p at significance a if
every prefix of length i contains at least m(i) protected candidates, where
m(i) is the smallest count whose binomial CDF at i trials exceeds a.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

import numpy as np

from .binomial import BinomialParams, cdf, minimum_counts, pmf
from .candidates import RankedSequence

__all__ = [
    "MTable",
    "BlockDecomposition",
    "FairnessVerdict",
    "compute_mtable",
    "decompose_blocks",
    "fair_representation",
    "verify_ranked_group_fairness",
    "ranked_group_fairness_measure",
]

_KEY_DECIMALS = 6  # cache key granularity for (p, alpha_adj)
_REFRESH_EVERY = 256
_BOUNDARY_EPS = 1e-9


@dataclass(frozen=True)
class MTable:
    """Minimum protected counts m(1..k) for parameters (k, p, alpha_adj)."""

    k: int
    p: float
    alpha_adj: float
    minima: np.ndarray

    def __post_init__(self):
        minima = np.asarray(self.minima, dtype=np.int64)
        object.__setattr__(self, "minima", minima)
        if minima.shape != (self.k,):
            raise ValueError("minima must have exactly k entries")
        steps = np.diff(minima, prepend=0)
        if ((steps < 0) | (steps > 1)).any():
            raise ValueError("minima must be non-decreasing with steps of at most 1")
        if (minima > np.arange(1, self.k + 1)).any():
            raise ValueError("minima[i] cannot exceed the prefix length i")
        minima.setflags(write=False)

    def requirement(self, position: int) -> int:
        """Minimum protected count for the prefix of the given 1-based length."""
        if not 1 <= position <= self.k:
            raise ValueError(f"position {position} outside 1..{self.k}")
        return int(self.minima[position - 1])


@dataclass(frozen=True)
class BlockDecomposition:
    """Positions where the required count increments, and the gaps between them."""

    inverse: np.ndarray  # inverse[j-1] = first position requiring j protected
    blocks: np.ndarray  # blocks[j-1] = inverse[j-1] - inverse[j-2]

    def __post_init__(self):
        inverse = np.asarray(self.inverse, dtype=np.int64)
        blocks = np.asarray(self.blocks, dtype=np.int64)
        object.__setattr__(self, "inverse", inverse)
        object.__setattr__(self, "blocks", blocks)
        if inverse.shape != blocks.shape:
            raise ValueError("inverse and blocks must have equal length")
        if not np.array_equal(np.diff(inverse, prepend=0), blocks):
            raise ValueError("blocks must be the gaps between increment positions")
        inverse.setflags(write=False)
        blocks.setflags(write=False)


@lru_cache(maxsize=256)
def _cached_mtable(k: int, p: float, alpha_adj: float) -> MTable:
    return MTable(k, p, alpha_adj, minimum_counts(k, p, alpha_adj))


def compute_mtable(k: int, p: float, alpha_adj: float) -> MTable:
    """Table of per-prefix minimum protected counts, cached on rounded keys."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if not 0.0 < p < 1.0:
        raise ValueError("p must lie in the open interval (0, 1)")
    if not 0.0 < alpha_adj < 1.0:
        raise ValueError("alpha_adj must lie in the open interval (0, 1)")
    return _cached_mtable(k, round(p, _KEY_DECIMALS), round(alpha_adj, _KEY_DECIMALS))


def decompose_blocks(mtable: MTable) -> BlockDecomposition:
    """Increment positions of m(.) and the block sizes between them."""
    inverse = np.flatnonzero(np.diff(mtable.minima, prepend=0) == 1) + 1
    return BlockDecomposition(inverse, np.diff(inverse, prepend=0))


def fair_representation(protected_count: int, k: int, p: float, alpha: float) -> bool:
    """Does a length-k prefix with this protected count pass the binomial test?

    True iff F(protected_count; k, p) > alpha (strictly).
    """
    if not 0 <= protected_count <= k:
        raise ValueError("protected_count must lie in [0, k]")
    return cdf(protected_count, BinomialParams(k, p)) > alpha


@dataclass(frozen=True)
class FairnessVerdict:
    """Outcome of the ranked group fairness test."""

    fair: bool
    k: int
    first_violation: Optional[int] = None  # 1-based prefix length
    required: Optional[int] = None
    observed: Optional[int] = None

    @property
    def deficit(self) -> int:
        if self.fair:
            return 0
        return int(self.required - self.observed)


def verify_ranked_group_fairness(
    ranking: RankedSequence, p: float, alpha_adj: float
) -> FairnessVerdict:
    """Check every prefix of the ranking against the minimum-count table.

    Reports the smallest violating prefix length and its deficit when unfair.
    One pass over the ranking (plus the cached table lookup).
    """
    k = len(ranking)
    if k == 0:
        raise ValueError("ranking must be non-empty")
    minima = compute_mtable(k, p, alpha_adj).minima
    counts = ranking.protected_prefix_counts()
    short = counts < minima
    if not short.any():
        return FairnessVerdict(fair=True, k=k)
    first = int(np.argmax(short))  # index of the first violation
    return FairnessVerdict(
        fair=False,
        k=k,
        first_violation=first + 1,
        required=int(minima[first]),
        observed=int(counts[first]),
    )


def ranked_group_fairness_measure(ranking: RankedSequence, p: float) -> float:
    """Largest significance at which the ranking still passes the test.

    Equals min over prefix lengths i of F(count_i; i, p): the test passes at
    every alpha strictly below this value and fails at any alpha at or above
    it.  Larger means the ranking adheres to the required counts more
    comfortably.  Computed with the same one-step carried (cdf, pmf)
    identities as the minimum-count table, so the whole scan is O(k).
    """
    k = len(ranking)
    if k == 0:
        raise ValueError("ranking must be non-empty")
    if not 0.0 < p < 1.0:
        raise ValueError("p must lie in the open interval (0, 1)")
    q = 1.0 - p
    odds = p / q
    flags = ranking.protected
    best = 1.0
    c = 0  # protected count of the current prefix
    pmf_c = 1.0
    cdf_c = 1.0
    for i in range(1, k + 1):
        cdf_c -= p * pmf_c
        pmf_c *= q * i / (i - c)
        if flags[i - 1]:
            c += 1
            pmf_c *= (i - c + 1) / c * odds
            cdf_c += pmf_c
        if cdf_c < best:
            best = cdf_c
        if i % _REFRESH_EVERY == 0:
            params = BinomialParams(i, p)
            cdf_c, pmf_c = cdf(c, params), pmf(c, params)
    return float(min(best, 1.0))
