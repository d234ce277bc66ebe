"""Top-k ranking: the color-blind reference and the fairness-constrained ranker.

The constrained ranker walks positions 1..k with one best-first stream per
group (each stream is the group's k best candidates, obtained by bounded
selection rather than a full sort).  A protected candidate is forced whenever
the minimum-count table requires one; otherwise the better head is taken,
with the protected head winning exact score ties.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .candidates import CandidatePool, RankedSequence
from .fairness import MTable, compute_mtable

__all__ = [
    "FairRanking",
    "InfeasibleRankingError",
    "color_blind_topk",
    "fair_topk",
]


class InfeasibleRankingError(ValueError):
    """Raised in strict mode when the protected pool cannot satisfy the table."""

    def __init__(self, satisfied_up_to: int, k: int):
        self.satisfied_up_to = satisfied_up_to
        self.k = k
        super().__init__(
            f"protected candidates exhausted: fairness holds only up to "
            f"position {satisfied_up_to} of {k}"
        )


@dataclass(frozen=True)
class FairRanking:
    """A constrained ranking plus the table it was built against.

    satisfied_up_to is the longest prefix on which the minimum-count table
    holds; it equals k unless the pool ran out of protected candidates, in
    which case the head of the ranking is fair and the tail is best-effort.
    """

    entries: RankedSequence
    mtable_used: MTable
    satisfied_up_to: int


def _top_indices(scores: np.ndarray, ids: np.ndarray, k: int) -> np.ndarray:
    """Indices of the k best rows by (score desc, id asc), best first.

    Bounded selection: an argpartition pass isolates the top block, ties on
    the block's boundary score are resolved by ascending id, and only the
    k survivors are fully sorted.
    """
    n = scores.shape[0]
    if k >= n:
        order = np.lexsort((ids, -scores))
        return order
    boundary = np.partition(scores, n - k)[n - k]  # k-th largest score
    sure = np.flatnonzero(scores > boundary)
    need = k - sure.shape[0]
    tied = np.flatnonzero(scores == boundary)
    if need < tied.shape[0]:
        tied = tied[np.argsort(ids[tied], kind="stable")[:need]]
    chosen = np.concatenate([sure, tied])
    return chosen[np.lexsort((ids[chosen], -scores[chosen]))]


def color_blind_topk(pool: CandidatePool, k: int) -> RankedSequence:
    """Top-k by score alone, ignoring group membership; ties by ascending id."""
    if not 1 <= k <= len(pool):
        raise ValueError(f"k must lie in 1..{len(pool)}")
    return pool.take(_top_indices(pool.scores, pool.ids, k))


def fair_topk(
    pool: CandidatePool,
    k: int,
    p: float,
    alpha_adj: float,
    strict: bool = False,
) -> FairRanking:
    """Best-scoring ranking of length k subject to per-prefix minimum counts.

    Within each group candidates appear in score order (so in-group
    monotonicity always holds), and a lower-scored protected candidate is
    placed only when the minimum-count table requires one — which is what
    makes the output's selection and ordering utilities optimal among
    feasible rankings.  Runs in O(n + k log k).

    If the pool has too few protected candidates for the table, the remaining
    positions are filled best-effort and ``satisfied_up_to`` reports the last
    fair prefix; with ``strict`` this raises InfeasibleRankingError.
    """
    if not 1 <= k <= len(pool):
        raise ValueError(f"k must lie in 1..{len(pool)}")
    mtable = compute_mtable(k, p, alpha_adj)
    minima = mtable.minima

    protected_rows = np.flatnonzero(pool.protected)
    open_rows = np.flatnonzero(~pool.protected)
    stream1 = protected_rows[
        _top_indices(pool.scores[protected_rows], pool.ids[protected_rows], k)
    ] if protected_rows.shape[0] else protected_rows
    stream0 = open_rows[
        _top_indices(pool.scores[open_rows], pool.ids[open_rows], k)
    ] if open_rows.shape[0] else open_rows
    scores = pool.scores

    chosen = np.empty(k, dtype=np.int64)
    a = b = 0  # heads of stream1 (protected) / stream0
    taken_protected = 0
    for i in range(k):
        force = taken_protected < minima[i]
        if force and a < stream1.shape[0]:
            chosen[i] = stream1[a]
            a += 1
            taken_protected += 1
            continue
        s1 = scores[stream1[a]] if a < stream1.shape[0] else -np.inf
        s0 = scores[stream0[b]] if b < stream0.shape[0] else -np.inf
        if s1 >= s0 and a < stream1.shape[0]:
            chosen[i] = stream1[a]
            a += 1
            taken_protected += 1
        else:
            chosen[i] = stream0[b]
            b += 1

    entries = pool.take(chosen)
    counts = entries.protected_prefix_counts()
    short = counts < minima
    satisfied_up_to = int(np.argmax(short)) if short.any() else k
    if strict and satisfied_up_to < k:
        raise InfeasibleRankingError(satisfied_up_to, k)
    return FairRanking(entries, mtable, satisfied_up_to)
