"""Reference methods: quantile-matching score repair and a fair-ranking generator."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Sequence, Tuple, Union

import numpy as np

from .candidates import CandidatePool, RankedSequence

__all__ = ["RepairedPool", "feldman_repair", "yang_stoyanovich_generate"]


@dataclass(frozen=True)
class RepairedPool:
    """A pool with protected scores rewritten, plus what changed.

    ``replacements`` maps each protected candidate's id to its
    (original, repaired) score pair; non-protected scores are untouched.
    """

    pool: CandidatePool
    replacements: Dict[object, Tuple[float, float]]


def feldman_repair(pool: CandidatePool) -> RepairedPool:
    """Rewrite each protected score to the non-protected score at its quantile.

    Protected candidates are ranked 1..m ascending by (score, id); the one at
    rank r receives the score of the non-protected candidate at ascending
    index ceil(r*|N|/m) (computed in integer arithmetic, so the top protected
    candidate always aligns with the top non-protected score).  Ranking the
    repaired pool color-blindly gives the repair baseline.  The map is
    non-decreasing in rank, so within-group order is preserved, and repairing
    an already-repaired pool changes nothing.
    """
    protected_rows = np.flatnonzero(pool.protected)
    open_rows = np.flatnonzero(~pool.protected)
    m, n = protected_rows.shape[0], open_rows.shape[0]
    if m == 0 or n == 0:
        raise ValueError("both groups must be non-empty to repair")
    order = protected_rows[np.lexsort((pool.ids[protected_rows], pool.scores[protected_rows]))]
    ranks = np.arange(1, m + 1, dtype=np.int64)
    target = (ranks * n + m - 1) // m  # ceil(rank * n / m), exactly
    repaired = np.sort(pool.scores[open_rows])[target - 1]
    scores = pool.scores.copy()
    scores[order] = repaired
    replacements = {
        pool.ids[row].item(): (float(pool.scores[row]), float(scores[row]))
        for row in order
    }
    return RepairedPool(pool.with_scores(scores), replacements)


def yang_stoyanovich_generate(
    k: int, p: float, seed: Union[int, Sequence[int]] = 0
) -> RankedSequence:
    """Synthetic fair ranking: protected with probability p at each position.

    Draws come from unbounded per-group pools, so only the flags are random;
    ids are positions and scores descend with position.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if not 0.0 < p < 1.0:
        raise ValueError("p must lie in the open interval (0, 1)")
    rng = np.random.default_rng(seed)
    return RankedSequence.from_flags(rng.random(k) < p)
