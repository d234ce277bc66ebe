"""Utility metrics: what a constrained ranking costs relative to merit order.

All per-candidate utilities compare a candidate's score against the least
qualified candidate ranked above it; they are 0 for candidates with no
less-qualified candidate above, and negative otherwise.  The metric
operations consume scores as given (callers normalize first when comparable
magnitudes across datasets are wanted); ``evaluate_ranking`` applies min-max
normalization over the full pool and assembles the report.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from .candidates import CandidatePool, RankedSequence
from .ranker import color_blind_topk

__all__ = [
    "UtilityReport",
    "OrderingResult",
    "normalize_scores",
    "ranked_utility",
    "selection_utility",
    "ordering_utility",
    "ndcg",
    "evaluate_ranking",
]


def normalize_scores(pool: CandidatePool) -> CandidatePool:
    """Min-max normalize pool scores to [0, 1]; constant pools map to all 1.0."""
    lo = float(pool.scores.min())
    hi = float(pool.scores.max())
    if hi == lo:
        return pool.with_scores(np.ones(len(pool)))
    return pool.with_scores((pool.scores - lo) / (hi - lo))


def _pool_index(pool: CandidatePool, ids: np.ndarray) -> np.ndarray:
    """Pool row index of each id (every id must exist in the pool)."""
    order = np.argsort(pool.ids, kind="stable")
    pos = np.searchsorted(pool.ids[order], ids)
    rows = order[np.minimum(pos, len(pool) - 1)]
    if not np.array_equal(pool.ids[rows], np.asarray(ids)):
        raise ValueError("ranking contains ids not present in the pool")
    return rows


def ranked_utility(candidate_id, ranking: RankedSequence, pool: CandidatePool) -> float:
    """Utility of one candidate: min(0, least score above it minus its score).

    Candidates absent from the ranking sit below every ranked candidate.
    The top-ranked candidate has nothing above it, hence utility 0.
    """
    matches = np.flatnonzero(ranking.ids == candidate_id)
    if matches.shape[0]:
        position = int(matches[0])
        score = float(ranking.scores[position])
        above = ranking.scores[:position]
    else:
        rows = np.flatnonzero(pool.ids == candidate_id)
        if not rows.shape[0]:
            raise ValueError(f"unknown candidate id: {candidate_id!r}")
        score = float(pool.scores[rows[0]])
        above = ranking.scores
    least_above = float(above.min()) if above.shape[0] else math.inf
    return min(0.0, least_above - score)


def _excluded_utilities(ranking, pool):
    """(utilities, pool rows) for every pool candidate not in the ranking."""
    in_ranking = np.isin(pool.ids, ranking.ids)
    rows = np.flatnonzero(~in_ranking)
    least_in_ranking = float(ranking.scores.min())
    return np.minimum(0.0, least_in_ranking - pool.scores[rows]), rows


def selection_utility(ranking: RankedSequence, pool: CandidatePool) -> float:
    """Worst utility over excluded candidates; 0 when nobody better was left out."""
    utilities, _ = _excluded_utilities(ranking, pool)
    return float(utilities.min()) if utilities.shape[0] else 0.0


class OrderingResult(NamedTuple):
    utility: float
    max_rank_drop: int
    worst_candidate: Optional[object]


def ordering_utility(ranking: RankedSequence, pool: CandidatePool) -> OrderingResult:
    """Worst utility over ranked candidates, plus the rank drop of its witness.

    The witness is the first (topmost) candidate attaining the worst utility;
    its drop is how many positions it lost against the full color-blind
    ranking of the pool (never negative).  Zero loss reports zero drop.
    """
    prefix_min = np.minimum.accumulate(ranking.scores)
    utilities = np.zeros(len(ranking))
    utilities[1:] = np.minimum(0.0, prefix_min[:-1] - ranking.scores[1:])
    worst = int(np.argmin(utilities))
    value = float(utilities[worst])
    if value == 0.0:
        return OrderingResult(0.0, 0, None)
    reference = color_blind_topk(pool, len(pool))
    reference_position = int(
        np.flatnonzero(reference.ids == ranking.ids[worst])[0]
    ) + 1
    drop = max(0, (worst + 1) - reference_position)
    return OrderingResult(value, drop, ranking.ids[worst].item())


def ndcg(ranking: RankedSequence, pool: CandidatePool, k: Optional[int] = None) -> float:
    """Discounted score sum over positions, against the color-blind ideal.

    Position i carries weight 1/log2(i+1); the denominator is the same
    weighted sum over the color-blind top-k, so the ideal ranking scores 1.0.
    """
    if k is None:
        k = len(ranking)
    weights = 1.0 / np.log2(np.arange(1, k + 1) + 1.0)
    m = min(k, len(ranking))
    attained = float(np.dot(weights[:m], ranking.scores[:m]))
    ideal_scores = color_blind_topk(pool, k).scores
    ideal = float(np.dot(weights, ideal_scores))
    if ideal == 0.0:
        return 1.0  # all-zero scores: every ranking is ideal
    return attained / ideal


@dataclass(frozen=True)
class UtilityReport:
    """Metric bundle for one ranking, on pool-normalized scores.

    Losses are the non-negative magnitudes of the (non-positive) selection
    and ordering utilities.
    """

    protected_share: float
    ndcg: float
    ordering_utility_loss: float
    selection_utility_loss: float
    max_rank_drop: int
    worst_ordering_candidate: Optional[object] = None
    worst_selection_candidate: Optional[object] = None


def evaluate_ranking(pool: CandidatePool, ranking: RankedSequence) -> UtilityReport:
    """Assemble the full metric report, min-max normalizing over the pool."""
    normalized = normalize_scores(pool)
    rows = _pool_index(normalized, ranking.ids)
    normalized_ranking = RankedSequence(
        ranking.ids, normalized.scores[rows], ranking.protected
    )
    ordering = ordering_utility(normalized_ranking, normalized)
    excluded_utilities, excluded_rows = _excluded_utilities(normalized_ranking, normalized)
    if excluded_utilities.shape[0]:
        sel_value = float(excluded_utilities.min())
        candidates = excluded_rows[excluded_utilities == sel_value]
        sel_witness = (
            None if sel_value == 0.0
            else sorted(normalized.ids[candidates].tolist())[0]
        )
    else:
        sel_value, sel_witness = 0.0, None
    return UtilityReport(
        protected_share=float(normalized_ranking.protected.mean()),
        ndcg=ndcg(normalized_ranking, normalized),
        ordering_utility_loss=-ordering.utility + 0.0,  # +0.0 avoids -0.0
        selection_utility_loss=-sel_value + 0.0,
        max_rank_drop=ordering.max_rank_drop,
        worst_ordering_candidate=ordering.worst_candidate,
        worst_selection_candidate=sel_witness,
    )
