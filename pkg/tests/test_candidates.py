"""Columnar candidate containers: coercion, validation, derived views."""
import numpy as np
import pytest

from fair_topk import Candidate, CandidatePool, RankedSequence


def test_pool_from_candidates_roundtrip():
    pool = CandidatePool.from_candidates([(3, 0.5, True), (1, 0.9, False), (2, 0.7, False)])
    assert len(pool) == 3
    assert [c.id for c in pool] == [3, 1, 2]
    assert [c.score for c in pool] == [0.5, 0.9, 0.7]
    assert [c.protected for c in pool] == [True, False, False]
    first = next(iter(pool))
    assert isinstance(first, Candidate)
    assert isinstance(first.id, int) and isinstance(first.score, float)


def test_integer_ids_coerce_to_int64():
    pool = CandidatePool(np.array(["10", "2"], dtype=object), np.array([1.0, 2.0]), np.array([0, 1]))
    assert pool.ids.dtype == np.int64
    assert list(pool.ids) == [10, 2]


def test_non_numeric_ids_coerce_to_strings():
    pool = CandidatePool(
        np.array(["a", "b", "c10"], dtype=object),
        np.array([1.0, 2.0, 3.0]),
        np.array([0, 1, 0]),
    )
    assert pool.ids.dtype.kind == "U"
    assert list(pool.ids) == ["a", "b", "c10"]


def test_validation_errors():
    with pytest.raises(ValueError):
        CandidatePool(np.array([1, 1]), np.array([0.1, 0.2]), np.array([0, 1]))  # dup ids
    with pytest.raises(ValueError):
        CandidatePool(np.array([1, 2]), np.array([0.1]), np.array([0, 1]))  # ragged
    with pytest.raises(ValueError):
        CandidatePool(np.array([1, 2]), np.array([0.1, np.nan]), np.array([0, 1]))
    with pytest.raises(ValueError):
        CandidatePool(np.array([1, 2]), np.array([0.1, np.inf]), np.array([0, 1]))


def test_columns_are_read_only():
    pool = CandidatePool.from_candidates([(1, 0.5, True)])
    with pytest.raises(ValueError):
        pool.scores[0] = 0.9
    with pytest.raises(ValueError):
        pool.protected[0] = False


def test_take_preserves_order():
    pool = CandidatePool.from_candidates([(1, 0.9, False), (2, 0.8, True), (3, 0.7, False)])
    ranking = pool.take([2, 0])
    assert isinstance(ranking, RankedSequence)
    assert list(ranking.ids) == [3, 1]
    assert list(ranking.scores) == [0.7, 0.9]


def test_with_scores_replaces_only_scores():
    pool = CandidatePool.from_candidates([(1, 0.9, False), (2, 0.8, True)])
    swapped = pool.with_scores([0.1, 0.2])
    assert list(swapped.scores) == [0.1, 0.2]
    assert list(swapped.ids) == [1, 2]
    assert list(pool.scores) == [0.9, 0.8]  # original untouched


def test_from_flags_synthesizes_descending_ranking():
    ranking = RankedSequence.from_flags([True, False, True])
    assert list(ranking.ids) == [1, 2, 3]
    assert list(ranking.scores) == [3.0, 2.0, 1.0]
    assert list(ranking.protected) == [True, False, True]


def test_prefix_counts_and_share():
    ranking = RankedSequence.from_flags([1, 0, 0, 1, 1])
    assert list(ranking.protected_prefix_counts()) == [1, 1, 1, 2, 3]
    assert ranking.protected_count == 3
    assert ranking.protected_share == pytest.approx(0.6)
    empty = CandidatePool(np.array([], dtype=np.int64), np.array([]), np.array([], dtype=bool))
    assert empty.protected_share == 0.0
