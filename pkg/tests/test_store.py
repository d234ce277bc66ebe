"""Cache-layer tests: file naming, round-trips, misses, and read-through."""
import numpy as np
import pytest

from fair_topk.adjustment import adjust_significance
from fair_topk.fairness import MTable, compute_mtable
from fair_topk.store import (
    ADJUSTMENTS_FILE,
    cached_adjustment,
    load_mtable,
    mtable_path,
    resolve_cache_dir,
    save_mtable,
)


def test_mtable_filename_convention(tmp_path):
    path = mtable_path(tmp_path, 100, 0.5, 0.0148)
    assert path.name == "mtable_k100_p0.5_a0.0148.csv"
    assert mtable_path(tmp_path, 10, 0.15, 0.1).name == "mtable_k10_p0.15_a0.1.csv"


def test_mtable_round_trip(tmp_path):
    table = compute_mtable(50, 0.5, 0.02)
    saved = save_mtable(table, tmp_path)
    assert saved.exists()
    assert not saved.with_suffix(".tmp").exists()  # replaced, not left behind
    loaded = load_mtable(tmp_path, 50, 0.5, 0.02)
    assert isinstance(loaded, MTable)
    assert loaded.k == 50
    assert np.array_equal(loaded.minima, table.minima)


def test_mtable_file_content_shape(tmp_path):
    table = compute_mtable(4, 0.5, 0.1)
    saved = save_mtable(table, tmp_path)
    lines = saved.read_text().splitlines()
    assert lines[0] == "position,minimum"
    assert lines[1] == "1,0"
    assert lines[-1] == "4,1"
    assert len(lines) == 5


def test_mtable_load_miss_returns_none(tmp_path):
    assert load_mtable(tmp_path, 9, 0.4, 0.1) is None


def test_mtable_truncated_file_is_a_miss(tmp_path):
    table = compute_mtable(6, 0.5, 0.1)
    saved = save_mtable(table, tmp_path)
    lines = saved.read_text().splitlines()
    saved.write_text("\n".join(lines[:-2]) + "\n")  # drop two positions
    assert load_mtable(tmp_path, 6, 0.5, 0.1) is None


def test_save_creates_missing_directory(tmp_path):
    nested = tmp_path / "a" / "b"
    save_mtable(compute_mtable(3, 0.5, 0.1), nested)
    assert load_mtable(nested, 3, 0.5, 0.1) is not None


def test_resolve_cache_dir_precedence(tmp_path, monkeypatch):
    monkeypatch.delenv("FAIR_TOPK_CACHE_DIR", raising=False)
    assert resolve_cache_dir(None) is None

    env_dir = tmp_path / "from-env"
    monkeypatch.setenv("FAIR_TOPK_CACHE_DIR", str(env_dir))
    assert resolve_cache_dir(None) == env_dir
    assert env_dir.is_dir()  # created on resolution

    explicit = tmp_path / "explicit"
    assert resolve_cache_dir(str(explicit)) == explicit


def test_cached_adjustment_without_cache_just_computes():
    result = cached_adjustment(30, 0.5, 0.1, cache_dir=None)
    assert result.search_iterations > 0
    assert result.alpha_adj == adjust_significance(30, 0.5, 0.1).alpha_adj


def test_cached_adjustment_read_through(tmp_path):
    first = cached_adjustment(100, 0.5, 0.1, tmp_path)
    assert first.search_iterations > 0
    again = cached_adjustment(100, 0.5, 0.1, tmp_path)
    assert again.search_iterations == 0  # served from disk
    assert again.alpha_adj == pytest.approx(first.alpha_adj, abs=1e-9)
    assert again.achieved_rejection_prob == pytest.approx(
        first.achieved_rejection_prob, abs=1e-9
    )
    assert again.feasible is first.feasible

    lines = (tmp_path / ADJUSTMENTS_FILE).read_text().splitlines()
    assert lines[0] == "k,p,alpha,alpha_adj,achieved_rejection,feasible"
    assert len(lines) == 2


def test_cached_adjustment_appends_distinct_keys(tmp_path):
    cached_adjustment(10, 0.5, 0.1, tmp_path)
    cached_adjustment(10, 0.4, 0.1, tmp_path)
    cached_adjustment(20, 0.5, 0.1, tmp_path)
    lines = (tmp_path / ADJUSTMENTS_FILE).read_text().splitlines()
    assert len(lines) == 4


def test_cached_adjustment_persists_infeasible_flag(tmp_path):
    first = cached_adjustment(1, 0.5, 0.1, tmp_path)
    assert not first.feasible
    again = cached_adjustment(1, 0.5, 0.1, tmp_path)
    assert not again.feasible
    assert again.search_iterations == 0
