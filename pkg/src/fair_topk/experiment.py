"""Dataset loading, the comparative experiment protocol, and curve data.

A dataset is a headered CSV read through a DatasetSpec that names the id,
score, and protected columns.  The experiment ranks each candidate pool three
ways — color-blind, fairness-constrained, and quantile-repaired — across a
grid of target proportions and reports the utility metrics for each cell.
"""
from __future__ import annotations

import csv
import json
from dataclasses import dataclass, fields, replace
from pathlib import Path
from typing import IO, Optional, Sequence, Tuple, Union

import numpy as np
import yaml

from .adjustment import rejection_probability, simulate_rejection_rate
from .baselines import feldman_repair
from .candidates import CandidatePool, RankedSequence
from .metrics import UtilityReport, evaluate_ranking
from .ranker import color_blind_topk, fair_topk
from .store import cached_adjustment

__all__ = [
    "DatasetSpec",
    "DataLoadError",
    "ExperimentRow",
    "ExperimentReport",
    "REPORT_COLUMNS",
    "load_candidates",
    "save_candidates",
    "load_ranking",
    "load_spec",
    "run_experiment",
    "emit_curve_data",
]

METHODS = ("color-blind", "fair", "feldman")
REPORT_COLUMNS = (
    "dataset",
    "method",
    "p",
    "pct_protected_output",
    "ndcg",
    "ordering_utility_loss",
    "rank_drop",
    "selection_utility_loss",
)

TRUTHY = {"1", "true", "yes", "y"}
FALSY = {"0", "false", "no", "n", ""}


class DataLoadError(Exception):
    """A dataset file could not be interpreted."""


@dataclass(frozen=True)
class DatasetSpec:
    """Where a candidate table lives and how to read it."""

    name: str
    path: Union[str, Path]
    k: int
    score_column: str = "score"
    protected_column: str = "protected"
    protected_value: str = "1"
    higher_is_better: bool = True
    id_column: str = "id"
    p_grid: Tuple[float, ...] = (0.5,)
    alpha: float = 0.1

    def __post_init__(self):
        object.__setattr__(self, "p_grid", tuple(float(p) for p in self.p_grid))
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if not 0.0 < self.alpha < 1.0:
            raise ValueError("alpha must lie in the open interval (0, 1)")
        if not all(0.0 < p < 1.0 for p in self.p_grid):
            raise ValueError("every p in p_grid must lie in the open interval (0, 1)")


def load_candidates(spec: DatasetSpec) -> CandidatePool:
    """Read the pool named by the spec; row numbers appear in error messages.

    Scores are negated when higher_is_better is false, so a larger stored
    quality is always better downstream.
    """
    path = Path(spec.path)
    if not path.exists():
        raise DataLoadError(f"{path}: no such file")
    ids, scores, flags = [], [], []
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        for column in (spec.id_column, spec.score_column, spec.protected_column):
            if column not in header:
                raise DataLoadError(f"{path}: missing column {column!r} (have {header})")
        for number, row in enumerate(reader, start=2):
            raw = row[spec.score_column]
            try:
                score = float(raw)
            except (TypeError, ValueError):
                raise DataLoadError(
                    f"{path}: row {number}: unparseable score {raw!r}"
                ) from None
            ids.append(row[spec.id_column])
            scores.append(score if spec.higher_is_better else -score)
            flags.append(str(row[spec.protected_column]).strip() == spec.protected_value)
    if not ids:
        raise DataLoadError(f"{path}: no candidate rows")
    try:
        return CandidatePool(np.array(ids, dtype=object), np.array(scores), np.array(flags))
    except ValueError as exc:
        raise DataLoadError(f"{path}: {exc}") from None


def save_candidates(pool: CandidatePool, path) -> None:
    """Write a pool as the minimal id,score,protected schema (round-trips)."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(("id", "score", "protected"))
        for candidate in pool:
            writer.writerow((candidate.id, repr(candidate.score), int(candidate.protected)))


def load_ranking(source: Union[str, Path, IO]) -> RankedSequence:
    """Read an ordered ranking CSV: columns id,protected and optional score."""

    def parse(fh) -> RankedSequence:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        for column in ("id", "protected"):
            if column not in header:
                raise DataLoadError(f"ranking input: missing column {column!r}")
        ids, scores, flags = [], [], []
        for number, row in enumerate(reader, start=2):
            raw = str(row["protected"]).strip().lower()
            if raw in TRUTHY:
                flag = True
            elif raw in FALSY:
                flag = False
            else:
                raise DataLoadError(
                    f"ranking input: row {number}: protected must be boolean-like, got {raw!r}"
                )
            ids.append(row["id"])
            flags.append(flag)
            scores.append(float(row["score"]) if "score" in header else 0.0)
        if not ids:
            raise DataLoadError("ranking input: no rows")
        return RankedSequence(np.array(ids, dtype=object), np.array(scores), np.array(flags))

    if hasattr(source, "read"):
        return parse(source)
    path = Path(source)
    if not path.exists():
        raise DataLoadError(f"{path}: no such file")
    with open(path, newline="") as fh:
        return parse(fh)


def load_spec(path) -> DatasetSpec:
    """Parse a YAML or JSON mapping of DatasetSpec fields into a spec.

    A relative dataset path is resolved against the config file's directory.
    """
    path = Path(path)
    if not path.exists():
        raise DataLoadError(f"{path}: no such file")
    text = path.read_text()
    try:
        mapping = json.loads(text) if path.suffix == ".json" else yaml.safe_load(text)
    except (json.JSONDecodeError, yaml.YAMLError) as exc:
        raise DataLoadError(f"{path}: unparseable config: {exc}") from None
    if not isinstance(mapping, dict):
        raise DataLoadError(f"{path}: config must be a mapping")
    known = {f.name for f in fields(DatasetSpec)}
    unknown = set(mapping) - known
    if unknown:
        raise DataLoadError(f"{path}: unknown config keys {sorted(unknown)}")
    missing = {"name", "path", "k"} - set(mapping)
    if missing:
        raise DataLoadError(f"{path}: missing config keys {sorted(missing)}")
    try:
        spec = DatasetSpec(**mapping)
    except (TypeError, ValueError) as exc:
        raise DataLoadError(f"{path}: {exc}") from None
    data_path = Path(spec.path)
    if not data_path.is_absolute():
        spec = replace(spec, path=path.parent / data_path)
    return spec


@dataclass(frozen=True)
class ExperimentRow:
    dataset: str
    method: str
    p: float
    report: UtilityReport

    def as_csv_row(self) -> tuple:
        r = self.report
        return (
            self.dataset,
            self.method,
            f"{self.p:.6f}",
            f"{r.protected_share:.6f}",
            f"{r.ndcg:.6f}",
            f"{r.ordering_utility_loss:.6f}",
            r.max_rank_drop,
            f"{r.selection_utility_loss:.6f}",
        )


@dataclass(frozen=True)
class ExperimentReport:
    rows: Tuple[ExperimentRow, ...]

    def to_csv(self, stream: IO) -> None:
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(REPORT_COLUMNS)
        for row in self.rows:
            writer.writerow(row.as_csv_row())


def run_experiment(
    spec: DatasetSpec,
    cache_dir: Optional[Path] = None,
    strict: bool = False,
) -> ExperimentReport:
    """Rank the spec's pool with every method across its p grid and score them.

    One report row per (method, p) cell; the color-blind and repaired
    rankings do not depend on p, so their rows repeat across the grid.
    """
    pool = load_candidates(spec)
    if spec.k > len(pool):
        raise DataLoadError(f"{spec.path}: k={spec.k} exceeds pool size {len(pool)}")
    reference = color_blind_topk(pool, spec.k)
    reference_report = evaluate_ranking(pool, reference)
    repaired = color_blind_topk(feldman_repair(pool).pool, spec.k)
    repaired_report = evaluate_ranking(pool, repaired)
    rows = []
    for p in spec.p_grid:
        adjustment = cached_adjustment(spec.k, p, spec.alpha, cache_dir)
        constrained = fair_topk(pool, spec.k, p, adjustment.alpha_adj, strict=strict)
        rows.append(ExperimentRow(spec.name, "color-blind", p, reference_report))
        rows.append(
            ExperimentRow(
                spec.name, "fair", p, evaluate_ranking(pool, constrained.entries)
            )
        )
        rows.append(ExperimentRow(spec.name, "feldman", p, repaired_report))
    return ExperimentReport(tuple(rows))


CURVE_COLUMNS = (
    "k",
    "p",
    "alpha_adj",
    "analytic_rejection",
    "simulated_rejection",
    "stderr",
)


def emit_curve_data(
    k: int,
    p_grid: Sequence[float],
    alpha_adj_grid: Sequence[float],
    stream: IO,
    trials: int = 10000,
    seed: int = 7,
) -> None:
    """Analytic vs simulated rejection rate per (p, alpha_adj), as plot-ready CSV."""
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(CURVE_COLUMNS)
    for alpha_adj in alpha_adj_grid:
        for p in p_grid:
            analytic = rejection_probability(k, p, alpha_adj)
            simulated = simulate_rejection_rate(k, p, p, alpha_adj, trials, seed)
            writer.writerow(
                (
                    k,
                    f"{p:.6f}",
                    f"{alpha_adj:.6f}",
                    f"{analytic:.6f}",
                    f"{simulated.estimate:.6f}",
                    f"{simulated.stderr:.6f}",
                )
            )
