"""Candidate pools and ranked sequences as parallel column arrays."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, NamedTuple

import numpy as np


class Candidate(NamedTuple):
    id: object
    score: float
    protected: bool


def _id_array(ids) -> np.ndarray:
    """Coerce ids to a homogeneous array: integers when possible, else strings."""
    arr = np.asarray(ids)
    if arr.dtype == object or arr.dtype.kind not in "iuUS":
        try:
            arr = arr.astype(np.int64)
        except (TypeError, ValueError, OverflowError):
            arr = arr.astype(str)
    return arr


def _validate_columns(ids, scores, protected):
    n = ids.shape[0]
    if scores.shape != (n,) or protected.shape != (n,):
        raise ValueError("ids, scores and protected must have equal length")
    if n and not np.isfinite(scores).all():
        raise ValueError("scores must be finite")
    if np.unique(ids).shape[0] != n:
        raise ValueError("candidate ids must be unique")


class _Columns:
    """Shared coercion/iteration for the two columnar containers."""

    ids: np.ndarray
    scores: np.ndarray
    protected: np.ndarray

    def _coerce(self):
        object.__setattr__(self, "ids", _id_array(self.ids))
        object.__setattr__(self, "scores", np.asarray(self.scores, dtype=np.float64))
        object.__setattr__(self, "protected", np.asarray(self.protected, dtype=bool))
        _validate_columns(self.ids, self.scores, self.protected)
        for col in (self.ids, self.scores, self.protected):
            col.setflags(write=False)

    def __len__(self) -> int:
        return int(self.ids.shape[0])

    def __iter__(self) -> Iterator[Candidate]:
        for i in range(len(self)):
            yield Candidate(self.ids[i].item(), float(self.scores[i]), bool(self.protected[i]))

    @property
    def protected_count(self) -> int:
        return int(self.protected.sum())

    @property
    def protected_share(self) -> float:
        return float(self.protected.mean()) if len(self) else 0.0


@dataclass(frozen=True)
class CandidatePool(_Columns):
    """Unordered pool of candidates (order of rows carries no meaning)."""

    ids: np.ndarray
    scores: np.ndarray
    protected: np.ndarray

    def __post_init__(self):
        self._coerce()

    @classmethod
    def from_candidates(cls, candidates: Iterable[tuple]) -> "CandidatePool":
        rows = [Candidate(c[0], float(c[1]), bool(c[2])) for c in candidates]
        return cls(
            np.array([r.id for r in rows], dtype=object),
            np.array([r.score for r in rows], dtype=np.float64),
            np.array([r.protected for r in rows], dtype=bool),
        )

    def take(self, indices) -> "RankedSequence":
        """Materialize the given pool row indices, in order, as a ranking."""
        idx = np.asarray(indices)
        return RankedSequence(self.ids[idx], self.scores[idx], self.protected[idx])

    def with_scores(self, scores) -> "CandidatePool":
        return CandidatePool(self.ids, scores, self.protected)


@dataclass(frozen=True)
class RankedSequence(_Columns):
    """An ordered top list; row i holds the candidate at 1-based position i+1."""

    ids: np.ndarray
    scores: np.ndarray
    protected: np.ndarray

    def __post_init__(self):
        self._coerce()

    @classmethod
    def from_candidates(cls, candidates: Iterable[tuple]) -> "RankedSequence":
        rows = [Candidate(c[0], float(c[1]), bool(c[2])) for c in candidates]
        return cls(
            np.array([r.id for r in rows], dtype=object),
            np.array([r.score for r in rows], dtype=np.float64),
            np.array([r.protected for r in rows], dtype=bool),
        )

    @classmethod
    def from_flags(cls, flags) -> "RankedSequence":
        """Synthetic ranking from protected flags alone: ids are positions,
        scores descend with position."""
        flags = np.asarray(flags, dtype=bool)
        k = flags.shape[0]
        return cls(np.arange(1, k + 1), np.arange(k, 0, -1, dtype=np.float64), flags)

    def protected_prefix_counts(self) -> np.ndarray:
        """Number of protected candidates in each prefix, by prefix length."""
        return np.cumsum(self.protected, dtype=np.int64)
