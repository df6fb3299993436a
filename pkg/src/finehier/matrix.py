"""Symmetric pairwise-score tables with an orientation tag.

A PairMatrix holds a k x k table of similarity or dissimilarity scores.
Beyond symmetry only one structural property is required: the self score
must strictly dominate every cross score (larger for similarities, smaller
for dissimilarities).  No metric or triangle-inequality assumption is made.

Everything downstream is written once against the orientation comparator:
``better(a, b)`` means "a is a tighter pair score than b".
"""

from __future__ import annotations

import enum
from typing import Sequence

import numpy as np

from .errors import Asymmetric, NonFinite, SelfDominanceViolation


class Orientation(enum.Enum):
    SIMILARITY = "similarity"
    DISSIMILARITY = "dissimilarity"

    @property
    def sign(self) -> float:
        """+1 when larger scores are tighter, -1 when smaller ones are."""
        return 1.0 if self is Orientation.SIMILARITY else -1.0

    def __str__(self) -> str:
        return self.value


class ScoreComparator:
    """Single comparison primitive shared by every downstream algorithm."""

    __slots__ = ("orientation",)

    def __init__(self, orientation: Orientation) -> None:
        self.orientation = orientation

    @property
    def sign(self) -> float:
        return self.orientation.sign

    def better(self, a: float, b: float) -> bool:
        """True iff ``a`` is strictly tighter than ``b``."""
        if self.orientation is Orientation.SIMILARITY:
            return a > b
        return a < b


class PairMatrix:
    """Validated, immutable k x k score table.

    Use :func:`ingest_matrix` to build one from raw data; the constructor
    assumes the invariants already hold.
    """

    __slots__ = ("scores", "orientation", "labels", "_signed")

    def __init__(
        self,
        scores: np.ndarray,
        orientation: Orientation,
        labels: tuple[str, ...] | None = None,
    ) -> None:
        scores = np.asarray(scores, dtype=np.float64)
        scores.flags.writeable = False
        object.__setattr__(self, "scores", scores)
        object.__setattr__(self, "orientation", orientation)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "_signed", None)

    def __setattr__(self, name, value):
        raise AttributeError("PairMatrix is immutable")

    def __reduce__(self):
        return (PairMatrix, (np.array(self.scores), self.orientation, self.labels))

    @property
    def k(self) -> int:
        return self.scores.shape[0]

    @property
    def comparator(self) -> ScoreComparator:
        return ScoreComparator(self.orientation)

    def signed(self) -> np.ndarray:
        """Scores folded to "larger is tighter"; cached, read-only."""
        if self._signed is None:
            s = self.scores if self.orientation is Orientation.SIMILARITY else -self.scores
            s = np.ascontiguousarray(s)
            s.flags.writeable = False
            object.__setattr__(self, "_signed", s)
        return self._signed

    def label_of(self, x: int) -> str:
        if self.labels is not None:
            return self.labels[x]
        return f"x{x + 1}"

    def __repr__(self) -> str:
        return f"PairMatrix(k={self.k}, orientation={self.orientation})"


def as_similarity_view(m: PairMatrix) -> ScoreComparator:
    """Comparator contract for ``m``: ``better(a, b)`` iff a is tighter."""
    return m.comparator


def ingest_matrix(
    raw,
    orientation: Orientation | str,
    labels: Sequence[str] | None = None,
) -> PairMatrix:
    """Validate a raw square table into a PairMatrix.

    ``raw`` may contain NaN on the diagonal to mean "blank"; blanks are
    filled with (max off-diagonal + 1) for similarities and (min
    off-diagonal - 1) for dissimilarities. Raises NonFinite for NaN or
    infinity anywhere else, Asymmetric when the table is not exactly
    symmetric, and SelfDominanceViolation when a diagonal entry fails to
    strictly dominate its row.
    """
    if isinstance(orientation, str):
        orientation = Orientation(orientation)
    scores = np.array(raw, dtype=np.float64)
    if scores.ndim != 2 or scores.shape[0] != scores.shape[1]:
        raise ValueError(f"matrix must be square, got shape {scores.shape}")
    k = scores.shape[0]
    if k < 1:
        raise ValueError("matrix must have at least one item")
    if labels is not None:
        labels = tuple(str(x) for x in labels)
        if len(labels) != k:
            raise ValueError(f"expected {k} labels, got {len(labels)}")

    off = ~np.eye(k, dtype=bool)
    bad = ~np.isfinite(scores) & off
    if bad.any():
        x, y = np.argwhere(bad)[0]
        raise NonFinite(int(x), int(y))

    diag = np.diagonal(scores).copy()
    blank = np.isnan(diag)
    if blank.any():
        if k == 1:
            fill = 0.0
        elif orientation is Orientation.SIMILARITY:
            fill = float(scores[off].max()) + 1.0
        else:
            fill = float(scores[off].min()) - 1.0
        diag[blank] = fill
    if not np.isfinite(diag).all():
        x = int(np.flatnonzero(~np.isfinite(diag))[0])
        raise NonFinite(x, x)
    np.fill_diagonal(scores, diag)

    delta = scores - scores.T
    if delta.any():
        x, y = np.argwhere(delta)[0]
        raise Asymmetric(int(x), int(y), float(delta[x, y]))

    if k > 1:
        cross = np.where(off, scores, np.nan)
        if orientation is Orientation.SIMILARITY:
            bad_rows = np.nanmax(cross, axis=1) >= diag
        else:
            bad_rows = np.nanmin(cross, axis=1) <= diag
        if bad_rows.any():
            x = int(np.flatnonzero(bad_rows)[0])
            row = cross[x]
            if orientation is Orientation.SIMILARITY:
                y = int(np.nanargmax(row))
            else:
                y = int(np.nanargmin(row))
            raise SelfDominanceViolation(x, y)

    return PairMatrix(scores, orientation, labels)
