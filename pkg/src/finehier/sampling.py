"""Seeded random instances for search, property tests, and benchmarks."""

from __future__ import annotations

import numpy as np

from .matrix import Orientation, PairMatrix
from .tree import Cluster, Hierarchy
from .ultrametric import Dendrogram, ultrametric_from_dendrogram


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    """Per-trial counter-based stream: deterministic under any parallel split."""
    return np.random.default_rng((int(seed), int(trial)))


def random_pair_matrix(
    k: int,
    orientation: Orientation,
    rng: np.random.Generator,
    distinct: bool = True,
    grid: int | None = None,
    low: float = 0.0,
    high: float = 1.0,
) -> PairMatrix:
    """Random symmetric matrix with a self-dominant diagonal.

    ``distinct`` redraws until all off-diagonal values differ (the strict
    comparison regime).  ``grid`` instead samples values from that many
    equally spaced levels, deliberately injecting ties.
    """
    npairs = k * (k - 1) // 2
    for _ in range(64):
        if grid is not None:
            vals = rng.integers(0, grid, npairs) * ((high - low) / grid) + low
        else:
            vals = rng.uniform(low, high, npairs)
        if not distinct or grid is not None or np.unique(vals).size == npairs:
            break
    else:
        raise RuntimeError("could not draw distinct off-diagonal values")
    scores = np.zeros((k, k))
    iu = np.triu_indices(k, 1)
    scores[iu] = vals
    scoresfull = scores + scores.T
    if orientation is Orientation.SIMILARITY:
        diag = (vals.max() if npairs else 0.0) + 1.0
    else:
        diag = (vals.min() if npairs else 0.0) - 1.0
    np.fill_diagonal(scoresfull, diag)
    return PairMatrix(scoresfull, orientation)


def random_hierarchy(
    k: int,
    rng: np.random.Generator,
    max_children: int = 4,
    keep_prob: float = 0.8,
) -> Hierarchy:
    """Random laminar family over shuffled items.

    Recursive random partition into 2..max_children parts; internal
    non-root vertices are then kept with probability ``keep_prob`` so the
    shapes are not always full recursive partitions.
    """
    items = list(rng.permutation(k))
    clusters: list[Cluster] = []

    def build(part: list[int]) -> None:
        if len(part) >= 2:
            clusters.append(Cluster.from_members(part, k))
            r = int(rng.integers(2, min(max_children, len(part)) + 1))
            cuts = sorted(rng.choice(np.arange(1, len(part)), r - 1, replace=False))
            pieces = np.split(np.array(part), cuts)
            for piece in pieces:
                build(list(piece))

    build(items)
    internal = [c for c in clusters if 1 < len(c) < k]
    kept = [c for c in internal if rng.random() < keep_prob]
    return Hierarchy(k, kept)


def random_dendrogram(
    k: int, orientation: Orientation, rng: np.random.Generator
) -> Dendrogram:
    """Random hierarchy with strictly monotone heights along ancestor chains.

    Leaf heights follow the one-unit-beyond-the-extreme convention so that
    a round trip through the induced score matrix is exact.
    """
    h = random_hierarchy(k, rng, keep_prob=1.0)
    heights: dict[Cluster, float] = {}

    def assign(c: Cluster, parent_height: float | None) -> None:
        if parent_height is None:
            height = float(rng.uniform(1.0, 2.0))
        elif orientation is Orientation.SIMILARITY:
            height = parent_height + float(rng.uniform(0.1, 1.0))
        else:
            height = parent_height * float(rng.uniform(0.3, 0.9))
        heights[c] = height
        for kid in h.children(c):
            if len(kid) > 1:
                assign(kid, height)

    assign(h.root, None)
    extreme = max(heights.values()) if orientation is Orientation.SIMILARITY else min(
        heights.values()
    )
    leaf_h = extreme + orientation.sign * 1.0
    for leaf in h.leaves:
        heights[leaf] = leaf_h
    return Dendrogram(h, heights, orientation)


def random_ultrametric_matrix(
    k: int, orientation: Orientation, rng: np.random.Generator
) -> PairMatrix:
    return ultrametric_from_dendrogram(random_dendrogram(k, orientation, rng))
