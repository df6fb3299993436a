"""Ultrametric detection and the dendrogram correspondence.

A dissimilarity is ultrametric when d(x,y) <= max(d(x,z), d(y,z)) for all
triples; the similarity mirror is s(x,y) >= min(s(x,z), s(y,z)), i.e. the
smallest of the three values occurs at least twice.  An ultrametric score
table is exactly representable by a dendrogram: a hierarchy with strictly
monotone heights along ancestor chains such that score(x, y) equals the
height of the least common ancestor for all x != y.  For ultrametric
input that hierarchy carries every valid cluster, so it coincides with
the exhaustive-enumeration result.

Equal heights at incomparable vertices are allowed; monotonicity is only
required along ancestor chains.  Leaves take the diagonal self-score as
their height and are excluded from the representation identity.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .errors import MonotonicityViolation, NotUltrametric
from .matrix import Orientation, PairMatrix
from .tree import Cluster, Hierarchy


@dataclass(frozen=True)
class UltrametricCheck:
    ok: bool
    witness: tuple[int, int, int] | None

    def __bool__(self) -> bool:
        return self.ok


def is_ultrametric(m: PairMatrix) -> UltrametricCheck:
    """Check every triple; report the lexicographically first violation.

    The witness (x, y, z) is the first ordered triple, scanning x < y and
    then z, whose pair score (x, y) is looser than both scores to z.
    """
    k = m.k
    if k <= 2:
        return UltrametricCheck(True, None)
    s = m.signed()
    for x in range(k):
        for y in range(x + 1, k):
            # signed: violation iff s(x,y) < min(s(x,z), s(y,z)) for some z
            both = np.minimum(s[x], s[y])
            both[x] = both[y] = -np.inf
            if s[x, y] < both.max():
                z = int(np.flatnonzero(s[x, y] < both)[0])
                return UltrametricCheck(False, (x, y, z))
    return UltrametricCheck(True, None)


@dataclass(frozen=True)
class Dendrogram:
    """A hierarchy with heights, strictly monotone along ancestor chains.

    Heights are required on every internal vertex; leaf heights are
    optional and, when present, must also respect the chain monotonicity
    (tighter than every ancestor).
    """

    hierarchy: Hierarchy
    heights: Mapping[Cluster, float] = field(hash=False)
    orientation: Orientation = Orientation.SIMILARITY

    def __post_init__(self) -> None:
        object.__setattr__(self, "heights", dict(self.heights))
        h = self.hierarchy
        sign = self.orientation.sign
        for c in h.sorted_clusters:
            if len(c) > 1 and c not in self.heights:
                raise ValueError(f"missing height for internal vertex {c!r}")
        for c, height in self.heights.items():
            p = h.parent(c)
            if p is None:
                continue
            if p not in self.heights:
                continue
            if not sign * height > sign * self.heights[p]:
                raise MonotonicityViolation(c, p)

    def height(self, c: Cluster) -> float:
        return float(self.heights[c])

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Dendrogram)
            and self.hierarchy == other.hierarchy
            and self.orientation == other.orientation
            and dict(self.heights) == dict(other.heights)
        )


def dendrogram_from_ultrametric(m: PairMatrix, level_tol: float = 0.0) -> Dendrogram:
    """Realise an ultrametric score table as its dendrogram.

    Sweeps the distinct off-diagonal score levels from tightest to
    loosest, unioning the pairs at each level; every component formed by a
    union becomes a vertex at that level's height.  ``level_tol`` merges
    adjacent levels closer than the tolerance (their mean becomes the
    height); the default 0 keeps exact levels.
    """
    check = is_ultrametric(m)
    if not check.ok:
        raise NotUltrametric(check.witness)
    k = m.k
    leaf_heights = {
        Cluster.singleton(x, k): float(m.scores[x, x]) for x in range(k)
    }
    if k == 1:
        return Dendrogram(Hierarchy(1), leaf_heights, m.orientation)

    iu = np.triu_indices(k, 1)
    signed_vals = m.signed()[iu]
    order = np.argsort(-signed_vals, kind="stable")

    # group tightest-first into levels within the tolerance
    levels: list[list[int]] = []
    last = None
    for idx in order:
        v = signed_vals[idx]
        if last is None or last - v > level_tol:
            levels.append([int(idx)])
        else:
            levels[-1].append(int(idx))
        last = v

    parent = list(range(k))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    comp_mask = [1 << x for x in range(k)]
    clusters: list[Cluster] = []
    heights = dict(leaf_heights)
    for level in levels:
        raw = [float(m.scores[iu[0][i], iu[1][i]]) for i in level]
        height = raw[0] if level_tol == 0.0 else float(np.mean(raw))
        touched: set[int] = set()
        for i in level:
            a, b = find(int(iu[0][i])), find(int(iu[1][i]))
            if a != b:
                parent[b] = a
                comp_mask[a] |= comp_mask[b]
                touched.add(a)
        for a in {find(r) for r in touched}:
            c = Cluster(comp_mask[a], k)
            clusters.append(c)
            heights[c] = height

    hierarchy = Hierarchy(k, clusters)
    heights = {c: h for c, h in heights.items() if c in hierarchy.clusters}
    return Dendrogram(hierarchy, heights, m.orientation)


def ultrametric_from_dendrogram(d: Dendrogram) -> PairMatrix:
    """Score table with score(x, y) = height(lca(x, y)) for x != y.

    The diagonal takes each leaf's own height when present, otherwise one
    unit beyond the extreme internal height (orientation-appropriate).
    """
    h = d.hierarchy
    k = h.k
    scores = np.zeros((k, k))
    internal = [c for c in h.sorted_clusters if len(c) > 1]
    for c in internal:
        kids = h.children(c)
        height = d.height(c)
        for a in range(len(kids)):
            xs = np.fromiter(kids[a], dtype=np.intp, count=len(kids[a]))
            for b in range(a + 1, len(kids)):
                ys = np.fromiter(kids[b], dtype=np.intp, count=len(kids[b]))
                scores[np.ix_(xs, ys)] = height
                scores[np.ix_(ys, xs)] = height
    if internal:
        hs = [d.height(c) for c in internal]
        extreme = max(hs) if d.orientation is Orientation.SIMILARITY else min(hs)
    else:
        extreme = 0.0
    default_diag = extreme + d.orientation.sign * 1.0
    for x in range(k):
        leaf = Cluster.singleton(x, k)
        scores[x, x] = d.heights.get(leaf, default_diag)
    return PairMatrix(scores, d.orientation)
