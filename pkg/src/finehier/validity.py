"""Valid-cluster and valid-hierarchy predicates.

A cluster is valid when every within-cluster score is strictly tighter
than every score from a member to an outsider.  The *gap* of a cluster is
the worst margin over all such (x, y inside, z outside) triples,
orientation-adjusted so that positive always means valid:

    similarity:     gap = min s(x,y) - s(x,z)
    dissimilarity:  gap = min d(x,z) - d(x,y)

The full set has gap +inf (no outsiders).  The x = y triples are included;
self-dominance keeps them away from the minimum.

Whole-tree verdicts may restrict each vertex's outside set to
parent(t) \\ t - the conjunction over all vertices is unchanged - while
individual reports always use the full outside set.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import DimensionMismatch
from .matrix import Orientation, PairMatrix
from .tree import Cluster, Hierarchy


@dataclass(frozen=True)
class ValidityReport:
    """Gap of one cluster plus a witness triple attaining it (if any)."""

    cluster: Cluster
    gap: float
    witness: tuple[int, int, int] | None

    @property
    def valid(self) -> bool:
        return self.gap > 0.0


def _check_eps(eps: float) -> float:
    eps = float(eps)
    if eps < 0.0:
        raise ValueError("the validity margin eps must be >= 0")
    return eps


def cluster_gap(m: PairMatrix, c: Cluster) -> ValidityReport:
    """Full-outside-set gap of ``c`` with a lexicographically-least witness.

    Computed through per-item aggregates: for each member x, the tightest
    inside score minus the tightest outside score; the cluster gap is the
    minimum over members, which equals the minimum over all triples.
    Witness ties break on (x, y, z).
    """
    if c.k != m.k:
        raise DimensionMismatch(m.k, c.k)
    s = m.signed()
    inside = np.fromiter(c, dtype=np.intp, count=len(c))
    outside = np.array(c.complement_members(), dtype=np.intp)
    if outside.size == 0:
        return ValidityReport(c, np.inf, None)
    inner = s[np.ix_(inside, inside)].min(axis=1)
    outer = s[np.ix_(inside, outside)].max(axis=1)
    diffs = inner - outer
    xi = int(diffs.argmin())
    x = int(inside[xi])
    y = int(inside[int(s[x, inside].argmin())])
    z = int(outside[int(s[x, outside].argmax())])
    return ValidityReport(c, float(diffs[xi]), (x, y, z))


def is_valid_cluster(m: PairMatrix, c: Cluster, eps: float = 0.0) -> bool:
    """True iff the gap of ``c`` strictly exceeds ``eps``."""
    return cluster_gap(m, c).gap > _check_eps(eps)


def _tree_arrays(h: Hierarchy):
    """Flatten a hierarchy for the gap kernels.

    Vertices sorted by cardinality (children before parents); each
    vertex's member list is the concatenation of its children's member
    lists in canonical child order, so a child occupies a contiguous,
    identically-ordered block of its parent's list.
    """
    order = h.sorted_clusters
    index = {c: i for i, c in enumerate(order)}
    n = len(order)
    sizes = np.fromiter((len(c) for c in order), dtype=np.int32, count=n)
    offsets = np.zeros(n + 1, dtype=np.int32)
    np.cumsum(sizes, out=offsets[1:])
    members = np.empty(int(offsets[-1]), dtype=np.int32)
    parent = np.full(n, -1, dtype=np.int32)
    pos_in_parent = np.zeros(n, dtype=np.int32)
    child_ptr = np.zeros(n + 1, dtype=np.int32)
    kids_lists = [h.children(c) for c in order]
    counts = np.fromiter((len(kids) for kids in kids_lists), dtype=np.int32, count=n)
    np.cumsum(counts, out=child_ptr[1:])
    child_idx = np.empty(int(child_ptr[-1]), dtype=np.int32)

    lists: list[list[int]] = [[] for _ in range(n)]
    for i, c in enumerate(order):
        kids = kids_lists[i]
        if not kids:
            lists[i] = [c.min_member()]
        else:
            shift = 0
            for slot, kid in enumerate(kids):
                j = index[kid]
                parent[j] = i
                pos_in_parent[j] = shift
                child_idx[child_ptr[i] + slot] = j
                lists[i].extend(lists[index[kid]])
                shift += len(kid)
        members[offsets[i] : offsets[i] + sizes[i]] = lists[i]
    return order, sizes, offsets, members, parent, pos_in_parent, child_ptr, child_idx


def tree_gaps(
    m: PairMatrix, h: Hierarchy, parent_restricted: bool = False
) -> dict[Cluster, float]:
    """Gap of every vertex of ``h``, full outside set unless restricted."""
    if h.k != m.k:
        raise DimensionMismatch(m.k, h.k)
    order, *arrays = _tree_arrays(h)
    gaps = _kernels.tree_gaps(m.signed(), *arrays, bool(parent_restricted))
    return {c: float(g) for c, g in zip(order, gaps)}


def is_valid_hierarchy(m: PairMatrix, h: Hierarchy, eps: float = 0.0) -> bool:
    """Whole-tree verdict: every vertex gap strictly above ``eps``.

    Uses the parent-restricted outside sets; the conjunction over all
    vertices equals the full-outside-set conjunction.
    """
    eps = _check_eps(eps)
    gaps = tree_gaps(m, h, parent_restricted=True)
    return all(g > eps for g in gaps.values())


def hierarchy_validity_reports(
    m: PairMatrix, h: Hierarchy, eps: float = 0.0
) -> tuple[bool, list[ValidityReport]]:
    """Per-vertex reports over the full outside set, plus the verdict.

    Witness triples are materialised for failing vertices only.
    """
    eps = _check_eps(eps)
    gaps = tree_gaps(m, h, parent_restricted=False)
    reports = []
    ok = True
    for c in h.sorted_clusters:
        g = gaps[c]
        if g > eps:
            reports.append(ValidityReport(c, g, None))
        else:
            ok = False
            reports.append(cluster_gap(m, c))
    return ok, reports


def strong_gap(m: PairMatrix, c: Cluster) -> float:
    """Margin of the stricter block condition for one cluster.

    Positive iff the loosest within score still beats the tightest score
    from any member to any outsider (min-inside minus max-outside, signed).
    """
    if c.k != m.k:
        raise DimensionMismatch(m.k, c.k)
    s = m.signed()
    inside = np.fromiter(c, dtype=np.intp, count=len(c))
    outside = np.array(c.complement_members(), dtype=np.intp)
    if outside.size == 0:
        return np.inf
    return float(
        s[np.ix_(inside, inside)].min() - s[np.ix_(inside, outside)].max()
    )


def is_strongly_valid_hierarchy(
    m: PairMatrix, h: Hierarchy, eps: float = 0.0
) -> bool:
    """Every vertex satisfies the block condition with margin > ``eps``."""
    if h.k != m.k:
        raise DimensionMismatch(m.k, h.k)
    eps = _check_eps(eps)
    return all(strong_gap(m, c) > eps for c in h.sorted_clusters)


def strong_hierarchy_reports(
    m: PairMatrix, h: Hierarchy, eps: float = 0.0
) -> tuple[bool, list[tuple[Cluster, float]]]:
    """Strong-condition margins for every vertex, plus the verdict."""
    eps = _check_eps(eps)
    pairs = [(c, strong_gap(m, c)) for c in h.sorted_clusters]
    return all(g > eps for _, g in pairs), pairs


__all__ = [
    "ValidityReport",
    "cluster_gap",
    "is_valid_cluster",
    "tree_gaps",
    "is_valid_hierarchy",
    "hierarchy_validity_reports",
    "strong_gap",
    "is_strongly_valid_hierarchy",
    "strong_hierarchy_reports",
    "Orientation",
]
