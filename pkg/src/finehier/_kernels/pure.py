"""Pure numpy kernels: the fallback backend.

All kernels operate on "signed" score tables (scores multiplied by the
orientation sign so that larger always means tighter) except the linkage
kernel, which the compiled backend provides; here it is None and the
generic engine in :mod:`finehier.linkage` is used instead.

The compiled backend (``_fast``) implements the same functions with the
same float semantics; cross-backend equality is asserted in the test
suite.
"""

from __future__ import annotations

import numpy as np

NAME = "pure"

# Generic engine handles linkage in this backend.
linkage_merges = None


def valid_subset_masks(signed: np.ndarray, eps: float) -> np.ndarray:
    """Bitmasks of every subset whose validity gap strictly exceeds eps.

    gap(c) = min over x,y in c, z outside c of signed[x,y] - signed[x,z];
    the full set has gap +inf.  Subset DP over all 2^k masks:
    IN[m, x] = min_{y in m} signed[x, y], OUT[m, x] = max_{z in m} signed[x, z].
    """
    k = signed.shape[0]
    if k > 20:
        # the DP tables are 2^k x k doubles; beyond 20 use the compiled backend
        raise ValueError("pure subset enumeration kernel is capped at k=20")
    if k == 1:
        return np.array([1], dtype=np.int64)
    n = 1 << k
    inner = np.full((n, k), np.inf)
    outer = np.full((n, k), -np.inf)
    # dropping a mask's lowest bit leaves a mask whose own lowest bit is
    # higher, so sweep bits from high to low
    for b in range(k - 1, -1, -1):
        ms = np.arange(1 << b, n, 1 << (b + 1))
        prev = ms - (1 << b)
        inner[ms] = np.minimum(inner[prev], signed[b])
        outer[ms] = np.maximum(outer[prev], signed[b])
    # complement(m) = (n-1) ^ m = (n-1) - m, i.e. the reversed index
    inner -= outer[::-1]
    for x in range(k):
        inner[(np.arange(n) >> x) & 1 == 0, x] = np.inf
    gaps = inner.min(axis=1)
    valid = np.flatnonzero(gaps > eps).astype(np.int64)
    return valid[valid != 0]


def tree_gaps(
    signed: np.ndarray,
    sizes: np.ndarray,
    offsets: np.ndarray,
    members: np.ndarray,
    parent: np.ndarray,
    pos_in_parent: np.ndarray,
    child_ptr: np.ndarray,
    child_idx: np.ndarray,
    parent_restricted: bool,
) -> np.ndarray:
    """Validity gap of every tree vertex, in one O(k^2) two-pass sweep.

    Vertices arrive sorted by cardinality (children before parents); each
    vertex's member list is the concatenation of its children's lists.
    Bottom-up pass: per-item tightest inside score.  Top-down pass:
    per-item tightest outside score, either inherited from the parent
    (full outside set) or restricted to parent-minus-vertex.
    """
    nv = len(sizes)
    total = int(offsets[-1])
    inner = np.empty(total)
    outer = np.empty(total)

    for v in range(nv):
        off, sz = int(offsets[v]), int(sizes[v])
        if sz == 1:
            x = int(members[off])
            inner[off] = signed[x, x]
            continue
        block = members[off : off + sz]
        for ci in range(int(child_ptr[v]), int(child_ptr[v + 1])):
            c = int(child_idx[ci])
            coff, csz = int(offsets[c]), int(sizes[c])
            sh = int(pos_in_parent[c])
            xs = members[coff : coff + csz]
            others = np.concatenate((block[:sh], block[sh + csz :]))
            cross = signed[np.ix_(xs, others)].min(axis=1)
            inner[off + sh : off + sh + csz] = np.minimum(
                inner[coff : coff + csz], cross
            )

    root = nv - 1
    outer[offsets[root] : offsets[root] + sizes[root]] = -np.inf
    for v in range(nv - 1, -1, -1):
        off, sz = int(offsets[v]), int(sizes[v])
        if sz == 1:
            continue
        block = members[off : off + sz]
        for ci in range(int(child_ptr[v]), int(child_ptr[v + 1])):
            c = int(child_idx[ci])
            coff, csz = int(offsets[c]), int(sizes[c])
            sh = int(pos_in_parent[c])
            xs = members[coff : coff + csz]
            others = np.concatenate((block[:sh], block[sh + csz :]))
            cross = signed[np.ix_(xs, others)].max(axis=1)
            if parent_restricted:
                outer[coff : coff + csz] = cross
            else:
                outer[coff : coff + csz] = np.maximum(
                    outer[off + sh : off + sh + csz], cross
                )

    gaps = np.empty(nv)
    for v in range(nv):
        off, sz = int(offsets[v]), int(sizes[v])
        gaps[v] = (inner[off : off + sz] - outer[off : off + sz]).min()
    return gaps
