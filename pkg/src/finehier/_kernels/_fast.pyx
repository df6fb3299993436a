# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled kernels: same semantics as the numpy fallback in pure.py.

Float expressions mirror the pure backend operation for operation so both
backends produce bit-identical scores, gaps, and merge orders.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport INFINITY, fabs

NAME = "cython"


def valid_subset_masks(const double[:, ::1] signed, double eps):
    """Bitmasks of every subset with validity gap strictly above eps."""
    cdef int k = signed.shape[0]
    if k > 62:
        raise ValueError("subset enumeration kernel is capped at k=62")
    cdef unsigned long long full = (<unsigned long long>1 << k) - 1
    cdef unsigned long long m
    cdef int x, y
    cdef double gap, inner, outer, g
    out = []
    for m in range(1, full + 1):
        gap = INFINITY
        for x in range(k):
            if not (m >> x) & 1:
                continue
            inner = INFINITY
            outer = -INFINITY
            for y in range(k):
                if (m >> y) & 1:
                    if signed[x, y] < inner:
                        inner = signed[x, y]
                else:
                    if signed[x, y] > outer:
                        outer = signed[x, y]
            g = inner - outer
            if g < gap:
                gap = g
            if gap <= eps:
                break
        if gap > eps:
            out.append(m)
    return np.array(out, dtype=np.int64)


def tree_gaps(
    const double[:, ::1] signed,
    int[::1] sizes,
    int[::1] offsets,
    int[::1] members,
    int[::1] parent,
    int[::1] pos_in_parent,
    int[::1] child_ptr,
    int[::1] child_idx,
    bint parent_restricted,
):
    """Per-vertex validity gaps; see pure.tree_gaps for the layout contract."""
    cdef int nv = sizes.shape[0]
    cdef int total = offsets[nv]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] inner_arr = np.empty(total)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] outer_arr = np.empty(total)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] gaps_arr = np.empty(nv)
    cdef double[::1] inner = inner_arr
    cdef double[::1] outer = outer_arr
    cdef double[::1] gaps = gaps_arr
    cdef int v, c, ci, off, sz, coff, csz, sh, i, j, x, y
    cdef double best, val, g

    # bottom-up: tightest inside score per member
    for v in range(nv):
        off = offsets[v]
        sz = sizes[v]
        if sz == 1:
            x = members[off]
            inner[off] = signed[x, x]
            continue
        for ci in range(child_ptr[v], child_ptr[v + 1]):
            c = child_idx[ci]
            coff = offsets[c]
            csz = sizes[c]
            sh = pos_in_parent[c]
            for i in range(csz):
                x = members[coff + i]
                best = INFINITY
                for j in range(sz):
                    if sh <= j < sh + csz:
                        continue
                    y = members[off + j]
                    val = signed[x, y]
                    if val < best:
                        best = val
                if inner[coff + i] < best:
                    best = inner[coff + i]
                inner[off + sh + i] = best

    # top-down: tightest outside score per member
    off = offsets[nv - 1]
    for i in range(sizes[nv - 1]):
        outer[off + i] = -INFINITY
    for v in range(nv - 1, -1, -1):
        off = offsets[v]
        sz = sizes[v]
        if sz == 1:
            continue
        for ci in range(child_ptr[v], child_ptr[v + 1]):
            c = child_idx[ci]
            coff = offsets[c]
            csz = sizes[c]
            sh = pos_in_parent[c]
            for i in range(csz):
                x = members[coff + i]
                best = -INFINITY
                for j in range(sz):
                    if sh <= j < sh + csz:
                        continue
                    y = members[off + j]
                    val = signed[x, y]
                    if val > best:
                        best = val
                if not parent_restricted and outer[off + sh + i] > best:
                    best = outer[off + sh + i]
                outer[coff + i] = best

    for v in range(nv):
        off = offsets[v]
        sz = sizes[v]
        g = INFINITY
        for i in range(sz):
            val = inner[off + i] - outer[off + i]
            if val < g:
                g = val
        gaps[v] = g
    return gaps_arr


cdef inline double _update(
    int rule_id, double sign, double q12, double q23, double q31,
    cnp.int64_t n1, cnp.int64_t n2, cnp.int64_t n3,
    double e1, double e2, double bb, double gg,
) noexcept nogil:
    cdef double t, v
    if rule_id == 1:  # single: tightest of the two cross scores
        if sign > 0:
            return q23 if q23 > q31 else q31
        return q23 if q23 < q31 else q31
    if rule_id == 2:  # complete: loosest of the two cross scores
        if sign > 0:
            return q23 if q23 < q31 else q31
        return q23 if q23 > q31 else q31
    if rule_id == 3:  # size-weighted average; exact on equal inputs
        if q31 == q23:
            return q23
        return (n1 * q31 + n2 * q23) / (n1 + n2)
    if rule_id == 4:  # plain average
        return (q31 + q23) / 2.0
    if rule_id == 5:  # ward
        t = n1 + n2 + n3
        return (n1 + n3) / t * q31 + (n2 + n3) / t * q23 + (-(n3) / t) * q12
    if rule_id == 6:  # median
        t = n1 + n2
        return n1 / t * q31 + n2 / t * q23 + (-(n1 * n2) / (t * t)) * q12
    if rule_id == 7:  # centroid
        return 0.5 * q31 + 0.5 * q23 + -0.25 * q12
    # rule_id == 8: constant-coefficient parametric family
    v = e1 * q31 + e2 * q23 + bb * q12
    if gg != 0.0:
        v += gg * fabs(q31 - q23)
    return v


def linkage_merges(
    scores, double sign, int rule_id,
    double e1, double e2, double bb, double gg,
):
    """Merge sequence for a built-in rule: arrays (kept slot, merged slot, score).

    Slots are identified by their minimum member; the tightest pair wins,
    ties break on the lexicographically smallest slot pair, and the merged
    cluster keeps the smaller slot.
    """
    cdef cnp.ndarray[cnp.float64_t, ndim=2] W_arr = np.array(scores, dtype=np.float64)
    cdef double[:, ::1] W = W_arr
    cdef int k = W.shape[0]
    cdef cnp.ndarray[cnp.int64_t, ndim=1] out_a = np.empty(k - 1, dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] out_b = np.empty(k - 1, dtype=np.int64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out_s = np.empty(k - 1)
    cdef cnp.ndarray[cnp.uint8_t, ndim=1] alive_arr = np.ones(k, dtype=np.uint8)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] size_arr = np.ones(k, dtype=np.int64)
    cdef unsigned char[::1] alive = alive_arr
    cdef cnp.int64_t[::1] sizes = size_arr
    cdef int step, i, j, h, bi, bj
    cdef double bv, sv, q12, q23, q31, newv

    for step in range(k - 1):
        bi = -1
        bj = -1
        bv = -INFINITY
        for i in range(k):
            if not alive[i]:
                continue
            for j in range(i + 1, k):
                if not alive[j]:
                    continue
                sv = sign * W[i, j]
                if sv > bv or (sv == bv and (i < bi or (i == bi and j < bj))):
                    bv = sv
                    bi = i
                    bj = j
        out_a[step] = bi
        out_b[step] = bj
        out_s[step] = W[bi, bj]

        q12 = W[bi, bj]
        for h in range(k):
            if not alive[h] or h == bi or h == bj:
                continue
            q23 = W[bj, h]
            q31 = W[h, bi]
            newv = _update(
                rule_id, sign, q12, q23, q31,
                sizes[bi], sizes[bj], sizes[h], e1, e2, bb, gg,
            )
            W[bi, h] = newv
            W[h, bi] = newv
        sizes[bi] = sizes[bi] + sizes[bj]
        alive[bj] = 0

    return out_a, out_b, out_s
