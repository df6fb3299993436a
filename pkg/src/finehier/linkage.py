"""The agglomerative engine.

Starting from the singletons, repeatedly merge the tightest active pair
(argmax of the signed score), record the merge, and rescore the new
cluster against every remaining active cluster through the update rule.
k - 1 merges produce a binary trace.

Ties at the argmax break deterministically: each active cluster is
identified by its minimum member, and the pair whose sorted identifier
pair is lexicographically smallest wins.  The merged cluster keeps the
slot of the smaller identifier, so slot ids always equal minimum members.

Scores are kept in a full k x k table updated in place: O(k) per merge,
O(k^2) memory.  A compiled kernel covers the built-in rules; arbitrary
rules run through the generic numpy path below.  Each invocation is
single-threaded (merges are inherently sequential); concurrent invocations
over shared matrices are safe.
"""

from __future__ import annotations

import numpy as np

from . import _kernels
from .matrix import PairMatrix
from .rules import LinkageRule
from .tree import Cluster, MergeStep, MergeTrace


def run_linkage(m: PairMatrix, rule: LinkageRule, engine: str = "auto") -> MergeTrace:
    """Build the binary merge trace of ``m`` under ``rule``.

    ``engine`` is "auto" (compiled kernel when available and the rule is
    built-in, generic otherwise), "kernel", or "python".
    """
    rule.require(m.orientation)
    k = m.k
    if k == 1:
        return MergeTrace(1, ())

    use_kernel = (
        _kernels.linkage_merges is not None
        and rule.kernel_id is not None
        and engine in ("auto", "kernel")
    )
    if engine == "kernel" and not use_kernel:
        raise ValueError("compiled linkage kernel unavailable for this rule/build")

    if use_kernel:
        e1 = e2 = b = g = 0.0
        if rule.lw_coeffs is not None:
            e1, e2, b, g = rule.lw_coeffs
        slot_a, slot_b, scores = _kernels.linkage_merges(
            m.scores, m.orientation.sign, rule.kernel_id, e1, e2, b, g
        )
    else:
        slot_a, slot_b, scores = _python_merges(m, rule)

    masks = [1 << x for x in range(k)]
    steps = []
    for idx in range(k - 1):
        a, b_ = int(slot_a[idx]), int(slot_b[idx])
        left = Cluster(masks[a], k)
        right = Cluster(masks[b_], k)
        steps.append(MergeStep(idx + 1, left, right, float(scores[idx])))
        masks[a] |= masks[b_]
    return MergeTrace(k, steps)


def _python_merges(m: PairMatrix, rule: LinkageRule):
    """Generic engine: any rule, numpy bookkeeping."""
    k = m.k
    sign = m.orientation.sign
    orientation = m.orientation
    W = m.scores.copy()
    signed = sign * W
    np.fill_diagonal(signed, -np.inf)

    alive = np.ones(k, dtype=bool)
    sizes = np.ones(k, dtype=np.int64)
    out_a = np.empty(k - 1, dtype=np.int64)
    out_b = np.empty(k - 1, dtype=np.int64)
    out_s = np.empty(k - 1)

    for step in range(k - 1):
        best = signed.max()
        ii, jj = np.nonzero(signed == best)
        upper = ii < jj
        pick = np.lexsort((jj[upper], ii[upper]))[0]
        i, j = int(ii[upper][pick]), int(jj[upper][pick])

        out_a[step], out_b[step], out_s[step] = i, j, W[i, j]

        others = np.flatnonzero(alive)
        others = others[(others != i) & (others != j)]
        if others.size:
            new = rule.fn_many(
                W[i, j], W[j, others], W[others, i],
                int(sizes[i]), int(sizes[j]), sizes[others], orientation,
            )
            new = np.asarray(new, dtype=np.float64)
            W[i, others] = new
            W[others, i] = new
            signed[i, others] = sign * new
            signed[others, i] = sign * new
        sizes[i] += sizes[j]
        alive[j] = False
        signed[j, :] = -np.inf
        signed[:, j] = -np.inf

    return out_a, out_b, out_s
