"""Trimming: delete invalid vertices from a merge trace.

A linkage trace is binary by construction and may contain clusters whose
validity gap is non-positive.  Removing every vertex whose full-outside
gap is <= eps (default 0) leaves a laminar family - survivors are valid
clusters, and valid clusters never properly overlap - so the result is a
hierarchy, possibly non-binary, always valid.  Root and singletons are
never removed at eps = 0: their gaps are +inf and strictly positive.
"""

from __future__ import annotations

from .linkage import run_linkage
from .matrix import PairMatrix
from .rules import LinkageRule
from .tree import Hierarchy, MergeTrace, hierarchy_from_clusters
from .validity import _check_eps, tree_gaps


def trim(m: PairMatrix, trace: MergeTrace, eps: float = 0.0) -> Hierarchy:
    """Drop every vertex of ``trace`` with full-outside gap <= ``eps``."""
    eps = _check_eps(eps)
    gaps = tree_gaps(m, trace, parent_restricted=False)
    keep = [c for c, g in gaps.items() if g > eps]
    return hierarchy_from_clusters(m.k, keep)


def trimmed_linkage(
    m: PairMatrix, rule: LinkageRule, eps: float = 0.0, engine: str = "auto"
) -> Hierarchy:
    """Run the linkage engine, then trim: a valid hierarchy."""
    return trim(m, run_linkage(m, rule, engine=engine), eps)
