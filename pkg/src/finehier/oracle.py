"""Brute-force ground truth and randomized counterexample search.

The exhaustive enumeration of all valid clusters is the reference answer
every algorithmic path is checked against: valid clusters never properly
overlap, so together with the singletons and the full set they form a
hierarchy - the unique one containing every valid hierarchy.

The search operation samples random matrices and reports the first one
where a rule's trimmed linkage output misses a valid cluster; conforming
rules never hit, the parametric dissimilarity rules do.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from . import _kernels
from .errors import DimensionMismatch, TooLarge
from .matrix import Orientation, PairMatrix
from .prune import trimmed_linkage
from .rules import LinkageRule
from .sampling import random_pair_matrix, trial_rng
from .tree import Cluster, Hierarchy, hierarchy_from_clusters
from .validity import _check_eps

ENUMERATION_CAP = 20


def finest_valid_hierarchy(
    m: PairMatrix, eps: float = 0.0, cap: int = ENUMERATION_CAP
) -> Hierarchy:
    """The hierarchy of ALL clusters with gap > eps, by 2^k enumeration."""
    eps = _check_eps(eps)
    if m.k > cap:
        raise TooLarge(m.k, cap)
    masks = _kernels.valid_subset_masks(m.signed(), eps)
    return hierarchy_from_clusters(m.k, (Cluster(int(t), m.k) for t in masks))


def maximality_check(
    m: PairMatrix, h: Hierarchy, eps: float = 0.0, cap: int = ENUMERATION_CAP
) -> bool:
    """True iff no cluster can be added to ``h`` without breaking validity.

    Equivalent to ``h`` carrying every valid cluster, checked by set
    equality against the exhaustive enumeration.
    """
    if h.k != m.k:
        raise DimensionMismatch(m.k, h.k)
    return h.clusters == finest_valid_hierarchy(m, eps, cap).clusters


@dataclass(frozen=True)
class CounterexampleReport:
    """A matrix on which a rule's trimmed output misses valid clusters."""

    matrix: PairMatrix
    rule_name: str
    missing: frozenset[Cluster]
    trials_used: int
    seed: int
    trial: int


def _probe(
    rule: LinkageRule,
    orientation: Orientation,
    k_values: tuple[int, ...],
    seed: int,
    trial: int,
) -> CounterexampleReport | None:
    rng = trial_rng(seed, trial)
    k = int(k_values[int(rng.integers(0, len(k_values)))])
    m = random_pair_matrix(k, orientation, rng, distinct=True)
    pruned = trimmed_linkage(m, rule)
    reference = finest_valid_hierarchy(m)
    missing = reference.clusters - pruned.clusters
    if missing:
        return CounterexampleReport(
            m, rule.name, frozenset(missing), trial + 1, seed, trial
        )
    return None


def _probe_range(args) -> CounterexampleReport | None:
    rule, orientation, k_values, seed, start, stop = args
    for trial in range(start, stop):
        hit = _probe(rule, orientation, k_values, seed, trial)
        if hit is not None:
            return hit
    return None


def search_counterexample(
    rule: LinkageRule,
    orientation: Orientation,
    k_range=range(4, 9),
    trials: int = 5000,
    seed: int = 0,
    jobs: int = 1,
) -> CounterexampleReport | None:
    """Hunt for a matrix where trimming under ``rule`` loses a valid cluster.

    Matrices are i.i.d. uniform with a self-dominant diagonal and all
    distinct off-diagonal entries; the per-trial stream is counter-based,
    so the lowest-trial hit is the answer no matter how trials are split
    across workers.
    """
    rule.require(orientation)
    k_values = tuple(int(k) for k in k_range)
    if not k_values:
        raise ValueError("k_range must be non-empty")
    if max(k_values) > ENUMERATION_CAP:
        raise TooLarge(max(k_values), ENUMERATION_CAP)

    if jobs <= 1:
        return _probe_range((rule, orientation, k_values, seed, 0, trials))

    chunk = -(-trials // jobs)
    spans = [
        (rule, orientation, k_values, seed, lo, min(lo + chunk, trials))
        for lo in range(0, trials, chunk)
    ]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        hits = [h for h in pool.map(_probe_range, spans) if h is not None]
    if not hits:
        return None
    return min(hits, key=lambda h: h.trial)
