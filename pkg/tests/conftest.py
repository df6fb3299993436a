"""Shared fixtures: golden matrices, reference trees, and naive oracles.

The naive_* helpers implement the defining formulas directly (triple
loops, powerset scans).  They are deliberately independent of the library
internals and act as the ground truth the fast paths are checked against.
"""

import itertools

import pytest

from finehier import Cluster, Hierarchy, Orientation, ingest_matrix

BLOCK_SIM_ROWS = [
    [3, 2, 2, 1, 1],
    [2, 3, 2, 1, 1],
    [2, 2, 3, 1, 1],
    [1, 1, 1, 3, 2],
    [1, 1, 1, 2, 3],
]

PAIRED_DIS_ROWS = [
    [0, 4, 15, 15, 24],
    [4, 0, 15, 15, 24],
    [15, 15, 0, 3, 21],
    [15, 15, 3, 0, 21],
    [24, 24, 21, 21, 0],
]


def clusters(k, *member_lists):
    return [Cluster.from_members(ms, k) for ms in member_lists]


@pytest.fixture
def block_sim():
    """5 items, two similarity blocks {0,1,2} and {3,4}; within-block score
    2, cross 1, diagonal 3.  The pair {0,1} has gap exactly 0."""
    return ingest_matrix(BLOCK_SIM_ROWS, Orientation.SIMILARITY)


@pytest.fixture
def paired_dis():
    """5 items, dissimilarity: pairs {0,1} (d=4) and {2,3} (d=3) nest inside
    {0,1,2,3} (d=15), with item 4 at d=21/24."""
    return ingest_matrix(PAIRED_DIS_ROWS, Orientation.DISSIMILARITY)


@pytest.fixture
def coarse_tree():
    """{0,1,2} grouped, items 3 and 4 loose."""
    return Hierarchy(5, clusters(5, [0, 1, 2]))


@pytest.fixture
def fine_tree():
    """{0,1,2} and {3,4} grouped: the finest tree for block_sim."""
    return Hierarchy(5, clusters(5, [0, 1, 2], [3, 4]))


@pytest.fixture
def skewed_tree():
    """{0,1} and {2,3,4} grouped: invalid for block_sim."""
    return Hierarchy(5, clusters(5, [0, 1], [2, 3, 4]))


def naive_gap(m, c) -> float:
    """Defining triple minimum, written directly."""
    sign = m.orientation.sign
    inside = list(c)
    outside = [z for z in range(m.k) if z not in c]
    if not outside:
        return float("inf")
    return min(
        sign * (m.scores[x, y] - m.scores[x, z])
        for x in inside
        for y in inside
        for z in outside
    )


def naive_valid_clusters(m, eps=0.0):
    """Powerset scan with naive_gap: every valid cluster, by brute force."""
    out = []
    for r in range(1, m.k + 1):
        for ms in itertools.combinations(range(m.k), r):
            c = Cluster.from_members(ms, m.k)
            if naive_gap(m, c) > eps:
                out.append(c)
    return out


def naive_is_ultrametric(m) -> bool:
    """Every ordered triple, straight from the definition."""
    s, k = m.scores, m.k
    sim = m.orientation is Orientation.SIMILARITY
    for x, y, z in itertools.permutations(range(k), 3):
        if sim and not s[x, y] >= min(s[x, z], s[y, z]):
            return False
        if not sim and not s[x, y] <= max(s[x, z], s[y, z]):
            return False
    return True
