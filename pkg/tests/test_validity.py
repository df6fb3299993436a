import numpy as np
import pytest

from finehier import (
    Cluster,
    Hierarchy,
    Orientation,
    cluster_gap,
    hierarchy_validity_reports,
    ingest_matrix,
    is_strongly_valid_hierarchy,
    is_valid_cluster,
    is_valid_hierarchy,
    strong_gap,
    tree_gaps,
)
from finehier.sampling import random_hierarchy, random_pair_matrix

from conftest import clusters, naive_gap, naive_valid_clusters


class TestClusterGap:
    def test_inner_block_gap(self, block_sim):
        r = cluster_gap(block_sim, Cluster.from_members([0, 1, 2], 5))
        assert r.gap == 1.0 and r.valid

    def test_zero_gap_pair(self, block_sim):
        r = cluster_gap(block_sim, Cluster.from_members([0, 1], 5))
        assert r.gap == 0.0
        assert r.witness == (0, 1, 2)
        assert not r.valid

    def test_full_set_infinite(self, block_sim):
        r = cluster_gap(block_sim, Cluster.full_set(5))
        assert r.gap == np.inf and r.witness is None

    def test_witness_attains_gap(self):
        rng = np.random.default_rng(5)
        for trial in range(60):
            k = int(rng.integers(2, 9))
            orient = Orientation.SIMILARITY if trial % 2 else Orientation.DISSIMILARITY
            m = random_pair_matrix(k, orient, rng)
            mask = int(rng.integers(1, (1 << k) - 1))
            c = Cluster(mask, k)
            r = cluster_gap(m, c)
            assert r.gap == naive_gap(m, c)
            x, y, z = r.witness
            assert x in c and y in c and z not in c
            sign = orient.sign
            assert sign * (m.scores[x, y] - m.scores[x, z]) == r.gap

    def test_matches_naive_exhaustively(self, block_sim, paired_dis):
        for m in (block_sim, paired_dis):
            for mask in range(1, 1 << m.k):
                c = Cluster(mask, m.k)
                assert cluster_gap(m, c).gap == naive_gap(m, c)


class TestIsValidCluster:
    def test_singletons_and_full_set(self, block_sim):
        for x in range(5):
            assert is_valid_cluster(block_sim, Cluster.singleton(x, 5))
        assert is_valid_cluster(block_sim, Cluster.full_set(5))

    def test_grouped_quad_valid(self, paired_dis):
        assert is_valid_cluster(paired_dis, Cluster.from_members([0, 1, 2, 3], 5))

    def test_eps_monotone(self):
        rng = np.random.default_rng(17)
        for trial in range(20):
            m = random_pair_matrix(6, Orientation.SIMILARITY, rng)
            for eps_lo, eps_hi in ((0.0, 0.05), (0.05, 0.2)):
                lo = {c.mask for c in naive_valid_clusters(m, eps_lo)}
                hi = {c.mask for c in naive_valid_clusters(m, eps_hi)}
                assert hi <= lo

    def test_negative_eps_rejected(self, block_sim):
        with pytest.raises(ValueError):
            is_valid_cluster(block_sim, Cluster.singleton(0, 5), eps=-0.1)


class TestTreeGaps:
    def test_matches_per_cluster_gaps(self):
        # the whole-tree sweep against the independent per-cluster path
        rng = np.random.default_rng(23)
        for trial in range(40):
            k = int(rng.integers(2, 11))
            orient = Orientation.SIMILARITY if trial % 2 else Orientation.DISSIMILARITY
            m = random_pair_matrix(k, orient, rng, grid=8 if trial % 3 == 0 else None)
            h = random_hierarchy(k, rng)
            gaps = tree_gaps(m, h)
            for c in h.sorted_clusters:
                assert gaps[c] == naive_gap(m, c)

    def test_extreme_tree_shapes(self):
        # deepest possible chain and widest possible fan, both orientations
        rng = np.random.default_rng(41)
        k = 16
        chain = Hierarchy(
            16, [Cluster.from_members(range(j), 16) for j in range(2, 16)]
        )
        fan = Hierarchy(16)
        for orient in (Orientation.SIMILARITY, Orientation.DISSIMILARITY):
            m = random_pair_matrix(k, orient, rng)
            for h in (chain, fan):
                gaps = tree_gaps(m, h)
                for c in h.sorted_clusters:
                    assert gaps[c] == naive_gap(m, c)

    def test_witness_is_lexicographically_least(self):
        # brute-force the first gap-attaining triple and compare
        rng = np.random.default_rng(43)
        for trial in range(40):
            k = int(rng.integers(2, 8))
            orient = Orientation.SIMILARITY if trial % 2 else Orientation.DISSIMILARITY
            m = random_pair_matrix(k, orient, rng, grid=4)  # ties make it matter
            mask = int(rng.integers(1, (1 << k) - 1))
            c = Cluster(mask, k)
            r = cluster_gap(m, c)
            if r.witness is None:
                continue
            sign = orient.sign
            best = None
            for x in c:
                for y in c:
                    for z in c.complement_members():
                        if sign * (m.scores[x, y] - m.scores[x, z]) == r.gap:
                            cand = (x, y, z)
                            best = cand if best is None or cand < best else best
            assert r.witness == best

    def test_parent_restricted_verdict_equals_full(self):
        rng = np.random.default_rng(29)
        for trial in range(60):
            k = int(rng.integers(2, 11))
            orient = Orientation.SIMILARITY if trial % 2 else Orientation.DISSIMILARITY
            m = random_pair_matrix(k, orient, rng, grid=6 if trial % 3 == 0 else None)
            h = random_hierarchy(k, rng)
            full = all(g > 0 for g in tree_gaps(m, h).values())
            assert is_valid_hierarchy(m, h) == full


class TestHierarchyVerdicts:
    def test_fine_tree_valid(self, block_sim, coarse_tree, fine_tree):
        assert is_valid_hierarchy(block_sim, fine_tree)
        assert is_valid_hierarchy(block_sim, coarse_tree)

    def test_skewed_tree_invalid_with_report(self, block_sim, skewed_tree):
        ok, reports = hierarchy_validity_reports(block_sim, skewed_tree)
        assert not ok
        failing = {r.cluster: r for r in reports if not r.valid}
        pair = Cluster.from_members([0, 1], 5)
        assert pair in failing
        assert failing[pair].gap == 0.0
        assert failing[pair].witness == (0, 1, 2)

    def test_star_always_valid(self):
        rng = np.random.default_rng(31)
        for trial in range(10):
            k = int(rng.integers(1, 9))
            m = random_pair_matrix(k, Orientation.DISSIMILARITY, rng)
            assert is_valid_hierarchy(m, Hierarchy(k))


class TestStrongValidity:
    def test_separated_blocks(self):
        rows = [
            [6, 5, 1, 1],
            [5, 6, 1, 1],
            [1, 1, 6, 4],
            [1, 1, 4, 6],
        ]
        m = ingest_matrix(rows, Orientation.SIMILARITY)
        h = Hierarchy(4, clusters(4, [0, 1], [2, 3]))
        assert is_strongly_valid_hierarchy(m, h)

    def test_star_strongly_valid(self, block_sim):
        assert is_strongly_valid_hierarchy(block_sim, Hierarchy(5))

    def test_strong_implies_valid(self):
        rng = np.random.default_rng(37)
        hits = 0
        for trial in range(200):
            k = int(rng.integers(2, 9))
            orient = Orientation.SIMILARITY if trial % 2 else Orientation.DISSIMILARITY
            m = random_pair_matrix(k, orient, rng, grid=5 if trial % 2 else None)
            h = random_hierarchy(k, rng)
            if is_strongly_valid_hierarchy(m, h):
                hits += 1
                assert is_valid_hierarchy(m, h)
        assert hits  # the implication was actually exercised

    def test_strong_gap_definition(self, block_sim):
        c = Cluster.from_members([0, 1, 2], 5)
        # loosest inside score 2, tightest outside score 1
        assert strong_gap(block_sim, c) == 1.0
        assert strong_gap(block_sim, Cluster.full_set(5)) == np.inf
