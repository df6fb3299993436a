import numpy as np
import pytest

from finehier import (
    BUILTIN_RULES,
    SINGLE,
    WARD,
    Hierarchy,
    Orientation,
    TooLarge,
    contains,
    finest_valid_hierarchy,
    hierarchy_from_clusters,
    is_valid_cluster,
    is_valid_hierarchy,
    maximality_check,
    search_counterexample,
    trimmed_linkage,
)
from finehier.sampling import random_pair_matrix

from conftest import clusters, naive_valid_clusters


class TestFinest:
    def test_block_sim(self, block_sim, fine_tree):
        assert finest_valid_hierarchy(block_sim).clusters == fine_tree.clusters

    def test_paired_dis(self, paired_dis):
        want = Hierarchy(5, clusters(5, [0, 1], [2, 3], [0, 1, 2, 3]))
        assert finest_valid_hierarchy(paired_dis).clusters == want.clusters

    def test_constant_matrix_star(self):
        rows = np.full((6, 6), 3.0)
        np.fill_diagonal(rows, 0.0)
        from finehier import ingest_matrix

        m = ingest_matrix(rows, Orientation.DISSIMILARITY)
        assert finest_valid_hierarchy(m).clusters == Hierarchy(6).clusters

    def test_matches_powerset_scan(self):
        rng = np.random.default_rng(83)
        for trial in range(30):
            k = int(rng.integers(1, 8))
            orient = Orientation.SIMILARITY if trial % 2 else Orientation.DISSIMILARITY
            m = random_pair_matrix(k, orient, rng, grid=5 if trial % 3 == 0 else None)
            got = finest_valid_hierarchy(m)
            assert got.clusters == set(naive_valid_clusters(m))

    def test_eps_shrinks_output(self):
        rng = np.random.default_rng(89)
        m = random_pair_matrix(7, Orientation.SIMILARITY, rng)
        loose = finest_valid_hierarchy(m, eps=0.0)
        tight = finest_valid_hierarchy(m, eps=0.3)
        assert contains(tight, loose) or tight.clusters <= loose.clusters | tight.clusters

    def test_cap_enforced(self):
        rng = np.random.default_rng(97)
        m = random_pair_matrix(6, Orientation.SIMILARITY, rng)
        with pytest.raises(TooLarge):
            finest_valid_hierarchy(m, cap=5)

    def test_no_overlap_among_valid_clusters(self):
        rng = np.random.default_rng(101)
        for trial in range(30):
            k = int(rng.integers(2, 10))
            m = random_pair_matrix(
                k, Orientation.DISSIMILARITY, rng, grid=6 if trial % 2 else None
            )
            vs = naive_valid_clusters(m)
            for i, u in enumerate(vs):
                for v in vs[i + 1 :]:
                    inter = u.mask & v.mask
                    assert inter in (0, u.mask, v.mask)


class TestMaximality:
    def test_coarse_not_maximal(self, block_sim, coarse_tree, fine_tree):
        assert not maximality_check(block_sim, coarse_tree)
        assert maximality_check(block_sim, fine_tree)

    def test_own_output_maximal(self):
        rng = np.random.default_rng(103)
        for trial in range(10):
            m = random_pair_matrix(7, Orientation.SIMILARITY, rng)
            reference = finest_valid_hierarchy(m)
            assert is_valid_hierarchy(m, reference)
            assert maximality_check(m, reference)

    def test_cap_at_limit(self):
        rng = np.random.default_rng(104)
        m = random_pair_matrix(20, Orientation.SIMILARITY, rng)
        h = finest_valid_hierarchy(m)  # default cap is exactly 20
        assert is_valid_hierarchy(m, h)


class TestGreatestElement:
    def test_random_valid_subfamilies_contained(self):
        rng = np.random.default_rng(107)
        for trial in range(20):
            k = int(rng.integers(3, 9))
            m = random_pair_matrix(k, Orientation.SIMILARITY, rng)
            reference = finest_valid_hierarchy(m)
            pool = [c for c in reference.sorted_clusters if 1 < len(c) < k]
            if not pool:
                continue
            take = [c for c in pool if rng.random() < 0.5]
            sub = hierarchy_from_clusters(k, take)
            assert is_valid_hierarchy(m, sub)
            assert contains(sub, reference)

    def test_oracle_equals_trimmed_single(self):
        rng = np.random.default_rng(109)
        for trial in range(25):
            k = int(rng.integers(2, 12))
            orient = Orientation.SIMILARITY if trial % 2 else Orientation.DISSIMILARITY
            m = random_pair_matrix(k, orient, rng)
            assert (
                trimmed_linkage(m, SINGLE).clusters
                == finest_valid_hierarchy(m).clusters
            )


class TestCounterexampleSearch:
    def test_ward_found_and_replays(self):
        report = search_counterexample(
            WARD, Orientation.DISSIMILARITY, range(4, 9), trials=2000, seed=0
        )
        assert report is not None
        assert report.trials_used == report.trial + 1
        m = report.matrix
        pruned = trimmed_linkage(m, WARD)
        for c in report.missing:
            assert is_valid_cluster(m, c)
            assert c not in pruned.clusters

    def test_single_never_hit(self):
        report = search_counterexample(
            SINGLE, Orientation.DISSIMILARITY, range(4, 9), trials=800, seed=0
        )
        assert report is None

    def test_centroid_found(self):
        report = search_counterexample(
            BUILTIN_RULES["centroid"],
            Orientation.DISSIMILARITY,
            range(4, 9),
            trials=2000,
            seed=0,
        )
        assert report is not None and report.missing

    def test_parallel_jobs_same_answer(self):
        serial = search_counterexample(
            WARD, Orientation.DISSIMILARITY, range(4, 9), trials=400, seed=0
        )
        parallel = search_counterexample(
            WARD, Orientation.DISSIMILARITY, range(4, 9), trials=400, seed=0, jobs=2
        )
        assert serial is not None and parallel is not None
        assert serial.trial == parallel.trial
        assert np.array_equal(serial.matrix.scores, parallel.matrix.scores)
