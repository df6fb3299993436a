import math

import numpy as np
import pytest

from finehier import (
    Asymmetric,
    NonFinite,
    Orientation,
    SelfDominanceViolation,
    as_similarity_view,
    ingest_matrix,
)

from conftest import BLOCK_SIM_ROWS, PAIRED_DIS_ROWS


class TestIngest:
    def test_block_sim_accepted(self):
        m = ingest_matrix(BLOCK_SIM_ROWS, Orientation.SIMILARITY)
        assert m.k == 5
        assert m.scores[0, 1] == 2.0

    def test_paired_dis_accepted(self):
        m = ingest_matrix(PAIRED_DIS_ROWS, Orientation.DISSIMILARITY)
        assert m.scores[2, 3] == 3.0

    def test_self_dominance_violation(self):
        with pytest.raises(SelfDominanceViolation) as e:
            ingest_matrix([[3, 5], [5, 3]], Orientation.SIMILARITY)
        assert (e.value.x, e.value.y) == (0, 1)

    def test_dissimilarity_dominance_mirrored(self):
        ingest_matrix([[0, 5], [5, 0]], Orientation.DISSIMILARITY)
        with pytest.raises(SelfDominanceViolation):
            ingest_matrix([[6, 5], [5, 6]], Orientation.DISSIMILARITY)

    def test_asymmetric(self):
        with pytest.raises(Asymmetric) as e:
            ingest_matrix([[3, 1], [2, 3]], Orientation.SIMILARITY)
        assert e.value.delta != 0

    def test_non_finite(self):
        with pytest.raises(NonFinite):
            ingest_matrix([[3, math.inf], [math.inf, 3]], Orientation.SIMILARITY)

    def test_blank_diagonal_filled(self):
        rows = [[math.nan, 2.0], [2.0, math.nan]]
        m = ingest_matrix(rows, Orientation.SIMILARITY)
        assert m.scores[0, 0] == 3.0  # max off-diagonal + 1
        d = ingest_matrix(rows, Orientation.DISSIMILARITY)
        assert d.scores[1, 1] == 1.0  # min off-diagonal - 1

    def test_single_item(self):
        m = ingest_matrix([[float("nan")]], Orientation.SIMILARITY)
        assert m.scores[0, 0] == 0.0

    def test_duplicate_rows_allowed(self):
        rows = [[5, 2, 2], [2, 5, 2], [2, 2, 5]]
        m = ingest_matrix(rows, Orientation.SIMILARITY)
        assert m.k == 3

    def test_not_square(self):
        with pytest.raises(ValueError):
            ingest_matrix([[1, 2, 3], [2, 1, 3]], Orientation.SIMILARITY)

    def test_scores_read_only(self, block_sim):
        with pytest.raises(ValueError):
            block_sim.scores[0, 0] = 9.0


class TestComparator:
    def test_similarity_better(self):
        v = as_similarity_view(ingest_matrix([[1]], Orientation.SIMILARITY))
        assert v.better(3, 2) and not v.better(2, 3) and not v.better(2, 2)

    def test_dissimilarity_better(self):
        v = as_similarity_view(ingest_matrix([[1]], Orientation.DISSIMILARITY))
        assert not v.better(3, 2) and v.better(2, 3)

    def test_signed_matches_sign(self, paired_dis):
        assert np.array_equal(paired_dis.signed(), -paired_dis.scores)
