import json

import numpy as np
import pytest

from finehier import (
    Cluster,
    Hierarchy,
    InputError,
    Orientation,
    run_linkage,
)
from finehier.sampling import random_dendrogram, random_hierarchy, random_pair_matrix
from finehier.treeio import (
    canonical_json,
    dendrogram_to_newick,
    hierarchy_from_json_doc,
    hierarchy_from_newick,
    hierarchy_to_json_doc,
    load_matrix,
    matrix_from_csv_text,
    matrix_from_json_doc,
    matrix_to_csv_text,
    matrix_to_json_doc,
    to_newick,
    trace_to_newick,
)

from conftest import BLOCK_SIM_ROWS, clusters

SIM = Orientation.SIMILARITY
DIS = Orientation.DISSIMILARITY

CSV_WITH_HEADER = """x1,x2,x3,x4,x5
3,2,2,1,1
2,3,2,1,1
2,2,3,1,1
1,1,1,3,2
1,1,1,2,3
"""

CSV_BLANK_DIAG = """,4
4,
"""


class TestMatrixCsv:
    def test_header_row_becomes_labels(self):
        m = matrix_from_csv_text(CSV_WITH_HEADER, SIM)
        assert m.labels == ("x1", "x2", "x3", "x4", "x5")
        assert np.array_equal(m.scores, np.array(BLOCK_SIM_ROWS, dtype=float))

    def test_blank_diagonal(self):
        m = matrix_from_csv_text(CSV_BLANK_DIAG, DIS)
        assert m.scores[0, 0] == 3.0

    def test_blank_off_diagonal_rejected(self):
        with pytest.raises(InputError):
            matrix_from_csv_text("1,,2\n,1,2\n2,2,1\n", SIM)

    def test_ragged_rejected(self):
        with pytest.raises(InputError):
            matrix_from_csv_text("3,1\n1,3,9\n", SIM)

    def test_value_exact_roundtrip(self):
        rng = np.random.default_rng(151)
        m = random_pair_matrix(7, SIM, rng)
        again = matrix_from_csv_text(matrix_to_csv_text(m), SIM)
        assert np.array_equal(again.scores, m.scores)

    def test_roundtrip_with_labels(self, block_sim):
        from finehier.matrix import PairMatrix

        labelled = PairMatrix(block_sim.scores, SIM, ("a", "b", "c", "d", "e"))
        again = matrix_from_csv_text(matrix_to_csv_text(labelled), SIM)
        assert again.labels == labelled.labels
        assert np.array_equal(again.scores, labelled.scores)


class TestMatrixJson:
    def test_roundtrip(self):
        rng = np.random.default_rng(157)
        m = random_pair_matrix(6, DIS, rng)
        doc = matrix_to_json_doc(m)
        again = matrix_from_json_doc(json.loads(json.dumps(doc)))
        assert np.array_equal(again.scores, m.scores)
        assert again.orientation == m.orientation

    def test_null_diagonal(self):
        doc = {"orientation": "dissimilarity", "matrix": [[None, 2], [2, None]]}
        m = matrix_from_json_doc(doc)
        assert m.scores[0, 0] == 1.0

    def test_orientation_conflict_rejected(self):
        doc = {"orientation": "similarity", "matrix": [[3, 1], [1, 3]]}
        with pytest.raises(InputError):
            matrix_from_json_doc(doc, DIS)

    def test_orientation_required_somewhere(self):
        with pytest.raises(InputError):
            matrix_from_json_doc({"matrix": [[3, 1], [1, 3]]})

    def test_load_matrix_dispatch(self, tmp_path):
        p = tmp_path / "m.csv"
        p.write_text(CSV_WITH_HEADER)
        assert load_matrix(p, SIM).k == 5
        with pytest.raises(InputError):
            load_matrix(p)  # CSV without explicit orientation


class TestHierarchyJson:
    def test_lossless_roundtrip(self):
        rng = np.random.default_rng(163)
        for trial in range(20):
            k = int(rng.integers(1, 12))
            h = random_hierarchy(k, rng) if k > 1 else Hierarchy(1)
            doc = json.loads(json.dumps(hierarchy_to_json_doc(h)))
            back, labels, heights = hierarchy_from_json_doc(doc)
            assert back == h
            assert heights is None

    def test_heights_carried(self):
        rng = np.random.default_rng(167)
        d = random_dendrogram(6, SIM, rng)
        doc = hierarchy_to_json_doc(d.hierarchy, heights=dict(d.heights))
        back, _, heights = hierarchy_from_json_doc(json.loads(json.dumps(doc)))
        assert back == d.hierarchy
        assert heights == dict(d.heights)

    def test_canonical_and_stable(self, fine_tree):
        a = canonical_json(hierarchy_to_json_doc(fine_tree))
        b = canonical_json(hierarchy_to_json_doc(fine_tree))
        assert a == b
        doc = json.loads(a)
        sizes = [len(c) for c in doc["clusters"]]
        assert sizes == sorted(sizes)


class TestNewick:
    def test_fine_tree_rendering(self, fine_tree):
        assert to_newick(fine_tree) == "((x1,x2,x3),(x4,x5));"

    def test_trace_labels(self, block_sim):
        from finehier import AVG_UNWEIGHTED

        trace = run_linkage(block_sim, AVG_UNWEIGHTED)
        text = trace_to_newick(trace)
        assert text == "(((x1,x2)n1,x3)n2,(x4,x5)n3)n4;"

    def test_single_leaf(self):
        assert to_newick(Hierarchy(1)) == "x1;"

    def test_parse_roundtrip_topology(self):
        rng = np.random.default_rng(173)
        for trial in range(20):
            k = int(rng.integers(2, 12))
            h = random_hierarchy(k, rng)
            back, labels, heights = hierarchy_from_newick(to_newick(h))
            assert back == h

    def test_parse_roundtrip_heights(self):
        rng = np.random.default_rng(179)
        for trial in range(10):
            k = int(rng.integers(2, 10))
            d = random_dendrogram(k, SIM, rng)
            text = dendrogram_to_newick(d)
            back, labels, heights = hierarchy_from_newick(text)
            assert back == d.hierarchy
            assert heights == dict(d.heights)

    def test_custom_labels_resolved(self):
        h, labels, _ = hierarchy_from_newick(
            "((north,south),east);", labels=["north", "south", "east"]
        )
        assert Cluster.from_members([0, 1], 3) in h.clusters

    def test_quoted_labels(self):
        text = "(('a b','c,d'),'e''f');"
        h, labels, _ = hierarchy_from_newick(text)
        assert labels == ["a b", "c,d", "e'f"]

    def test_unknown_leaf_rejected(self):
        with pytest.raises(InputError):
            hierarchy_from_newick("((x1,x2),x9);", labels=["x1", "x2", "x3"])

    def test_malformed_rejected(self):
        for bad in ("((x1,x2);", "(x1,x2)", "(x1,,x2);", ");("):
            with pytest.raises(InputError):
                hierarchy_from_newick(bad)
