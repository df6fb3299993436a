"""Matrix and tree serialization.

Matrices: dense square CSV (optional header row with labels, diagonal
cells may be blank) or a JSON object
``{"labels": [...], "orientation": "similarity"|"dissimilarity",
"matrix": [[...]]}`` with nulls allowed on the diagonal.

Trees: a laminar JSON document (lossless round trip: k, labels, the full
cluster list in canonical order, optional per-vertex heights and gaps)
and Newick text (topology, names, optional heights as the value after
":"; non-binary vertices allowed).  JSON output is canonical - sorted
keys, sorted clusters - and byte-stable for fixed inputs.
"""

from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path

import numpy as np

from .errors import InputError
from .matrix import Orientation, PairMatrix, ingest_matrix
from .tree import Cluster, Hierarchy, MergeTrace
from .ultrametric import Dendrogram

# --- matrices -------------------------------------------------------------


def _parse_cell(text: str, row: int, col: int) -> float:
    text = text.strip()
    if not text:
        if row == col:
            return math.nan  # blank diagonal: filled at ingest
        raise InputError(f"blank off-diagonal cell at row {row}, column {col}")
    try:
        return float(text)
    except ValueError:
        raise InputError(
            f"cell at row {row}, column {col} is not a number: {text!r}"
        ) from None


def matrix_from_csv_text(text: str, orientation: Orientation) -> PairMatrix:
    rows = [r for r in csv.reader(io.StringIO(text)) if any(c.strip() for c in r)]
    if not rows:
        raise InputError("empty matrix file")
    labels = None
    first = rows[0]

    def numeric(cell: str) -> bool:
        try:
            float(cell)
            return True
        except ValueError:
            return False

    if not all(numeric(c) or not c.strip() for c in first):
        labels = [c.strip() for c in first]
        rows = rows[1:]
    k = len(rows)
    table = np.empty((k, k))
    for i, row in enumerate(rows):
        if len(row) != k:
            raise InputError(f"row {i} has {len(row)} cells, expected {k}")
        for j, cell in enumerate(row):
            table[i, j] = _parse_cell(cell, i, j)
    return ingest_matrix(table, orientation, labels)


def matrix_to_csv_text(m: PairMatrix) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    if m.labels is not None:
        writer.writerow(m.labels)
    for row in m.scores:
        writer.writerow([repr(float(v)) for v in row])
    return out.getvalue()


def matrix_to_json_doc(m: PairMatrix) -> dict:
    doc = {
        "orientation": m.orientation.value,
        "matrix": [[float(v) for v in row] for row in m.scores],
    }
    if m.labels is not None:
        doc["labels"] = list(m.labels)
    return doc


def matrix_from_json_doc(doc: dict, orientation: Orientation | None = None) -> PairMatrix:
    if "matrix" not in doc:
        raise InputError('matrix JSON must carry a "matrix" field')
    declared = doc.get("orientation")
    if declared is not None:
        declared = Orientation(declared)
    if orientation is not None and declared is not None and orientation != declared:
        raise InputError(
            f"matrix file declares {declared} scores but {orientation} was requested"
        )
    orientation = orientation or declared
    if orientation is None:
        raise InputError(
            "score orientation is required: pass --mode or declare it in the file"
        )
    table = [
        [math.nan if v is None else float(v) for v in row] for row in doc["matrix"]
    ]
    return ingest_matrix(np.array(table, dtype=float), orientation, doc.get("labels"))


def load_matrix(path: str | Path, orientation: Orientation | None = None) -> PairMatrix:
    """Load a matrix from a .json or .csv file.

    Orientation is never guessed: CSV requires it explicitly, JSON may
    declare it (an explicit request must then agree).
    """
    path = Path(path)
    text = path.read_text()
    if path.suffix.lower() == ".json" or text.lstrip().startswith("{"):
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as e:
            raise InputError(f"invalid JSON in {path}: {e}") from None
        return matrix_from_json_doc(doc, orientation)
    if orientation is None:
        raise InputError("score orientation is required for CSV matrices: pass --mode")
    return matrix_from_csv_text(text, orientation)


# --- label handling ---------------------------------------------------------


def default_labels(k: int, labels=None) -> list[str]:
    if labels is not None:
        if len(labels) != k:
            raise InputError(f"expected {k} labels, got {len(labels)}")
        return [str(x) for x in labels]
    return [f"x{i + 1}" for i in range(k)]


# --- laminar JSON tree documents -------------------------------------------


def hierarchy_to_json_doc(
    h: Hierarchy,
    labels=None,
    heights: dict[Cluster, float] | None = None,
    gaps: dict[Cluster, float] | None = None,
) -> dict:
    """Lossless canonical document: clusters sorted by size then members."""
    clusters = [sorted(c.members) for c in h.sorted_clusters]
    doc: dict = {"k": h.k, "labels": default_labels(h.k, labels), "clusters": clusters}
    if isinstance(h, MergeTrace):
        doc["merge_index"] = [h.creation_index(c) for c in h.sorted_clusters]
        doc["merge_score"] = [h.merge_score(c) for c in h.sorted_clusters]
    if heights is not None:
        doc["heights"] = [heights.get(c) for c in h.sorted_clusters]
    if gaps is not None:
        finite = lambda g: g if math.isfinite(g) else None
        doc["gaps"] = [finite(gaps[c]) for c in h.sorted_clusters]
    return doc


def hierarchy_from_json_doc(doc: dict) -> tuple[Hierarchy, list[str], dict | None]:
    """Rebuild (hierarchy, labels, heights-or-None) from a tree document."""
    try:
        k = int(doc["k"])
        raw = doc["clusters"]
    except KeyError as e:
        raise InputError(f"tree JSON missing field {e}") from None
    clusters = [Cluster.from_members(ms, k) for ms in raw]
    h = Hierarchy(k, clusters)
    labels = default_labels(k, doc.get("labels"))
    heights = None
    if doc.get("heights") is not None:
        heights = {
            c: float(v)
            for c, v in zip(clusters, doc["heights"])
            if v is not None
        }
    return h, labels, heights


def dendrogram_to_json_doc(d: Dendrogram, labels=None) -> dict:
    doc = hierarchy_to_json_doc(d.hierarchy, labels, heights=dict(d.heights))
    doc["orientation"] = d.orientation.value
    return doc


def canonical_json(doc) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


# --- Newick ----------------------------------------------------------------


def _quote_label(name: str) -> str:
    if any(ch in name for ch in "(),:;[]' \t\n"):
        return "'" + name.replace("'", "''") + "'"
    return name


def to_newick(
    h: Hierarchy,
    labels=None,
    internal_labels: dict[Cluster, str] | None = None,
    heights: dict[Cluster, float] | None = None,
) -> str:
    """Render a hierarchy as Newick; children in canonical order.

    Internal vertex names come from ``internal_labels`` (merge traces use
    n<creation-index>); heights, when given, follow each vertex as the
    ":"-value.
    """
    names = default_labels(h.k, labels)

    def annotate(c: Cluster) -> str:
        text = ""
        if internal_labels and c in internal_labels and len(c) > 1:
            text += _quote_label(internal_labels[c])
        if heights is not None and c in heights:
            text += f":{heights[c]!r}"
        return text

    def render(c: Cluster) -> str:
        kids = h.children(c)
        if not kids:
            return _quote_label(names[c.min_member()]) + (
                f":{heights[c]!r}" if heights is not None and c in heights else ""
            )
        return "(" + ",".join(render(x) for x in kids) + ")" + annotate(c)

    return render(h.root) + ";"


def trace_to_newick(trace: MergeTrace, labels=None) -> str:
    tags = {s.merged: f"n{s.index}" for s in trace.steps}
    return to_newick(trace, labels, internal_labels=tags)


def dendrogram_to_newick(d: Dendrogram, labels=None) -> str:
    return to_newick(d.hierarchy, labels, heights=dict(d.heights))


class _NewickParser:
    """Minimal Newick reader: names, nesting, optional :value annotations."""

    def __init__(self, text: str) -> None:
        self.text = text.strip()
        self.pos = 0

    def error(self, msg: str) -> InputError:
        return InputError(f"Newick parse error at offset {self.pos}: {msg}")

    def peek(self) -> str:
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def take_name(self) -> str:
        if self.peek() == "'":
            self.pos += 1
            out = []
            while True:
                if self.pos >= len(self.text):
                    raise self.error("unterminated quoted label")
                ch = self.text[self.pos]
                if ch == "'":
                    if self.text[self.pos : self.pos + 2] == "''":
                        out.append("'")
                        self.pos += 2
                        continue
                    self.pos += 1
                    break
                out.append(ch)
                self.pos += 1
            return "".join(out)
        out = []
        while self.peek() and self.peek() not in "(),:;":
            out.append(self.text[self.pos])
            self.pos += 1
        return "".join(out).strip()

    def take_number(self) -> float | None:
        if self.peek() != ":":
            return None
        self.pos += 1
        start = self.pos
        while self.peek() and self.peek() not in "(),;":
            self.pos += 1
        try:
            return float(self.text[start : self.pos])
        except ValueError:
            raise self.error("bad numeric annotation") from None

    def parse_node(self) -> dict:
        node: dict = {"children": [], "name": "", "value": None}
        if self.peek() == "(":
            self.pos += 1
            while True:
                node["children"].append(self.parse_node())
                if self.peek() == ",":
                    self.pos += 1
                    continue
                if self.peek() == ")":
                    self.pos += 1
                    break
                raise self.error("expected ',' or ')'")
            node["name"] = self.take_name()
        else:
            node["name"] = self.take_name()
            if not node["name"]:
                raise self.error("expected a leaf label")
        node["value"] = self.take_number()
        return node

    def parse(self) -> dict:
        node = self.parse_node()
        if self.peek() != ";":
            raise self.error("expected trailing ';'")
        return node


def hierarchy_from_newick(
    text: str, labels: list[str] | None = None, k: int | None = None
) -> tuple[Hierarchy, list[str], dict | None]:
    """Parse Newick into (hierarchy, leaf labels, heights-or-None).

    Leaf names are matched against ``labels`` when given; otherwise leaf
    indices follow the x1..xk convention or plain integers.
    """
    root = _NewickParser(text).parse()
    leaves: list[dict] = []

    def collect(node) -> None:
        if not node["children"]:
            leaves.append(node)
        for child in node["children"]:
            collect(child)

    collect(root)
    n = len(leaves)
    if k is not None and n != k:
        raise InputError(f"tree has {n} leaves, expected {k}")
    if labels is not None:
        if len(labels) != n:
            raise InputError(f"tree has {n} leaves but {len(labels)} labels were given")
        index = {name: i for i, name in enumerate(labels)}
        if len(index) != len(labels):
            raise InputError("duplicate labels")
    else:
        index = {}
        for leaf in leaves:
            name = leaf["name"]
            if name.startswith("x") and name[1:].isdigit():
                index[name] = int(name[1:]) - 1
            elif name.isdigit():
                index[name] = int(name)
            else:
                index = {leaf["name"]: i for i, leaf in enumerate(leaves)}
                break

    seen = set()
    for leaf in leaves:
        if leaf["name"] not in index:
            raise InputError(f"unknown leaf label {leaf['name']!r}")
        if leaf["name"] in seen:
            raise InputError(f"duplicate leaf label {leaf['name']!r}")
        seen.add(leaf["name"])

    clusters: list[Cluster] = []
    heights: dict[Cluster, float] = {}

    def build(node) -> int:
        if not node["children"]:
            mask = 1 << index[node["name"]]
        else:
            mask = 0
            for child in node["children"]:
                mask |= build(child)
            clusters.append(Cluster(mask, n))
        if node["value"] is not None:
            heights[Cluster(mask, n)] = float(node["value"])
        return mask

    build(root)
    h = Hierarchy(n, clusters)
    out_labels = labels if labels is not None else [
        name for name, _ in sorted(index.items(), key=lambda kv: kv[1])
    ]
    return h, list(out_labels), heights or None
