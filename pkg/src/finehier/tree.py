"""Item sets, laminar families, and rooted set-trees.

A hierarchy over items ``0..k-1`` is a laminar family of non-empty subsets
that contains every singleton and the full set.  Such a family is exactly
the vertex set of a rooted tree: the inclusion order gives the
ancestor/descendant structure, every internal vertex is the disjoint union
of its >= 2 children, and the root is the full set.

Clusters are fixed-capacity bitsets (a Python int mask plus the capacity
``k``); item labels live only in the I/O layer.  All types here are
immutable after construction and safe to share across threads.
"""

from __future__ import annotations

from typing import Iterable, Iterator

from .errors import DimensionMismatch, EmptyCluster, LaminarityViolation


class Cluster:
    """A non-empty subset of the items ``0..k-1``, stored as a bitmask."""

    __slots__ = ("mask", "k")

    def __init__(self, mask: int, k: int) -> None:
        if k <= 0:
            raise ValueError("capacity k must be positive")
        if mask == 0:
            raise EmptyCluster()
        if mask < 0 or mask >> k:
            raise ValueError(f"cluster members must lie in [0, {k})")
        object.__setattr__(self, "mask", mask)
        object.__setattr__(self, "k", k)

    def __setattr__(self, name, value):
        raise AttributeError("Cluster is immutable")

    def __reduce__(self):
        return (Cluster, (self.mask, self.k))

    @classmethod
    def from_members(cls, members: Iterable[int], k: int) -> "Cluster":
        mask = 0
        for x in members:
            x = int(x)
            if not 0 <= x < k:
                raise ValueError(f"item index {x} out of range [0, {k})")
            mask |= 1 << x
        return cls(mask, k)

    @classmethod
    def singleton(cls, x: int, k: int) -> "Cluster":
        return cls(1 << x, k)

    @classmethod
    def full_set(cls, k: int) -> "Cluster":
        return cls((1 << k) - 1, k)

    @property
    def members(self) -> tuple[int, ...]:
        return tuple(self)

    def __iter__(self) -> Iterator[int]:
        mask = self.mask
        while mask:
            low = mask & -mask
            yield low.bit_length() - 1
            mask ^= low

    def __len__(self) -> int:
        return self.mask.bit_count()

    def __contains__(self, x: int) -> bool:
        return 0 <= x < self.k and bool(self.mask >> x & 1)

    def min_member(self) -> int:
        return (self.mask & -self.mask).bit_length() - 1

    def issubset(self, other: "Cluster") -> bool:
        return self.mask & ~other.mask == 0

    def isdisjoint(self, other: "Cluster") -> bool:
        return self.mask & other.mask == 0

    def union(self, other: "Cluster") -> "Cluster":
        return Cluster(self.mask | other.mask, self.k)

    def complement_members(self) -> tuple[int, ...]:
        return tuple(x for x in range(self.k) if not self.mask >> x & 1)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Cluster)
            and self.mask == other.mask
            and self.k == other.k
        )

    def __hash__(self) -> int:
        return hash((self.mask, self.k))

    def __repr__(self) -> str:
        return f"Cluster({{{', '.join(map(str, self))}}}, k={self.k})"


def _canonical_key(c: Cluster) -> tuple:
    return (len(c), c.members)


class Hierarchy:
    """A laminar family containing all singletons and the full item set.

    The constructor implicitly adds the singletons and the full set, checks
    laminarity, and materialises the parent/child adjacency once (clusters
    sorted by cardinality, each linked to its smallest proper superset).
    Children are kept sorted by smallest member index so that display and
    serialization are deterministic.
    """

    def __init__(self, k: int, clusters: Iterable[Cluster] = ()) -> None:
        if k <= 0:
            raise ValueError("item count k must be positive")
        members: set[Cluster] = {Cluster.singleton(x, k) for x in range(k)}
        members.add(Cluster.full_set(k))
        for c in clusters:
            if not isinstance(c, Cluster):
                raise TypeError(f"expected Cluster, got {type(c).__name__}")
            if c.k != k:
                raise DimensionMismatch(k, c.k)
            members.add(c)

        ordered = sorted(members, key=_canonical_key)
        for i, u in enumerate(ordered):
            for v in ordered[i + 1 :]:
                inter = u.mask & v.mask
                if inter and inter != u.mask and inter != v.mask:
                    raise LaminarityViolation(u, v)

        # Smallest proper superset = parent; cardinality order guarantees we
        # meet children before their ancestors.
        parent: dict[Cluster, Cluster] = {}
        children: dict[Cluster, list[Cluster]] = {c: [] for c in ordered}
        for i, c in enumerate(ordered):
            for candidate in ordered[i + 1 :]:
                if len(candidate) > len(c) and c.issubset(candidate):
                    parent[c] = candidate
                    children[candidate].append(c)
                    break
        for kids in children.values():
            kids.sort(key=Cluster.min_member)

        self._k = k
        self._clusters = frozenset(ordered)
        self._ordered = tuple(ordered)
        self._parent = parent
        self._children = {c: tuple(kids) for c, kids in children.items()}

    @property
    def k(self) -> int:
        return self._k

    @property
    def clusters(self) -> frozenset[Cluster]:
        return self._clusters

    @property
    def sorted_clusters(self) -> tuple[Cluster, ...]:
        """All vertices in canonical order: by cardinality, then members."""
        return self._ordered

    @property
    def root(self) -> Cluster:
        return self._ordered[-1]

    @property
    def leaves(self) -> tuple[Cluster, ...]:
        return self._ordered[: self._k]

    @property
    def internal(self) -> tuple[Cluster, ...]:
        """Vertices with at least two members (includes the root for k >= 2)."""
        return self._ordered[self._k :]

    def parent(self, c: Cluster) -> Cluster | None:
        """The smallest proper superset of ``c``; None for the root."""
        return self._parent.get(c)

    def children(self, c: Cluster) -> tuple[Cluster, ...]:
        return self._children[c]

    def __contains__(self, c: Cluster) -> bool:
        return c in self._clusters

    def __len__(self) -> int:
        return len(self._clusters)

    def __iter__(self) -> Iterator[Cluster]:
        return iter(self._ordered)

    def is_binary(self) -> bool:
        return all(len(kids) in (0, 2) for kids in self._children.values())

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Hierarchy)
            and self._k == other._k
            and self._clusters == other._clusters
        )

    def __hash__(self) -> int:
        return hash((self._k, self._clusters))

    def __repr__(self) -> str:
        sets = ", ".join(f"{{{','.join(map(str, c))}}}" for c in self._ordered)
        return f"Hierarchy(k={self._k}, {{{sets}}})"


def hierarchy_from_clusters(k: int, clusters: Iterable[Cluster] = ()) -> Hierarchy:
    """Build the hierarchy spanned by ``clusters`` plus the forced members.

    Singletons and the full set are always added.  Raises
    LaminarityViolation if two supplied clusters properly overlap and
    EmptyCluster if an empty set sneaks in (Cluster construction forbids it).
    """
    return Hierarchy(k, clusters)


def contains(a: Hierarchy, b: Hierarchy) -> bool:
    """True iff every cluster of ``a`` is also a cluster of ``b``."""
    if a.k != b.k:
        raise DimensionMismatch(a.k, b.k)
    return a.clusters <= b.clusters


def lca(h: Hierarchy, x: int, y: int) -> Cluster:
    """Smallest cluster of ``h`` containing both items (the root always does)."""
    if not 0 <= x < h.k or not 0 <= y < h.k:
        raise ValueError(f"item indices must lie in [0, {h.k})")
    want = (1 << x) | (1 << y)
    node = Cluster.singleton(x, h.k)
    while node.mask & want != want:
        node = h.parent(node)  # type: ignore[assignment]  # root contains all
    return node


class MergeStep:
    """One agglomeration: the pair merged, the result, and the merge score."""

    __slots__ = ("index", "left", "right", "merged", "score")

    def __init__(
        self, index: int, left: Cluster, right: Cluster, score: float
    ) -> None:
        self.index = index
        self.left = left
        self.right = right
        self.merged = left.union(right)
        self.score = score

    def __repr__(self) -> str:
        return (
            f"MergeStep({self.index}: {self.left!r} + {self.right!r} "
            f"@ {self.score!r})"
        )


class MergeTrace(Hierarchy):
    """A binary hierarchy together with its merge history.

    Stores, per internal vertex, the 1-based iteration at which it was
    created and the pair score at merge time.  For k items the trace has
    exactly k-1 merge steps whose creation indices are 1..k-1, and every
    child is created before its parent.
    """

    def __init__(self, k: int, steps: Iterable[MergeStep]) -> None:
        steps = tuple(steps)
        if len(steps) != k - 1:
            raise ValueError(f"expected {k - 1} merge steps, got {len(steps)}")
        super().__init__(k, (s.merged for s in steps))
        born: dict[Cluster, int] = {}
        score: dict[Cluster, float] = {}
        for expected, s in enumerate(steps, start=1):
            if s.index != expected:
                raise ValueError("merge steps must carry creation indices 1..k-1")
            born[s.merged] = s.index
            score[s.merged] = s.score
        if len(born) != len(steps):
            raise ValueError("duplicate merged cluster in trace")
        for s in steps:
            for side in (s.left, s.right):
                if side in born and born[side] >= s.index:
                    raise ValueError("child created after its parent")
        if len(self.clusters) != (2 * k - 1 if k > 1 else 1):
            raise ValueError("trace is not a binary hierarchy")
        self._steps = steps
        self._born = born
        self._merge_score = score

    @property
    def steps(self) -> tuple[MergeStep, ...]:
        return self._steps

    def creation_index(self, c: Cluster) -> int | None:
        """1-based merge iteration that created ``c``; None for leaves."""
        return self._born.get(c)

    def merge_score(self, c: Cluster) -> float | None:
        return self._merge_score.get(c)
