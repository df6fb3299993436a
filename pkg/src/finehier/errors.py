"""Exception types raised by the library.

Every error carries the offending data as attributes so callers (and the
CLI) can report actionable messages.
"""

from __future__ import annotations


class FinehierError(Exception):
    """Base class for all library errors."""


class InputError(FinehierError):
    """Malformed or inconsistent user input (CLI exit code 2)."""


class EmptyCluster(InputError):
    def __init__(self) -> None:
        super().__init__("clusters must be non-empty")


class LaminarityViolation(InputError):
    """Two clusters properly overlap: neither nested nor disjoint."""

    def __init__(self, u, v) -> None:
        self.u = u
        self.v = v
        super().__init__(f"clusters properly overlap: {u} and {v}")


class DimensionMismatch(InputError):
    def __init__(self, expected: int, got: int) -> None:
        self.expected = expected
        self.got = got
        super().__init__(f"item counts differ: expected k={expected}, got k={got}")


class Asymmetric(InputError):
    def __init__(self, x: int, y: int, delta: float) -> None:
        self.x = x
        self.y = y
        self.delta = delta
        super().__init__(f"matrix not symmetric at ({x}, {y}): difference {delta!r}")


class SelfDominanceViolation(InputError):
    """A diagonal entry does not strictly dominate its row."""

    def __init__(self, x: int, y: int) -> None:
        self.x = x
        self.y = y
        super().__init__(
            f"self score at item {x} does not strictly dominate score({x}, {y})"
        )


class NonFinite(InputError):
    def __init__(self, x: int, y: int) -> None:
        self.x = x
        self.y = y
        super().__init__(f"non-finite score at ({x}, {y})")


class RuleOrientationMismatch(InputError):
    def __init__(self, rule_name: str, orientation) -> None:
        self.rule_name = rule_name
        self.orientation = orientation
        super().__init__(f"rule {rule_name!r} is not defined for {orientation} scores")


class RuleSymmetryError(InputError):
    """An update rule changed value when the two merged clusters swapped roles."""

    def __init__(self, inputs: tuple, lhs: float, rhs: float) -> None:
        self.inputs = inputs
        self.lhs = lhs
        self.rhs = rhs
        super().__init__(
            f"update rule is not symmetric in the merged pair: f{inputs} gave "
            f"{lhs!r} vs {rhs!r} after swapping"
        )


class TooLarge(InputError):
    def __init__(self, k: int, cap: int) -> None:
        self.k = k
        self.cap = cap
        super().__init__(f"k={k} exceeds the exhaustive-enumeration cap {cap}")


class NotUltrametric(InputError):
    def __init__(self, triple: tuple[int, int, int]) -> None:
        self.triple = triple
        super().__init__(f"scores violate the ultrametric condition at triple {triple}")


class MonotonicityViolation(InputError):
    """Dendrogram heights are not strictly ordered along an ancestor chain."""

    def __init__(self, child, parent) -> None:
        self.child = child
        self.parent = parent
        super().__init__(
            f"height of {child} does not strictly dominate height of its parent {parent}"
        )
