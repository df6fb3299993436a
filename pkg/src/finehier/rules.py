"""Agglomerative update rules.

When clusters t1 and t2 merge, the score between t1 u t2 and a third
cluster t3 is

    f(q12, q23, q31, n1, n2, n3)

where q12, q23, q31 are the pairwise scores among t1, t2, t3 and n1, n2,
n3 their sizes.  Because t1 u t2 = t2 u t1, every rule must satisfy

    f(q12, q23, q31, n1, n2, n3) == f(q12, q31, q23, n2, n1, n3).

Built-in rules (similarity orientation; single and complete flip their
extremum under dissimilarity, the averages are orientation-free):

    single        max(q23, q31)
    complete      min(q23, q31)
    avg-weighted  (n1*q31 + n2*q23) / (n1 + n2)
    avg-unweighted (q31 + q23) / 2

plus the parametric family  eta1*q31 + eta2*q23 + beta*q12
+ gamma*|q31 - q23|  covering ward, median, and centroid (dissimilarity
only), with coefficients depending on the three sizes.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import RuleOrientationMismatch, RuleSymmetryError
from .matrix import Orientation

BOTH = frozenset((Orientation.SIMILARITY, Orientation.DISSIMILARITY))
DISSIMILARITY_ONLY = frozenset((Orientation.DISSIMILARITY,))

# Kernel dispatch ids shared with _kernels._fast.
KERNEL_SINGLE = 1
KERNEL_COMPLETE = 2
KERNEL_AVG_WEIGHTED = 3
KERNEL_AVG_UNWEIGHTED = 4
KERNEL_WARD = 5
KERNEL_MEDIAN = 6
KERNEL_CENTROID = 7
KERNEL_LW_CONST = 8


@dataclass(frozen=True)
class LinkageRule:
    """An update rule plus the orientations it is defined for.

    ``fn`` is the scalar update; ``fn_many`` the vectorised form used by
    the generic engine (q23, q31, n3 are arrays).  ``kernel_id`` selects
    the compiled fast path when available; ``lw_coeffs`` carries constant
    Lance-Williams coefficients for the compiled path.
    """

    name: str
    fn: Callable = field(repr=False)
    fn_many: Callable = field(repr=False)
    orientations: frozenset = BOTH
    kernel_id: int | None = None
    lw_coeffs: tuple[float, float, float, float] | None = None

    def supports(self, orientation: Orientation) -> bool:
        return orientation in self.orientations

    def require(self, orientation: Orientation) -> None:
        if not self.supports(orientation):
            raise RuleOrientationMismatch(self.name, orientation)


def apply_rule(
    rule: LinkageRule,
    q12: float,
    q23: float,
    q31: float,
    n1: int,
    n2: int,
    n3: int,
    orientation: Orientation,
) -> float:
    """Score between the merged pair and a third cluster."""
    if min(n1, n2, n3) < 1:
        raise ValueError("cluster sizes must be >= 1")
    rule.require(orientation)
    return rule.fn(q12, q23, q31, n1, n2, n3, orientation)


# --- built-in update functions ------------------------------------------

def _single(q12, q23, q31, n1, n2, n3, orientation):
    if orientation is Orientation.SIMILARITY:
        return max(q23, q31)
    return min(q23, q31)


def _single_many(q12, q23, q31, n1, n2, n3, orientation):
    if orientation is Orientation.SIMILARITY:
        return np.maximum(q23, q31)
    return np.minimum(q23, q31)


def _complete(q12, q23, q31, n1, n2, n3, orientation):
    if orientation is Orientation.SIMILARITY:
        return min(q23, q31)
    return max(q23, q31)


def _complete_many(q12, q23, q31, n1, n2, n3, orientation):
    if orientation is Orientation.SIMILARITY:
        return np.minimum(q23, q31)
    return np.maximum(q23, q31)


def _avg_weighted(q12, q23, q31, n1, n2, n3, orientation):
    # Equal inputs return exactly that value; the blended form can drift
    # by an ulp, which would break the exact fix-point law.
    if q31 == q23:
        return q23
    return (n1 * q31 + n2 * q23) / (n1 + n2)


def _avg_weighted_many(q12, q23, q31, n1, n2, n3, orientation):
    return np.where(q31 == q23, q23, (n1 * q31 + n2 * q23) / (n1 + n2))


def _avg_unweighted(q12, q23, q31, n1, n2, n3, orientation):
    return (q31 + q23) / 2.0


def _avg_unweighted_many(q12, q23, q31, n1, n2, n3, orientation):
    return (q31 + q23) / 2.0


def _lw_combine(q12, q23, q31, e1, e2, b, g):
    v = e1 * q31 + e2 * q23 + b * q12
    if g != 0.0:
        v += g * abs(q31 - q23)
    return v


def _ward(q12, q23, q31, n1, n2, n3, orientation):
    t = n1 + n2 + n3
    return _lw_combine(q12, q23, q31, (n1 + n3) / t, (n2 + n3) / t, -n3 / t, 0.0)


def _ward_many(q12, q23, q31, n1, n2, n3, orientation):
    t = n1 + n2 + n3
    return (n1 + n3) / t * q31 + (n2 + n3) / t * q23 + -n3 / t * q12


def _median(q12, q23, q31, n1, n2, n3, orientation):
    t = n1 + n2
    return _lw_combine(q12, q23, q31, n1 / t, n2 / t, -(n1 * n2) / (t * t), 0.0)


def _median_many(q12, q23, q31, n1, n2, n3, orientation):
    t = n1 + n2
    return n1 / t * q31 + n2 / t * q23 + -(n1 * n2) / (t * t) * q12


def _centroid(q12, q23, q31, n1, n2, n3, orientation):
    return _lw_combine(q12, q23, q31, 0.5, 0.5, -0.25, 0.0)


def _centroid_many(q12, q23, q31, n1, n2, n3, orientation):
    return 0.5 * q31 + 0.5 * q23 + -0.25 * q12


def _lw_const_fn(consts, q12, q23, q31, n1, n2, n3, orientation):
    return _lw_combine(q12, q23, q31, *consts)


def _lw_const_many(consts, q12, q23, q31, n1, n2, n3, orientation):
    e1, e2, b, g = consts
    v = e1 * q31 + e2 * q23 + b * q12
    if g != 0.0:
        v = v + g * np.abs(q31 - q23)
    return v


SINGLE = LinkageRule("single", _single, _single_many, BOTH, KERNEL_SINGLE)
COMPLETE = LinkageRule("complete", _complete, _complete_many, BOTH, KERNEL_COMPLETE)
AVG_WEIGHTED = LinkageRule(
    "avg-weighted", _avg_weighted, _avg_weighted_many, BOTH, KERNEL_AVG_WEIGHTED
)
AVG_UNWEIGHTED = LinkageRule(
    "avg-unweighted", _avg_unweighted, _avg_unweighted_many, BOTH, KERNEL_AVG_UNWEIGHTED
)
WARD = LinkageRule("ward", _ward, _ward_many, DISSIMILARITY_ONLY, KERNEL_WARD)
MEDIAN = LinkageRule("median", _median, _median_many, DISSIMILARITY_ONLY, KERNEL_MEDIAN)
CENTROID = LinkageRule(
    "centroid", _centroid, _centroid_many, DISSIMILARITY_ONLY, KERNEL_CENTROID
)

BUILTIN_RULES: dict[str, LinkageRule] = {
    r.name: r
    for r in (SINGLE, COMPLETE, AVG_WEIGHTED, AVG_UNWEIGHTED, WARD, MEDIAN, CENTROID)
}

# The four rules that recover the finest valid hierarchy after trimming.
CONFORMING_RULES = (SINGLE, COMPLETE, AVG_WEIGHTED, AVG_UNWEIGHTED)


def rule_from_name(name: str) -> LinkageRule:
    try:
        return BUILTIN_RULES[name]
    except KeyError:
        raise ValueError(
            f"unknown rule {name!r}; choose from {sorted(BUILTIN_RULES)}"
        ) from None


def _spot_check_symmetry(name: str, fn, orientations) -> None:
    # 64 seeded random probes of the swap identity; cheap guard against a
    # mis-specified rule.  Exact equality: an ulp of drift is real
    # order-dependence and would leak into golden outputs.
    rng = np.random.default_rng(0x5EED)
    for _ in range(64):
        q12, q23, q31 = rng.uniform(0.0, 10.0, 3)
        n1, n2, n3 = (int(v) for v in rng.integers(1, 17, 3))
        for orientation in orientations:
            lhs = fn(q12, q23, q31, n1, n2, n3, orientation)
            rhs = fn(q12, q31, q23, n2, n1, n3, orientation)
            if lhs != rhs:
                raise RuleSymmetryError((q12, q23, q31, n1, n2, n3), lhs, rhs)


def custom_rule(f: Callable, name: str = "custom", orientations=BOTH) -> LinkageRule:
    """Wrap a user update function f(q12, q23, q31, n1, n2, n3).

    The swap-symmetry identity is spot-checked on 64 random inputs;
    RuleSymmetryError is raised on the first violation.
    """

    def fn(q12, q23, q31, n1, n2, n3, orientation):
        return f(q12, q23, q31, n1, n2, n3)

    def fn_many(q12, q23, q31, n1, n2, n3, orientation):
        return np.array(
            [f(q12, b, c, n1, n2, int(n)) for b, c, n in zip(q23, q31, n3)]
        )

    orientations = frozenset(orientations)
    _spot_check_symmetry(name, fn, orientations)
    return LinkageRule(name, fn, fn_many, orientations)


def lance_williams(
    eta1,
    eta2,
    beta,
    gamma=0.0,
    name: str = "lance-williams",
    orientations=BOTH,
) -> LinkageRule:
    """Parametric rule eta1*q31 + eta2*q23 + beta*q12 + gamma*|q31 - q23|.

    Coefficients may be constants or callables of the three sizes
    (n1, n2, n3).  Symmetry requires eta1(n1,n2,n3) == eta2(n2,n1,n3) and
    beta, gamma symmetric in their first two sizes; this is spot-checked.
    """
    coeffs = [eta1, eta2, beta, gamma]
    callables = [c for c in coeffs if callable(c)]

    if not callables:
        consts = tuple(float(c) for c in coeffs)
        # partials of module-level functions keep the rule picklable
        fn = functools.partial(_lw_const_fn, consts)
        fn_many = functools.partial(_lw_const_many, consts)
        orientations = frozenset(orientations)
        _spot_check_symmetry(name, fn, orientations)
        return LinkageRule(
            name, fn, fn_many, orientations,
            kernel_id=KERNEL_LW_CONST, lw_coeffs=consts,
        )

    def coeff(c, n1, n2, n3):
        return c(n1, n2, n3) if callable(c) else float(c)

    def fn(q12, q23, q31, n1, n2, n3, orientation):
        return _lw_combine(
            q12, q23, q31,
            coeff(eta1, n1, n2, n3), coeff(eta2, n1, n2, n3),
            coeff(beta, n1, n2, n3), coeff(gamma, n1, n2, n3),
        )

    def fn_many(q12, q23, q31, n1, n2, n3, orientation):
        return np.array(
            [
                fn(q12, b, c, n1, n2, int(n), orientation)
                for b, c, n in zip(q23, q31, n3)
            ]
        )

    orientations = frozenset(orientations)
    _spot_check_symmetry(name, fn, orientations)
    return LinkageRule(name, fn, fn_many, orientations)
