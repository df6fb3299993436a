#!/usr/bin/env python3
"""Compare the compiled kernels against the numpy fallback.

Times the three hot paths on random inputs: subset enumeration, whole-tree
gap sweeps, and the linkage inner loop (compiled kernel vs the generic
engine).  Run after building the extension:

    python3 benchmarks/bench_kernels.py
"""

import time

import numpy as np

from finehier import BUILTIN_RULES, Orientation, run_linkage
from finehier._kernels import pure
from finehier.sampling import random_hierarchy, random_pair_matrix
from finehier.validity import _tree_arrays

try:
    from finehier._kernels import _fast
except ImportError:
    _fast = None


def timeit(fn, *args, repeat=3, **kwargs):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args, **kwargs)
        best = min(best, time.perf_counter() - t0)
    return best


def row(label, t_pure, t_fast):
    speedup = f"{t_pure / t_fast:7.1f}x" if t_fast else "      -"
    fast = f"{t_fast * 1e3:10.2f}" if t_fast else "         -"
    print(f"{label:<44} {t_pure * 1e3:10.2f} {fast} {speedup}")


def main():
    rng = np.random.default_rng(0)
    print(f"{'benchmark':<44} {'pure (ms)':>10} {'fast (ms)':>10} {'speedup':>8}")

    for k in (14, 16, 18):
        m = random_pair_matrix(k, Orientation.SIMILARITY, rng)
        s = m.signed()
        tp = timeit(pure.valid_subset_masks, s, 0.0)
        tf = timeit(_fast.valid_subset_masks, s, 0.0) if _fast else None
        row(f"valid_subset_masks k={k} (2^{k} subsets)", tp, tf)

    for k in (200, 500):
        m = random_pair_matrix(k, Orientation.DISSIMILARITY, rng)
        h = random_hierarchy(k, rng, keep_prob=1.0)
        arrays = _tree_arrays(h)[1:]
        tp = timeit(pure.tree_gaps, m.signed(), *arrays, False)
        tf = timeit(_fast.tree_gaps, m.signed(), *arrays, False) if _fast else None
        row(f"tree_gaps k={k} ({len(arrays[0])} vertices)", tp, tf)

    for k, name in ((150, "single"), (150, "ward"), (400, "avg-weighted")):
        orient = (
            Orientation.DISSIMILARITY
            if name == "ward"
            else Orientation.SIMILARITY
        )
        m = random_pair_matrix(k, orient, rng)
        rule = BUILTIN_RULES[name]
        tp = timeit(run_linkage, m, rule, engine="python")
        tf = timeit(run_linkage, m, rule, engine="kernel") if _fast else None
        row(f"linkage k={k} rule={name}", tp, tf)

    if _fast is None:
        print("\ncompiled backend unavailable: build with pip install -e .")


if __name__ == "__main__":
    main()
