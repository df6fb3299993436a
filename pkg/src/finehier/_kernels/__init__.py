"""Kernel backend selection.

The compiled Cython backend is preferred when it imported successfully;
set FINEHIER_PURE_KERNELS=1 to force the numpy fallback.  Both backends
expose the same functions with identical float semantics.
"""

from __future__ import annotations

import os

from . import pure

if os.environ.get("FINEHIER_PURE_KERNELS"):
    impl = pure
else:
    try:
        from . import _fast as impl  # type: ignore[no-redef]
    except ImportError:
        impl = pure

BACKEND: str = impl.NAME

valid_subset_masks = impl.valid_subset_masks
tree_gaps = impl.tree_gaps
linkage_merges = impl.linkage_merges
