"""Backend selection for the scan kernel.

The compiled extension is preferred when it imported cleanly; the pure-Python
fallback has identical semantics.  Set ``ADMISSIBILITY_FORCE_PURE=1`` to force
the fallback (used by the equivalence tests and the benchmark).
"""

from __future__ import annotations

import os
from typing import Optional, Sequence

import numpy as np

if os.environ.get("ADMISSIBILITY_FORCE_PURE"):
    from . import _kernels_py as _backend

    _compiled = None
else:
    try:
        from . import _kernels as _backend  # type: ignore[attr-defined]

        _compiled = _backend
    except ImportError:
        from . import _kernels_py as _backend

        _compiled = None

BACKEND = _backend.BACKEND_NAME


def backend_available(name: str) -> bool:
    if name == "pure-python":
        return True
    if name == "compiled":
        if _compiled is not None:
            return True
        try:
            from . import _kernels  # noqa: F401

            return True
        except ImportError:
            return False
    return False


def scan_assignments(group, cand_lists: Sequence[Sequence[int]],
                     programs: Sequence[Sequence[int]], *,
                     check_generation: bool, find_first: bool,
                     backend: Optional[str] = None):
    """Enumerate candidate tuples for the group; see the backend docstrings.

    Returns (hits, first_witness_or_None, scanned).
    """
    impl = _backend
    if backend == "pure-python":
        from . import _kernels_py as impl  # type: ignore[no-redef]
    elif backend == "compiled":
        from . import _kernels as impl  # type: ignore[no-redef]
    if impl.BACKEND_NAME == "compiled":
        table = group.table
        inverse = group.inverse_array
        cands = [np.ascontiguousarray(list(c), dtype=np.intc) for c in cand_lists]
        progs = [np.ascontiguousarray(list(p), dtype=np.intc) for p in programs]
        return impl.scan_assignments(table, inverse, group.identity, group.order,
                                     cands, progs, check_generation, find_first)
    rows = group.rows()
    inverse = group.inverse_array.tolist()
    cands = [list(c) for c in cand_lists]
    progs = [list(p) for p in programs]
    return impl.scan_assignments(rows, inverse, group.identity, group.order,
                                 cands, progs, check_generation, find_first)
