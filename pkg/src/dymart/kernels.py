"""Kernel backend selection: compiled extension when available, else pure.

Set ``DYMART_PURE=1`` in the environment to force the pure-Python backend.
Both backends return bit-identical exact results; the compiled one only
accepts calls that pass :func:`fits_compiled`, so dispatch silently falls
back to pure Python outside that envelope (huge factors, extreme depths).
"""

import os

from . import _shiftcore_py as _py

if os.environ.get("DYMART_PURE"):
    _cy = None
else:
    try:
        from . import _shiftcore as _cy
    except ImportError:
        _cy = None

BACKEND = "cython" if _cy is not None else "python"

validate = _py.validate
subtree_sum = _py.subtree_sum


def fits_compiled(desc, n):
    """Every path product must fit int64 and every partial sum int128."""
    n_states, _, edges, max_num, max_dexp = desc
    if n > 63 or n_states > 64:
        return False
    if any(len(per_state) > 32 for per_state in edges):
        return False
    if max_num ** n >= 1 << 62:
        return False
    if (max_num ** n) << (n + max_dexp * n) >= 1 << 124:
        return False
    return True


def cell_value(desc, classes, n, k):
    if _cy is not None and fits_compiled(desc, n):
        return _cy.cell_value(desc, classes, n, k)
    return _py.cell_value(desc, classes, n, k)


def range_sum_max(desc, classes, n, a, b, want_max=True):
    if _cy is not None and fits_compiled(desc, n):
        return _cy.range_sum_max(desc, classes, n, a, b, want_max)
    return _py.range_sum_max(desc, classes, n, a, b, want_max)
