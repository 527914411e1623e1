"""Kernel backend selection.

Prefers the compiled int64 Smith-normal-form kernel when the extension
built; falls back to the pure-Python kernel at import time and, per
call, whenever the compiled kernel overflows.  Both kernels follow the
same pivot rule, so the selected backend never changes the output.
"""

from __future__ import annotations

from . import _snf_py

try:
    from . import _snf_cy
except ImportError:  # extension not built; pure Python only
    _snf_cy = None

COMPILED_AVAILABLE = _snf_cy is not None
BACKEND = "compiled" if COMPILED_AVAILABLE else "python"


def snf_with_transforms(mat):
    """(U, S, V, Uinv, Vinv) with U@mat@V = S, via the active backend."""
    if _snf_cy is not None:
        try:
            return _snf_cy.snf_with_transforms(mat)
        except OverflowError:
            pass
    return _snf_py.snf_with_transforms(mat)
