"""Numba switch.

Set ``MOTHERGRAPH_NUMBA=0`` to run every kernel on its pure-numpy path.
Numba's own ``NUMBA_DISABLE_JIT`` is honoured as well.
"""
import os

_flag = os.environ.get("MOTHERGRAPH_NUMBA", "1").strip().lower()
USE_NUMBA = _flag not in ("0", "false", "no", "off")

try:
    from numba import njit
except ImportError:  # pragma: no cover
    USE_NUMBA = False

    def njit(*args, **kwargs):
        if len(args) == 1 and callable(args[0]) and not kwargs:
            return args[0]
        return lambda f: f
