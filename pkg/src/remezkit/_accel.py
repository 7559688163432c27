"""Numba switch.

Set ``REMEZKIT_DISABLE_NUMBA=1`` to run every kernel on its pure numpy /
interpreted path.  The flag is read once, at import time.
"""
import os

_DISABLED = os.environ.get("REMEZKIT_DISABLE_NUMBA", "0").strip().lower() in ("1", "true", "yes")

try:
    if _DISABLED:
        raise ImportError
    from numba import njit as _njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - depends on environment
    _njit = None
    HAVE_NUMBA = False


def jit(func=None, **kwargs):
    """``numba.njit(cache=True)`` when enabled, identity otherwise.

    The undecorated function is always reachable as ``.py_func``.
    """

    def wrap(f):
        if not HAVE_NUMBA:
            f.py_func = f
            return f
        opts = {"cache": True}
        opts.update(kwargs)
        return _njit(**opts)(f)

    if func is None:
        return wrap
    return wrap(func)


def backend_name() -> str:
    return "numba" if HAVE_NUMBA else "numpy"
