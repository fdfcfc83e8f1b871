"""Optional numba acceleration.

Hot loops are written in a numba-compatible style and decorated with
maybe_njit.  When numba is importable they compile to machine code with the
GIL released; otherwise the same Python function runs unchanged, so results
are identical either way, only slower.  Set HYPERGIANT_NO_JIT=1 to force the
pure Python path.
"""

from __future__ import annotations

import os

_DISABLED = os.environ.get("HYPERGIANT_NO_JIT", "") not in ("", "0")

if not _DISABLED:
    try:
        from numba import njit as _njit
    except ImportError:  # pragma: no cover
        _njit = None
else:  # pragma: no cover
    _njit = None


def maybe_njit(func=None, **kwargs):
    if _njit is None:
        return func if func is not None else (lambda f: f)
    kwargs.setdefault("cache", True)
    kwargs.setdefault("nogil", True)
    if func is not None:
        return _njit(**kwargs)(func)
    return lambda f: _njit(**kwargs)(f)
