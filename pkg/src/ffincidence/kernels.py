"""Hot-loop dispatch: the compiled core when importable, else the numpy fallback.

``BACKEND`` names the implementation picked at import.  :func:`use` switches
it at runtime (benchmarks and the backend-equivalence tests rely on this).
"""
from __future__ import annotations

import numpy as np

from . import _pykernels

try:
    from . import _kernels as _compiled
except ImportError:  # extension not built
    _compiled = None

BACKENDS = ("compiled", "numpy") if _compiled is not None else ("numpy",)
_impl = _compiled if _compiled is not None else _pykernels
BACKEND = BACKENDS[0]


def use(name: str) -> None:
    """Select the backend by name ("compiled" or "numpy")."""
    global _impl, BACKEND
    if name == "compiled":
        if _compiled is None:
            raise ImportError("compiled kernels are not built")
        _impl = _compiled
    elif name == "numpy":
        _impl = _pykernels
    else:
        raise ValueError(f"unknown backend {name!r}")
    BACKEND = name


def _i32(a) -> np.ndarray:
    return np.ascontiguousarray(a, dtype=np.int32)


def _as_rows(a, k: int | None = None) -> np.ndarray:
    a = _i32(a)
    if a.ndim == 1:
        a = a.reshape(-1, k if k is not None else 1)
    return a


def trace_hist(trmul, freqs, pts, p: int) -> np.ndarray:
    """int64 (len(freqs), p): counts of ``Tr(m . x) mod p`` over ``x in pts``."""
    freqs, pts = _as_rows(freqs), _as_rows(pts)
    if len(freqs) == 0 or len(pts) == 0:
        return np.zeros((len(freqs), p), dtype=np.int64)
    return _impl.trace_hist(_i32(trmul), freqs, pts, int(p))


def pair_form_hist(X, Y, sub, sqsign, add) -> np.ndarray:
    """int64 (q,): histogram of the diagonal form ``sum_j sqsign[j](x_j - y_j)``."""
    X, Y = _as_rows(X), _as_rows(Y)
    if len(X) == 0 or len(Y) == 0:
        return np.zeros(len(sub), dtype=np.int64)
    return _impl.pair_form_hist(X, Y, _i32(sub), _i32(sqsign), _i32(add))


def pair_form_match(X, Y, target, sub, sqsign, add) -> int:
    """Pairs whose form value ``(x - y)`` equals the per-``y`` target."""
    X, Y = _as_rows(X), _as_rows(Y)
    if len(X) == 0 or len(Y) == 0:
        return 0
    return int(_impl.pair_form_match(X, Y, _i32(target), _i32(sub), _i32(sqsign), _i32(add)))


def shift_member_count(W, E, sub, mask, q: int) -> int:
    """``sum over x in W, z in E of mask[x - z]`` with ``mask`` indexed lexicographically."""
    W, E = _as_rows(W), _as_rows(E)
    if len(W) == 0 or len(E) == 0:
        return 0
    return int(_impl.shift_member_count(W, E, _i32(sub), np.ascontiguousarray(mask, dtype=np.uint8), int(q)))
