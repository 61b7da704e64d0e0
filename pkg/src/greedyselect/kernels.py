"""Backend selection for the enumeration kernels.

Prefers the compiled extension (greedyselect._kernels); falls back to the
numpy implementation with identical semantics. The compiled core is limited
to 64 variables (the design envelope), so oversized inputs route to numpy.
"""

import numpy as np

from . import _kernels_py

try:
    from . import _kernels as _compiled
except ImportError:  # extension not built
    _compiled = None

HAVE_COMPILED = _compiled is not None
BACKEND = "compiled" if HAVE_COMPILED else "python"


def _backend(n):
    if _compiled is not None and n <= _compiled.MAX_DIM:
        return _compiled
    return _kernels_py


def _cmat(C):
    return np.ascontiguousarray(C, dtype=np.float64)


def _cvec(v):
    return np.ascontiguousarray(v, dtype=np.float64)


def best_r2_scan(C, b, k):
    C = _cmat(C)
    return _backend(C.shape[0]).best_r2_scan(C, _cvec(b), int(k))


def eig_range_scan(C, k):
    C = _cmat(C)
    return _backend(C.shape[0]).eig_range_scan(C, int(k))


def lam_extreme_scan(C, k, want_max):
    C = _cmat(C)
    return _backend(C.shape[0]).lam_extreme_scan(C, int(k), bool(want_max))


def ratio_scan(C, b, L, cand, gains, k, denom_tol, prune_floor):
    C = _cmat(C)
    L = np.ascontiguousarray(L, dtype=np.int64)
    cand = np.ascontiguousarray(cand, dtype=np.int64)
    return _backend(C.shape[0]).ratio_scan(
        C, _cvec(b), L, cand, _cvec(gains), int(k),
        float(denom_tol), float(prune_floor),
    )
