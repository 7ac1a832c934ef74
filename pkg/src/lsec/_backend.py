"""Select the compiled kernels when importable, else the NumPy fallback.

Set ``LSEC_BACKEND=python`` to force the fallback.
"""
import os

import numpy as np

from . import _fallback

BACKEND = "python"
_impl = _fallback

if os.environ.get("LSEC_BACKEND", "").lower() != "python":
    try:
        from . import _kernels as _impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:
        _impl = _fallback


_num_threads = 1


def get_num_threads():
    return _num_threads


def set_num_threads(num_threads):
    """Set the default worker count for kernels and per-task pools; returns the old value."""
    global _num_threads
    old = _num_threads
    _num_threads = max(1, int(num_threads))
    return old


def _threads(num_threads):
    return _num_threads if num_threads is None else max(1, int(num_threads))


def assign_nearest(X, C, num_threads=None, impl=None):
    impl = impl or _impl
    X = np.ascontiguousarray(X, dtype=np.float64)
    C = np.ascontiguousarray(C, dtype=np.float64)
    return impl.assign_nearest(X, C, _threads(num_threads))


def knn_candidates(X, L, cand, owner, K, num_threads=None, impl=None):
    impl = impl or _impl
    X = np.ascontiguousarray(X, dtype=np.float64)
    L = np.ascontiguousarray(L, dtype=np.float64)
    cand = np.ascontiguousarray(cand, dtype=np.int64)
    owner = np.ascontiguousarray(owner, dtype=np.int64)
    return impl.knn_candidates(X, L, cand, owner, int(K), _threads(num_threads))
