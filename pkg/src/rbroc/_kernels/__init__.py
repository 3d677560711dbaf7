"""Batch kernel dispatch: compiled extension when built, numpy fallback otherwise.

Both backends implement the same five operations with the same accumulation
order, so switching backends never changes a result bit. BACKEND names the
one in use; RBROC_KERNEL_BACKEND=reference forces the fallback (useful for
benchmarking and parity checks).
"""

from __future__ import annotations

import os

import numpy as np

from . import _ref
from ._ref import MODE_ERROR, MODE_FNDR, MODE_WEIGHTED

try:
    from . import _fast
    HAVE_COMPILED = True
except ImportError:
    _fast = None
    HAVE_COMPILED = False

if os.environ.get("RBROC_KERNEL_BACKEND", "").lower() in {"reference", "ref", "numpy"}:
    _impl = _ref
    BACKEND = "reference"
elif HAVE_COMPILED:
    _impl = _fast
    BACKEND = "compiled"
else:
    _impl = _ref
    BACKEND = "reference"

__all__ = [
    "BACKEND",
    "HAVE_COMPILED",
    "MODE_ERROR",
    "MODE_WEIGHTED",
    "MODE_FNDR",
    "discrete_auc_batch",
    "discrete_copt_batch",
    "process_auc_batch",
    "step_copt_batch",
    "cdf_at_batch",
]


def _c64(a: np.ndarray) -> np.ndarray:
    return np.ascontiguousarray(a, dtype=np.float64)


def discrete_auc_batch(p_nd, p_d):
    return _impl.discrete_auc_batch(_c64(p_nd), _c64(p_d))


def discrete_copt_batch(p_nd, p_d, w):
    return np.asarray(_impl.discrete_copt_batch(_c64(p_nd), _c64(p_d), _c64(w)))


def process_auc_batch(w_nd, a_nd, w_d, a_d):
    return _impl.process_auc_batch(_c64(w_nd), _c64(a_nd), _c64(w_d), _c64(a_d))


def step_copt_batch(w_nd, a_nd, w_d, a_d, w, mode):
    return _impl.step_copt_batch(
        _c64(w_nd), _c64(a_nd), _c64(w_d), _c64(a_d), _c64(w), int(mode)
    )


def cdf_at_batch(w_sorted, a_sorted, c):
    return _impl.cdf_at_batch(_c64(w_sorted), _c64(a_sorted), _c64(c))
