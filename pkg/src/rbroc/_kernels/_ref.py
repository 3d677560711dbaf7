"""Reference batch kernels in plain numpy.

Accumulation-order contract shared with the compiled backend: every running
sum is a left-to-right sequential prefix (np.cumsum, never np.sum, which
pairs terms), so the two backends agree bit for bit. Inputs are float64;
atom arrays are sorted ascending within each row by the caller.
"""

from __future__ import annotations

import numpy as np

MODE_ERROR = 0      # prevalence-weighted error, +/-inf sentinels, ties -> smallest
MODE_WEIGHTED = 1   # chosen-weight error, no sentinels, ties -> largest
MODE_FNDR = 2       # false non-discovery rate, no sentinels, ties -> largest


def discrete_auc_batch(p_nd: np.ndarray, p_d: np.ndarray) -> np.ndarray:
    """Per-row P(X_D > X_ND) for probability vectors on a shared finite support."""
    fd = np.cumsum(p_d, axis=1)
    terms = p_nd * (1.0 - fd)
    return np.cumsum(terms, axis=1)[:, -1]


def discrete_copt_batch(p_nd: np.ndarray, p_d: np.ndarray, w: np.ndarray) -> np.ndarray:
    """Index of the error-minimizing cutoff per row; m means the +inf sentinel.

    Column j is the error at the j-th support point; first-occurrence argmin
    realizes the smallest-finite tie rule, and +inf wins only strictly.
    """
    fd = np.cumsum(p_d, axis=1)
    fnd = np.cumsum(p_nd, axis=1)
    wc = w[:, None]
    errs = wc * fd + (1.0 - wc) * (1.0 - fnd)
    full = np.concatenate([errs, wc], axis=1)
    return np.argmin(full, axis=1)


def process_auc_batch(
    w_nd: np.ndarray, a_nd: np.ndarray, w_d: np.ndarray, a_d: np.ndarray
) -> np.ndarray:
    """Per-row AUC of two discrete mixtures given as (weights, sorted atoms)."""
    n = w_nd.shape[0]
    out = np.empty(n)
    for r in range(n):
        cum_d = np.cumsum(w_d[r])
        pos = np.searchsorted(a_d[r], a_nd[r], side="right")
        fd = np.where(pos > 0, cum_d[np.maximum(pos - 1, 0)], 0.0)
        terms = w_nd[r] * (1.0 - fd)
        out[r] = np.cumsum(terms)[-1]
    return out


def step_copt_batch(
    w_nd: np.ndarray,
    a_nd: np.ndarray,
    w_d: np.ndarray,
    a_d: np.ndarray,
    w: np.ndarray,
    mode: int,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Criterion-minimizing cutoff per row over the union of both atom sets.

    Returns (cutoff, fnr, fpr) at the chosen cutoff. Candidates where the
    FNDR denominator is zero are excluded. Mode semantics per the module
    constants; only MODE_ERROR admits the infinite sentinels.
    """
    n = w_nd.shape[0]
    cut = np.empty(n)
    fnr = np.empty(n)
    fpr = np.empty(n)
    for r in range(n):
        cand = np.concatenate([a_nd[r], a_d[r]])
        cand = cand[np.argsort(cand, kind="stable")]
        cum_nd = np.cumsum(w_nd[r])
        cum_d = np.cumsum(w_d[r])
        p1 = np.searchsorted(a_nd[r], cand, side="right")
        p2 = np.searchsorted(a_d[r], cand, side="right")
        fnd_at = np.where(p1 > 0, cum_nd[np.maximum(p1 - 1, 0)], 0.0)
        fd_at = np.where(p2 > 0, cum_d[np.maximum(p2 - 1, 0)], 0.0)
        wr = w[r]
        if mode == MODE_FNDR:
            num = wr * fd_at
            den = num + (1.0 - wr) * fnd_at
            vals = np.where(den > 0.0, num / den, np.inf)
        else:
            vals = wr * fd_at + (1.0 - wr) * (1.0 - fnd_at)
        if mode == MODE_ERROR:
            j = int(np.argmin(vals))
            c, v = float(cand[j]), float(vals[j])
            fd_c, fnd_c = float(fd_at[j]), float(fnd_at[j])
            if wr < v:
                c, v, fd_c, fnd_c = np.inf, float(wr), 1.0, 1.0
            if (1.0 - wr) < v:
                c, fd_c, fnd_c = -np.inf, 0.0, 0.0
            cut[r], fnr[r], fpr[r] = c, fd_c, 1.0 - fnd_c
        else:
            j = len(vals) - 1 - int(np.argmin(vals[::-1]))
            cut[r], fnr[r], fpr[r] = float(cand[j]), float(fd_at[j]), 1.0 - float(fnd_at[j])
    return cut, fnr, fpr


def cdf_at_batch(w_sorted: np.ndarray, a_sorted: np.ndarray, c: np.ndarray) -> np.ndarray:
    """Per-row cdf of a discrete mixture evaluated at the row's cutoff c[r]."""
    n = w_sorted.shape[0]
    cnt = (a_sorted <= c[:, None]).sum(axis=1)
    cum = np.cumsum(w_sorted, axis=1)
    return np.where(cnt > 0, cum[np.arange(n), np.maximum(cnt - 1, 0)], 0.0)
