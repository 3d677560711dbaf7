"""Shared report-section builders for the Monte Carlo pipelines.

Rates can be undefined for particular draws (0/0 ratios) and cutoffs can be
infinite; these helpers keep the bookkeeping in one place so every model
reports them the same way.
"""

from __future__ import annotations

import numpy as np

from .rb_core import (
    DensityHistogram,
    Grid,
    rb_summary,
    relative_belief,
)

__all__ = ["rate_rb", "finite_unit_histogram", "cutoff_section"]


def _weighted_hist(
    vals: np.ndarray, grid: Grid, weights: np.ndarray | None
) -> DensityHistogram:
    edges = grid.edges()
    idx = np.searchsorted(edges, vals, side="left") - 1
    clamped = int(((idx < 0) | (idx >= grid.n_bins)).sum())
    idx = np.clip(idx, 0, grid.n_bins - 1)
    if weights is None:
        counts = np.bincount(idx, minlength=grid.n_bins).astype(float)
        total = float(vals.size)
    else:
        counts = np.bincount(idx, weights=weights, minlength=grid.n_bins)
        total = float(weights.sum())
    return DensityHistogram(
        grid=grid, mass=counts / total, n_draws=int(vals.size), clamped=clamped
    )


def rate_rb(
    prior_vals: np.ndarray,
    post_vals: np.ndarray,
    grid: Grid,
    prior_weights: np.ndarray | None = None,
    post_weights: np.ndarray | None = None,
) -> dict:
    """RB summary for one error rate; NaN draws are excluded and counted."""
    undefined = {
        "prior": int(np.isnan(prior_vals).sum()),
        "posterior": int(np.isnan(post_vals).sum()),
    }
    pr_m = ~np.isnan(prior_vals)
    po_m = ~np.isnan(post_vals)
    if not pr_m.any() or not po_m.any():
        return {"undefined": undefined, "skipped": "all draws undefined"}
    prior_h = _weighted_hist(
        prior_vals[pr_m], grid, None if prior_weights is None else prior_weights[pr_m]
    )
    post_h = _weighted_hist(
        post_vals[po_m], grid, None if post_weights is None else post_weights[po_m]
    )
    out = rb_summary(prior_h, post_h, relative_belief(prior_h, post_h))
    out["undefined"] = undefined
    return out


def finite_unit_histogram(
    u: np.ndarray, weights: np.ndarray | None, grid: Grid
) -> tuple[DensityHistogram, float, float, int]:
    """Histogram of unit-interval cutoff draws, keeping sentinel mass separate.

    u holds the arctan-mapped cutoffs: 0.0 and 1.0 are exactly the infinite
    sentinels and are excluded from the bins but included in the normalizing
    total, so bin masses plus sentinel masses sum to one. NaN draws (cutoffs
    with an undefined closed form) are dropped from the total and counted.
    Returns (histogram, mass at -inf, mass at +inf, nan count).
    """
    nan_mask = np.isnan(u)
    n_nan = int(nan_mask.sum())
    uv = u[~nan_mask]
    wv = np.ones(uv.size) if weights is None else weights[~nan_mask]
    total = float(wv.sum())
    if total <= 0.0:
        raise ValueError("no weight on defined cutoff draws")
    neg = uv == 0.0
    pos = uv == 1.0
    fin = ~neg & ~pos
    edges = grid.edges()
    idx = np.searchsorted(edges, uv[fin], side="left") - 1
    clamped = int(((idx < 0) | (idx >= grid.n_bins)).sum())
    idx = np.clip(idx, 0, grid.n_bins - 1)
    counts = np.bincount(idx, weights=wv[fin], minlength=grid.n_bins)
    hist = DensityHistogram(
        grid=grid, mass=counts / total, n_draws=int(uv.size), clamped=clamped
    )
    return hist, float(wv[neg].sum() / total), float(wv[pos].sum() / total), n_nan


def _map_unit(u: float, transform) -> float:
    return float(transform(u))


def cutoff_section(
    prior_u: np.ndarray,
    post_u: np.ndarray,
    grid: Grid,
    transform,
    prior_weights: np.ndarray | None = None,
    post_weights: np.ndarray | None = None,
) -> dict:
    """Full cutoff report: RB on the unit scale, mapped back to the raw scale.

    transform maps unit-scale values to cutoffs (inverse of the arctan map).
    The RB curve, estimate, and plausible region are computed on the unit
    grid; the estimate and region endpoints are also reported mapped back.
    """
    prior_h, prior_neg, prior_pos, prior_nan = finite_unit_histogram(
        prior_u, prior_weights, grid
    )
    post_h, post_neg, post_pos, post_nan = finite_unit_histogram(
        post_u, post_weights, grid
    )
    res = relative_belief(prior_h, post_h)
    sec = {"unit": rb_summary(prior_h, post_h, res)}
    sec["estimate"] = _map_unit(res.estimate, transform)
    sec["plausible_region"] = [
        [_map_unit(a, transform), _map_unit(b, transform)]
        for a, b in res.plausible_region
    ]
    sec["plausible_content"] = res.plausible_content
    sec["sentinels"] = {
        "neg_inf": {
            "prior": prior_neg,
            "posterior": post_neg,
            "rb": post_neg / prior_neg if prior_neg > 0 else None,
        },
        "pos_inf": {
            "prior": prior_pos,
            "posterior": post_pos,
            "rb": post_pos / prior_pos if prior_pos > 0 else None,
        },
    }
    sec["undefined"] = {"prior": prior_nan, "posterior": post_nan}
    return sec
