"""Density-histogram estimation and relative belief inference.

Monte Carlo draws of a quantity are binned on a fixed grid; the ratio of
posterior to prior bin mass is the relative belief ratio. The bin with the
largest ratio gives the estimate, the bins with ratio above one form the
plausible region, and the posterior mass of that region measures accuracy.
Event-level evidence is the same ratio applied to a single event.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

__all__ = [
    "Grid",
    "DensityHistogram",
    "RelativeBeliefResult",
    "HypothesisAssessment",
    "CategoricalHistogram",
    "CategoricalRelativeBelief",
    "histogram_masses",
    "estimate_density",
    "relative_belief",
    "assess_event",
    "assess_event_probs",
    "moving_average_smooth",
    "estimate_categorical",
    "relative_belief_categorical",
    "rb_summary",
    "categorical_summary",
    "assessment_summary",
    "export_rb_csv",
]


@dataclass(frozen=True)
class Grid:
    """Uniform binning of (lo, hi] into n_bins left-open intervals.

    Bin i (1-based) covers (lo + (i-1)*delta, lo + i*delta] with
    delta = (hi - lo)/n_bins; its midpoint is lo + (i - 1/2)*delta.
    """

    lo: float
    hi: float
    n_bins: int

    def __post_init__(self) -> None:
        if not self.lo < self.hi:
            raise ValueError(f"grid requires lo < hi, got ({self.lo}, {self.hi})")
        if self.n_bins < 2:
            raise ValueError(f"grid requires n_bins >= 2, got {self.n_bins}")

    @property
    def delta(self) -> float:
        return (self.hi - self.lo) / self.n_bins

    def edges(self) -> np.ndarray:
        return np.linspace(self.lo, self.hi, self.n_bins + 1)

    def midpoints(self) -> np.ndarray:
        d = self.delta
        return self.lo + d * (np.arange(self.n_bins) + 0.5)


@dataclass(frozen=True)
class DensityHistogram:
    """Bin probabilities of one quantity estimated from n_draws Monte Carlo draws.

    mass[i] is the (weight-normalized) fraction of draws landing in bin i;
    clamped counts draws outside (lo, hi] that were moved to a boundary bin.
    The density at a midpoint is mass[i] / grid.delta. n_draws == 0 marks
    masses computed analytically rather than by simulation.
    """

    grid: Grid
    mass: np.ndarray
    n_draws: int
    clamped: int = 0

    def __post_init__(self) -> None:
        m = np.asarray(self.mass, dtype=float)
        if m.shape != (self.grid.n_bins,):
            raise ValueError("mass length must equal grid.n_bins")
        if (m < 0).any():
            raise ValueError("bin masses must be nonnegative")
        object.__setattr__(self, "mass", m)
        if self.n_draws < 0:
            raise ValueError("n_draws must be nonnegative")


@dataclass(frozen=True)
class RelativeBeliefResult:
    """RB curve over a grid plus the derived estimate and plausible region.

    rb is NaN where the prior mass is zero (those bins are undefined and take
    no part in the argmax or the region). plausible_region is a union of
    maximal closed edge-intervals; largest_interval is the contiguous piece
    with the most posterior mass, reported with its own content.
    """

    grid: Grid
    rb: np.ndarray
    defined: np.ndarray
    estimate: float
    estimate_index: int
    plausible_bins: np.ndarray
    plausible_region: tuple[tuple[float, float], ...]
    plausible_content: float
    largest_interval: tuple[float, float] | None
    largest_interval_content: float


@dataclass(frozen=True)
class HypothesisAssessment:
    """Event-level evidence: RB ratio plus the strength (posterior probability)."""

    rb_event: float
    strength: float
    prior_prob: float
    posterior_prob: float
    infinite_rb: bool = False


def histogram_masses(
    draws: np.ndarray,
    edges: np.ndarray,
    weights: np.ndarray | None = None,
) -> tuple[np.ndarray, int]:
    """Bin draws into left-open intervals (edges[j], edges[j+1]].

    Out-of-range draws are clamped to the nearest boundary bin; the count of
    clamped draws is returned alongside the normalized masses. Edges may be
    non-uniform; they must be strictly increasing.
    """
    x = np.asarray(draws, dtype=float)
    if x.size == 0:
        raise ValueError("no draws")
    if np.isnan(x).any():
        raise ValueError("draws contain NaN")
    n_bins = len(edges) - 1
    idx = np.searchsorted(edges, x, side="left") - 1
    clamped = int((idx < 0).sum() + (idx >= n_bins).sum())
    idx = np.clip(idx, 0, n_bins - 1)
    if weights is None:
        counts = np.bincount(idx, minlength=n_bins).astype(float)
        total = float(x.size)
    else:
        w = np.asarray(weights, dtype=float)
        if w.shape != x.shape:
            raise ValueError("weights must match draws")
        if (w < 0).any():
            raise ValueError("weights must be nonnegative")
        counts = np.bincount(idx, weights=w, minlength=n_bins)
        total = float(w.sum())
        if total <= 0:
            raise ValueError("weights sum to zero")
    return counts / total, clamped


def estimate_density(
    draws: Sequence[float] | np.ndarray,
    grid: Grid,
    weights: Sequence[float] | np.ndarray | None = None,
) -> DensityHistogram:
    """Estimate bin masses from Monte Carlo draws (optionally importance-weighted)."""
    x = np.asarray(draws, dtype=float)
    if x.size == 0:
        raise ValueError("no draws")
    w = None if weights is None else np.asarray(weights, dtype=float)
    mass, clamped = histogram_masses(x, grid.edges(), w)
    return DensityHistogram(grid=grid, mass=mass, n_draws=int(x.size), clamped=clamped)


def _maximal_runs(flags: np.ndarray) -> list[tuple[int, int]]:
    # inclusive (start, stop) index pairs of consecutive True runs
    runs: list[tuple[int, int]] = []
    start = None
    for i, f in enumerate(flags):
        if f and start is None:
            start = i
        elif not f and start is not None:
            runs.append((start, i - 1))
            start = None
    if start is not None:
        runs.append((start, len(flags) - 1))
    return runs


def relative_belief(
    prior: DensityHistogram, posterior: DensityHistogram
) -> RelativeBeliefResult:
    """Compute the RB curve posterior.mass/prior.mass and its summaries.

    Bins with zero prior mass are undefined and excluded everywhere. The
    argmax tie-break is: larger posterior mass first, then lower midpoint.
    """
    if prior.grid != posterior.grid:
        raise ValueError("prior and posterior grids differ")
    defined = prior.mass > 0
    if not defined.any():
        raise ValueError("all prior mass is zero")
    rb = np.full(prior.grid.n_bins, np.nan)
    rb[defined] = posterior.mass[defined] / prior.mass[defined]

    finite_rb = np.where(defined, rb, -np.inf)
    best = finite_rb.max()
    tied = np.flatnonzero(finite_rb == best)
    if len(tied) > 1:
        post_at = posterior.mass[tied]
        tied = tied[post_at == post_at.max()]
    est_idx = int(tied[0])
    mids = prior.grid.midpoints()

    plausible = defined & (rb > 1.0)
    edges = prior.grid.edges()
    runs = _maximal_runs(plausible)
    region = tuple((float(edges[a]), float(edges[b + 1])) for a, b in runs)
    content = float(posterior.mass[plausible].sum())
    largest = None
    largest_content = 0.0
    for a, b in runs:
        c = float(posterior.mass[a : b + 1].sum())
        if c > largest_content:
            largest_content = c
            largest = (float(edges[a]), float(edges[b + 1]))
    return RelativeBeliefResult(
        grid=prior.grid,
        rb=rb,
        defined=defined,
        estimate=float(mids[est_idx]),
        estimate_index=est_idx,
        plausible_bins=plausible,
        plausible_region=region,
        plausible_content=content,
        largest_interval=largest,
        largest_interval_content=largest_content,
    )


def assess_event_probs(prior_prob: float, posterior_prob: float) -> HypothesisAssessment:
    """Event-level RB from (possibly analytic) prior and posterior probabilities."""
    if not 0.0 <= prior_prob <= 1.0 or not 0.0 <= posterior_prob <= 1.0:
        raise ValueError("probabilities must lie in [0, 1]")
    if prior_prob == 0.0:
        if posterior_prob > 0.0:
            return HypothesisAssessment(
                rb_event=math.inf,
                strength=posterior_prob,
                prior_prob=0.0,
                posterior_prob=posterior_prob,
                infinite_rb=True,
            )
        rb = 0.0  # 0/0: no evidence either way; flagged by rb = 0 with strength 0
    else:
        rb = posterior_prob / prior_prob
    return HypothesisAssessment(
        rb_event=rb,
        strength=posterior_prob,
        prior_prob=prior_prob,
        posterior_prob=posterior_prob,
    )


def assess_event(
    prior_draws_in_event: int,
    prior_total: int,
    post_draws_in_event: int,
    post_total: int,
) -> HypothesisAssessment:
    """Event-level RB from Monte Carlo counts."""
    if prior_total <= 0 or post_total <= 0:
        raise ValueError("totals must be positive")
    if not 0 <= prior_draws_in_event <= prior_total:
        raise ValueError("prior event count out of range")
    if not 0 <= post_draws_in_event <= post_total:
        raise ValueError("posterior event count out of range")
    return assess_event_probs(
        prior_draws_in_event / prior_total, post_draws_in_event / post_total
    )


def moving_average_smooth(hist: DensityHistogram, window: int) -> DensityHistogram:
    """Replace each mass by the window mean centered on it, then renormalize.

    The window is zero-padded at the edges (the divisor stays `window`), so a
    symmetric spike spreads evenly: (0,1,0) with window 3 gives (1/3,1/3,1/3).
    """
    if window % 2 == 0 or window < 1:
        raise ValueError("window must be odd and positive")
    if window > hist.grid.n_bins:
        raise ValueError("window exceeds number of bins")
    if window == 1:
        return hist
    kernel = np.full(window, 1.0 / window)
    sm = np.convolve(hist.mass, kernel, mode="same")
    total = sm.sum()
    if total > 0:
        sm = sm / total * hist.mass.sum()
    return DensityHistogram(
        grid=hist.grid, mass=sm, n_draws=hist.n_draws, clamped=hist.clamped
    )


# --- categorical variant (finite label sets, e.g. cutoffs on a discrete support) ---


@dataclass(frozen=True)
class CategoricalHistogram:
    """Masses over an explicit finite label set (labels may include +/-inf)."""

    labels: tuple
    mass: np.ndarray
    n_draws: int


@dataclass(frozen=True)
class CategoricalRelativeBelief:
    labels: tuple
    rb: np.ndarray
    defined: np.ndarray
    estimate: object
    estimate_index: int
    plausible: tuple
    plausible_content: float


def estimate_categorical(
    indices: np.ndarray,
    labels: Sequence,
    weights: np.ndarray | None = None,
) -> CategoricalHistogram:
    """Histogram of integer category indices over an explicit label set."""
    idx = np.asarray(indices)
    if idx.size == 0:
        raise ValueError("no draws")
    k = len(labels)
    if idx.min() < 0 or idx.max() >= k:
        raise ValueError("category index out of range")
    if weights is None:
        mass = np.bincount(idx, minlength=k).astype(float) / idx.size
    else:
        w = np.asarray(weights, dtype=float)
        mass = np.bincount(idx, weights=w, minlength=k) / w.sum()
    return CategoricalHistogram(labels=tuple(labels), mass=mass, n_draws=int(idx.size))


def relative_belief_categorical(
    prior: CategoricalHistogram, posterior: CategoricalHistogram
) -> CategoricalRelativeBelief:
    """Category-level RB with the same tie-break rules as the grid version."""
    if prior.labels != posterior.labels:
        raise ValueError("label sets differ")
    defined = prior.mass > 0
    if not defined.any():
        raise ValueError("all prior mass is zero")
    rb = np.full(len(prior.labels), np.nan)
    rb[defined] = posterior.mass[defined] / prior.mass[defined]
    finite_rb = np.where(defined, rb, -np.inf)
    best = finite_rb.max()
    tied = np.flatnonzero(finite_rb == best)
    if len(tied) > 1:
        post_at = posterior.mass[tied]
        tied = tied[post_at == post_at.max()]
    est_idx = int(tied[0])
    plaus = defined & (rb > 1.0)
    return CategoricalRelativeBelief(
        labels=prior.labels,
        rb=rb,
        defined=defined,
        estimate=prior.labels[est_idx],
        estimate_index=est_idx,
        plausible=tuple(l for l, p in zip(prior.labels, plaus) if p),
        plausible_content=float(posterior.mass[plaus].sum()),
    )


def rb_summary(
    prior: DensityHistogram,
    posterior: DensityHistogram,
    result: RelativeBeliefResult,
) -> dict:
    """JSON-ready summary of an RB analysis: curve, estimate, region, content."""
    return {
        "grid": {
            "lo": result.grid.lo,
            "hi": result.grid.hi,
            "n_bins": result.grid.n_bins,
        },
        "estimate": result.estimate,
        "plausible_region": [list(iv) for iv in result.plausible_region],
        "plausible_content": result.plausible_content,
        "largest_interval": (
            list(result.largest_interval) if result.largest_interval else None
        ),
        "largest_interval_content": result.largest_interval_content,
        "prior_mass": [float(v) for v in prior.mass],
        "posterior_mass": [float(v) for v in posterior.mass],
        "rb": [float(v) if d else None for v, d in zip(result.rb, result.defined)],
        "clamped": {"prior": prior.clamped, "posterior": posterior.clamped},
    }


def categorical_summary(
    prior: CategoricalHistogram,
    posterior: CategoricalHistogram,
    result: CategoricalRelativeBelief,
) -> dict:
    """JSON-ready summary of a categorical RB analysis."""

    def lab(v) -> str | float:
        if isinstance(v, float) and math.isinf(v):
            return "+inf" if v > 0 else "-inf"
        return v

    return {
        "labels": [lab(v) for v in result.labels],
        "estimate": lab(result.estimate),
        "plausible": [lab(v) for v in result.plausible],
        "plausible_content": result.plausible_content,
        "prior_mass": [float(v) for v in prior.mass],
        "posterior_mass": [float(v) for v in posterior.mass],
        "rb": [float(v) if d else None for v, d in zip(result.rb, result.defined)],
    }


def assessment_summary(a: HypothesisAssessment) -> dict:
    """JSON-ready summary of an event-level assessment."""
    return {
        "rb": None if a.infinite_rb else a.rb_event,
        "infinite_rb": a.infinite_rb,
        "strength": a.strength,
        "prior_prob": a.prior_prob,
        "posterior_prob": a.posterior_prob,
    }


def export_rb_csv(
    path,
    prior: DensityHistogram,
    posterior: DensityHistogram,
    result: RelativeBeliefResult,
) -> None:
    """Write the RB curve as CSV: bin_midpoint, prior_mass, posterior_mass, rb, in_plausible_region."""
    mids = result.grid.midpoints()
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["bin_midpoint", "prior_mass", "posterior_mass", "rb", "in_plausible_region"])
        for i in range(result.grid.n_bins):
            rb_val = "" if not result.defined[i] else repr(float(result.rb[i]))
            w.writerow(
                [
                    repr(float(mids[i])),
                    repr(float(prior.mass[i])),
                    repr(float(posterior.mass[i])),
                    rb_val,
                    int(result.plausible_bins[i]),
                ]
            )
