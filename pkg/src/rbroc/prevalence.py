"""Prevalence priors, conjugate updating, and exact RB inference for w.

The disease prevalence w enters every error characteristic. It is either
known exactly, or carries a beta prior; when the diagnostic sample is an
unrestricted draw from the population the observed group sizes update that
prior conjugately. Because beta cdfs are cheap, the RB analysis for w itself
never simulates: bin masses on the grid are exact cdf differences.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import stats

from .elicitation import BetaParams, KnownPrevalence
from .rb_core import DensityHistogram, Grid, relative_belief, rb_summary

__all__ = [
    "PrevalenceModel",
    "posterior_params",
    "exact_masses",
    "infer_prevalence",
]

DEFAULT_W_GRID = Grid(0.0, 1.0, 1000)


def posterior_params(prior: BetaParams, n_d: int, n_nd: int) -> BetaParams:
    """Conjugate update from observed group sizes (n_d diseased, n_nd not)."""
    if n_d < 0 or n_nd < 0:
        raise ValueError("counts must be nonnegative")
    return BetaParams(alpha1=prior.alpha1 + n_d, alpha2=prior.alpha2 + n_nd)


def exact_masses(params: BetaParams, grid: Grid) -> DensityHistogram:
    """Exact bin masses of a beta distribution on the grid (no simulation)."""
    cdf = stats.beta.cdf(grid.edges(), params.alpha1, params.alpha2)
    mass = np.diff(cdf)
    # tiny negatives from cdf rounding
    mass = np.clip(mass, 0.0, None)
    return DensityHistogram(grid=grid, mass=mass, n_draws=0)


@dataclass(frozen=True)
class PrevalenceModel:
    """How w is handled in a pipeline: known constant, prior only, or prior+counts.

    counts (n_d, n_nd) are present exactly when the diagnostic sample was an
    unrestricted population draw, so the group sizes carry information about
    w. Without counts the posterior for w is its prior.
    """

    prior: BetaParams | KnownPrevalence
    n_d: int | None = None
    n_nd: int | None = None

    def __post_init__(self) -> None:
        has_d = self.n_d is not None
        has_nd = self.n_nd is not None
        if has_d != has_nd:
            raise ValueError("provide both counts or neither")
        if has_d and isinstance(self.prior, KnownPrevalence):
            raise ValueError("a known prevalence admits no update")

    @property
    def has_update(self) -> bool:
        return self.n_d is not None

    def posterior(self) -> BetaParams | KnownPrevalence:
        if self.has_update:
            return posterior_params(self.prior, self.n_d, self.n_nd)
        return self.prior

    def draw_prior(self, rng: np.random.Generator, n: int) -> np.ndarray:
        return _draw(self.prior, rng, n)

    def draw_posterior(self, rng: np.random.Generator, n: int) -> np.ndarray:
        return _draw(self.posterior(), rng, n)


def _draw(spec: BetaParams | KnownPrevalence, rng: np.random.Generator, n: int) -> np.ndarray:
    if isinstance(spec, KnownPrevalence):
        return np.full(n, spec.value)
    return rng.beta(spec.alpha1, spec.alpha2, size=n)


def infer_prevalence(
    prior: BetaParams,
    n_d: int,
    n_nd: int,
    grid: Grid = DEFAULT_W_GRID,
) -> dict:
    """Exact RB analysis of the prevalence from group counts."""
    post = posterior_params(prior, n_d, n_nd)
    prior_hist = exact_masses(prior, grid)
    post_hist = exact_masses(post, grid)
    result = relative_belief(prior_hist, post_hist)
    return {
        "prior": {"alpha1": prior.alpha1, "alpha2": prior.alpha2},
        "posterior": {"alpha1": post.alpha1, "alpha2": post.alpha2},
        "counts": {"n_d": n_d, "n_nd": n_nd},
        "w": rb_summary(prior_hist, post_hist, result),
    }
