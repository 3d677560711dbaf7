"""Diagnostics with finitely many score levels under Dirichlet priors.

Each population's probability vector over the m ordered levels gets a
Dirichlet prior, updated conjugately by the observed level counts. Monte
Carlo draws of the two vectors induce draws of the AUC and of the
error-minimizing cutoff (over the levels plus the classify-all-negative
sentinel), which feed the relative belief machinery. An optional monotone
shape constraint pushes the Dirichlet draws through a simplex transform that
makes the non-diseased vector decreasing in the score and the diseased one
increasing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import _kernels
from ._mc import MCDiagnosticError, pass_streams, run_batched
from ._report import rate_rb
from .prevalence import PrevalenceModel, infer_prevalence
from .rb_core import (
    Grid,
    assess_event,
    assessment_summary,
    categorical_summary,
    estimate_categorical,
    estimate_density,
    rb_summary,
    relative_belief,
    relative_belief_categorical,
)

__all__ = [
    "CountData",
    "DirichletParams",
    "DiscreteOptions",
    "posterior_params",
    "sample_simplex",
    "monotone_matrix",
    "apply_monotone",
    "infer_discrete",
]


@dataclass(frozen=True)
class CountData:
    """Observed level counts for the two populations on a shared ordered support."""

    levels: tuple[float, ...]
    counts_nd: np.ndarray
    counts_d: np.ndarray

    def __post_init__(self) -> None:
        lv = tuple(float(v) for v in self.levels)
        if len(lv) < 2:
            raise ValueError("need at least two levels")
        if any(b <= a for a, b in zip(lv, lv[1:])):
            raise ValueError("levels must be strictly increasing")
        object.__setattr__(self, "levels", lv)
        for name in ("counts_nd", "counts_d"):
            c = np.asarray(getattr(self, name))
            if c.shape != (len(lv),):
                raise ValueError(f"{name} must have one count per level")
            if (c < 0).any() or not np.issubdtype(c.dtype, np.integer):
                raise ValueError(f"{name} must be nonnegative integers")
            object.__setattr__(self, name, c.astype(np.int64))

    @property
    def n_nd(self) -> int:
        return int(self.counts_nd.sum())

    @property
    def n_d(self) -> int:
        return int(self.counts_d.sum())


@dataclass(frozen=True)
class DirichletParams:
    alpha: np.ndarray

    def __post_init__(self) -> None:
        a = np.asarray(self.alpha, dtype=float)
        if a.ndim != 1 or len(a) < 2:
            raise ValueError("alpha must be a vector of length >= 2")
        if (a <= 0).any():
            raise ValueError("alpha entries must be positive")
        object.__setattr__(self, "alpha", a)

    @classmethod
    def uniform(cls, m: int) -> "DirichletParams":
        return cls(alpha=np.ones(m))


def posterior_params(prior: DirichletParams, counts: np.ndarray) -> DirichletParams:
    counts = np.asarray(counts)
    if counts.shape != prior.alpha.shape:
        raise ValueError("counts length must match alpha")
    return DirichletParams(alpha=prior.alpha + counts)


def sample_simplex(
    params: DirichletParams, rng: np.random.Generator, n: int
) -> np.ndarray:
    """n Dirichlet draws, one probability vector per row."""
    return rng.dirichlet(params.alpha, size=n)


@lru_cache(maxsize=32)
def monotone_matrix(m: int, direction: str = "decreasing") -> np.ndarray:
    """Linear simplex map whose image is the monotone sub-simplex.

    The decreasing map sends the j-th vertex (0-based) to the vector with
    1/(j+1) on coordinates 0..j; convex combinations of those are exactly
    the decreasing probability vectors. The increasing map is its flip.
    Columns sum to one, so the image of a probability vector is one.
    """
    a = np.zeros((m, m))
    for j in range(m):
        a[: j + 1, j] = 1.0 / (j + 1)
    if direction == "decreasing":
        return a
    if direction == "increasing":
        return a[::-1].copy()
    raise ValueError("direction must be 'decreasing' or 'increasing'")


def apply_monotone(p_star: np.ndarray, direction: str) -> np.ndarray:
    """Push rows of p_star (draws on the full simplex) through the monotone map."""
    p = np.asarray(p_star, dtype=float)
    a = monotone_matrix(p.shape[-1], direction)
    return p @ a.T


@dataclass(frozen=True)
class DiscreteOptions:
    n_draws: int = 100_000
    seed: int = 0
    batch_size: int = 10_000
    threads: int = 1
    auc_grid: Grid = field(default_factory=lambda: Grid(0.0, 1.0, 25))
    rate_grid: Grid = field(default_factory=lambda: Grid(0.0, 1.0, 25))
    monotone: bool = False
    conditional: bool = False
    fixed_cutoff: float | None = None
    acceptance_floor: float = 1e-4


def _rates_at_index(
    p_nd: np.ndarray, p_d: np.ndarray, w: np.ndarray, idx: int, m: int
) -> dict[str, np.ndarray]:
    if idx < m:
        fnr = np.cumsum(p_d, axis=1)[:, idx]
        fpr = 1.0 - np.cumsum(p_nd, axis=1)[:, idx]
    else:  # +inf sentinel: classify everyone negative
        fnr = np.ones(len(p_d))
        fpr = np.zeros(len(p_nd))
    err = w * fnr + (1.0 - w) * fpr
    pos = w * (1.0 - fnr) + (1.0 - w) * fpr
    neg = w * fnr + (1.0 - w) * (1.0 - fpr)
    fdr = np.where(pos > 0.0, np.divide((1.0 - w) * fpr, pos, where=pos > 0.0), np.nan)
    fndr = np.where(neg > 0.0, np.divide(w * fnr, neg, where=neg > 0.0), np.nan)
    return {"fnr": fnr, "fpr": fpr, "error": err, "fdr": fdr, "fndr": fndr}


def infer_discrete(
    prior_nd: DirichletParams,
    prior_d: DirichletParams,
    data: CountData,
    prevalence: PrevalenceModel,
    options: DiscreteOptions = DiscreteOptions(),
) -> dict:
    """Full RB analysis of AUC, optimal cutoff, and cutoff error characteristics.

    Per batch the draw order is fixed (non-diseased simplex, diseased simplex,
    prevalence), so results depend only on (seed, n_draws, batch_size).
    """
    m = len(data.levels)
    if prior_nd.alpha.shape != (m,) or prior_d.alpha.shape != (m,):
        raise ValueError("prior dimensions must match the number of levels")
    post_nd = posterior_params(prior_nd, data.counts_nd)
    post_d = posterior_params(prior_d, data.counts_d)
    streams = pass_streams(
        options.seed, ["prior", "posterior", "fixed_prior", "fixed_posterior"]
    )

    def make_worker(pnd: DirichletParams, pd: DirichletParams, use_post_w: bool):
        def worker(rng: np.random.Generator, n: int) -> dict[str, np.ndarray]:
            q_nd = rng.dirichlet(pnd.alpha, size=n)
            q_d = rng.dirichlet(pd.alpha, size=n)
            if options.monotone:
                q_nd = apply_monotone(q_nd, "decreasing")
                q_d = apply_monotone(q_d, "increasing")
            w = (
                prevalence.draw_posterior(rng, n)
                if use_post_w
                else prevalence.draw_prior(rng, n)
            )
            return {
                "auc": _kernels.discrete_auc_batch(q_nd, q_d),
                "copt_idx": _kernels.discrete_copt_batch(q_nd, q_d, w),
            }

        return worker

    n, bs, th = options.n_draws, options.batch_size, options.threads
    prior_run = run_batched(streams["prior"], n, bs, th, make_worker(prior_nd, prior_d, False))
    post_run = run_batched(streams["posterior"], n, bs, th, make_worker(post_nd, post_d, True))

    h0 = assess_event(
        int((prior_run["auc"] > 0.5).sum()), n, int((post_run["auc"] > 0.5).sum()), n
    )

    labels = data.levels + (math.inf,)

    def summarize(run_prior: dict, run_post: dict) -> tuple[dict, dict, int]:
        auc_pr = estimate_density(run_prior["auc"], options.auc_grid)
        auc_po = estimate_density(run_post["auc"], options.auc_grid)
        auc_rb = relative_belief(auc_pr, auc_po)
        c_pr = estimate_categorical(run_prior["copt_idx"], labels)
        c_po = estimate_categorical(run_post["copt_idx"], labels)
        c_rb = relative_belief_categorical(c_pr, c_po)
        return (
            rb_summary(auc_pr, auc_po, auc_rb),
            categorical_summary(c_pr, c_po, c_rb),
            c_rb.estimate_index,
        )

    auc_sec, copt_sec, est_idx = summarize(prior_run, post_run)

    report: dict = {
        "model": "discrete",
        "levels": list(data.levels),
        "h0_auc_gt_half": assessment_summary(h0),
        "auc": auc_sec,
        "c_opt": copt_sec,
    }

    if options.conditional:
        masks = {
            "prior": prior_run["auc"] > 0.5,
            "posterior": post_run["auc"] > 0.5,
        }
        for name, mask in masks.items():
            if mask.mean() < options.acceptance_floor:
                raise MCDiagnosticError(
                    f"conditional acceptance rate {mask.mean():.2e} in the {name} "
                    f"pass fell below {options.acceptance_floor}"
                )
        cond_prior = {k: v[masks["prior"]] for k, v in prior_run.items()}
        cond_post = {k: v[masks["posterior"]] for k, v in post_run.items()}
        auc_c, copt_c, est_idx = summarize(cond_prior, cond_post)
        report["conditional"] = {
            "acceptance": {k: float(v.mean()) for k, v in masks.items()},
            "auc": auc_c,
            "c_opt": copt_c,
        }

    # error characteristics at a fixed cutoff, fresh streams
    if options.fixed_cutoff is not None:
        try:
            c0_idx = data.levels.index(float(options.fixed_cutoff))
        except ValueError:
            raise ValueError(
                f"fixed cutoff {options.fixed_cutoff} is not a support level"
            ) from None
    else:
        c0_idx = est_idx

    def make_rate_worker(pnd: DirichletParams, pd: DirichletParams, use_post_w: bool):
        def worker(rng: np.random.Generator, n_batch: int) -> dict[str, np.ndarray]:
            q_nd = rng.dirichlet(pnd.alpha, size=n_batch)
            q_d = rng.dirichlet(pd.alpha, size=n_batch)
            if options.monotone:
                q_nd = apply_monotone(q_nd, "decreasing")
                q_d = apply_monotone(q_d, "increasing")
            w = (
                prevalence.draw_posterior(rng, n_batch)
                if use_post_w
                else prevalence.draw_prior(rng, n_batch)
            )
            out = _rates_at_index(q_nd, q_d, w, c0_idx, m)
            out["auc"] = _kernels.discrete_auc_batch(q_nd, q_d)
            return out

        return worker

    rp = run_batched(streams["fixed_prior"], n, bs, th, make_rate_worker(prior_nd, prior_d, False))
    rq = run_batched(streams["fixed_posterior"], n, bs, th, make_rate_worker(post_nd, post_d, True))
    if options.conditional:
        mp, mq = rp["auc"] > 0.5, rq["auc"] > 0.5
        rp = {k: v[mp] for k, v in rp.items()}
        rq = {k: v[mq] for k, v in rq.items()}
    rates = {
        name: rate_rb(rp[name], rq[name], options.rate_grid)
        for name in ("fnr", "fpr", "error", "fdr", "fndr")
    }
    rates["cutoff"] = "+inf" if c0_idx >= m else data.levels[c0_idx]
    report["rates"] = rates

    if prevalence.has_update:
        report["prevalence"] = infer_prevalence(
            prevalence.prior, prevalence.n_d, prevalence.n_nd
        )

    report["diagnostics"] = {
        "n_draws": n,
        "seed": options.seed,
        "batch_size": bs,
        "threads": th,
        "monotone": options.monotone,
        "backend": _kernels.BACKEND,
    }
    return report
