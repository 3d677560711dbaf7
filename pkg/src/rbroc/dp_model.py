"""Nonparametric diagnostic-score models via Dirichlet processes.

Each population's score distribution is a random discrete mixture: a draw
consists of truncation-level weights (symmetric Dirichlet) and atoms. Prior
atoms come iid from a normal base measure whose (mean, precision) carry the
usual conjugate prior; posterior atoms mix that base (updated using the
distinct observed values) with resamples of the raw data, with base
probability a/(a+n). The truncation level bounds how much of the process'
mass the finite representation loses.

AUC and criterion-minimizing cutoffs of a draw are step-function
computations over the atoms; the batch kernels do the heavy lifting.
Cutoff histograms live on a measurement-scale grid and are reported raw and
smoothed by a short moving average, since atom-level granularity makes the
raw curves ragged.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from ._mc import MCDiagnosticError, pass_streams, run_batched
from ._report import _weighted_hist, rate_rb
from .binormal_model import (
    PopulationPosterior,
    SufficientStats,
    posterior_update_unequal,
)
from .elicitation import NormalGammaParams
from .prevalence import PrevalenceModel, infer_prevalence
from .rb_core import (
    Grid,
    assess_event,
    assessment_summary,
    moving_average_smooth,
    rb_summary,
    relative_belief,
)

__all__ = [
    "DPData",
    "DPModelSpec",
    "DPOptions",
    "TruncatedProcess",
    "unique_value_stats",
    "sample_prior_process",
    "sample_posterior_process",
    "process_auc",
    "parse_criterion",
    "default_cutoff_grid",
    "infer_dp",
]


@dataclass(frozen=True)
class DPData:
    """Raw score values per population (ties allowed; they matter)."""

    values_nd: np.ndarray
    values_d: np.ndarray

    def __post_init__(self) -> None:
        for name in ("values_nd", "values_d"):
            v = np.asarray(getattr(self, name), dtype=float)
            if v.ndim != 1 or v.size < 2:
                raise ValueError(f"{name} needs at least two values")
            if not np.isfinite(v).all():
                raise ValueError(f"{name} contains non-finite values")
            object.__setattr__(self, name, v)


@dataclass(frozen=True)
class DPModelSpec:
    """Concentration, base-measure prior, and truncation levels."""

    a: float
    base_prior: NormalGammaParams
    n_trunc_prior: int = 500
    n_trunc_post: int = 500

    def __post_init__(self) -> None:
        if self.a <= 0:
            raise ValueError("concentration must be positive")
        if self.n_trunc_prior < 2 or self.n_trunc_post < 2:
            raise ValueError("truncation levels must be at least 2")


@dataclass(frozen=True)
class TruncatedProcess:
    """One process draw: atoms sorted ascending with aligned weights."""

    weights: np.ndarray
    atoms: np.ndarray

    def __post_init__(self) -> None:
        w = np.asarray(self.weights, dtype=float)
        a = np.asarray(self.atoms, dtype=float)
        if w.shape != a.shape or w.ndim != 1:
            raise ValueError("weights and atoms must be 1-d and aligned")
        if (np.diff(a) < 0.0).any():
            raise ValueError("atoms must be sorted ascending")
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "atoms", a)


def unique_value_stats(values: np.ndarray) -> SufficientStats:
    """Sufficient statistics of the distinct observed values.

    The base-measure update sees each distinct value once; distinctness is
    exact equality of the parsed numbers (data files carry a fixed decimal
    resolution, so exact ties are meaningful, not float accidents).
    """
    return SufficientStats.from_values(np.unique(np.asarray(values, dtype=float)))


def _sort_rows(weights: np.ndarray, atoms: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    order = np.argsort(atoms, axis=1, kind="stable")
    return np.take_along_axis(weights, order, axis=1), np.take_along_axis(atoms, order, axis=1)


def _sample_batch(
    rng: np.random.Generator,
    nb: int,
    k: int,
    concentration: float,
    base: PopulationPosterior,
    data: np.ndarray | None,
    base_prob: float,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Draw nb truncated processes; order: precision, mean, weights, atoms.

    Returns (weights, atoms) row-sorted by atom, plus the per-draw fraction
    of atoms taken from the data resample rather than the base measure.
    """
    prec = rng.gamma(base.shape, 1.0 / base.rate, size=nb)
    s2 = 1.0 / prec
    mu = base.loc + np.sqrt(base.factor * s2) * rng.standard_normal(nb)
    weights = rng.dirichlet(np.full(k, concentration / k), size=nb)
    base_draws = mu[:, None] + np.sqrt(s2)[:, None] * rng.standard_normal((nb, k))
    if data is None:
        atoms = base_draws
        ecdf_frac = np.zeros(nb)
    else:
        picks = rng.random((nb, k)) < base_prob
        idx = rng.integers(0, len(data), size=(nb, k))
        atoms = np.where(picks, base_draws, data[idx])
        ecdf_frac = 1.0 - picks.mean(axis=1)
    w_s, a_s = _sort_rows(weights, atoms)
    return w_s, a_s, ecdf_frac


def sample_prior_process(
    spec: DPModelSpec, rng: np.random.Generator
) -> tuple[TruncatedProcess, TruncatedProcess]:
    """One prior process draw per population (non-diseased first)."""
    prior_pop, _ = posterior_update_unequal(spec.base_prior, None, None)
    out = []
    for _ in range(2):
        w, a, _frac = _sample_batch(rng, 1, spec.n_trunc_prior, spec.a, prior_pop, None, 1.0)
        out.append(TruncatedProcess(weights=w[0], atoms=a[0]))
    return out[0], out[1]


def sample_posterior_process(
    spec: DPModelSpec, data: DPData, rng: np.random.Generator
) -> tuple[TruncatedProcess, TruncatedProcess]:
    """One posterior process draw per population (non-diseased first)."""
    base_nd, base_d = posterior_update_unequal(
        spec.base_prior,
        unique_value_stats(data.values_nd),
        unique_value_stats(data.values_d),
    )
    out = []
    for base, values in ((base_nd, data.values_nd), (base_d, data.values_d)):
        n = len(values)
        w, a, _frac = _sample_batch(
            rng, 1, spec.n_trunc_post, spec.a + n, base, values, spec.a / (spec.a + n)
        )
        out.append(TruncatedProcess(weights=w[0], atoms=a[0]))
    return out[0], out[1]


def process_auc(f_nd: TruncatedProcess, f_d: TruncatedProcess) -> float:
    """P(X_D > X_ND) for two step distributions, ties counting against."""
    out = _kernels.process_auc_batch(
        f_nd.weights[None, :], f_nd.atoms[None, :], f_d.weights[None, :], f_d.atoms[None, :]
    )
    return float(out[0])


def parse_criterion(s: str) -> tuple[str, float | None]:
    """Criterion spec strings: 'error', 'fndr', or 'weighted:<w0>'."""
    if s == "error":
        return ("error", None)
    if s == "fndr":
        return ("fndr", None)
    if s.startswith("weighted:"):
        w0 = float(s.split(":", 1)[1])
        if not 0.0 < w0 < 1.0:
            raise ValueError("weighted criterion weight must lie in (0, 1)")
        return ("weighted", w0)
    raise ValueError(f"unknown cutoff criterion {s!r}")


def default_cutoff_grid(data: DPData, n_bins: int = 256) -> Grid:
    """Pooled data range padded by half its width on each side."""
    pooled = np.concatenate([data.values_nd, data.values_d])
    lo, hi = float(pooled.min()), float(pooled.max())
    pad = 0.5 * (hi - lo)
    return Grid(lo - pad, hi + pad, n_bins)


@dataclass(frozen=True)
class DPOptions:
    n_draws: int = 100_000
    seed: int = 0
    batch_size: int = 10_000
    threads: int = 1
    auc_grid: Grid = field(default_factory=lambda: Grid(0.0, 1.0, 100))
    cutoff_grid: Grid | None = None
    rate_grid: Grid = field(default_factory=lambda: Grid(0.0, 1.0, 25))
    smooth_window: int = 3
    criteria: tuple[str, ...] = ("error",)
    fixed_cutoffs: tuple[float, ...] = ()
    jitter: bool = False
    conditional: bool = True
    acceptance_floor: float = 1e-4


def _cutoff_rb_section(
    prior_cut: np.ndarray, post_cut: np.ndarray, grid: Grid, window: int
) -> dict:
    """Raw and smoothed RB for cutoff draws; infinite sentinels sit outside the bins."""

    def split(vals: np.ndarray):
        neg = vals == -math.inf
        pos = vals == math.inf
        fin = ~neg & ~pos
        total = float(vals.size)
        h = _weighted_hist(vals[fin], grid, None)
        # renormalize to the full draw count so masses plus sentinels sum to 1
        mass = h.mass * (fin.sum() / total)
        return (
            h.__class__(grid=grid, mass=mass, n_draws=int(total), clamped=h.clamped),
            float(neg.sum() / total),
            float(pos.sum() / total),
        )

    prior_h, prior_neg, prior_pos = split(prior_cut)
    post_h, post_neg, post_pos = split(post_cut)
    raw = rb_summary(prior_h, post_h, relative_belief(prior_h, post_h))
    sm_p = moving_average_smooth(prior_h, window)
    sm_q = moving_average_smooth(post_h, window)
    sm_res = relative_belief(sm_p, sm_q)
    smoothed = rb_summary(sm_p, sm_q, sm_res)
    return {
        "raw": raw,
        "smoothed": smoothed,
        "estimate": sm_res.estimate,
        "plausible_region": [list(iv) for iv in sm_res.plausible_region],
        "plausible_content": sm_res.plausible_content,
        "sentinels": {
            "neg_inf": {"prior": prior_neg, "posterior": post_neg},
            "pos_inf": {"prior": prior_pos, "posterior": post_pos},
        },
        "smooth_window": window,
    }


def infer_dp(
    spec: DPModelSpec,
    data: DPData,
    prevalence: PrevalenceModel,
    options: DPOptions = DPOptions(),
) -> dict:
    """RB analysis of AUC and criterion-optimal cutoffs under DP priors.

    Cutoff inference (and the error rates at the chosen cutoffs) runs on the
    draws conditioned on AUC > 1/2 when options.conditional is set; the AUC
    section itself is always reported unconditionally, with the conditional
    version alongside, since the evidence assessment wants the former and
    estimation the latter.
    """
    criteria = [(s, parse_criterion(s)) for s in options.criteria]
    c_grid = options.cutoff_grid or default_cutoff_grid(data)
    n, bs, th = options.n_draws, options.batch_size, options.threads
    streams = pass_streams(
        options.seed, ["jitter", "prior", "posterior", "fixed_prior", "fixed_posterior"]
    )

    values_nd = data.values_nd
    values_d = data.values_d
    if options.jitter:
        jr = np.random.default_rng(streams["jitter"])
        values_nd = values_nd + jr.uniform(0.0, 1.0, size=values_nd.size)
        values_d = values_d + jr.uniform(0.0, 1.0, size=values_d.size)

    prior_pop, _ = posterior_update_unequal(spec.base_prior, None, None)
    base_nd, base_d = posterior_update_unequal(
        spec.base_prior, unique_value_stats(values_nd), unique_value_stats(values_d)
    )
    n_nd, n_d = len(values_nd), len(values_d)

    def make_worker(posterior: bool, cutoffs: tuple[float, ...] | None):
        # cutoffs None: main pass (auc + criterion cutoffs); else rate pass
        def worker(rng: np.random.Generator, nb: int) -> dict[str, np.ndarray]:
            if posterior:
                w_nd, a_nd, frac_nd = _sample_batch(
                    rng, nb, spec.n_trunc_post, spec.a + n_nd, base_nd,
                    values_nd, spec.a / (spec.a + n_nd),
                )
                w_d, a_d, frac_d = _sample_batch(
                    rng, nb, spec.n_trunc_post, spec.a + n_d, base_d,
                    values_d, spec.a / (spec.a + n_d),
                )
            else:
                w_nd, a_nd, frac_nd = _sample_batch(
                    rng, nb, spec.n_trunc_prior, spec.a, prior_pop, None, 1.0
                )
                w_d, a_d, frac_d = _sample_batch(
                    rng, nb, spec.n_trunc_prior, spec.a, prior_pop, None, 1.0
                )
            wprev = (
                prevalence.draw_posterior(rng, nb)
                if posterior
                else prevalence.draw_prior(rng, nb)
            )
            out = {
                "auc": _kernels.process_auc_batch(w_nd, a_nd, w_d, a_d),
                "ecdf_frac": 0.5 * (frac_nd + frac_d),
            }
            if cutoffs is None:
                for label, (kind, param) in criteria:
                    if kind == "error":
                        cut, _, _ = _kernels.step_copt_batch(
                            w_nd, a_nd, w_d, a_d, wprev, _kernels.MODE_ERROR
                        )
                    elif kind == "weighted":
                        cut, _, _ = _kernels.step_copt_batch(
                            w_nd, a_nd, w_d, a_d, np.full(nb, param), _kernels.MODE_WEIGHTED
                        )
                    else:
                        cut, _, _ = _kernels.step_copt_batch(
                            w_nd, a_nd, w_d, a_d, wprev, _kernels.MODE_FNDR
                        )
                    out[f"cut::{label}"] = cut
            else:
                for i, c0 in enumerate(cutoffs):
                    fnr = _kernels.cdf_at_batch(w_d, a_d, np.full(nb, c0))
                    fpr = 1.0 - _kernels.cdf_at_batch(w_nd, a_nd, np.full(nb, c0))
                    err = wprev * fnr + (1.0 - wprev) * fpr
                    pos = wprev * (1.0 - fnr) + (1.0 - wprev) * fpr
                    neg = wprev * fnr + (1.0 - wprev) * (1.0 - fpr)
                    out[f"fnr::{i}"] = fnr
                    out[f"fpr::{i}"] = fpr
                    out[f"error::{i}"] = err
                    out[f"fdr::{i}"] = np.where(
                        pos > 0.0, np.divide((1.0 - wprev) * fpr, pos, where=pos > 0.0), np.nan
                    )
                    out[f"fndr::{i}"] = np.where(
                        neg > 0.0, np.divide(wprev * fnr, neg, where=neg > 0.0), np.nan
                    )
            return out

        return worker

    prior_run = run_batched(streams["prior"], n, bs, th, make_worker(False, None))
    post_run = run_batched(streams["posterior"], n, bs, th, make_worker(True, None))

    h0 = assess_event(
        int((prior_run["auc"] > 0.5).sum()), n, int((post_run["auc"] > 0.5).sum()), n
    )
    auc_prior = _weighted_hist(prior_run["auc"], options.auc_grid, None)
    auc_post = _weighted_hist(post_run["auc"], options.auc_grid, None)
    report: dict = {
        "model": "dp",
        "h0_auc_gt_half": assessment_summary(h0),
        "auc": rb_summary(auc_prior, auc_post, relative_belief(auc_prior, auc_post)),
    }

    sel_prior, sel_post = prior_run, post_run
    if options.conditional:
        masks = {"prior": prior_run["auc"] > 0.5, "posterior": post_run["auc"] > 0.5}
        for name, mask in masks.items():
            if mask.mean() < options.acceptance_floor:
                raise MCDiagnosticError(
                    f"conditional acceptance rate {mask.mean():.2e} in the {name} "
                    f"pass fell below {options.acceptance_floor}"
                )
        sel_prior = {k: v[masks["prior"]] for k, v in prior_run.items()}
        sel_post = {k: v[masks["posterior"]] for k, v in post_run.items()}
        ap = _weighted_hist(sel_prior["auc"], options.auc_grid, None)
        aq = _weighted_hist(sel_post["auc"], options.auc_grid, None)
        report["conditional"] = {
            "acceptance": {k: float(v.mean()) for k, v in masks.items()},
            "auc": rb_summary(ap, aq, relative_belief(ap, aq)),
        }

    report["c_opt"] = {}
    cutoff_targets: list[tuple[str, float]] = []
    for label, _parsed in criteria:
        sec = _cutoff_rb_section(
            sel_prior[f"cut::{label}"], sel_post[f"cut::{label}"],
            c_grid, options.smooth_window,
        )
        report["c_opt"][label] = sec
        cutoff_targets.append((label, float(sec["estimate"])))
    for c0 in options.fixed_cutoffs:
        cutoff_targets.append((f"fixed:{c0:g}", float(c0)))

    cut_values = tuple(c for _, c in cutoff_targets)
    rp = run_batched(streams["fixed_prior"], n, bs, th, make_worker(False, cut_values))
    rq = run_batched(streams["fixed_posterior"], n, bs, th, make_worker(True, cut_values))
    if options.conditional:
        mp, mq = rp["auc"] > 0.5, rq["auc"] > 0.5
        rp = {k: v[mp] for k, v in rp.items()}
        rq = {k: v[mq] for k, v in rq.items()}
    report["rates"] = {}
    for i, (label, c0) in enumerate(cutoff_targets):
        sec = {
            name: rate_rb(rp[f"{name}::{i}"], rq[f"{name}::{i}"], options.rate_grid)
            for name in ("fnr", "fpr", "error", "fdr", "fndr")
        }
        sec["cutoff"] = c0
        report["rates"][label] = sec

    if prevalence.has_update:
        report["prevalence"] = infer_prevalence(
            prevalence.prior, prevalence.n_d, prevalence.n_nd
        )

    report["diagnostics"] = {
        "n_draws": n,
        "seed": options.seed,
        "batch_size": bs,
        "threads": th,
        "concentration": spec.a,
        "truncation": {"prior": spec.n_trunc_prior, "posterior": spec.n_trunc_post},
        "posterior_ecdf_fraction": float(post_run["ecdf_frac"].mean()),
        "jitter": options.jitter,
        "cutoff_grid": {"lo": c_grid.lo, "hi": c_grid.hi, "n_bins": c_grid.n_bins},
        "backend": _kernels.BACKEND,
    }
    return report
