"""Normal diagnostic-score models with conjugate normal-gamma priors.

Scores are N(mu_ND, sigma_ND^2) and N(mu_D, sigma_D^2). Two variance modes:
a common sigma^2 across populations (one precision, conjugate joint update)
or separate variances (independent per-population updates). The quantities
of interest have closed forms in the parameters:

* AUC = Phi((mu_D - mu_ND) / sqrt(sigma_ND^2 + sigma_D^2))
* the prevalence-weighted error w*FNR(c) + (1-w)*FPR(c) is minimized either
  at a stationary point of the normal densities or at an infinite sentinel
  (classify everyone one way); copt_closed_form compares all of them and
  returns the true global minimizer, never just the stationary root.

Cutoffs live on the whole extended line, so for histogramming they pass
through the increasing map u = 1/2 + arctan(c)/pi onto (0, 1), with the
sentinels landing exactly on 0 and 1 and tracked separately from the bins.

Inference conditions on the diagnostic being worth using: mu_D > mu_ND in
the equal-variance mode (sampled by inversion with importance weights),
existence of a finite optimal cutoff in the unequal mode (sampled by
rejection). Both conditioning events have closed-form indicator checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import ndtr, ndtri

from ._mc import MCDiagnosticError, effective_sample_size, pass_streams, run_batched
from ._report import _weighted_hist, cutoff_section, rate_rb
from .elicitation import NormalGammaParams
from .prevalence import PrevalenceModel, infer_prevalence
from .rb_core import (
    Grid,
    assess_event,
    assess_event_probs,
    assessment_summary,
    rb_summary,
    relative_belief,
)

__all__ = [
    "BinormalParams",
    "SufficientStats",
    "CutoffValue",
    "BinormalOptions",
    "EqualVarPosterior",
    "PopulationPosterior",
    "cutoff_to_unit",
    "unit_to_cutoff",
    "auc_binormal",
    "error_binormal",
    "copt_closed_form",
    "copt_batch",
    "finite_cutoff_condition",
    "finite_cutoff_condition_batch",
    "posterior_update_equal",
    "posterior_update_unequal",
    "sample_equal_var",
    "sample_equal_var_conditional",
    "sample_unequal",
    "infer_binormal",
]


@dataclass(frozen=True)
class BinormalParams:
    mu_nd: float
    mu_d: float
    sigma_nd: float
    sigma_d: float

    def __post_init__(self) -> None:
        if self.sigma_nd <= 0 or self.sigma_d <= 0:
            raise ValueError("standard deviations must be positive")


@dataclass(frozen=True)
class SufficientStats:
    """n, sample mean, and ss = the sum of squared deviations from the mean."""

    n: int
    mean: float
    ss: float

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("n must be at least 1")
        if self.ss < 0:
            raise ValueError("ss must be nonnegative")

    @classmethod
    def from_values(cls, values) -> "SufficientStats":
        x = np.asarray(values, dtype=float)
        if x.ndim != 1 or x.size < 1:
            raise ValueError("need a 1-d array of at least one value")
        mean = float(x.mean())
        return cls(n=int(x.size), mean=mean, ss=float(((x - mean) ** 2).sum()))


@dataclass(frozen=True)
class CutoffValue:
    """A cutoff on the extended line with its unit-interval image."""

    value: float

    @property
    def is_finite(self) -> bool:
        return math.isfinite(self.value)

    @property
    def unit(self) -> float:
        return float(cutoff_to_unit(self.value))


def cutoff_to_unit(c):
    """Increasing map of the extended line onto [0, 1]: u = 1/2 + arctan(c)/pi."""
    return 0.5 + np.arctan(c) / np.pi


def unit_to_cutoff(u):
    """Inverse of cutoff_to_unit; 0 and 1 map back to the infinite sentinels."""
    u = np.asarray(u, dtype=float)
    out = np.tan(np.pi * (u - 0.5))
    out = np.where(u == 0.0, -np.inf, np.where(u == 1.0, np.inf, out))
    return float(out) if out.ndim == 0 else out


def auc_binormal(params: BinormalParams) -> float:
    return float(
        ndtr((params.mu_d - params.mu_nd) / math.hypot(params.sigma_nd, params.sigma_d))
    )


def error_binormal(params: BinormalParams, w: float, c: float) -> float:
    """w*FNR + (1-w)*FPR at cutoff c, sentinel-aware."""
    if c == math.inf:
        return w
    if c == -math.inf:
        return 1.0 - w
    fnr = float(ndtr((c - params.mu_d) / params.sigma_d))
    fpr = 1.0 - float(ndtr((c - params.mu_nd) / params.sigma_nd))
    return w * fnr + (1.0 - w) * fpr


def _error_vec(mu_nd, mu_d, s_nd, s_d, w, c):
    fnr = ndtr((c - mu_d) / s_d)
    fpr = 1.0 - ndtr((c - mu_nd) / s_nd)
    return w * fnr + (1.0 - w) * fpr


def copt_batch(
    mu_nd: np.ndarray,
    mu_d: np.ndarray,
    s2_nd: np.ndarray,
    s2_d: np.ndarray,
    w: np.ndarray,
) -> np.ndarray:
    """Global minimizer of the prevalence-weighted error, vectorized.

    Stationary points of w*FNR + (1-w)*FPR solve a quadratic (linear when the
    variances coincide); a root is a local minimum only on one side of the
    densities' crossing, so each root is kept only if it satisfies the
    second-order inequality, and the survivors are compared against the
    sentinel errors w (at +inf) and 1-w (at -inf). Ties: a finite minimizer
    beats +inf beats -inf; between finite minimizers the smaller wins.
    """
    mu_nd = np.asarray(mu_nd, dtype=float)
    mu_d = np.asarray(mu_d, dtype=float)
    s2_nd = np.asarray(s2_nd, dtype=float)
    s2_d = np.asarray(s2_d, dtype=float)
    w = np.asarray(w, dtype=float)
    s_nd = np.sqrt(s2_nd)
    s_d = np.sqrt(s2_d)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        el = np.log((1.0 - w) * s_d / (w * s_nd))
        a = 1.0 / s2_d - 1.0 / s2_nd
        b = mu_d / s2_d - mu_nd / s2_nd
        cc = mu_d * mu_d / s2_d - mu_nd * mu_nd / s2_nd + 2.0 * el
        az = a == 0.0
        disc = b * b - a * cc
        r = np.sqrt(np.maximum(disc, 0.0))
        r1 = np.where(az, np.where(b != 0.0, cc / (2.0 * b), np.nan), (b - r) / a)
        r2 = np.where(az, np.nan, (b + r) / a)
        ok1 = np.isfinite(r1) & np.where(az, b > 0.0, (disc >= 0.0) & (a * r1 < b))
        ok2 = np.isfinite(r2) & ~az & (disc >= 0.0) & (a * r2 < b)
        e1 = np.where(ok1, _error_vec(mu_nd, mu_d, s_nd, s_d, w, r1), np.inf)
        e2 = np.where(ok2, _error_vec(mu_nd, mu_d, s_nd, s_d, w, r2), np.inf)
        lo = np.minimum(np.where(ok1, r1, np.inf), np.where(ok2, r2, np.inf))
        c_out = np.where(e1 < e2, r1, np.where(e2 < e1, r2, lo))
        e_out = np.minimum(e1, e2)
        pos_better = w < e_out
        c_out = np.where(pos_better, np.inf, c_out)
        e_out = np.where(pos_better, w, e_out)
        neg_better = (1.0 - w) < e_out
        c_out = np.where(neg_better, -np.inf, c_out)
        # fully balanced degenerate case: every cutoff ties, keep a finite one
        full_tie = az & (b == 0.0) & (w == 0.5)
        c_out = np.where(full_tie, mu_nd, c_out)
    return c_out


def copt_closed_form(params: BinormalParams, w: float) -> CutoffValue:
    """Scalar wrapper around copt_batch (single source of the tie rules)."""
    if not 0.0 < w < 1.0:
        raise ValueError("prevalence must lie in (0, 1)")
    c = copt_batch(
        np.array([params.mu_nd]),
        np.array([params.mu_d]),
        np.array([params.sigma_nd**2]),
        np.array([params.sigma_d**2]),
        np.array([w]),
    )
    return CutoffValue(value=float(c[0]))


def finite_cutoff_condition_batch(
    mu_nd: np.ndarray,
    mu_d: np.ndarray,
    s2_nd: np.ndarray,
    s2_d: np.ndarray,
    w: np.ndarray,
) -> np.ndarray:
    """Closed-form indicator that a finite cutoff attains the minimal error."""
    s_nd = np.sqrt(np.asarray(s2_nd, dtype=float))
    s_d = np.sqrt(np.asarray(s2_d, dtype=float))
    el = np.log((1.0 - np.asarray(w)) * s_d / (np.asarray(w) * s_nd))
    t = -2.0 * (s_d * s_d - s_nd * s_nd) * el
    return (np.asarray(mu_d) - np.asarray(mu_nd) - np.sqrt(np.maximum(0.0, t))) >= 0.0


def finite_cutoff_condition(params: BinormalParams, w: float) -> bool:
    if not 0.0 < w < 1.0:
        raise ValueError("prevalence must lie in (0, 1)")
    out = finite_cutoff_condition_batch(
        np.array([params.mu_nd]),
        np.array([params.mu_d]),
        np.array([params.sigma_nd**2]),
        np.array([params.sigma_d**2]),
        np.array([w]),
    )
    return bool(out[0])


# --- conjugate updates ---


@dataclass(frozen=True)
class EqualVarPosterior:
    """Joint conjugate state: mu_p | sigma^2 ~ N(loc_p, factor_p*sigma^2), shared precision gamma."""

    loc_nd: float
    factor_nd: float
    loc_d: float
    factor_d: float
    shape: float
    rate: float


@dataclass(frozen=True)
class PopulationPosterior:
    loc: float
    factor: float
    shape: float
    rate: float


def _loc_factor_rate(
    prior: NormalGammaParams, stats: SufficientStats | None
) -> tuple[float, float, float]:
    # returns (loc, factor, rate contribution); no data leaves the prior untouched
    if stats is None:
        return prior.mu0, prior.tau0**2, 0.0
    prec = stats.n + 1.0 / prior.tau0**2
    loc = (stats.n * stats.mean + prior.mu0 / prior.tau0**2) / prec
    shrink = (stats.n / prior.tau0**2) / prec * (stats.mean - prior.mu0) ** 2 / 2.0
    return loc, 1.0 / prec, stats.ss / 2.0 + shrink


def posterior_update_equal(
    prior: NormalGammaParams,
    stats_nd: SufficientStats | None = None,
    stats_d: SufficientStats | None = None,
) -> EqualVarPosterior:
    """Joint update of (mu_ND, mu_D, sigma^2) when the variance is shared."""
    loc_nd, f_nd, r_nd = _loc_factor_rate(prior, stats_nd)
    loc_d, f_d, r_d = _loc_factor_rate(prior, stats_d)
    n_total = (stats_nd.n if stats_nd else 0) + (stats_d.n if stats_d else 0)
    return EqualVarPosterior(
        loc_nd=loc_nd,
        factor_nd=f_nd,
        loc_d=loc_d,
        factor_d=f_d,
        shape=prior.lambda1 + n_total / 2.0,
        rate=prior.lambda2 + r_nd + r_d,
    )


def posterior_update_unequal(
    prior: NormalGammaParams,
    stats_nd: SufficientStats | None = None,
    stats_d: SufficientStats | None = None,
) -> tuple[PopulationPosterior, PopulationPosterior]:
    """Independent per-population updates when each group has its own variance."""
    out = []
    for stats in (stats_nd, stats_d):
        loc, f, r = _loc_factor_rate(prior, stats)
        n = stats.n if stats else 0
        out.append(
            PopulationPosterior(
                loc=loc, factor=f, shape=prior.lambda1 + n / 2.0, rate=prior.lambda2 + r
            )
        )
    return out[0], out[1]


# --- samplers (draw order within each is fixed and documented) ---


def sample_equal_var(
    post: EqualVarPosterior, rng: np.random.Generator, n: int
) -> dict[str, np.ndarray]:
    """Unconditioned draws; order: precision, mu_D normals, mu_ND normals."""
    prec = rng.gamma(post.shape, 1.0 / post.rate, size=n)
    sigma2 = 1.0 / prec
    mu_d = post.loc_d + np.sqrt(post.factor_d * sigma2) * rng.standard_normal(n)
    mu_nd = post.loc_nd + np.sqrt(post.factor_nd * sigma2) * rng.standard_normal(n)
    return {"sigma2": sigma2, "mu_d": mu_d, "mu_nd": mu_nd}


def sample_equal_var_conditional(
    post: EqualVarPosterior, rng: np.random.Generator, n: int
) -> dict[str, np.ndarray]:
    """Draws conditioned on mu_ND < mu_D by inverting the truncated mu_ND cdf.

    Order: precision, mu_D normals, one uniform per draw. The importance
    weight Phi((mu_D - loc_ND)/scale_ND) corrects for the truncation
    probability varying with (mu_D, sigma^2).
    """
    prec = rng.gamma(post.shape, 1.0 / post.rate, size=n)
    sigma2 = 1.0 / prec
    mu_d = post.loc_d + np.sqrt(post.factor_d * sigma2) * rng.standard_normal(n)
    scale_nd = np.sqrt(post.factor_nd * sigma2)
    cap = ndtr((mu_d - post.loc_nd) / scale_nd)
    u = rng.random(n)
    q = np.maximum(u * cap, 1e-300)  # keep ndtri off exact zero
    mu_nd = post.loc_nd + scale_nd * ndtri(q)
    return {"sigma2": sigma2, "mu_d": mu_d, "mu_nd": mu_nd, "weight": cap}


def sample_unequal(
    post_nd: PopulationPosterior,
    post_d: PopulationPosterior,
    rng: np.random.Generator,
    n: int,
) -> dict[str, np.ndarray]:
    """Unconditioned draws; order: ND precision, ND mean, D precision, D mean."""
    out: dict[str, np.ndarray] = {}
    for name, post in (("nd", post_nd), ("d", post_d)):
        prec = rng.gamma(post.shape, 1.0 / post.rate, size=n)
        s2 = 1.0 / prec
        mu = post.loc + np.sqrt(post.factor * s2) * rng.standard_normal(n)
        out[f"s2_{name}"] = s2
        out[f"mu_{name}"] = mu
    return out


# --- pipeline ---


@dataclass(frozen=True)
class BinormalOptions:
    n_draws: int = 100_000
    seed: int = 0
    batch_size: int = 10_000
    threads: int = 1
    auc_grid: Grid = field(default_factory=lambda: Grid(0.0, 1.0, 100))
    cutoff_grid: Grid = field(default_factory=lambda: Grid(0.0, 1.0, 100))
    rate_grid: Grid = field(default_factory=lambda: Grid(0.0, 1.0, 25))
    fixed_cutoff: float | None = None
    acceptance_floor: float = 1e-4
    ess_floor_fraction: float = 0.01


def _equal_var_quantities(
    d: dict[str, np.ndarray], w: np.ndarray
) -> dict[str, np.ndarray]:
    auc = ndtr((d["mu_d"] - d["mu_nd"]) / np.sqrt(2.0 * d["sigma2"]))
    with np.errstate(divide="ignore", invalid="ignore"):
        c = 0.5 * (d["mu_d"] + d["mu_nd"]) + d["sigma2"] * np.log((1.0 - w) / w) / (
            d["mu_d"] - d["mu_nd"]
        )
    return {"auc": auc, "u": cutoff_to_unit(c), "weight": d["weight"], "w": w}


def _rates_normal(
    mu_nd: np.ndarray,
    mu_d: np.ndarray,
    s_nd: np.ndarray,
    s_d: np.ndarray,
    w: np.ndarray,
    c0: float,
) -> dict[str, np.ndarray]:
    fnr = ndtr((c0 - mu_d) / s_d)
    fpr = 1.0 - ndtr((c0 - mu_nd) / s_nd)
    err = w * fnr + (1.0 - w) * fpr
    pos = w * (1.0 - fnr) + (1.0 - w) * fpr
    neg = w * fnr + (1.0 - w) * (1.0 - fpr)
    fdr = np.where(pos > 0.0, np.divide((1.0 - w) * fpr, pos, where=pos > 0.0), np.nan)
    fndr = np.where(neg > 0.0, np.divide(w * fnr, neg, where=neg > 0.0), np.nan)
    return {"fnr": fnr, "fpr": fpr, "error": err, "fdr": fdr, "fndr": fndr}


def infer_binormal(
    prior: NormalGammaParams,
    stats_nd: SufficientStats,
    stats_d: SufficientStats,
    prevalence: PrevalenceModel,
    variance_mode: str = "equal",
    options: BinormalOptions = BinormalOptions(),
) -> dict:
    """RB analysis of AUC, optimal cutoff, and error characteristics.

    The analysis is conditional on the diagnostic having positive effect:
    mu_D > mu_ND (equal variances; the prior probability of this is exactly
    1/2 by exchangeability) or a finite optimal cutoff existing (separate
    variances). The evidence for that event itself is reported first.
    """
    if variance_mode not in ("equal", "unequal"):
        raise ValueError("variance_mode must be 'equal' or 'unequal'")
    n, bs, th = options.n_draws, options.batch_size, options.threads
    report: dict = {"model": f"binormal_{variance_mode}"}

    if variance_mode == "equal":
        prior_state = posterior_update_equal(prior, None, None)
        post_state = posterior_update_equal(prior, stats_nd, stats_d)
        streams = pass_streams(
            options.seed,
            ["h0_posterior", "prior", "posterior", "fixed_prior", "fixed_posterior"],
        )

        def h0_worker(rng, nb):
            d = sample_equal_var(post_state, rng, nb)
            return {"gt": (d["mu_d"] > d["mu_nd"]).astype(float)}

        h0_run = run_batched(streams["h0_posterior"], n, bs, th, h0_worker)
        post_prob = float(h0_run["gt"].mean())
        # exchangeable continuous prior: P(mu_ND < mu_D) = 1/2 exactly
        h0 = assess_event_probs(0.5, post_prob)
        report["h0_positive_effect"] = assessment_summary(h0)
        report["h0_positive_effect"]["prior_prob_analytic"] = True

        def make_worker(state: EqualVarPosterior, use_post_w: bool):
            def worker(rng, nb):
                d = sample_equal_var_conditional(state, rng, nb)
                w = (
                    prevalence.draw_posterior(rng, nb)
                    if use_post_w
                    else prevalence.draw_prior(rng, nb)
                )
                return _equal_var_quantities(d, w)

            return worker

        prior_run = run_batched(streams["prior"], n, bs, th, make_worker(prior_state, False))
        post_run = run_batched(streams["posterior"], n, bs, th, make_worker(post_state, True))
        ess = {
            "prior": effective_sample_size(prior_run["weight"]),
            "posterior": effective_sample_size(post_run["weight"]),
        }
        for name, v in ess.items():
            if v < options.ess_floor_fraction * n:
                raise MCDiagnosticError(
                    f"effective sample size {v:.1f} in the {name} pass fell below "
                    f"{options.ess_floor_fraction * n:.0f}"
                )

        auc_prior = _weighted_hist(prior_run["auc"], options.auc_grid, prior_run["weight"])
        auc_post = _weighted_hist(post_run["auc"], options.auc_grid, post_run["weight"])
        report["auc"] = rb_summary(auc_prior, auc_post, relative_belief(auc_prior, auc_post))
        report["c_opt"] = cutoff_section(
            prior_run["u"],
            post_run["u"],
            options.cutoff_grid,
            unit_to_cutoff,
            prior_weights=prior_run["weight"],
            post_weights=post_run["weight"],
        )
        c0 = (
            float(options.fixed_cutoff)
            if options.fixed_cutoff is not None
            else report["c_opt"]["estimate"]
        )

        def make_rate_worker(state: EqualVarPosterior, use_post_w: bool):
            def worker(rng, nb):
                d = sample_equal_var_conditional(state, rng, nb)
                w = (
                    prevalence.draw_posterior(rng, nb)
                    if use_post_w
                    else prevalence.draw_prior(rng, nb)
                )
                s = np.sqrt(d["sigma2"])
                out = _rates_normal(d["mu_nd"], d["mu_d"], s, s, w, c0)
                out["weight"] = d["weight"]
                return out

            return worker

        rp = run_batched(streams["fixed_prior"], n, bs, th, make_rate_worker(prior_state, False))
        rq = run_batched(streams["fixed_posterior"], n, bs, th, make_rate_worker(post_state, True))
        report["rates"] = {
            name: rate_rb(
                rp[name], rq[name], options.rate_grid,
                prior_weights=rp["weight"], post_weights=rq["weight"],
            )
            for name in ("fnr", "fpr", "error", "fdr", "fndr")
        }
        report["rates"]["cutoff"] = c0
        report["diagnostics"] = {
            "n_draws": n,
            "seed": options.seed,
            "batch_size": bs,
            "threads": th,
            "effective_sample_size": ess,
            "posterior_state": {
                "loc_nd": post_state.loc_nd,
                "loc_d": post_state.loc_d,
                "shape": post_state.shape,
                "rate": post_state.rate,
            },
        }
    else:
        prior_nd, prior_d = posterior_update_unequal(prior, None, None)
        post_nd, post_d = posterior_update_unequal(prior, stats_nd, stats_d)
        streams = pass_streams(
            options.seed, ["prior", "posterior", "fixed_prior", "fixed_posterior"]
        )

        def make_worker(pnd: PopulationPosterior, pd: PopulationPosterior, use_post_w: bool):
            def worker(rng, nb):
                d = sample_unequal(pnd, pd, rng, nb)
                w = (
                    prevalence.draw_posterior(rng, nb)
                    if use_post_w
                    else prevalence.draw_prior(rng, nb)
                )
                keep = finite_cutoff_condition_batch(
                    d["mu_nd"], d["mu_d"], d["s2_nd"], d["s2_d"], w
                )
                auc = ndtr((d["mu_d"] - d["mu_nd"]) / np.sqrt(d["s2_nd"] + d["s2_d"]))
                c = copt_batch(d["mu_nd"], d["mu_d"], d["s2_nd"], d["s2_d"], w)
                out = {
                    "keep": keep.astype(float),
                    "auc": auc,
                    "u": cutoff_to_unit(c),
                    "w": w,
                }
                out.update({k: d[k] for k in ("mu_nd", "mu_d", "s2_nd", "s2_d")})
                return out

            return worker

        prior_run = run_batched(streams["prior"], n, bs, th, make_worker(prior_nd, prior_d, False))
        post_run = run_batched(streams["posterior"], n, bs, th, make_worker(post_nd, post_d, True))
        h0 = assess_event(
            int(prior_run["keep"].sum()), n, int(post_run["keep"].sum()), n
        )
        report["h0_finite_cutoff"] = assessment_summary(h0)
        accept = {
            "prior": float(prior_run["keep"].mean()),
            "posterior": float(post_run["keep"].mean()),
        }
        for name, v in accept.items():
            if v < options.acceptance_floor:
                raise MCDiagnosticError(
                    f"conditioning acceptance rate {v:.2e} in the {name} pass fell "
                    f"below {options.acceptance_floor}"
                )
        mp = prior_run["keep"] > 0.0
        mq = post_run["keep"] > 0.0
        auc_prior = _weighted_hist(prior_run["auc"][mp], options.auc_grid, None)
        auc_post = _weighted_hist(post_run["auc"][mq], options.auc_grid, None)
        report["auc"] = rb_summary(auc_prior, auc_post, relative_belief(auc_prior, auc_post))
        report["c_opt"] = cutoff_section(
            prior_run["u"][mp], post_run["u"][mq], options.cutoff_grid, unit_to_cutoff
        )
        c0 = (
            float(options.fixed_cutoff)
            if options.fixed_cutoff is not None
            else report["c_opt"]["estimate"]
        )

        def make_rate_worker(pnd: PopulationPosterior, pd: PopulationPosterior, use_post_w: bool):
            def worker(rng, nb):
                d = sample_unequal(pnd, pd, rng, nb)
                w = (
                    prevalence.draw_posterior(rng, nb)
                    if use_post_w
                    else prevalence.draw_prior(rng, nb)
                )
                keep = finite_cutoff_condition_batch(
                    d["mu_nd"], d["mu_d"], d["s2_nd"], d["s2_d"], w
                )
                out = _rates_normal(
                    d["mu_nd"], d["mu_d"], np.sqrt(d["s2_nd"]), np.sqrt(d["s2_d"]), w, c0
                )
                out["keep"] = keep.astype(float)
                return out

            return worker

        rp = run_batched(streams["fixed_prior"], n, bs, th, make_rate_worker(prior_nd, prior_d, False))
        rq = run_batched(streams["fixed_posterior"], n, bs, th, make_rate_worker(post_nd, post_d, True))
        kp, kq = rp["keep"] > 0.0, rq["keep"] > 0.0
        report["rates"] = {
            name: rate_rb(rp[name][kp], rq[name][kq], options.rate_grid)
            for name in ("fnr", "fpr", "error", "fdr", "fndr")
        }
        report["rates"]["cutoff"] = c0
        report["diagnostics"] = {
            "n_draws": n,
            "seed": options.seed,
            "batch_size": bs,
            "threads": th,
            "acceptance": accept,
        }

    if prevalence.has_update:
        report["prevalence"] = infer_prevalence(
            prevalence.prior, prevalence.n_d, prevalence.n_nd
        )
    return report
