"""Classification error characteristics of a diagnostic at a cutoff.

A diagnostic classifies positive when the score exceeds the cutoff c. With
F_ND and F_D the score distributions in the non-diseased and diseased groups
and w the prevalence:

    FNR(c) = F_D(c)            FPR(c) = 1 - F_ND(c)
    Error(c) = w*FNR + (1-w)*FPR
    FDR(c) = (1-w)*FPR / (w*(1-FNR) + (1-w)*FPR)
    FNDR(c) = w*FNR / (w*FNR + (1-w)*(1-FPR))

FDR/FNDR are undefined (0/0) when nobody is classified positive/negative;
those cases are flagged, not silently zeroed. The cutoffs +inf (classify all
negative, Error = w) and -inf (classify all positive, Error = 1-w) are legal
sentinel values throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy import integrate, stats

__all__ = [
    "StepCDF",
    "NormalCDF",
    "EvaluableDistributions",
    "ErrorProfile",
    "error_profile",
    "auc",
    "auc_monte_carlo",
    "optimal_cutoff_grid",
    "weighted_error_cutoff",
    "roc_points",
    "roc_trapezoid_area",
    "export_roc_csv",
]


@dataclass(frozen=True)
class StepCDF:
    """Discrete distribution: support points (strictly increasing) and their masses."""

    points: np.ndarray
    masses: np.ndarray

    def __post_init__(self) -> None:
        p = np.asarray(self.points, dtype=float)
        m = np.asarray(self.masses, dtype=float)
        if p.ndim != 1 or p.shape != m.shape:
            raise ValueError("points and masses must be 1-d and equal length")
        if (np.diff(p) <= 0).any():
            raise ValueError("support points must be strictly increasing")
        if (m < 0).any() or not math.isclose(m.sum(), 1.0, abs_tol=1e-9):
            raise ValueError("masses must be nonnegative and sum to 1")
        object.__setattr__(self, "points", p)
        object.__setattr__(self, "masses", m)

    def cdf(self, x) -> np.ndarray | float:
        cum = np.cumsum(self.masses)
        cum[-1] = 1.0  # masses sum to 1 up to float noise; exhaust exactly
        idx = np.searchsorted(self.points, x, side="right")
        out = np.where(idx > 0, cum[np.maximum(idx - 1, 0)], 0.0)
        return float(out) if np.isscalar(x) else out


@dataclass(frozen=True)
class NormalCDF:
    mu: float
    sigma: float

    def __post_init__(self) -> None:
        if self.sigma <= 0:
            raise ValueError("sigma must be positive")

    def cdf(self, x) -> np.ndarray | float:
        return stats.norm.cdf(x, loc=self.mu, scale=self.sigma)


@dataclass(frozen=True)
class EvaluableDistributions:
    """The (F_ND, F_D) pair a diagnostic induces on the two groups."""

    f_nd: StepCDF | NormalCDF
    f_d: StepCDF | NormalCDF

    @property
    def kind(self) -> str:
        if isinstance(self.f_nd, StepCDF) and isinstance(self.f_d, StepCDF):
            return "discrete"
        if isinstance(self.f_nd, NormalCDF) and isinstance(self.f_d, NormalCDF):
            return "continuous"
        return "mixed"


@dataclass(frozen=True)
class ErrorProfile:
    cutoff: float
    fnr: float
    fpr: float
    error: float
    fdr: float
    fndr: float
    fdr_defined: bool = True
    fndr_defined: bool = True


def error_profile(dists: EvaluableDistributions, w: float, c: float) -> ErrorProfile:
    """All five error characteristics at cutoff c under prevalence w."""
    if not 0.0 < w < 1.0:
        raise ValueError("prevalence must lie in (0, 1)")
    fnr = float(dists.f_d.cdf(c))
    fpr = 1.0 - float(dists.f_nd.cdf(c))
    err = w * fnr + (1.0 - w) * fpr
    pos = w * (1.0 - fnr) + (1.0 - w) * fpr
    neg = w * fnr + (1.0 - w) * (1.0 - fpr)
    if pos > 0.0:
        fdr, fdr_ok = (1.0 - w) * fpr / pos, True
    else:
        fdr, fdr_ok = float("nan"), False
    if neg > 0.0:
        fndr, fndr_ok = w * fnr / neg, True
    else:
        fndr, fndr_ok = float("nan"), False
    return ErrorProfile(
        cutoff=c, fnr=fnr, fpr=fpr, error=err,
        fdr=fdr, fndr=fndr, fdr_defined=fdr_ok, fndr_defined=fndr_ok,
    )


def auc(
    dists: EvaluableDistributions,
    integrator: Callable[[Callable, float, float], float] | None = None,
) -> float:
    """P(diseased score > non-diseased score), ties resolved against the diagnostic.

    Discrete pair: sum over the non-diseased support of p_ND * (1 - F_D);
    a tie at a support point contributes 1 - F_D there, i.e. counts as a miss,
    so two identical fair coins give 0.25, not 0.5. Continuous pair:
    integral of (1 - F_D(x)) dF_ND(x) by quadrature (scipy by default; pass
    `integrator(f, a, b) -> float` to override).
    """
    kind = dists.kind
    if kind == "mixed":
        raise TypeError("AUC needs two distributions of the same kind")
    if kind == "discrete":
        pts = dists.f_nd.points
        return float(np.sum(dists.f_nd.masses * (1.0 - dists.f_d.cdf(pts))))
    # continuous: substitute x = mu_nd + sigma_nd * z
    f_nd: NormalCDF = dists.f_nd
    f_d: NormalCDF = dists.f_d

    def integrand(z: float) -> float:
        x = f_nd.mu + f_nd.sigma * z
        return (1.0 - f_d.cdf(x)) * stats.norm.pdf(z)

    if integrator is None:
        val, _ = integrate.quad(integrand, -10.0, 10.0)
        return float(val)
    return float(integrator(integrand, -10.0, 10.0))


def auc_monte_carlo(
    dists: EvaluableDistributions, n: int, seed: int = 0
) -> tuple[float, float]:
    """MC estimate of the AUC with its standard error."""
    rng = np.random.default_rng(seed)
    if dists.kind == "discrete":
        x_nd = rng.choice(dists.f_nd.points, size=n, p=dists.f_nd.masses)
        x_d = rng.choice(dists.f_d.points, size=n, p=dists.f_d.masses)
    elif dists.kind == "continuous":
        x_nd = rng.normal(dists.f_nd.mu, dists.f_nd.sigma, size=n)
        x_d = rng.normal(dists.f_d.mu, dists.f_d.sigma, size=n)
    else:
        raise TypeError("AUC needs two distributions of the same kind")
    ind = (x_d > x_nd).astype(float)
    return float(ind.mean()), float(ind.std(ddof=1) / math.sqrt(n))


def optimal_cutoff_grid(
    dists: EvaluableDistributions,
    w: float,
    candidates: Sequence[float],
) -> tuple[float, ErrorProfile]:
    """Minimize Error(c) over finite candidates plus the +/-inf sentinels.

    Tie order: the smallest finite minimizer wins; +inf is chosen only when
    strictly better than every finite candidate; -inf only when strictly
    better than both. Returns the chosen cutoff with its full profile.
    """
    cand = [float(c) for c in candidates if math.isfinite(c)]
    if not cand:
        raise ValueError("need at least one finite candidate")
    errs = [error_profile(dists, w, c).error for c in cand]
    best = min(errs)
    c_star = math.nan
    for i in np.argsort(cand, kind="stable"):
        if errs[i] == best:
            c_star = cand[i]
            break
    if w < best:
        c_star, best = math.inf, w
    if (1.0 - w) < best:
        c_star, best = -math.inf, 1.0 - w
    return c_star, error_profile(dists, w, c_star)


def weighted_error_cutoff(
    dists: EvaluableDistributions,
    w0: float,
    candidates: Sequence[float],
) -> tuple[float, float]:
    """Minimize w0*FNR + (1-w0)*FPR over the candidates (no sentinels).

    w0 is a chosen weight on misclassifying the diseased, not the prevalence.
    Ties go to the largest candidate. Returns (cutoff, attained value).
    """
    if not 0.0 < w0 < 1.0:
        raise ValueError("weight must lie in (0, 1)")
    cand = sorted(float(c) for c in candidates)
    if not cand:
        raise ValueError("need at least one candidate")
    best_c, best_v = cand[0], math.inf
    for c in cand:
        fnr = float(dists.f_d.cdf(c))
        fpr = 1.0 - float(dists.f_nd.cdf(c))
        v = w0 * fnr + (1.0 - w0) * fpr
        if v <= best_v:  # <=: later (larger) candidate wins ties
            best_c, best_v = c, v
    return best_c, best_v


def roc_points(
    dists: EvaluableDistributions, candidates: Sequence[float]
) -> list[tuple[float, float]]:
    """(FPR, TPR) at each candidate cutoff, sorted by FPR then TPR."""
    pts = []
    for c in candidates:
        fpr = 1.0 - float(dists.f_nd.cdf(c))
        tpr = 1.0 - float(dists.f_d.cdf(c))
        pts.append((fpr, tpr))
    return sorted(pts)


def roc_trapezoid_area(points: Sequence[tuple[float, float]]) -> float:
    """Trapezoid area under the ROC polyline through (0,0), the points, (1,1).

    A cross-check on the probability AUC: for discrete scores the polyline
    interpolates across ties, so the two need not agree.
    """
    pts = sorted(set(points) | {(0.0, 0.0), (1.0, 1.0)})
    xs = np.array([p[0] for p in pts])
    ys = np.array([p[1] for p in pts])
    return float(np.trapezoid(ys, xs))


def export_roc_csv(path, dists: EvaluableDistributions, candidates: Sequence[float]) -> None:
    import csv

    rows = []
    for c in candidates:
        fpr = 1.0 - float(dists.f_nd.cdf(c))
        tpr = 1.0 - float(dists.f_d.cdf(c))
        rows.append((fpr, tpr, c))
    rows.sort()
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["fpr", "tpr", "cutoff"])
        for fpr, tpr, c in rows:
            w.writerow([repr(fpr), repr(tpr), repr(c)])
