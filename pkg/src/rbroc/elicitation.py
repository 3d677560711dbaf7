"""Prior elicitation from interval-and-coverage statements.

Three translators from expert statements to hyperparameters:

* a beta prior on a prevalence from "w lies in (l, u) with probability gamma",
* a normal-gamma prior on (mean, variance) from a plausible range for the
  mean and bounds on the measurement spread at a given coverage,
* a Dirichlet-process concentration from a bound on how far the random
  distribution function may wander from its base measure.

All three are deterministic root-finding procedures: same inputs give
bit-identical outputs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize, stats

__all__ = [
    "ElicitationError",
    "BetaParams",
    "KnownPrevalence",
    "NormalGammaParams",
    "DPConcentration",
    "elicit_beta",
    "elicit_normal_gamma",
    "dp_bound",
    "elicit_dp_concentration",
]


class ElicitationError(RuntimeError):
    """Raised when an elicitation search fails to converge."""


@dataclass(frozen=True)
class BetaParams:
    """beta(alpha1, alpha2) prior on a proportion."""

    alpha1: float
    alpha2: float

    def __post_init__(self) -> None:
        if self.alpha1 <= 0 or self.alpha2 <= 0:
            raise ValueError("beta parameters must be positive")

    @property
    def mode(self) -> float:
        if self.alpha1 <= 1 and self.alpha2 <= 1:
            raise ValueError("mode undefined unless some parameter exceeds 1")
        return (self.alpha1 - 1) / (self.alpha1 + self.alpha2 - 2)

    @property
    def concentration(self) -> float:
        return self.alpha1 + self.alpha2

    def mean(self) -> float:
        return self.alpha1 / (self.alpha1 + self.alpha2)


@dataclass(frozen=True)
class KnownPrevalence:
    """Degenerate marker: the prevalence is known exactly."""

    value: float

    def __post_init__(self) -> None:
        if not 0.0 < self.value < 1.0:
            raise ValueError("known prevalence must lie in (0, 1)")


@dataclass(frozen=True)
class NormalGammaParams:
    """Conjugate prior: mu | sigma^2 ~ N(mu0, tau0^2 sigma^2), 1/sigma^2 ~ gamma(lambda1, lambda2).

    achieved_content records the interval coverage actually attained by the
    elicitation search (None when the parameters were given directly).
    """

    mu0: float
    tau0: float
    lambda1: float
    lambda2: float
    achieved_content: float | None = None

    def __post_init__(self) -> None:
        if self.tau0 <= 0 or self.lambda1 <= 0 or self.lambda2 <= 0:
            raise ValueError("scale and gamma parameters must be positive")


@dataclass(frozen=True)
class DPConcentration:
    """Elicited Dirichlet-process concentration with the bound it achieves."""

    a: float
    epsilon: float
    achieved_bound: float


def _beta_content(tau: float, xi: float, lo: float, hi: float) -> float:
    # prior content of (lo, hi) for beta with mode xi and concentration tau
    a1 = 1.0 + xi * (tau - 2.0)
    a2 = tau - a1
    return float(stats.beta.cdf(hi, a1, a2) - stats.beta.cdf(lo, a1, a2))


def elicit_beta(
    lo: float,
    hi: float,
    gamma: float,
    mode: float | None = None,
    tol: float = 1e-10,
) -> BetaParams | KnownPrevalence:
    """Find the beta prior putting content gamma on (lo, hi) with the given mode.

    The mode defaults to the interval midpoint. Content is monotone in the
    concentration tau, so a bracketing bisection on tau converges to the
    smallest concentration whose content reaches gamma: the returned prior
    has content >= gamma while any smaller tau falls short.

    lo == hi is the exactly-known case and returns a KnownPrevalence marker.
    gamma == 1 with lo < hi is unattainable by any beta and is rejected;
    state the value as known (lo == hi) instead.
    """
    if not 0.0 <= lo <= hi <= 1.0:
        raise ValueError("need 0 <= lo <= hi <= 1")
    if lo == hi:
        return KnownPrevalence(value=lo)
    if not 0.0 < gamma <= 1.0:
        raise ValueError("gamma must lie in (0, 1]")
    if gamma == 1.0:
        raise ValueError(
            "no beta prior puts content 1 on a strict subinterval; "
            "use lo == hi to state the value as known"
        )
    if mode is None:
        mode = 0.5 * (lo + hi)
    if not lo < mode < hi:
        raise ValueError("mode must lie strictly inside (lo, hi)")

    # bracket: tau = 2 is the flat prior; double until content reaches gamma
    t_lo, t_hi = 2.0, 4.0
    for _ in range(200):
        if _beta_content(t_hi, mode, lo, hi) >= gamma:
            break
        t_lo = t_hi
        t_hi *= 2.0
    else:
        raise ElicitationError("concentration bracket did not close")
    while t_hi - t_lo > tol:
        mid = 0.5 * (t_lo + t_hi)
        if _beta_content(mid, mode, lo, hi) >= gamma:
            t_hi = mid
        else:
            t_lo = mid
    tau = t_hi
    a1 = 1.0 + mode * (tau - 2.0)
    return BetaParams(alpha1=a1, alpha2=tau - a1)


def elicit_normal_gamma(
    m1: float,
    m2: float,
    s_lo: float,
    s_hi: float,
    gamma: float,
    lambda1_start: float = 2.0,
    max_iter: int = 500,
    content_tol: float = 1e-4,
) -> NormalGammaParams:
    """Elicit the normal-gamma hyperparameters from interval statements.

    (m1, m2) is the plausible range for a population mean at coverage gamma;
    (s_lo, s_hi) bounds the measurement standard deviation at the same
    coverage. The location and scale follow in closed form:

        mu0 = (m1 + m2)/2,    tau0 = (m2 - m1) / (2 * s_hi)

    (the half-width is calibrated against the largest plausible sigma). The
    gamma shape/rate must put content gamma on the implied precision interval
    (z/s_hi)^2 < 1/sigma^2 < (z/s_lo)^2 where z is the (1+gamma)/2 normal
    quantile. Two one-dimensional solves alternate: given shape lambda1, set
    the rate so the upper precision endpoint sits at quantile (1+gamma)/2,
    then re-solve the shape so the lower endpoint sits at (1-gamma)/2. The
    loop stops when the interval content is within content_tol of gamma.
    """
    if not m1 < m2:
        raise ValueError("need m1 < m2")
    if not 0 < s_lo < s_hi:
        raise ValueError("need 0 < s_lo < s_hi")
    if not 0.0 < gamma < 1.0:
        raise ValueError("gamma must lie in (0, 1)")

    z = stats.norm.ppf(0.5 * (1.0 + gamma))
    mu0 = 0.5 * (m1 + m2)
    tau0 = (m2 - m1) / (2.0 * s_hi)
    x_lo = (z / s_hi) ** 2
    x_hi = (z / s_lo) ** 2
    p_hi = 0.5 * (1.0 + gamma)
    p_lo = 0.5 * (1.0 - gamma)

    lam1 = float(lambda1_start)
    lam2 = float("nan")
    for _ in range(max_iter):
        # rate matching the upper endpoint at quantile p_hi, for this shape
        lam2 = float(stats.gamma.ppf(p_hi, lam1) / x_hi)
        content = float(stats.gamma.cdf(x_hi * lam2, lam1) - stats.gamma.cdf(x_lo * lam2, lam1))
        if abs(content - gamma) <= content_tol:
            return NormalGammaParams(
                mu0=mu0, tau0=tau0, lambda1=lam1, lambda2=lam2, achieved_content=content
            )

        def lower_gap(l1: float, rate: float = lam2) -> float:
            return float(stats.gamma.cdf(x_lo * rate, l1) - p_lo)

        lo_b, hi_b = 1e-6, max(2.0 * lam1, 4.0)
        for _ in range(200):
            if lower_gap(hi_b) <= 0.0:
                break
            hi_b *= 2.0
        else:
            raise ElicitationError("shape bracket did not close")
        lam1 = float(optimize.brentq(lower_gap, lo_b, hi_b, xtol=1e-12))
    raise ElicitationError(
        f"no convergence after {max_iter} iterations; "
        f"last iterate shape={lam1!r} rate={lam2!r}"
    )


def dp_bound(a: float, epsilon: float, n_grid: int = 1001) -> float:
    """Worst-case prior probability that the random cdf misses its base value by > epsilon.

    For concentration a the random cdf at a point with base value r is
    beta(a*r, a*(1-r)) distributed, so the miss probability at r is
    1 - P(r - eps < beta < r + eps). The supremum over r in (0, 1) is
    approximated on a grid and refined once around the maximizer; at r = 0
    and r = 1 the cdf is pinned and the miss probability is zero.
    """
    if a <= 0:
        raise ValueError("concentration must be positive")
    if not 0.0 < epsilon < 1.0:
        raise ValueError("epsilon must lie in (0, 1)")

    def miss(r: np.ndarray) -> np.ndarray:
        lo = np.clip(r - epsilon, 0.0, 1.0)
        hi = np.clip(r + epsilon, 0.0, 1.0)
        return 1.0 - (stats.beta.cdf(hi, a * r, a * (1.0 - r))
                      - stats.beta.cdf(lo, a * r, a * (1.0 - r)))

    r = np.linspace(0.0, 1.0, n_grid)[1:-1]
    vals = miss(r)
    k = int(np.argmax(vals))
    # one refinement pass around the coarse maximizer
    lo_r = r[max(k - 1, 0)]
    hi_r = r[min(k + 1, len(r) - 1)]
    r2 = np.linspace(lo_r, hi_r, n_grid)
    inner = (r2 > 0.0) & (r2 < 1.0)
    vals2 = miss(r2[inner])
    return float(max(vals.max(), vals2.max()))


def elicit_dp_concentration(
    epsilon: float,
    target_bound: float,
    resolution: float = 0.1,
    a_max: float = 1e6,
) -> DPConcentration:
    """Smallest concentration (on a resolution grid) whose miss bound is <= target.

    The bound is decreasing in a, so a doubling bracket plus integer bisection
    on multiples of `resolution` pins the smallest admissible grid value.
    """
    if target_bound <= 0 or target_bound >= 1:
        raise ValueError("target bound must lie in (0, 1)")
    hi = 1.0
    while dp_bound(hi, epsilon) > target_bound:
        hi *= 2.0
        if hi > a_max:
            raise ElicitationError("no concentration below a_max meets the bound")
    # integer bisection on k = a / resolution: lo fails, hi passes
    k_hi = int(math.ceil(hi / resolution))
    k_lo = 0  # bound at a -> 0+ tends to 1, always fails
    while k_hi - k_lo > 1:
        k_mid = (k_lo + k_hi) // 2
        if k_mid == 0:
            break
        if dp_bound(k_mid * resolution, epsilon) <= target_bound:
            k_hi = k_mid
        else:
            k_lo = k_mid
    a = k_hi * resolution
    return DPConcentration(a=a, epsilon=epsilon, achieved_bound=dp_bound(a, epsilon))
