"""Randomized invariants that hold for every valid input, not just examples."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rbroc.binormal_model import (
    BinormalParams,
    auc_binormal,
    cutoff_to_unit,
    finite_cutoff_condition,
    posterior_update_equal,
    sample_equal_var,
    sample_equal_var_conditional,
    unit_to_cutoff,
)
from rbroc.elicitation import NormalGammaParams
from rbroc.rb_core import Grid, estimate_density, relative_belief

from _oracles import process_auc_prefix_naive, two_condition_oracle

finite_floats = st.floats(
    min_value=-1e6, max_value=1e6, allow_nan=False, allow_infinity=False
)


# --- histogram mass conservation ---------------------------------------------


@given(
    draws=st.lists(finite_floats, min_size=1, max_size=200),
    lo=st.floats(min_value=-100.0, max_value=99.0),
    width=st.floats(min_value=1e-3, max_value=200.0),
    n_bins=st.integers(min_value=2, max_value=64),
)
@settings(max_examples=200)
def test_histogram_mass_sums_to_one(draws, lo, width, n_bins):
    h = estimate_density(np.array(draws), Grid(lo, lo + width, n_bins))
    assert h.mass.sum() == pytest.approx(1.0, abs=1e-9)
    assert (h.mass >= 0.0).all()


@given(
    draws=st.lists(finite_floats, min_size=1, max_size=100),
    weights=st.lists(
        st.floats(min_value=1e-6, max_value=1e3), min_size=1, max_size=100
    ),
    n_bins=st.integers(min_value=2, max_value=32),
)
@settings(max_examples=200)
def test_weighted_histogram_mass_sums_to_one(draws, weights, n_bins):
    k = min(len(draws), len(weights))
    h = estimate_density(
        np.array(draws[:k]), Grid(-50.0, 50.0, n_bins), weights=np.array(weights[:k])
    )
    assert h.mass.sum() == pytest.approx(1.0, abs=1e-9)


# --- relative belief is invariant under increasing affine reparameterization --


@given(
    prior_bins=st.lists(st.integers(min_value=0, max_value=19), min_size=5, max_size=120),
    post_bins=st.lists(st.integers(min_value=0, max_value=19), min_size=5, max_size=120),
    offsets=st.lists(
        st.floats(min_value=0.25, max_value=0.75), min_size=5, max_size=120
    ),
    scale=st.floats(min_value=0.1, max_value=10.0),
    shift=st.floats(min_value=-10.0, max_value=10.0),
)
@settings(max_examples=150)
def test_rb_argmax_invariant_under_affine_map(prior_bins, post_bins, offsets, scale, shift):
    # draws are placed well inside their bins, so the mapped draws stay well
    # inside the mapped bins and the bin assignment cannot flip
    grid = Grid(0.0, 1.0, 20)
    h = 1.0 / 20

    def place(bins):
        off = (offsets * (len(bins) // len(offsets) + 1))[: len(bins)]
        return np.array([(b + u) * h for b, u in zip(bins, off)])

    x_p, x_q = place(prior_bins), place(post_bins)
    base = relative_belief(estimate_density(x_p, grid), estimate_density(x_q, grid))

    mapped_grid = Grid(shift, shift + scale, 20)
    y_p, y_q = scale * x_p + shift, scale * x_q + shift
    mapped = relative_belief(
        estimate_density(y_p, mapped_grid), estimate_density(y_q, mapped_grid)
    )

    assert mapped.estimate_index == base.estimate_index
    assert np.array_equal(mapped.plausible_bins, base.plausible_bins)
    assert np.allclose(
        np.where(base.defined, base.rb, -1.0),
        np.where(mapped.defined, mapped.rb, -1.0),
        atol=1e-9,
    )


# --- closed-form normal facts -------------------------------------------------


@given(
    mu_nd=finite_floats,
    mu_d=finite_floats,
    s_nd=st.floats(min_value=1e-3, max_value=1e3),
    s_d=st.floats(min_value=1e-3, max_value=1e3),
)
@settings(max_examples=300)
def test_auc_sign_tracks_mean_ordering(mu_nd, mu_d, s_nd, s_d):
    auc = auc_binormal(BinormalParams(mu_nd, mu_d, s_nd, s_d))
    if mu_d > mu_nd:
        assert auc >= 0.5
    elif mu_d < mu_nd:
        assert auc <= 0.5
    else:
        assert auc == 0.5
    gap = (mu_d - mu_nd) / math.hypot(s_nd, s_d)
    if 1e-8 <= gap <= 8.0:
        assert auc > 0.5
    if -8.0 <= gap <= -1e-8:
        assert auc < 0.5


@given(
    mu_nd=st.floats(min_value=-100.0, max_value=100.0),
    mu_d=st.floats(min_value=-100.0, max_value=100.0),
    s_nd=st.floats(min_value=0.01, max_value=100.0),
    s_d=st.floats(min_value=0.01, max_value=100.0),
    shrink=st.floats(min_value=0.1, max_value=0.9),
)
@settings(max_examples=200)
def test_auc_improves_as_spreads_shrink(mu_nd, mu_d, s_nd, s_d, shrink):
    if abs(mu_d - mu_nd) < 1e-6:
        return
    wide = auc_binormal(BinormalParams(mu_nd, mu_d, s_nd, s_d))
    tight = auc_binormal(BinormalParams(mu_nd, mu_d, s_nd * shrink, s_d * shrink))
    if mu_d > mu_nd:
        assert tight >= wide
    else:
        assert tight <= wide


@given(
    mu_nd=st.floats(min_value=-100.0, max_value=100.0),
    mu_d=st.floats(min_value=-100.0, max_value=100.0),
    s_nd=st.floats(min_value=0.01, max_value=100.0),
    s_d=st.floats(min_value=0.01, max_value=100.0),
    w=st.floats(min_value=1e-3, max_value=1.0 - 1e-3),
)
@settings(max_examples=500)
def test_finite_cutoff_condition_matches_two_condition_check(mu_nd, mu_d, s_nd, s_d, w):
    got = finite_cutoff_condition(BinormalParams(mu_nd, mu_d, s_nd, s_d), w)
    assert got == two_condition_oracle(mu_nd, mu_d, s_nd, s_d, w)


@given(c=st.floats(min_value=-1e6, max_value=1e6))
@settings(max_examples=300)
def test_cutoff_unit_map_round_trip(c):
    back = unit_to_cutoff(cutoff_to_unit(c))
    assert back == pytest.approx(c, rel=1e-9, abs=1e-9)


# --- conditioning commutes with updating ---------------------------------------


def test_conditional_sampler_matches_filtered_unconditional():
    # the conditional law reached by weighting the conditional sampler equals
    # the one reached by filtering unconditioned draws, bin by bin
    prior = NormalGammaParams(mu0=0.0, tau0=0.5, lambda1=1.787, lambda2=1.056)
    rng_stats = np.random.default_rng(100)
    from rbroc.binormal_model import SufficientStats

    stats_nd = SufficientStats(25, -0.072, 19.638)
    stats_d = SufficientStats(20, 0.976, 16.778)
    post = posterior_update_equal(prior, stats_nd, stats_d)

    n = 150_000
    cond = sample_equal_var_conditional(post, np.random.default_rng(101), n)
    auc_is = _auc_of(cond)
    wts = cond["weight"]

    unc = sample_equal_var(post, np.random.default_rng(102), n)
    keep = unc["mu_d"] > unc["mu_nd"]
    auc_rej = _auc_of({k: v[keep] for k, v in unc.items()})

    grid = Grid(0.0, 1.0, 20)
    h_is = estimate_density(auc_is, grid, weights=wts)
    h_rej = estimate_density(auc_rej, grid)

    n_eff = float(wts.sum() ** 2 / (wts**2).sum())
    n_rej = int(keep.sum())
    for p, q in zip(h_is.mass, h_rej.mass):
        se = math.sqrt(
            max(p * (1 - p), 1e-12) / n_eff + max(q * (1 - q), 1e-12) / n_rej
        )
        assert abs(p - q) <= 3.0 * se + 1e-4


def _auc_of(d):
    from scipy.special import ndtr

    return ndtr((d["mu_d"] - d["mu_nd"]) / np.sqrt(2.0 * d["sigma2"]))


# --- step-mixture AUC: bit-exact against a plain-Python prefix oracle ----------


@given(
    raw_w_nd=st.lists(st.floats(min_value=0.01, max_value=1.0), min_size=1, max_size=12),
    raw_w_d=st.lists(st.floats(min_value=0.01, max_value=1.0), min_size=1, max_size=12),
    data=st.data(),
)
@settings(max_examples=200)
def test_process_auc_bit_exact_vs_prefix_oracle(raw_w_nd, raw_w_d, data):
    from rbroc import _kernels

    atoms_nd = np.sort(
        np.array(
            data.draw(
                st.lists(
                    st.integers(min_value=-5, max_value=5),
                    min_size=len(raw_w_nd),
                    max_size=len(raw_w_nd),
                )
            ),
            dtype=float,
        )
    )
    atoms_d = np.sort(
        np.array(
            data.draw(
                st.lists(
                    st.integers(min_value=-5, max_value=5),
                    min_size=len(raw_w_d),
                    max_size=len(raw_w_d),
                )
            ),
            dtype=float,
        )
    )
    w_nd = np.array(raw_w_nd) / np.sum(raw_w_nd)
    w_d = np.array(raw_w_d) / np.sum(raw_w_d)
    got = _kernels.process_auc_batch(
        w_nd[None, :], atoms_nd[None, :], w_d[None, :], atoms_d[None, :]
    )[0]
    want = process_auc_prefix_naive(w_nd, atoms_nd, w_d, atoms_d)
    assert got == want
