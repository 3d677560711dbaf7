"""Exact prevalence inference: conjugate updates and beta-mass RB analysis."""

import numpy as np
import pytest
from scipy import stats

from rbroc.elicitation import BetaParams, KnownPrevalence
from rbroc.prevalence import (
    PrevalenceModel,
    exact_masses,
    infer_prevalence,
    posterior_params,
)
from rbroc.rb_core import Grid

from _oracles import (
    BETA_CASES,
    EX3_PREV_CONTENT,
    EX3_PREV_EST,
    EX3_PREV_PL,
    S31_PREV_CONTENT,
    S31_PREV_EST,
    S31_PREV_PL,
    prevalence_rb_oracle,
)


class TestPosteriorParams:
    def test_conjugate_arithmetic(self):
        post = posterior_params(BetaParams(2.5, 7.0), n_d=11, n_nd=4)
        assert post.alpha1 == 13.5
        assert post.alpha2 == 11.0

    def test_zero_counts_identity(self):
        prior = BetaParams(3.0, 5.0)
        post = posterior_params(prior, 0, 0)
        assert post == prior

    def test_negative_counts_rejected(self):
        with pytest.raises(ValueError):
            posterior_params(BetaParams(1.0, 1.0), -1, 5)
        with pytest.raises(ValueError):
            posterior_params(BetaParams(1.0, 1.0), 5, -1)


class TestExactMasses:
    def test_masses_sum_to_one(self):
        hist = exact_masses(BetaParams(15.36, 22.54), Grid(0.0, 1.0, 1000))
        assert hist.mass.sum() == pytest.approx(1.0, abs=1e-12)
        assert np.all(hist.mass >= 0.0)

    def test_uniform_beta_gives_equal_bins(self):
        hist = exact_masses(BetaParams(1.0, 1.0), Grid(0.0, 1.0, 50))
        assert np.allclose(hist.mass, 1.0 / 50, atol=1e-15)

    def test_bin_mass_matches_cdf_difference(self):
        params = BetaParams(4.2, 9.1)
        grid = Grid(0.0, 1.0, 200)
        hist = exact_masses(params, grid)
        edges = grid.edges()
        want = stats.beta.cdf(edges[1:], 4.2, 9.1) - stats.beta.cdf(
            edges[:-1], 4.2, 9.1
        )
        assert np.allclose(hist.mass, want, atol=1e-15)

    def test_no_draws_recorded(self):
        hist = exact_masses(BetaParams(2.0, 2.0), Grid(0.0, 1.0, 10))
        assert hist.n_draws == 0


class TestPrevalenceModel:
    def test_requires_both_counts_or_neither(self):
        with pytest.raises(ValueError):
            PrevalenceModel(prior=BetaParams(1.0, 1.0), n_d=5)
        with pytest.raises(ValueError):
            PrevalenceModel(prior=BetaParams(1.0, 1.0), n_nd=5)

    def test_known_value_admits_no_update(self):
        with pytest.raises(ValueError):
            PrevalenceModel(prior=KnownPrevalence(0.4), n_d=3, n_nd=7)

    def test_posterior_passthrough_without_counts(self):
        prior = BetaParams(15.0, 22.0)
        model = PrevalenceModel(prior=prior)
        assert not model.has_update
        assert model.posterior() == prior

    def test_posterior_with_counts(self):
        model = PrevalenceModel(prior=BetaParams(15.0, 22.0), n_d=20, n_nd=25)
        assert model.has_update
        post = model.posterior()
        assert post.alpha1 == 35.0
        assert post.alpha2 == 47.0

    def test_known_value_draws_constant(self):
        model = PrevalenceModel(prior=KnownPrevalence(0.65))
        rng = np.random.default_rng(0)
        draws = model.draw_prior(rng, 7)
        assert np.all(draws == 0.65)
        assert np.all(model.draw_posterior(rng, 3) == 0.65)

    def test_draws_deterministic_under_seed(self):
        model = PrevalenceModel(prior=BetaParams(15.0, 22.0), n_d=20, n_nd=25)
        a = model.draw_posterior(np.random.default_rng(42), 100)
        b = model.draw_posterior(np.random.default_rng(42), 100)
        assert np.array_equal(a, b)

    def test_prior_and_posterior_draws_differ(self):
        model = PrevalenceModel(prior=BetaParams(2.0, 2.0), n_d=50, n_nd=10)
        pr = model.draw_prior(np.random.default_rng(1), 2000)
        po = model.draw_posterior(np.random.default_rng(1), 2000)
        # strong update pulls the posterior far above the prior mean
        assert po.mean() > pr.mean() + 0.2


class TestInferPrevalence:
    def test_matches_oracle_on_random_inputs(self):
        rng = np.random.default_rng(9)
        for _ in range(10):
            a1 = float(rng.uniform(0.5, 40.0))
            a2 = float(rng.uniform(0.5, 40.0))
            n_d = int(rng.integers(0, 60))
            n_nd = int(rng.integers(0, 60))
            report = infer_prevalence(BetaParams(a1, a2), n_d, n_nd)
            est, runs, content = prevalence_rb_oracle(a1, a2, n_d, n_nd)
            w = report["w"]
            assert w["estimate"] == pytest.approx(est, abs=1e-12)
            assert w["plausible_content"] == pytest.approx(content, abs=1e-12)
            got_runs = [tuple(iv) for iv in w["plausible_region"]]
            assert len(got_runs) == len(runs)
            for g, o in zip(got_runs, runs):
                assert g == pytest.approx(o, abs=1e-12)

    def test_survey_case_frozen_values(self):
        a1, a2 = BETA_CASES[0][3], BETA_CASES[0][4]
        report = infer_prevalence(BetaParams(a1, a2), n_d=68, n_nd=32)
        w = report["w"]
        assert w["estimate"] == pytest.approx(S31_PREV_EST, abs=1e-12)
        assert w["plausible_region"][0] == pytest.approx(list(S31_PREV_PL), abs=1e-12)
        assert w["plausible_content"] == pytest.approx(S31_PREV_CONTENT, abs=1e-12)

    def test_clinic_case_frozen_values(self):
        a1, a2 = BETA_CASES[1][3], BETA_CASES[1][4]
        report = infer_prevalence(BetaParams(a1, a2), n_d=20, n_nd=25)
        w = report["w"]
        assert w["estimate"] == pytest.approx(EX3_PREV_EST, abs=1e-12)
        assert w["plausible_region"][0] == pytest.approx(list(EX3_PREV_PL), abs=1e-12)
        assert w["plausible_content"] == pytest.approx(EX3_PREV_CONTENT, abs=1e-12)

    def test_report_carries_exact_posterior_params(self):
        report = infer_prevalence(BetaParams(15.3589, 22.53835), 20, 25)
        assert report["posterior"]["alpha1"] == pytest.approx(35.3589, abs=1e-12)
        assert report["posterior"]["alpha2"] == pytest.approx(47.53835, abs=1e-12)
        assert report["counts"] == {"n_d": 20, "n_nd": 25}

    def test_estimate_near_posterior_mode(self):
        # with lots of data the RB estimate tracks the posterior mode
        report = infer_prevalence(BetaParams(1.0, 1.0), n_d=300, n_nd=700)
        mode = 300.0 / 1000.0
        assert report["w"]["estimate"] == pytest.approx(mode, abs=0.01)
