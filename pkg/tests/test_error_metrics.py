import math

import numpy as np
import pytest

from rbroc.error_metrics import (
    EvaluableDistributions,
    NormalCDF,
    StepCDF,
    auc,
    auc_monte_carlo,
    error_profile,
    optimal_cutoff_grid,
    roc_points,
    roc_trapezoid_area,
    weighted_error_cutoff,
)

from _oracles import (
    EX2_P_D,
    EX2_P_ND,
    EX2_TRUE_AUC,
    EX2_TRUE_COPT,
    EX2_TRUE_PROFILE,
    EX2_TRUE_TRAPEZOID,
    EX2_W,
    binormal_auc_quad,
    discrete_auc_naive,
)


def ex2_truth() -> EvaluableDistributions:
    pts = np.arange(1.0, 6.0)
    return EvaluableDistributions(
        f_nd=StepCDF(points=pts, masses=EX2_P_ND),
        f_d=StepCDF(points=pts, masses=EX2_P_D),
    )


class TestStepCDF:
    def test_cdf_values(self):
        d = StepCDF(points=np.array([1.0, 2.0, 3.0]), masses=np.array([0.2, 0.3, 0.5]))
        assert d.cdf(0.5) == 0.0
        assert d.cdf(1.0) == pytest.approx(0.2)
        assert d.cdf(2.5) == pytest.approx(0.5)
        assert d.cdf(9.0) == pytest.approx(1.0)

    def test_validation(self):
        with pytest.raises(ValueError):
            StepCDF(points=np.array([2.0, 1.0]), masses=np.array([0.5, 0.5]))
        with pytest.raises(ValueError):
            StepCDF(points=np.array([1.0, 2.0]), masses=np.array([0.7, 0.7]))


class TestErrorProfile:
    def test_known_distribution_values(self):
        prof = error_profile(ex2_truth(), EX2_W, EX2_TRUE_COPT)
        assert prof.fnr == pytest.approx(EX2_TRUE_PROFILE["fnr"])
        assert prof.fpr == pytest.approx(EX2_TRUE_PROFILE["fpr"])
        assert prof.error == pytest.approx(EX2_TRUE_PROFILE["error"])
        assert prof.fdr == pytest.approx(EX2_TRUE_PROFILE["fdr"])
        assert prof.fndr == pytest.approx(EX2_TRUE_PROFILE["fndr"])

    def test_undefined_rates_flagged_not_zeroed(self):
        # cutoff above the whole support: nobody classified positive
        prof = error_profile(ex2_truth(), 0.5, 9.0)
        assert not prof.fdr_defined
        assert math.isnan(prof.fdr)
        assert prof.fndr_defined

    def test_error_is_convex_combination(self):
        d = ex2_truth()
        for c in (1.0, 2.5, 4.0):
            p = error_profile(d, 0.3, c)
            assert p.error == pytest.approx(0.3 * p.fnr + 0.7 * p.fpr)

    def test_prevalence_bounds_enforced(self):
        with pytest.raises(ValueError):
            error_profile(ex2_truth(), 0.0, 2.0)


class TestAUC:
    def test_discrete_matches_naive(self):
        assert auc(ex2_truth()) == pytest.approx(
            discrete_auc_naive(EX2_P_ND, EX2_P_D), abs=1e-12
        )
        assert auc(ex2_truth()) == pytest.approx(EX2_TRUE_AUC, abs=1e-12)

    def test_identical_fair_coins_give_quarter(self):
        coin = StepCDF(points=np.array([0.0, 1.0]), masses=np.array([0.5, 0.5]))
        d = EvaluableDistributions(f_nd=coin, f_d=coin)
        assert auc(d) == pytest.approx(0.25)

    def test_continuous_matches_quadrature_oracle(self):
        rng = np.random.default_rng(3)
        for _ in range(25):
            mu_nd, mu_d = rng.normal(size=2)
            s_nd, s_d = rng.uniform(0.3, 3.0, size=2)
            d = EvaluableDistributions(
                f_nd=NormalCDF(mu_nd, s_nd), f_d=NormalCDF(mu_d, s_d)
            )
            assert auc(d) == pytest.approx(
                binormal_auc_quad(mu_nd, mu_d, s_nd, s_d), abs=1e-9
            )

    def test_monte_carlo_consistent(self):
        d = ex2_truth()
        est, se = auc_monte_carlo(d, 40000, seed=1)
        assert abs(est - EX2_TRUE_AUC) < 4 * se

    def test_mixed_kinds_rejected(self):
        d = EvaluableDistributions(
            f_nd=NormalCDF(0.0, 1.0),
            f_d=StepCDF(points=np.array([0.0]), masses=np.array([1.0])),
        )
        with pytest.raises(TypeError):
            auc(d)


class TestOptimalCutoffGrid:
    def test_recovers_true_cutoff(self):
        c, prof = optimal_cutoff_grid(ex2_truth(), EX2_W, [1.0, 2.0, 3.0, 4.0, 5.0])
        assert c == EX2_TRUE_COPT
        assert prof.error == pytest.approx(EX2_TRUE_PROFILE["error"])

    def test_plus_inf_when_prevalence_small(self):
        # tiny prevalence: classifying everyone negative beats these cutoffs
        # (the top support point would tie the sentinel, and finite wins ties)
        c, prof = optimal_cutoff_grid(ex2_truth(), 0.01, [1.0, 2.0, 3.0, 4.0])
        assert c == math.inf
        assert prof.error == pytest.approx(0.01)

    def test_top_of_support_ties_sentinel_and_wins(self):
        c, prof = optimal_cutoff_grid(ex2_truth(), 0.01, [1.0, 2.0, 3.0, 4.0, 5.0])
        assert c == 5.0
        assert prof.error == pytest.approx(0.01)

    def test_minus_inf_when_prevalence_large(self):
        c, prof = optimal_cutoff_grid(ex2_truth(), 0.99, [1.0, 2.0, 3.0, 4.0, 5.0])
        assert c == -math.inf
        assert prof.error == pytest.approx(0.01)

    def test_tie_goes_to_smallest_finite(self):
        # symmetric pair, w = 1/2: errors are symmetric around the midpoint
        d = EvaluableDistributions(f_nd=NormalCDF(-1.0, 1.0), f_d=NormalCDF(1.0, 1.0))
        c, _ = optimal_cutoff_grid(d, 0.5, [-0.5, 0.0, 0.5])
        assert c == 0.0
        c, _ = optimal_cutoff_grid(d, 0.5, [-0.5, 0.5])
        assert c == -0.5


class TestWeightedErrorCutoff:
    def test_ties_go_to_largest(self):
        d = EvaluableDistributions(f_nd=NormalCDF(-1.0, 1.0), f_d=NormalCDF(1.0, 1.0))
        c, _ = weighted_error_cutoff(d, 0.5, [-0.5, 0.5])
        assert c == 0.5

    def test_no_sentinels(self):
        c, v = weighted_error_cutoff(ex2_truth(), 0.01, [1.0, 2.0, 3.0])
        assert math.isfinite(c)
        assert v >= 0.0

    def test_weight_validation(self):
        with pytest.raises(ValueError):
            weighted_error_cutoff(ex2_truth(), 1.0, [1.0])


class TestROC:
    def test_identical_distributions_on_diagonal(self):
        coin = StepCDF(points=np.array([0.0, 1.0]), masses=np.array([0.4, 0.6]))
        d = EvaluableDistributions(f_nd=coin, f_d=coin)
        for fpr, tpr in roc_points(d, [0.0, 1.0]):
            assert fpr == pytest.approx(tpr)

    def test_trapezoid_area_known_case(self):
        pts = roc_points(ex2_truth(), [1.0, 2.0, 3.0, 4.0, 5.0])
        assert roc_trapezoid_area(pts) == pytest.approx(EX2_TRUE_TRAPEZOID, abs=1e-12)

    def test_perfect_separation_area_one(self):
        d = EvaluableDistributions(
            f_nd=StepCDF(points=np.array([0.0, 1.0]), masses=np.array([0.5, 0.5])),
            f_d=StepCDF(points=np.array([5.0, 6.0]), masses=np.array([0.5, 0.5])),
        )
        pts = roc_points(d, [0.0, 1.0, 5.0, 6.0])
        assert roc_trapezoid_area(pts) == pytest.approx(1.0)

    def test_trapezoid_converges_to_auc_for_continuous(self):
        d = EvaluableDistributions(f_nd=NormalCDF(0.0, 1.0), f_d=NormalCDF(1.0, 1.3))
        cand = np.linspace(-8.0, 9.0, 10000)
        assert roc_trapezoid_area(roc_points(d, cand)) == pytest.approx(
            auc(d), abs=1e-3
        )
