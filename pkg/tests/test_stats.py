import math

import numpy as np
import pytest

from dualdomain.stats import regularized_incomplete_beta, student_t_two_sided_p, welch_t_test

# Two-sided p for (t, df), frozen from scipy.stats.t.sf (independent reference CDF).
T_CDF_FIXTURE = [
    (0.0, 5.0, 1.0),
    (1.0, 1.0, 0.49999999999999956),
    (-1.0, 8.0, 0.34659350708733416),
    (2.5, 3.0, 0.08770664700806555),
    (-2.5, 30.0, 0.018115649068066706),
    (0.5, 2.0, 0.6666666666666667),
    (3.2, 12.0, 0.007632538800810792),
    (-4.1, 7.0, 0.004573040177139945),
    (1.96, 100.0, 0.052778901366229654),
    (6.0, 2.5, 0.015281729885522894),
]


def test_t_cdf_matches_reference_fixture():
    for t, df, expected in T_CDF_FIXTURE:
        assert student_t_two_sided_p(t, df) == pytest.approx(expected, abs=1e-3)


def test_t_cdf_matches_reference_tightly():
    # the continued fraction should be much better than the acceptance bar
    for t, df, expected in T_CDF_FIXTURE:
        assert student_t_two_sided_p(t, df) == pytest.approx(expected, rel=1e-10, abs=1e-12)


def test_incomplete_beta_against_scipy_grid():
    scipy_special = pytest.importorskip("scipy.special")
    rng = np.random.default_rng(4)
    for _ in range(200):
        a = float(rng.uniform(0.05, 20.0))
        b = float(rng.uniform(0.05, 20.0))
        x = float(rng.uniform(0.0, 1.0))
        ours = regularized_incomplete_beta(a, b, x)
        ref = float(scipy_special.betainc(a, b, x))
        assert ours == pytest.approx(ref, rel=1e-9, abs=1e-12)


def test_incomplete_beta_bounds():
    assert regularized_incomplete_beta(2.0, 3.0, 0.0) == 0.0
    assert regularized_incomplete_beta(2.0, 3.0, 1.0) == 1.0
    with pytest.raises(ValueError):
        regularized_incomplete_beta(0.0, 1.0, 0.5)


def test_welch_hand_case():
    res = welch_t_test([1, 2, 3, 4, 5], [2, 3, 4, 5, 6])
    assert res.t == pytest.approx(-1.0)
    assert res.df == pytest.approx(8.0)
    assert res.p == pytest.approx(0.347, abs=1e-3)


def test_welch_identical_samples():
    res = welch_t_test([3.2, 4.8, 1.0, 7.7], [3.2, 4.8, 1.0, 7.7])
    assert res.t == 0.0
    assert res.p == 1.0


def test_welch_constant_samples():
    equal = welch_t_test([2.0, 2.0, 2.0], [2.0, 2.0])
    assert equal.t == 0.0 and equal.p == 1.0
    unequal = welch_t_test([2.0, 2.0, 2.0], [3.0, 3.0])
    assert math.isinf(unequal.t) and unequal.t < 0
    assert unequal.p == 0.0


def test_welch_antisymmetric_under_swap():
    rng = np.random.default_rng(7)
    for _ in range(25):
        xs = rng.normal(0, 1, size=int(rng.integers(2, 20))).tolist()
        ys = rng.normal(0.5, 2, size=int(rng.integers(2, 20))).tolist()
        fwd = welch_t_test(xs, ys)
        rev = welch_t_test(ys, xs)
        assert fwd.t == pytest.approx(-rev.t)
        assert fwd.df == pytest.approx(rev.df)
        assert fwd.p == pytest.approx(rev.p)


def test_welch_matches_scipy():
    scipy_stats = pytest.importorskip("scipy.stats")
    rng = np.random.default_rng(11)
    for _ in range(25):
        xs = rng.normal(0, 1, size=int(rng.integers(2, 30)))
        ys = rng.normal(0.3, 1.7, size=int(rng.integers(2, 30)))
        ours = welch_t_test(xs.tolist(), ys.tolist())
        ref = scipy_stats.ttest_ind(xs, ys, equal_var=False)
        assert ours.t == pytest.approx(float(ref.statistic), rel=1e-10)
        assert ours.p == pytest.approx(float(ref.pvalue), rel=1e-8, abs=1e-12)


def test_welch_rejects_small_samples():
    with pytest.raises(ValueError):
        welch_t_test([1.0], [1.0, 2.0])
