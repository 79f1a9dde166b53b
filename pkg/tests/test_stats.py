"""Correlation, one-way ANOVA, and the incomplete beta they stand on."""
import math

import numpy as np
import pytest

import oracles
from proxnet.stats import (_betainc_series, anova_oneway, pearson,
                           regularized_incomplete_beta)


def test_betainc_endpoints_and_domain():
    assert regularized_incomplete_beta(2.0, 3.0, 0.0) == 0.0
    assert regularized_incomplete_beta(2.0, 3.0, 1.0) == 1.0
    with pytest.raises(ValueError):
        regularized_incomplete_beta(-1.0, 2.0, 0.5)
    with pytest.raises(ValueError):
        regularized_incomplete_beta(1.0, 2.0, 1.5)


def test_betainc_known_values():
    # I_x(1, 1) = x; I_x(1, b) = 1 - (1-x)^b
    for x in (0.1, 0.5, 0.9):
        assert regularized_incomplete_beta(1.0, 1.0, x) == pytest.approx(x, abs=1e-14)
        assert regularized_incomplete_beta(1.0, 4.0, x) == pytest.approx(
            1.0 - (1.0 - x) ** 4, abs=1e-13)


def test_betainc_symmetry():
    rng = np.random.default_rng(1)
    for _ in range(50):
        a, b = rng.uniform(0.2, 20.0, size=2)
        x = rng.uniform(0.0, 1.0)
        lhs = regularized_incomplete_beta(a, b, x)
        rhs = 1.0 - regularized_incomplete_beta(b, a, 1.0 - x)
        assert lhs == pytest.approx(rhs, abs=1e-12)


def test_betainc_matches_series_and_scipy():
    rng = np.random.default_rng(2)
    for _ in range(200):
        a, b = rng.uniform(0.3, 40.0, size=2)
        x = rng.uniform(0.0, 1.0)
        got = regularized_incomplete_beta(a, b, x)
        assert got == pytest.approx(_betainc_series(a, b, x), abs=1e-10)
        assert got == pytest.approx(oracles.betainc_ref(a, b, x), abs=1e-10)


def test_pearson_perfect_lines():
    x = np.arange(10.0)
    res = pearson(x, 2.0 * x + 1.0)
    assert res.r == 1.0 and res.p == 0.0
    res = pearson(x, -0.5 * x + 3.0)
    assert res.r == -1.0 and res.p == 0.0


def test_pearson_input_validation():
    with pytest.raises(ValueError):
        pearson([1.0, 2.0], [3.0, 4.0])  # fewer than 3 observations
    with pytest.raises(ValueError):
        pearson([1.0, 1.0, 1.0], [1.0, 2.0, 3.0])  # zero variance
    with pytest.raises(ValueError):
        pearson([1.0, 2.0, np.nan], [1.0, 2.0, 3.0])
    with pytest.raises(ValueError):
        pearson([1.0, 2.0, 3.0], [1.0, 2.0])


def test_pearson_matches_reference():
    rng = np.random.default_rng(5)
    for trial in range(40):
        n = int(rng.integers(3, 60))
        x = rng.normal(size=n)
        y = 0.4 * x + rng.normal(scale=rng.uniform(0.1, 2.0), size=n)
        res = pearson(x, y)
        r_ref, p_ref = oracles.pearson_ref(x, y)
        assert res.r == pytest.approx(r_ref, abs=1e-6)
        assert res.p == pytest.approx(p_ref, abs=1e-6)
        assert res.n == n


def test_anova_identical_groups_zero_f():
    res = anova_oneway([[1.0, 2.0, 3.0], [1.0, 2.0, 3.0], [1.0, 2.0, 3.0]])
    assert res.f_stat == 0.0
    assert res.eta_squared == 0.0
    assert res.p == 1.0
    assert not res.degenerate


def test_anova_zero_within_variance_degenerate():
    res = anova_oneway([[0.0, 0.0, 0.0], [1.0, 1.0, 1.0]])
    assert math.isinf(res.f_stat)
    assert res.degenerate
    assert res.p == 0.0
    assert res.eta_squared == 1.0


def test_anova_input_validation():
    with pytest.raises(ValueError):
        anova_oneway([[1.0, 2.0]])  # one group
    with pytest.raises(ValueError):
        anova_oneway([[1.0], [2.0, 3.0]])  # singleton group
    with pytest.raises(ValueError):
        anova_oneway([[1.0, 1.0], [1.0, 1.0]])  # zero total variance
    with pytest.raises(ValueError):
        anova_oneway([[1.0, np.inf], [0.0, 2.0]])


def test_anova_matches_reference():
    rng = np.random.default_rng(7)
    for trial in range(40):
        k = int(rng.integers(2, 6))
        groups = [rng.normal(loc=rng.uniform(-1, 1), size=int(rng.integers(3, 20)))
                  for _ in range(k)]
        res = anova_oneway(groups)
        f_ref, p_ref, eta_ref = oracles.anova_ref(groups)
        assert res.f_stat == pytest.approx(f_ref, abs=1e-6, rel=1e-6)
        assert res.p == pytest.approx(p_ref, abs=1e-6)
        assert res.eta_squared == pytest.approx(eta_ref, abs=1e-9)


def test_anova_two_group_matches_t_squared():
    # with two groups F equals the squared pooled t statistic and the
    # p-values agree
    rng = np.random.default_rng(11)
    a = rng.normal(size=12)
    b = rng.normal(loc=0.8, size=15)
    res = anova_oneway([a, b])
    import scipy.stats
    t, p = scipy.stats.ttest_ind(a, b)
    assert res.f_stat == pytest.approx(t * t, rel=1e-10)
    assert res.p == pytest.approx(p, abs=1e-10)
