"""Gaussian tail helpers: sandwiches and the exact orthant probability."""

import math

import numpy as np
from scipy import stats

from dshlab.tails import (
    bivariate_tail_bounds,
    bivariate_tail_exact,
    normal_tail_bounds,
    phi,
    phi_bar,
)


def test_phi_and_phi_bar():
    assert abs(phi(0.0) - 1.0 / math.sqrt(2 * math.pi)) < 1e-15
    assert abs(phi_bar(0.0) - 0.5) < 1e-15
    assert abs(phi_bar(1.0) - (1 - stats.norm.cdf(1.0))) < 1e-12


def test_normal_tail_sandwich_brackets_truth():
    for t in (0.5, 1.0, 2.0, 3.0, 5.0):
        lo, hi = normal_tail_bounds(t)
        truth = float(stats.norm.sf(t))
        assert lo <= truth <= hi, t
        assert lo > 0.0


def test_normal_tail_bounds_ratio_tightens():
    # upper/lower -> 1 as t grows
    lo2, hi2 = normal_tail_bounds(2.0)
    lo5, hi5 = normal_tail_bounds(5.0)
    assert hi5 / lo5 < hi2 / lo2
    # this sandwich's width is (t+1)/t
    assert abs(hi5 / lo5 - 1.2) < 1e-9


def test_bivariate_exact_independent_case():
    # alpha = 0: orthant probability factorizes
    for t in (0.5, 1.0, 2.0):
        want = float(stats.norm.sf(t)) ** 2
        assert abs(bivariate_tail_exact(t, 0.0) - want) < 1e-12


def test_bivariate_exact_perfect_correlation_limit():
    # alpha -> 1: joint tail approaches the single tail
    got = bivariate_tail_exact(1.0, 0.999999)
    assert abs(got - float(stats.norm.sf(1.0))) < 1e-3


def test_bivariate_exact_monotone_in_alpha():
    vals = [bivariate_tail_exact(1.5, a) for a in (-0.8, -0.3, 0.0, 0.3, 0.8)]
    assert all(a < b for a, b in zip(vals, vals[1:]))


def test_bivariate_sandwich_brackets_exact():
    for t in (1.0, 2.0, 3.0):
        for alpha in (-0.5, -0.25, 0.0, 0.25, 0.5):
            lo, hi = bivariate_tail_bounds(t, alpha)
            truth = bivariate_tail_exact(t, alpha)
            assert lo <= truth + 1e-15, (t, alpha)
            assert truth <= hi + 1e-15, (t, alpha)


def test_bivariate_exact_symmetric_in_arguments():
    # MC cross-check against direct sampling of a correlated pair
    rng = np.random.default_rng(51)
    t, alpha = 1.0, 0.4
    n = 200_000
    u = rng.standard_normal(n)
    v = alpha * u + math.sqrt(1 - alpha**2) * rng.standard_normal(n)
    est = np.mean((u >= t) & (v >= t))
    truth = bivariate_tail_exact(t, alpha)
    assert abs(est - truth) < 3 * math.sqrt(truth * (1 - truth) / n)
