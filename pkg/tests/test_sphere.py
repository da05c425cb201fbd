"""Sphere families: SimHash, cross-polytope, filters, tensor embedding."""

import math

import numpy as np
import pytest

from dshlab._rng import stream
from dshlab.lab import estimate_cpf
from dshlab.pairs import sphere_pair_generator
from dshlab.polynomial import Polynomial
from dshlab.sphere import (
    AnnulusFamilyParams,
    FilterParams,
    M_MAX,
    annulus_family,
    crosspolytope_family,
    default_filter_m,
    embedded_dimension,
    filter_collision_probability,
    filter_cpf_bounds,
    filter_family,
    polynomial_sphere_family,
    simhash_family,
    valiant_embed,
    valiant_embed_batch,
)


def test_simhash_cpf():
    fam = simhash_family(16)
    for alpha in (-0.9, 0.0, 0.5, 1.0):
        want = 1.0 - math.acos(max(-1.0, min(1.0, alpha))) / math.pi
        assert abs(fam.cpf(alpha) - want) < 1e-12


def test_simhash_kernel_matches_closed_form():
    fam = simhash_family(12)
    for alpha in (-0.5, 0.25):
        gen = sphere_pair_generator(12, alpha)
        rep = estimate_cpf(fam, gen, alpha, n=30_000, seed=61)
        want = fam.cpf(alpha)
        assert abs(rep.estimate - want) < 3 * math.sqrt(want * (1 - want) / rep.n)


def test_crosspolytope_collision_at_zero():
    d = 8
    fam = crosspolytope_family(d)
    gen = sphere_pair_generator(d, 0.0)
    rep = estimate_cpf(fam, gen, 0.0, n=40_000, seed=63)
    want = 1.0 / (2 * d)
    assert abs(rep.estimate - want) < 3 * math.sqrt(want * (1 - want) / rep.n)


def test_crosspolytope_minus_matches_plus_at_negated_alpha():
    d = 8
    plus = crosspolytope_family(d, "plus")
    minus = crosspolytope_family(d, "minus")
    gp = estimate_cpf(plus, sphere_pair_generator(d, 0.6), 0.6, n=40_000, seed=65)
    gm = estimate_cpf(minus, sphere_pair_generator(d, -0.6), -0.6, n=40_000, seed=67)
    se = math.hypot(gp.stderr, gm.stderr)
    assert abs(gp.estimate - gm.estimate) < 3 * se + 1e-9


def test_crosspolytope_cpf_is_empirical():
    fam = crosspolytope_family(8)
    assert fam.cpf.kind == "empirical"
    assert fam.cpf.eval is None


# -- filters --------------------------------------------------------------


def test_default_filter_m_frozen_values():
    assert default_filter_m(1.0) == 17
    assert default_filter_m(2.0) == 890
    assert default_filter_m(3.0) == 48739


def test_filter_params_validation():
    with pytest.raises(ValueError):
        FilterParams(t=2.0, m=0)
    with pytest.raises(ValueError):
        FilterParams(t=2.0, m=M_MAX + 1)
    with pytest.raises(ValueError):
        FilterParams(t=2.0, sign="sideways")
    assert FilterParams(t=2.0).m == 890


def test_filter_exact_cpf_frozen_value():
    got = filter_collision_probability(2.0, 890, 0.0)
    assert abs(got - 0.011505946878931824) < 1e-15


def test_filter_kernel_matches_exact():
    d = 8
    params = FilterParams(t=1.0)
    fam = filter_family(d, params)
    for alpha in (-0.3, 0.0, 0.4):
        gen = sphere_pair_generator(d, alpha)
        rep = estimate_cpf(fam, gen, alpha, n=30_000, seed=69)
        want = filter_collision_probability(1.0, params.m, alpha)
        assert abs(rep.estimate - want) < 3 * math.sqrt(want * (1 - want) / rep.n), alpha


def test_filter_minus_mirrors_plus():
    d = 8
    plus = filter_family(d, FilterParams(t=1.0, sign="plus"))
    minus = filter_family(d, FilterParams(t=1.0, sign="minus"))
    for alpha in (-0.4, 0.2):
        assert abs(minus.cpf(alpha) - plus.cpf(-alpha)) < 1e-15


def test_filter_bounds_sandwich_exact_cpf():
    for t in (1.0, 2.0, 3.0):
        m = default_filter_m(t)
        for alpha in (-0.5, 0.0, 0.25, 0.5):
            lo, hi = filter_cpf_bounds(t, alpha)
            exact = filter_collision_probability(t, m, alpha)
            assert lo <= exact <= hi, (t, alpha)


def test_filter_bounds_frozen_anchors():
    lo, hi = filter_cpf_bounds(2.0, 0.0)
    assert abs(lo - 0.006077945558343483) < 1e-15
    assert abs(hi - 0.040493224884891044) < 1e-15
    lo, hi = filter_cpf_bounds(3.0, 0.5)
    assert abs(lo - 0.0192725412217121) < 1e-12
    assert abs(hi - 0.1027868865358462) < 1e-12


def test_annulus_family_is_concat_of_mirrored_filters():
    d = 16
    fam = annulus_family(d, AnnulusFamilyParams(alpha_max=0.0, t_plus=1.0))
    # unimodal around alpha_max = 0: f(0) is the peak of the product
    f = fam.cpf
    assert f(0.0) > f(0.6)
    assert f(0.0) > f(-0.6)
    m = default_filter_m(1.0)
    want_peak = filter_collision_probability(1.0, m, 0.0) ** 2
    assert abs(f(0.0) - want_peak) < 1e-15


def test_annulus_default_t_minus_scaling():
    p = AnnulusFamilyParams(alpha_max=0.5, t_plus=2.0)
    want = (1 - 0.5) / (1 + 0.5) * 2.0
    assert abs(p.t_minus - want) < 1e-12


# -- tensor embedding -----------------------------------------------------


def test_embedded_dimension():
    # sum_{i=0..k} d^i with d=3, k=2: 1 + 3 + 9
    P = Polynomial((0.2, 0.3, 0.5))
    assert embedded_dimension(P, 3) == 13


def test_valiant_identity_and_norms():
    rng = stream(71)
    P = Polynomial((0.25, -0.25, 0.5))
    d = 5
    for _ in range(50):
        x = rng.standard_normal(d)
        x /= np.linalg.norm(x)
        y = rng.standard_normal(d)
        y /= np.linalg.norm(y)
        ex = valiant_embed(P, x, "data")
        ey = valiant_embed(P, y, "query")
        assert abs(np.linalg.norm(ex) - 1.0) < 1e-9
        assert abs(np.linalg.norm(ey) - 1.0) < 1e-9
        assert abs(float(ex @ ey) - P(float(x @ y))) < 1e-9


def test_valiant_batch_matches_single():
    P = Polynomial((0.5, 0.0, 0.5))
    rng = stream(73)
    xs = rng.standard_normal((7, 4))
    xs /= np.linalg.norm(xs, axis=1, keepdims=True)
    batch = valiant_embed_batch(P, xs, "data")
    for i in range(7):
        single = valiant_embed(P, xs[i], "data")
        assert np.allclose(batch[i], single, atol=1e-12)


def test_valiant_requires_unit_coefficient_mass():
    P = Polynomial((0.5, 0.6))  # |a|0 + |a1| = 1.1
    x = np.zeros(3)
    x[0] = 1.0
    with pytest.raises(ValueError):
        valiant_embed(P, x, "data")


def test_polynomial_sphere_family_cpf_and_mc():
    d = 4
    P = Polynomial((0.3, -0.2, 0.5))
    base = simhash_family(embedded_dimension(P, d))
    fam = polynomial_sphere_family(P, base, d=d)
    sim = simhash_family(d).cpf
    for alpha in (-0.5, 0.4):
        assert abs(fam.cpf(alpha) - sim(P(alpha))) < 1e-12
    gen = sphere_pair_generator(d, 0.4)
    rep = estimate_cpf(fam, gen, 0.4, n=20_000, seed=75)
    want = fam.cpf(0.4)
    assert abs(rep.estimate - want) < 3 * math.sqrt(want * (1 - want) / rep.n)
