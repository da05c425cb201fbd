"""Point-pair generators: do they realize the geometry they claim?"""

import numpy as np
import pytest

from dshlab._rng import stream
from dshlab.pairs import (
    correlated_bits,
    correlated_bits_generator,
    euclid_pair,
    euclid_pair_generator,
    generator_for,
    hamming_exact_generator,
    sphere_pair,
    sphere_pair_generator,
)


def test_correlated_bits_agreement_rate():
    d = 64
    alpha = 0.5
    gen = correlated_bits_generator(d, alpha)
    xs, ys = gen.batch(4000, stream(3))
    agree = (xs == ys).mean()
    want = (1 + alpha) / 2
    assert abs(agree - want) < 3 * np.sqrt(want * (1 - want) / (4000 * d))


def test_hamming_exact_generator_distance_is_exact():
    d = 32
    for t in (0.0, 0.25, 0.5, 1.0):
        gen = hamming_exact_generator(d, t)
        xs, ys = gen.batch(200, stream(5))
        dists = (xs != ys).mean(axis=1)
        assert np.all(dists == t), t


def test_hamming_exact_generator_rounds_to_grid():
    # 0.3 * 32 = 9.6 bits rounds to 10; the realized argument is recorded
    gen = hamming_exact_generator(32, 0.3)
    assert gen.argument == 10 / 32
    xs, ys = gen.batch(50, stream(1))
    assert np.all((xs != ys).sum(axis=1) == 10)
    with pytest.raises(ValueError):
        hamming_exact_generator(32, 1.2)


def test_sphere_pair_inner_product_exact():
    d = 16
    for alpha in (-0.5, 0.0, 0.8):
        gen = sphere_pair_generator(d, alpha)
        xs, ys = gen.batch(300, stream(7))
        ips = np.einsum("ij,ij->i", xs, ys)
        assert np.allclose(ips, alpha, atol=1e-10)
        assert np.allclose(np.linalg.norm(xs, axis=1), 1.0, atol=1e-10)
        assert np.allclose(np.linalg.norm(ys, axis=1), 1.0, atol=1e-10)


def test_euclid_pair_distance_exact():
    d = 8
    for delta in (0.0, 1.0, 3.5):
        gen = euclid_pair_generator(d, delta)
        xs, ys = gen.batch(300, stream(9))
        dists = np.linalg.norm(xs - ys, axis=1)
        assert np.allclose(dists, delta, atol=1e-9)


def test_convenience_wrappers_deterministic():
    assert np.array_equal(
        correlated_bits(16, 0.3, 11)[0], correlated_bits(16, 0.3, 11)[0]
    )
    a, _ = sphere_pair(8, 0.2, 13)
    b, _ = sphere_pair(8, 0.2, 13)
    assert np.array_equal(a, b)
    x, _ = euclid_pair(8, 2.0, 15)
    y, _ = euclid_pair(8, 2.0, 15)
    assert np.array_equal(x, y)


def test_generator_for_dispatches_by_domain():
    assert generator_for("hamming", 32, 0.25).domain_tag == "hamming"
    assert generator_for("sphere", 8, 0.5).domain_tag == "sphere"
    assert generator_for("euclidean", 8, 2.0).domain_tag == "euclidean"
    with pytest.raises(ValueError):
        generator_for("torus", 8, 0.5)
