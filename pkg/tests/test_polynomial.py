"""Polynomial roots and evaluation."""

import numpy as np
import pytest

from dshlab.polynomial import Polynomial


def test_evaluation_horner():
    P = Polynomial((8.0, 12.0, 5.0, 1.0))  # (t+1)(t^2+4t+8)
    assert P(0.0) == 8.0
    assert P(1.0) == 26.0
    assert abs(P(0.5) - 15.375) < 1e-14


def test_evaluation_vectorized():
    P = Polynomial((1.0, -1.0))
    ts = np.linspace(0.0, 1.0, 11)
    out = P(ts)
    assert isinstance(out, np.ndarray)
    assert np.allclose(out, 1.0 - ts)


def test_roots_of_cubic_with_conjugate_pair():
    P = Polynomial((8.0, 12.0, 5.0, 1.0))
    reals = P.real_roots()
    pairs = P.conjugate_pairs()
    assert len(reals) == 1 and abs(reals[0] + 1.0) < 1e-9
    assert len(pairs) == 1
    z = pairs[0]
    assert abs(z - complex(-2.0, 2.0)) < 1e-9
    # conjugate is stored too
    assert any(abs(w - z.conjugate()) < 1e-12 for w in P.roots)


def test_double_root_multiplicity():
    P = Polynomial((0.0, 0.0, 1.0))  # t^2
    assert len(P.roots) == 2
    assert all(abs(z) < 1e-9 for z in P.roots)


def test_reconstruction_error_small():
    for coeffs in [(8, 12, 5, 1), (1, 0, 1), (0.5, 1, 1), (2, 1)]:
        P = Polynomial(tuple(float(c) for c in coeffs))
        assert P.reconstruction_error() < 1e-9


def test_degree_and_leading_sign():
    P = Polynomial((1.0, -1.0))
    assert P.degree == 1
    assert P.leading_sign == -1


def test_rejects_constant_and_zero_leading():
    with pytest.raises(ValueError):
        Polynomial((3.0,))
    with pytest.raises(ValueError):
        Polynomial((1.0, 2.0, 0.0))
