"""Point-pair generators for collision-probability estimation.

Each generator fixes a domain and a pair-construction law; the batch
form hands the estimator arrays of n pairs at a time. Two distinct laws
exist for the Hamming cube and they measure different things:

  * correlated pairs: y agrees with uniform x per coordinate with
    probability (1+alpha)/2, the correlation semantics used by the
    lower-bound checkers (estimates are expectations over the binomial
    distance distribution);
  * exact-distance pairs: y differs from x in exactly round(t*d)
    coordinates, the right law for checking a CPF pointwise in t.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from ._rng import stream


@dataclass(frozen=True)
class PairGenerator:
    """Batched pair source: batch(n, rng) -> (xs, ys) row-aligned arrays."""

    domain_tag: str
    dimension: int
    argument: float
    batch: Callable[[int, np.random.Generator], tuple[np.ndarray, np.ndarray]]
    kind: str


def correlated_bits_generator(d: int, alpha: float) -> PairGenerator:
    """Uniform x; y_i = x_i with probability (1+alpha)/2 independently."""
    if not -1.0 <= alpha <= 1.0:
        raise ValueError("alpha must lie in [-1, 1]")
    agree = (1.0 + alpha) / 2.0

    def batch(n: int, rng: np.random.Generator):
        xs = rng.integers(0, 2, size=(n, d), dtype=np.uint8)
        flip = rng.random((n, d)) >= agree
        ys = np.where(flip, 1 - xs, xs).astype(np.uint8)
        return xs, ys

    return PairGenerator("hamming", d, alpha, batch, "correlated-bits")


def correlated_bits(d: int, alpha: float, seed: int) -> tuple[np.ndarray, np.ndarray]:
    """Single correlated pair, deterministic in seed."""
    gen = correlated_bits_generator(d, alpha)
    xs, ys = gen.batch(1, stream(seed))
    return xs[0], ys[0]


def hamming_exact_generator(d: int, t: float) -> PairGenerator:
    """Uniform x; y flips exactly round(t*d) uniformly chosen coordinates."""
    if not 0.0 <= t <= 1.0:
        raise ValueError("relative distance must lie in [0, 1]")
    k = int(round(t * d))

    def batch(n: int, rng: np.random.Generator):
        xs = rng.integers(0, 2, size=(n, d), dtype=np.uint8)
        ys = xs.copy()
        if k > 0:
            # per-row random permutation, take the first k slots
            order = rng.random((n, d)).argsort(axis=1)[:, :k]
            rows = np.repeat(np.arange(n), k)
            cols = order.ravel()
            ys[rows, cols] = 1 - ys[rows, cols]
        return xs, ys

    return PairGenerator("hamming", d, k / d, batch, "hamming-exact")


def sphere_pair_generator(d: int, alpha: float) -> PairGenerator:
    """x uniform on the unit sphere; y = alpha*x + sqrt(1-alpha^2)*z with
    z a uniform unit vector orthogonal to x, so <x, y> = alpha exactly."""
    if not -1.0 <= alpha <= 1.0:
        raise ValueError("alpha must lie in [-1, 1]")
    if d < 2 and abs(alpha) < 1.0:
        raise ValueError("d >= 2 required for |alpha| < 1")

    def batch(n: int, rng: np.random.Generator):
        xs = rng.standard_normal((n, d))
        xs /= np.linalg.norm(xs, axis=1, keepdims=True)
        zs = rng.standard_normal((n, d))
        # one explicit orthogonalization pass, then normalize
        zs -= np.einsum("ij,ij->i", zs, xs)[:, None] * xs
        zs /= np.linalg.norm(zs, axis=1, keepdims=True)
        ys = alpha * xs + np.sqrt(max(0.0, 1.0 - alpha * alpha)) * zs
        return xs, ys

    return PairGenerator("sphere", d, alpha, batch, "sphere")


def sphere_pair(d: int, alpha: float, seed: int) -> tuple[np.ndarray, np.ndarray]:
    """Single exact-inner-product pair on the sphere."""
    gen = sphere_pair_generator(d, alpha)
    xs, ys = gen.batch(1, stream(seed))
    return xs[0], ys[0]


def euclid_pair_generator(d: int, delta: float) -> PairGenerator:
    """x standard Gaussian; y = x + delta*u for a uniform unit vector u."""
    if delta < 0:
        raise ValueError("delta must be nonnegative")

    def batch(n: int, rng: np.random.Generator):
        xs = rng.standard_normal((n, d))
        us = rng.standard_normal((n, d))
        us /= np.linalg.norm(us, axis=1, keepdims=True)
        ys = xs + delta * us
        return xs, ys

    return PairGenerator("euclidean", d, delta, batch, "euclid")


def euclid_pair(d: int, delta: float, seed: int) -> tuple[np.ndarray, np.ndarray]:
    """Single pair at exact Euclidean distance delta."""
    gen = euclid_pair_generator(d, delta)
    xs, ys = gen.batch(1, stream(seed))
    return xs[0], ys[0]


def generator_for(family_domain: str, d: int, argument: float, exact: bool = True) -> PairGenerator:
    """Default generator for a domain at a given CPF argument.

    Hamming uses exact-distance pairs when exact=True (CPF semantics) and
    correlated pairs otherwise (correlation semantics); sphere arguments
    are inner products; euclidean arguments are distances.
    """
    if family_domain == "hamming":
        if exact:
            return hamming_exact_generator(d, argument)
        return correlated_bits_generator(d, argument)
    if family_domain == "sphere":
        return sphere_pair_generator(d, argument)
    if family_domain == "euclidean":
        return euclid_pair_generator(d, argument)
    raise ValueError(f"unknown domain {family_domain!r}")
