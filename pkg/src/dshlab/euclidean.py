"""Shifted random-projection buckets on Euclidean space.

A Gaussian projection with a random phase is quantized into width-w
buckets; the query-side function adds a fixed shift of k buckets, so a
pair collides when the two projections land exactly k buckets apart.
The CPF in the distance delta = |x - y| is, with A = (k-1) w / delta,
B = k w / delta, C = (k+1) w / delta,

    f(delta) = (delta/w) (phi(A) + phi(C) - 2 phi(B))
               + (k+1) Phi(C) - 2k Phi(B) + (k-1) Phi(A)

which for k = 0 is the familiar hump 2 Phi(w/delta) - 1
- (2 delta / w)(phi(0) - phi(w/delta)) peaking at delta = 0, and for
k >= 1 vanishes at delta = 0 and peaks near delta ~ k w. Large shifts
drive the reverse exponent rho_minus toward 1/c^2, but the collision
probabilities involved underflow float64 well before k = 32, so the
rho computation runs on mpmath at 50 significant digits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import mpmath
import numpy as np

from .core import Cpf, DshFamily
from .lab import RhoReport


@dataclass(frozen=True)
class ShiftedBucketParams:
    """Bucket width w > 0 and query-side shift k >= 0 (in buckets)."""

    w: float
    k: int

    def __post_init__(self) -> None:
        if self.w <= 0:
            raise ValueError("bucket width w must be positive")
        if self.k < 0 or self.k != int(self.k):
            raise ValueError("shift k must be a nonnegative integer")


def _phi(x: float) -> float:
    return math.exp(-0.5 * x * x) / math.sqrt(2.0 * math.pi)


def _phi_bar(x: float) -> float:
    return 0.5 * math.erfc(x / math.sqrt(2.0))


def e2dsh_cpf(params: ShiftedBucketParams, delta: float) -> float:
    """Collision probability at Euclidean distance delta."""
    if delta < 0:
        raise ValueError("delta must be nonnegative")
    w, k = params.w, params.k
    if delta == 0.0:
        return 1.0 if k == 0 else 0.0
    if k == 0:
        u = w / delta
        return 2.0 * _ndtr(u) - 1.0 - (2.0 * delta / w) * (_phi(0.0) - _phi(u))
    a = (k - 1) * w / delta
    b = k * w / delta
    c = (k + 1) * w / delta
    # survival form: exact cancellation of the k-linear terms keeps the
    # small probabilities at large k/w/delta from being swamped
    val = (delta / w) * (_phi(a) + _phi(c) - 2.0 * _phi(b))
    val += 2.0 * k * _phi_bar(b) - (k + 1) * _phi_bar(c) - (k - 1) * _phi_bar(a)
    return max(0.0, val)


def _ndtr(x: float) -> float:
    return 0.5 * math.erfc(-x / math.sqrt(2.0))


def _e2dsh_cpf_mp(w, k: int, delta):
    """mpmath twin of e2dsh_cpf (same survival form, arbitrary precision)."""
    w = mpmath.mpf(w)
    delta = mpmath.mpf(delta)
    if delta == 0:
        return mpmath.mpf(1 if k == 0 else 0)

    def phi(x):
        return mpmath.exp(-x * x / 2) / mpmath.sqrt(2 * mpmath.pi)

    def phi_bar(x):
        return mpmath.erfc(x / mpmath.sqrt(2)) / 2

    if k == 0:
        u = w / delta
        return 2 * (1 - phi_bar(u)) - 1 - (2 * delta / w) * (phi(0) - phi(u))
    a = (k - 1) * w / delta
    b = k * w / delta
    c = (k + 1) * w / delta
    val = (delta / w) * (phi(a) + phi(c) - 2 * phi(b))
    val += 2 * k * phi_bar(b) - (k + 1) * phi_bar(c) - (k - 1) * phi_bar(a)
    return val


class ShiftedBucketFamily(DshFamily):
    def __init__(self, d: int, params: ShiftedBucketParams):
        self.params = params

        def f(delta: float) -> float:
            return e2dsh_cpf(params, delta)

        cpf = Cpf(kind="closed_form", eval=f, argument_semantics="euclidean-distance")
        super().__init__(
            "euclidean", d, cpf, f"e2dsh(d={d}, w={params.w:g}, k={params.k})"
        )

    def _sample(self, rng: np.random.Generator):
        a = rng.standard_normal(self.dimension)
        b = rng.uniform(0.0, self.params.w)
        w, k = self.params.w, self.params.k

        def h(x: np.ndarray) -> int:
            return int(math.floor((np.dot(a, x) + b) / w))

        def g(y: np.ndarray) -> int:
            return int(math.floor((np.dot(a, y) + b) / w)) + k

        return h, g

    def _batch_collide(self, xs, ys, rng):
        w, k = self.params.w, self.params.k
        n = xs.shape[0]
        A = rng.standard_normal(xs.shape)
        b = rng.uniform(0.0, w, size=n)
        px = np.einsum("ij,ij->i", A, xs) + b
        py = np.einsum("ij,ij->i", A, ys) + b
        return np.floor(px / w) == np.floor(py / w) + k


def e2dsh_family(d: int, params: ShiftedBucketParams) -> DshFamily:
    """Shifted-bucket projection family on R^d."""
    return ShiftedBucketFamily(d, params)


def choose_w_k(c: float, k: int) -> ShiftedBucketParams:
    """Bucket width sqrt(2 pi)/(2 c) for approximation factor c > 1.

    With this width and shift k, points at distance c sit near the CPF
    peak while points at distance 1 fall k buckets short of it.
    """
    if c <= 1.0:
        raise ValueError("approximation factor c must exceed 1")
    if k < 2:
        raise ValueError("shift k must be at least 2")
    return ShiftedBucketParams(w=math.sqrt(2.0 * math.pi) / (2.0 * c), k=k)


def rho_minus(params: ShiftedBucketParams, r: float, c: float) -> RhoReport:
    """Reverse exponent log f(c r) / log f(r) at arbitrary precision.

    The family collides more readily at the far distance c r than at the
    near distance r, so the exponent is below 1; it decreases toward
    1/c^2 as the shift k grows.
    """
    if r <= 0 or c <= 1.0:
        raise ValueError("need r > 0 and c > 1")
    with mpmath.workdps(50):
        p_far = _e2dsh_cpf_mp(params.w, params.k, c * r)
        p_near = _e2dsh_cpf_mp(params.w, params.k, r)
        if not (0 < p_near < 1 and 0 < p_far < 1):
            raise ValueError("collision probabilities must lie in (0, 1)")
        rho = mpmath.log(p_far) / mpmath.log(p_near)
        return RhoReport(
            rho=float(rho),
            numerator_prob=float(p_far),
            denominator_prob=float(p_near),
            kind="reverse-euclidean",
        )
