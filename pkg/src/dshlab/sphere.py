"""Unit-sphere families: SimHash, cross-polytope, filters, embeddings.

The CPF argument on the sphere is the inner product alpha = <x, y> of
unit vectors. Four constructions live here:

  * SimHash: random-hyperplane signs, CPF 1 - arccos(alpha)/pi.
  * Cross-polytope: hash to the nearest signed basis vector after a
    random rotation; the minus variant inverts the query point, flipping
    the CPF's monotonicity. No closed form (empirical CPF); at alpha = 0
    the collision probability is exactly 1/(2d) by symmetry.
  * Filter families: m Gaussian projections; a point's token is the
    first projection whose value clears the threshold t (sentinels m+1 /
    m+2 prevent spurious collisions when nothing clears). The plus
    variant captures matching caps, the minus variant diametrically
    opposite caps; an independent plus/minus concatenation peaks near a
    chosen correlation (the annulus family). The exact CPF is

        f_plus(alpha) = p_and * (1 - (1 - p_or)^m) / p_or,
        p_and = P[Z1 >= t and Z2 >= t at correlation alpha],
        p_or = 2 Phi_bar(t) - p_and,      f_minus(alpha) = f_plus(-alpha)

    evaluated through the quadrature in tails; a fully analytic sandwich
    for f_plus is exposed as filter_cpf_bounds.
  * Polynomial embedding: tensor-power feature maps turning P(<x,y>)
    into a plain inner product, composed with a base family (SimHash)
    so the composite CPF is base_cpf(P(alpha)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .combinators import concat
from .core import Cpf, DshFamily
from .polynomial import Polynomial
from .tails import bivariate_tail_exact, normal_tail_bounds, phi_bar

# Hard cap on filter projection count (guards the e^{t^2/2} blowup).
M_MAX = 1 << 22
# Hard cap on embedded dimension sum(d^i).
DIM_BUDGET = 1 << 20


def _clip_alpha(alpha: float) -> float:
    return min(1.0, max(-1.0, alpha))


# ---------------------------------------------------------------------------
# SimHash
# ---------------------------------------------------------------------------


class SimHashFamily(DshFamily):
    def __init__(self, d: int):
        def f(alpha: float) -> float:
            return 1.0 - math.acos(_clip_alpha(alpha)) / math.pi

        cpf = Cpf(kind="closed_form", eval=f, argument_semantics="inner-product")
        super().__init__("sphere", d, cpf, f"simhash(d={d})")

    def _sample(self, rng: np.random.Generator):
        a = rng.standard_normal(self.dimension)

        def h(x: np.ndarray) -> int:
            return int(np.dot(a, x) >= 0.0)

        return h, h

    def _batch_collide(self, xs, ys, rng):
        A = rng.standard_normal(xs.shape)
        px = np.einsum("ij,ij->i", A, xs)
        py = np.einsum("ij,ij->i", A, ys)
        return (px >= 0.0) == (py >= 0.0)


def simhash_family(d: int) -> DshFamily:
    """Random-hyperplane family; CPF 1 - arccos(alpha)/pi."""
    return SimHashFamily(d)


# ---------------------------------------------------------------------------
# cross-polytope
# ---------------------------------------------------------------------------


def _cp_token(v: np.ndarray) -> int:
    """Nearest signed basis vector of v: 2*i + (1 if that coord < 0).

    np.argmax takes the lowest index on ties, and a zero coordinate maps
    to the positive vertex, so tie-breaking is deterministic.
    """
    i = int(np.argmax(np.abs(v)))
    return 2 * i + (1 if v[i] < 0.0 else 0)


def _cp_token_rows(V: np.ndarray) -> np.ndarray:
    idx = np.argmax(np.abs(V), axis=1)
    signs = V[np.arange(V.shape[0]), idx] < 0.0
    return (2 * idx + signs).astype(np.uint64)


class CrossPolytopeFamily(DshFamily):
    def __init__(self, d: int, sign: str):
        if sign not in ("plus", "minus"):
            raise ValueError("sign must be 'plus' or 'minus'")
        self.sign = sign
        cpf = Cpf(kind="empirical", eval=None, argument_semantics="inner-product")
        super().__init__("sphere", d, cpf, f"crosspoly(d={d}, sign={sign})")

    def _sample(self, rng: np.random.Generator):
        A = rng.standard_normal((self.dimension, self.dimension))
        flip = -1.0 if self.sign == "minus" else 1.0

        def h(x: np.ndarray) -> int:
            return _cp_token(A @ x)

        def g(y: np.ndarray) -> int:
            return _cp_token(A @ (flip * y))

        return h, g

    def _batch_collide(self, xs, ys, rng):
        # The rotated images (Ax, Ay) are jointly Gaussian with per-
        # coordinate correlation <x, y>; draw them directly from the
        # actual per-row inner products (exact distributional reduction).
        n, d = xs.shape
        c = np.clip(np.einsum("ij,ij->i", xs, ys), -1.0, 1.0)
        if self.sign == "minus":
            c = -c
        u = rng.standard_normal((n, d))
        w = rng.standard_normal((n, d))
        v = c[:, None] * u + np.sqrt(1.0 - c * c)[:, None] * w
        return _cp_token_rows(u) == _cp_token_rows(v)


def crosspolytope_family(d: int, sign: str = "plus") -> DshFamily:
    """Nearest-signed-basis-vector family after a full Gaussian rotation."""
    return CrossPolytopeFamily(d, sign)


# ---------------------------------------------------------------------------
# filter families
# ---------------------------------------------------------------------------


def default_filter_m(t: float) -> int:
    """ceil(2 t^3 / p') with p' the analytic lower tail bound at t."""
    p_lower, _ = normal_tail_bounds(t)
    return int(math.ceil(2.0 * t**3 / p_lower))


@dataclass(frozen=True)
class FilterParams:
    """Threshold-capture parameters: threshold t, projection count m, sign."""

    t: float
    m: Optional[int] = None
    sign: str = "plus"

    def __post_init__(self) -> None:
        if self.t <= 0:
            raise ValueError("threshold t must be positive")
        if self.sign not in ("plus", "minus"):
            raise ValueError("sign must be 'plus' or 'minus'")
        m = self.m if self.m is not None else default_filter_m(self.t)
        if m < 1:
            raise ValueError("m must be >= 1")
        if m > M_MAX:
            raise ValueError(f"m={m} exceeds the projection budget {M_MAX}")
        object.__setattr__(self, "m", int(m))


def filter_collision_probability(t: float, m: int, alpha: float) -> float:
    """Exact plus-variant CPF at correlation alpha (quadrature-backed)."""
    alpha = _clip_alpha(alpha)
    p_and = bivariate_tail_exact(t, alpha)
    p_or = 2.0 * phi_bar(t) - p_and
    if p_and <= 0.0 or p_or <= 0.0:
        return 0.0
    # 1 - (1 - p_or)^m, computed stably
    hit_some = -math.expm1(m * math.log1p(-p_or)) if p_or < 1.0 else 1.0
    return p_and * hit_some / p_or


class FilterFamily(DshFamily):
    def __init__(self, d: int, params: FilterParams):
        self.params = params
        t, m, sign = params.t, params.m, params.sign
        if sign == "plus":
            def f(alpha: float) -> float:
                return filter_collision_probability(t, m, alpha)
        else:
            def f(alpha: float) -> float:
                return filter_collision_probability(t, m, -alpha)

        cpf = Cpf(kind="bounded", eval=f, argument_semantics="inner-product")
        super().__init__(
            "sphere", d, cpf, f"filter(d={d}, t={t:g}, m={m}, sign={sign})"
        )

    def _sample(self, rng: np.random.Generator):
        Z = rng.standard_normal((self.params.m, self.dimension))
        t, m = self.params.t, self.params.m
        flip = -1.0 if self.params.sign == "minus" else 1.0

        def first_capture(vals: np.ndarray, sentinel: int) -> int:
            hits = np.nonzero(vals >= t)[0]
            return int(hits[0]) + 1 if hits.size else sentinel

        def h(x: np.ndarray) -> int:
            return first_capture(Z @ x, m + 1)

        def g(y: np.ndarray) -> int:
            return first_capture(Z @ (flip * y), m + 2)

        return h, g

    def _batch_collide(self, xs, ys, rng):
        # Honest sequential simulation of the capture mechanism, one
        # projection round at a time over a shrinking active set. The
        # per-row projection pair is drawn from its exact joint law
        # (correlation = the row's actual inner product).
        t, m = self.params.t, self.params.m
        n = xs.shape[0]
        c = np.clip(np.einsum("ij,ij->i", xs, ys), -1.0, 1.0)
        if self.params.sign == "minus":
            c = -c
        s = np.sqrt(1.0 - c * c)
        out = np.zeros(n, dtype=bool)
        active = np.arange(n)
        for _ in range(m):
            if active.size == 0:
                break
            u = rng.standard_normal(active.size)
            w = rng.standard_normal(active.size)
            v = c[active] * u + s[active] * w
            cap_x = u >= t
            cap_y = v >= t
            resolved = cap_x | cap_y
            out[active[resolved]] = (cap_x & cap_y)[resolved]
            active = active[~resolved]
        # rows still active hit the m+1 / m+2 sentinels: no collision
        return out


def filter_family(d: int, params: FilterParams) -> DshFamily:
    """First-index threshold-capture family (plus or minus variant)."""
    return FilterFamily(d, params)


def filter_cpf_bounds(t: float, alpha: float) -> tuple[float, float]:
    """Analytic (lower, upper) sandwich of the plus-variant CPF.

    upper = (1/sqrt(2 pi)) ((t+1)/t^2) (1+a)^2/sqrt(1-a^2)
            * exp(-((1-a)/(1+a)) t^2/2)
    lower = max(0, (1 - (2-a)(1+a)/((1-a) t^2)) * (t/(2(t+1))) * upper
                   - 2 exp(-t^3))

    For the minus variant evaluate at -alpha.
    """
    if t <= 0:
        raise ValueError("t must be positive")
    if not -1.0 < alpha < 1.0:
        raise ValueError("alpha must lie in (-1, 1)")
    upper = (
        (t + 1.0)
        / (t * t)
        / math.sqrt(2.0 * math.pi)
        * (1.0 + alpha) ** 2
        / math.sqrt(1.0 - alpha * alpha)
        * math.exp(-((1.0 - alpha) / (1.0 + alpha)) * t * t / 2.0)
    )
    prefactor = 1.0 - (2.0 - alpha) * (1.0 + alpha) / ((1.0 - alpha) * t * t)
    lower = max(0.0, prefactor * (t / (2.0 * (t + 1.0))) * upper - 2.0 * math.exp(-(t**3)))
    return lower, upper


# ---------------------------------------------------------------------------
# annulus family
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AnnulusFamilyParams:
    """Plus/minus threshold pair peaking near alpha_max.

    t_minus defaults to the balance point
    ((1 - alpha_max)/(1 + alpha_max)) * t_plus; s > 1 is the separation
    factor recorded for interval-reporting consumers.
    """

    alpha_max: float
    t_plus: float
    t_minus: Optional[float] = None
    s: float = 2.0

    def __post_init__(self) -> None:
        if not -1.0 < self.alpha_max < 1.0:
            raise ValueError("alpha_max must lie in (-1, 1)")
        if self.t_plus <= 0:
            raise ValueError("t_plus must be positive")
        if self.s <= 1.0:
            raise ValueError("separation factor s must exceed 1")
        if self.t_minus is None:
            gamma = (1.0 - self.alpha_max) / (1.0 + self.alpha_max)
            object.__setattr__(self, "t_minus", gamma * self.t_plus)
        if self.t_minus <= 0:
            raise ValueError("t_minus must be positive")


def annulus_family(d: int, params: AnnulusFamilyParams) -> DshFamily:
    """Concatenation of an independent plus filter (threshold t_plus) and
    minus filter (threshold t_minus); the product CPF vanishes at both
    alpha = 1 and alpha = -1 and peaks near alpha_max."""
    plus = filter_family(d, FilterParams(t=params.t_plus, sign="plus"))
    minus = filter_family(d, FilterParams(t=params.t_minus, sign="minus"))
    fam = concat(
        [plus, minus],
        name=f"annulus(d={d}, alpha_max={params.alpha_max:g}, t={params.t_plus:g})",
    )
    return fam


# ---------------------------------------------------------------------------
# polynomial embedding
# ---------------------------------------------------------------------------


def _tensor_blocks(xs: np.ndarray, degree: int) -> list[np.ndarray]:
    """Row-wise tensor powers x^(0) .. x^(degree), row-major layout."""
    n = xs.shape[0]
    blocks = [np.ones((n, 1))]
    for _ in range(degree):
        prev = blocks[-1]
        nxt = np.einsum("na,nb->nab", prev, xs).reshape(n, -1)
        blocks.append(nxt)
    return blocks


def _check_embedding_inputs(P: Polynomial, d: int) -> int:
    total = sum(abs(c) for c in P.coefficients)
    if abs(total - 1.0) > 1e-12:
        raise ValueError(f"coefficients must satisfy sum |a_i| = 1 (got {total!r})")
    D = sum(d**i for i in range(P.degree + 1))
    if D > DIM_BUDGET:
        raise ValueError(f"embedded dimension {D} exceeds budget {DIM_BUDGET}")
    return D


def embedded_dimension(P: Polynomial, d: int) -> int:
    """sum_{i=0}^{deg P} d^i."""
    return sum(d**i for i in range(P.degree + 1))


def valiant_embed_batch(P: Polynomial, xs: np.ndarray, side: str) -> np.ndarray:
    """Embed rows of xs; dot(data-embed x, query-embed y) = P(<x, y>).

    The data side scales block i by sqrt(|a_i|), the query side by
    a_i/sqrt(|a_i|) (zero block when a_i = 0); both sides land on the
    unit sphere whenever sum |a_i| = 1.
    """
    if side not in ("data", "query"):
        raise ValueError("side must be 'data' or 'query'")
    xs = np.atleast_2d(np.asarray(xs, dtype=float))
    d = xs.shape[1]
    _check_embedding_inputs(P, d)
    blocks = _tensor_blocks(xs, P.degree)
    out = []
    for i, (a, block) in enumerate(zip(P.coefficients, blocks)):
        if a == 0.0:
            out.append(np.zeros_like(block))
        elif side == "data":
            out.append(math.sqrt(abs(a)) * block)
        else:
            out.append((a / math.sqrt(abs(a))) * block)
    return np.concatenate(out, axis=1)


def valiant_embed(P: Polynomial, x: np.ndarray, side: str) -> np.ndarray:
    """Single-vector form of valiant_embed_batch."""
    return valiant_embed_batch(P, np.asarray(x)[None, :], side)[0]


class PolynomialSphereFamily(DshFamily):
    """base family applied to the two polynomial embeddings.

    h = base.h o data-embed and g = base.g o query-embed, so the CPF is
    base_cpf(P(alpha)). The base must be a symmetric inner-product family
    sampled at the embedded dimension.
    """

    def __init__(self, P: Polynomial, base: DshFamily, d: Optional[int] = None):
        if base.domain_tag != "sphere":
            raise ValueError("base family must live on the sphere")
        if base.cpf is None or base.cpf.argument_semantics != "inner-product":
            raise ValueError("base family must have an inner-product CPF")
        if d is None:
            d = _infer_input_dimension(P, base.dimension)
        D = _check_embedding_inputs(P, d)
        if D != base.dimension:
            raise ValueError(
                f"base dimension {base.dimension} != embedded dimension {D}"
            )
        self.P = P
        self.base = base
        base_eval = base.cpf.eval

        def f(alpha: float) -> float:
            return base_eval(_clip_alpha(P(_clip_alpha(alpha))))

        cpf = Cpf(kind=base.cpf.kind, eval=f, argument_semantics="inner-product")
        coeff_str = ",".join(f"{c:g}" for c in P.coefficients)
        super().__init__(
            "sphere", d, cpf, f"polysphere(coeffs=[{coeff_str}], d={d})"
        )

    def _sample(self, rng: np.random.Generator):
        pair = self.base.sample_pair(int(rng.integers(0, 2**63)))
        P = self.P

        def h(x: np.ndarray) -> int:
            return pair.h(valiant_embed(P, x, "data"))

        def g(y: np.ndarray) -> int:
            return pair.g(valiant_embed(P, y, "query"))

        return h, g

    def _batch_collide(self, xs, ys, rng):
        # embed in chunks to bound the n x D intermediate
        n = xs.shape[0]
        chunk = max(1, min(n, 4096))
        out = np.empty(n, dtype=bool)
        for lo in range(0, n, chunk):
            hi = min(n, lo + chunk)
            ex = valiant_embed_batch(self.P, xs[lo:hi], "data")
            ey = valiant_embed_batch(self.P, ys[lo:hi], "query")
            out[lo:hi] = self.base._batch_collide(ex, ey, rng)
        return out


def _infer_input_dimension(P: Polynomial, D: int) -> int:
    for d in range(1, D + 1):
        total = sum(d**i for i in range(P.degree + 1))
        if total == D:
            return d
        if total > D:
            break
    raise ValueError(
        f"base dimension {D} is not sum(d^i, i=0..{P.degree}) for any integer d"
    )


def polynomial_sphere_family(
    P: Polynomial | list[float], base: DshFamily, d: Optional[int] = None
) -> DshFamily:
    """Family with CPF base_cpf(P(alpha)) via tensor-power embeddings."""
    if not isinstance(P, Polynomial):
        P = Polynomial(tuple(P))
    return PolynomialSphereFamily(P, base, d)
