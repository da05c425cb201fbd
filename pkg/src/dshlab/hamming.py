"""Hamming-space families, from bit-sampling to polynomial CPFs.

Points are 0/1 vectors of length d; the CPF argument is the relative
Hamming distance t = (# disagreeing coordinates)/d.

Everything here is built from four primitive schemes, each a distribution
over (h, g) with an affine CPF in t:

    bit sampling        h = g = x -> x_i          CPF 1 - t
    anti bit sampling   h = x -> x_i, g = y -> 1-y_i   CPF t
    zeroed variants     with probability 1-s both sides output a fixed
                        constant instead (collide always for the bit
                        variant, never for the anti variant), scaling the
                        CPF slope:   1 - s t   /   s t
    constant pair       with probability p the two sides share a token,
                        otherwise they are given distinct tokens: CPF = p

plus the concat/mixture combinators. A polynomial P that is positive on
(0,1) and has no root with real part strictly inside (0,1) factors into
quadratic/linear pieces, each realizable by one of seven sub-scheme
shapes (S1..S7 below); concatenating them yields a family with CPF
P(t)/Delta for an explicit normalizer Delta.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .combinators import concat, mixture
from .core import Cpf, DshFamily
from .polynomial import Polynomial

# Tolerance for the root-rejection band around (0, 1).
_EDGE_TOL = 1e-9
# Grid size and tolerance for the acceptance identity P(t) = Delta * S(t).
_GRID_POINTS = 32
_GRID_RELTOL = 1e-8


# ---------------------------------------------------------------------------
# primitives
# ---------------------------------------------------------------------------


class _HammingPrimitive(DshFamily):
    """Shared machinery: sample an index + mode, compare single bits.

    mode semantics per scheme kind:
      "bit":   live -> compare x_i == y_i; dead -> both sides constant 0
      "anti":  live -> compare x_i != y_i; dead -> h constant 0, g constant 1
      "const": live (prob p) -> tokens equal; dead -> tokens differ
    """

    def __init__(self, kind: str, d: int, live_prob: float, cpf: Cpf, name: str):
        if not 0.0 <= live_prob <= 1.0:
            raise ValueError("probability parameters must lie in [0, 1]")
        self.kind = kind
        self.live_prob = live_prob
        super().__init__("hamming", d, cpf, name)

    def _sample(self, rng: np.random.Generator):
        i = int(rng.integers(0, self.dimension))
        live = bool(rng.random() < self.live_prob)
        kind = self.kind

        if kind == "const":
            # Tokens carry the collide/not decision directly.
            def h_const(x: np.ndarray) -> int:
                return 0

            def g_const(y: np.ndarray) -> int:
                return 0 if live else 1

            return h_const, g_const

        def h(x: np.ndarray) -> int:
            if not live:
                return 0
            return int(x[i])

        def g(y: np.ndarray) -> int:
            if not live:
                return 0 if kind == "bit" else 1
            return int(y[i]) if kind == "bit" else 1 - int(y[i])

        return h, g

    def _batch_collide(self, xs, ys, rng):
        n = xs.shape[0]
        live = rng.random(n) < self.live_prob
        if self.kind == "const":
            return live
        idx = rng.integers(0, self.dimension, size=n)
        xb = xs[np.arange(n), idx]
        yb = ys[np.arange(n), idx]
        if self.kind == "bit":
            # dead rows output 0 on both sides: always collide
            return np.where(live, xb == yb, True)
        # anti: dead rows output 0 vs 1: never collide
        return np.where(live, xb != yb, False)


def _affine_cpf(intercept: float, slope: float) -> Cpf:
    def f(t: float) -> float:
        return intercept + slope * t

    return Cpf(kind="closed_form", eval=f, argument_semantics="relative-hamming-distance")


def bit_sampling_family(d: int) -> DshFamily:
    """Symmetric single-coordinate sampling; CPF 1 - t."""
    return _HammingPrimitive("bit", d, 1.0, _affine_cpf(1.0, -1.0), f"bit(d={d})")


def anti_bit_sampling_family(d: int) -> DshFamily:
    """h reads a coordinate, g reads its complement; CPF t."""
    return _HammingPrimitive("anti", d, 1.0, _affine_cpf(0.0, 1.0), f"anti(d={d})")


def scaled_bit_sampling_family(d: int, scale: float) -> DshFamily:
    """Bit sampling whose sampled coordinate is zeroed on both sides with
    probability 1 - scale; CPF 1 - scale*t."""
    return _HammingPrimitive(
        "bit", d, scale, _affine_cpf(1.0, -scale), f"scaled_bit(d={d}, scale={scale:g})"
    )


def zeroed_anti_family(d: int, scale: float) -> DshFamily:
    """Anti bit sampling damped toward never-collide; CPF scale*t."""
    return _HammingPrimitive(
        "anti", d, scale, _affine_cpf(0.0, scale), f"zeroed_anti(d={d}, scale={scale:g})"
    )


def const_pair_family(d: int, p: float) -> DshFamily:
    """Point-independent scheme colliding with probability exactly p."""
    return _HammingPrimitive("const", d, p, _affine_cpf(p, 0.0), f"const_pair(d={d}, p={p:g})")


def scaled_biased_anti_family(d: int, scale: float, bias: float) -> DshFamily:
    """Half/half mixture of a bias-probability constant scheme and a
    scale-damped anti bit sampling; CPF bias/2 + scale*t/2."""
    if not (0.0 <= scale <= 1.0 and 0.0 <= bias <= 1.0):
        raise ValueError("scale and bias must lie in [0, 1]")
    fam = mixture(
        [const_pair_family(d, bias), zeroed_anti_family(d, scale)],
        [0.5, 0.5],
        name=f"scaled_biased_anti(d={d}, scale={scale:g}, bias={bias:g})",
    )
    return fam


# ---------------------------------------------------------------------------
# polynomial factorization assembly
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SchemeComponent:
    """One factor of the assembly: a sub-scheme with a known exact CPF."""

    tag: str  # S1..S7 or "zero-root"
    root: complex  # the root (pair representative for S4..S7)
    family: DshFamily
    exact_cpf: Callable[[float], float]
    normalizer: float  # exact_cpf(t) * normalizer = |linear/quadratic factor|


@dataclass(frozen=True)
class SchemeAssembly:
    """Ordered sub-schemes realizing CPF P(t)/Delta.

    delta is |a_k| times the product of component normalizers, the unique
    constant making the product of component CPFs equal P(t)/delta. (The
    shorthand delta = |a_k| 2^psi prod_{|Re z|>1} |z| reproduces it for
    real-rooted polynomials but misses normalizer factors of complex pairs
    with real part in [-1, 0]; we keep psi as metadata only.)
    psi counts roots with strictly negative real part.
    """

    components: tuple[SchemeComponent, ...]
    delta: float
    psi: int


def assembly_exact_cpf(assembly: SchemeAssembly, t: float) -> float:
    """Product of the analytic component CPFs at relative distance t.

    This is evaluated from the per-component formulas (case tag + root),
    independent of the combinator-built family, so Monte Carlo runs and
    the P(t)/Delta identity can both be checked against it.
    """
    out = 1.0
    for comp in assembly.components:
        out *= comp.exact_cpf(t)
    return out


def _component_for_real_root(d: int, z: float) -> SchemeComponent:
    if z < -1.0:
        s = 1.0 / abs(z)
        fam = scaled_biased_anti_family(d, s, 1.0)

        def f(t: float, _z=abs(z)) -> float:
            return (_z + t) / (2.0 * _z)

        return SchemeComponent("S1", complex(z), fam, f, 2.0 * abs(z))
    if z < 0.0:  # z in [-1, 0)
        fam = scaled_biased_anti_family(d, 1.0, abs(z))

        def f(t: float, _z=abs(z)) -> float:
            return (_z + t) / 2.0

        return SchemeComponent("S2", complex(z), fam, f, 2.0)
    if z == 0.0:
        fam = anti_bit_sampling_family(d)

        def f(t: float) -> float:
            return t

        return SchemeComponent("zero-root", complex(0.0), fam, f, 1.0)
    # z >= 1 (roots in (0, 1) were rejected earlier)
    fam = scaled_bit_sampling_family(d, 1.0 / z)

    def f(t: float, _z=z) -> float:
        return 1.0 - t / _z

    return SchemeComponent("S3", complex(z), fam, f, z)


def _component_for_conjugate_pair(d: int, z: complex) -> SchemeComponent:
    """Sub-scheme whose CPF is ((t-a)^2 + b^2) / normalizer for z = a+bi."""
    a, b = z.real, abs(z.imag)
    r2 = a * a + b * b
    if a < -1.0:
        w_const = b * b / r2
        half = scaled_biased_anti_family(d, 1.0 / abs(a), 1.0)
        fam = mixture(
            [const_pair_family(d, 0.25), concat([half, half])],
            [w_const, 1.0 - w_const],
        )

        def f(t: float, _a=abs(a), _r2=r2) -> float:
            return (t * t + 2.0 * _a * t + _r2) / (4.0 * _r2)

        return SchemeComponent("S4", z, fam, f, 4.0 * r2)
    if a >= 1.0:
        w_const = b * b / r2
        half = scaled_bit_sampling_family(d, 1.0 / a)
        fam = mixture(
            [const_pair_family(d, 1.0), concat([half, half])],
            [w_const, 1.0 - w_const],
        )

        def f(t: float, _a=a, _b=b, _r2=r2) -> float:
            return ((t - _a) ** 2 + _b * _b) / _r2

        return SchemeComponent("S5", z, fam, f, r2)
    # -1 <= a <= 0 (real parts in (0,1) were rejected; |a| <= 1 here)
    if r2 >= 1.0:
        fam = mixture(
            [
                const_pair_family(d, 1.0),
                zeroed_anti_family(d, abs(a) / r2),
                concat([zeroed_anti_family(d, 1.0 / np.sqrt(r2))] * 2),
            ],
            [0.25, 0.5, 0.25],
        )

        def f(t: float, _a=abs(a), _r2=r2) -> float:
            return (t * t + 2.0 * _a * t + _r2) / (4.0 * _r2)

        return SchemeComponent("S6", z, fam, f, 4.0 * r2)
    fam = mixture(
        [
            const_pair_family(d, r2),
            zeroed_anti_family(d, abs(a)),
            concat([anti_bit_sampling_family(d)] * 2),
        ],
        [0.25, 0.5, 0.25],
    )

    def f(t: float, _a=abs(a), _r2=r2) -> float:
        return (t * t + 2.0 * _a * t + _r2) / 4.0

    return SchemeComponent("S7", z, fam, f, 4.0)


def polynomial_family(
    P: Polynomial | Sequence[float], d: int
) -> tuple[DshFamily, float, SchemeAssembly]:
    """Family with CPF P(t)/Delta from the root factorization of P.

    Args:
        P: polynomial (or its coefficient list, constant term first) that
            is positive on (0,1) once zero roots are stripped and has no
            root with real part strictly inside (0,1).
        d: Hamming dimension.

    Returns:
        (family, delta, assembly); the family is the concatenation of the
        assembly's sub-scheme families and delta its exact normalizer.

    Raises:
        ValueError: a root's real part lies strictly inside (0,1), or the
            assembled CPF fails the P(t) = Delta * S(t) identity check
            (e.g. P is negative somewhere on (0,1)).
    """
    if not isinstance(P, Polynomial):
        P = Polynomial(tuple(P))
    for z in P.roots:
        if _EDGE_TOL < z.real < 1.0 - _EDGE_TOL:
            raise ValueError(f"root {z} has real part strictly inside (0,1)")

    components: list[SchemeComponent] = []
    for z in P.roots:
        if z.imag == 0.0:
            r = z.real
            # snap the rejection tolerance band onto the endpoints
            if abs(r) <= _EDGE_TOL:
                r = 0.0
            elif abs(r - 1.0) <= _EDGE_TOL:
                r = 1.0
            components.append(_component_for_real_root(d, r))
    for z in P.conjugate_pairs():
        components.append(_component_for_conjugate_pair(d, z))

    psi = sum(1 for z in P.roots if z.real < 0.0)
    delta = abs(P.coefficients[-1])
    for comp in components:
        delta *= comp.normalizer
    assembly = SchemeAssembly(tuple(components), delta, psi)

    # Accept only if the identity P(t) = Delta * S(t) holds on a grid.
    ts = np.linspace(0.0, 1.0, _GRID_POINTS)
    for t in ts:
        lhs = P(float(t))
        rhs = delta * assembly_exact_cpf(assembly, float(t))
        if abs(lhs - rhs) > _GRID_RELTOL * max(1.0, abs(lhs)):
            raise ValueError(
                f"assembled CPF does not reproduce P at t={t:.4f}: "
                f"P={lhs!r} vs Delta*S={rhs!r} (is P positive on (0,1)?)"
            )

    coeff_str = ",".join(f"{c:g}" for c in P.coefficients)
    family = concat(
        [c.family for c in components], name=f"polyham(coeffs=[{coeff_str}], d={d})"
    )
    return family, delta, assembly
