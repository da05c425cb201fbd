"""Real polynomials with a computed complex root multiset.

Coefficients are stored constant-term first (a_0 .. a_k). Roots come from
the companion-matrix eigenvalues (numpy.roots); near-real roots are
snapped onto the real axis and the remaining complex roots are paired
with their conjugates greedily by distance, so downstream consumers can
iterate over "real root" and "conjugate pair" items directly.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

# |imag| below this (relative) threshold snaps a root to the real axis.
_REAL_SNAP = 1e-9


@dataclass(frozen=True)
class Polynomial:
    """P(t) = sum_i coefficients[i] * t^i with computed roots.

    Attributes:
        coefficients: a_0 .. a_k, constant term first; a_k != 0.
        degree: k.
        roots: all k complex roots with multiplicity, conjugates paired.
        leading_sign: sign of a_k.
    """

    coefficients: tuple[float, ...]
    degree: int = field(init=False)
    roots: tuple[complex, ...] = field(init=False)
    leading_sign: int = field(init=False)

    def __post_init__(self) -> None:
        coeffs = tuple(float(c) for c in self.coefficients)
        if len(coeffs) < 2:
            raise ValueError("polynomial must have degree >= 1")
        if coeffs[-1] == 0.0:
            raise ValueError("leading coefficient must be nonzero")
        object.__setattr__(self, "coefficients", coeffs)
        object.__setattr__(self, "degree", len(coeffs) - 1)
        object.__setattr__(self, "leading_sign", 1 if coeffs[-1] > 0 else -1)
        object.__setattr__(self, "roots", _find_roots(coeffs))

    def __call__(self, t: float | np.ndarray) -> float | np.ndarray:
        # Horner, highest term first.
        acc = np.zeros_like(np.asarray(t, dtype=float))
        for c in reversed(self.coefficients):
            acc = acc * t + c
        return acc if isinstance(t, np.ndarray) else float(acc)

    def real_roots(self) -> list[float]:
        return [z.real for z in self.roots if z.imag == 0.0]

    def conjugate_pairs(self) -> list[complex]:
        """One representative (positive imaginary part) per conjugate pair."""
        return [z for z in self.roots if z.imag > 0.0]

    def reconstruction_error(self, points: int = 16) -> float:
        """Max relative error of a_k * prod(t - z) vs P(t) on a grid.

        The grid lives in [0, 1] (the CPF argument range); relative error
        is measured against max(1, |P(t)|).
        """
        ts = np.linspace(0.0, 1.0, points)
        direct = np.array([self(float(t)) for t in ts])
        from_roots = np.full(points, self.coefficients[-1], dtype=complex)
        for z in self.roots:
            from_roots *= ts - z
        denom = np.maximum(1.0, np.abs(direct))
        return float(np.max(np.abs(from_roots.real - direct) / denom))


def _find_roots(coeffs: tuple[float, ...]) -> tuple[complex, ...]:
    # numpy.roots wants highest-order coefficient first.
    raw = np.roots(list(reversed(coeffs)))
    snapped: list[complex] = []
    for z in raw:
        if abs(z.imag) < _REAL_SNAP * (1.0 + abs(z.real)):
            snapped.append(complex(z.real, 0.0))
        else:
            snapped.append(complex(z))
    reals = sorted(z.real for z in snapped if z.imag == 0.0)
    complexes = [z for z in snapped if z.imag != 0.0]
    pairs = _pair_conjugates(complexes)
    ordered: list[complex] = [complex(r, 0.0) for r in reals]
    for z in pairs:
        ordered.append(z)
        ordered.append(z.conjugate())
    return tuple(ordered)


def _pair_conjugates(zs: list[complex]) -> list[complex]:
    """Greedily match roots with their conjugates; returns upper-half reps.

    Conjugate symmetry of real polynomials guarantees a perfect matching
    up to numerical noise; each matched pair is replaced by the averaged
    representative (a + bi with b > 0) so the pair is exactly conjugate.
    """
    upper = sorted((z for z in zs if z.imag > 0), key=lambda z: (z.real, z.imag))
    lower = [z for z in zs if z.imag < 0]
    if len(upper) != len(lower):
        raise ValueError("conjugate pairing failed: unbalanced half-planes")
    reps: list[complex] = []
    remaining = list(lower)
    for u in upper:
        dists = [abs(u - w.conjugate()) for w in remaining]
        j = int(np.argmin(dists))
        w = remaining.pop(j)
        if dists[j] > 1e-6 * (1.0 + abs(u)):
            raise ValueError(f"conjugate pairing failed: {u} vs {w}")
        reps.append(complex((u.real + w.real) / 2.0, (u.imag - w.imag) / 2.0))
    return reps
