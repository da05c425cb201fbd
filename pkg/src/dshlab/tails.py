"""Gaussian tail bounds and exact bivariate orthant tails.

Univariate sandwich for Phi_bar(t) = P[Z >= t], t > 0:

    phi(t)/(t+1)  <=  Phi_bar(t)  <=  phi(t)/t

Bivariate sandwich for p_and(t, a) = P[Z1 >= t and Z2 >= t] with
correlated standard normals (correlation a in (-1, 1)):

    main(t, a) = (1/(2 pi t^2)) * (1+a)^2/sqrt(1-a^2) * exp(-t^2/(1+a))
    (1 - (2-a)(1+a)/((1-a) t^2)) * main  <  p_and  <  main

The exact value of p_and is computed by adaptive quadrature of the
conditional form

    p_and = Integral_t^inf phi(u) * Phi_bar((t - a u)/sqrt(1-a^2)) du

which is how the filter families' exact CPFs are evaluated.
"""

from __future__ import annotations

import math

from scipy.integrate import quad
from scipy.special import ndtr

_SQRT2PI = math.sqrt(2.0 * math.pi)


def phi(t: float) -> float:
    """Standard normal density."""
    return math.exp(-0.5 * t * t) / _SQRT2PI


def phi_bar(t: float) -> float:
    """Standard normal upper tail P[Z >= t]."""
    return float(ndtr(-t))


def normal_tail_bounds(t: float) -> tuple[float, float]:
    """(lower, upper) sandwich of Phi_bar(t) for t > 0."""
    if t <= 0:
        raise ValueError("t must be positive")
    dens = phi(t)
    return dens / (t + 1.0), dens / t


def bivariate_tail_bounds(t: float, alpha: float) -> tuple[float, float]:
    """(lower, upper) sandwich of P[Z1 >= t and Z2 >= t] at correlation
    alpha; the lower bound clamps at 0 where its prefactor is negative."""
    if t <= 0:
        raise ValueError("t must be positive")
    if not -1.0 < alpha < 1.0:
        raise ValueError("alpha must lie in (-1, 1)")
    main = (
        (1.0 + alpha) ** 2
        / math.sqrt(1.0 - alpha * alpha)
        / (2.0 * math.pi * t * t)
        * math.exp(-t * t / (1.0 + alpha))
    )
    prefactor = 1.0 - (2.0 - alpha) * (1.0 + alpha) / ((1.0 - alpha) * t * t)
    return max(0.0, prefactor * main), main


def bivariate_tail_exact(t: float, alpha: float) -> float:
    """P[Z1 >= t and Z2 >= t] at correlation alpha, by quadrature.

    Handles the degenerate correlations analytically: alpha -> 1 gives
    Phi_bar(t); alpha -> -1 gives 0 for t > 0.
    """
    if alpha >= 1.0 - 1e-12:
        return phi_bar(t)
    if alpha <= -1.0 + 1e-12:
        return 0.0 if t > 0 else phi_bar(t)
    denom = math.sqrt(1.0 - alpha * alpha)

    def integrand(u: float) -> float:
        return phi(u) * float(ndtr(-(t - alpha * u) / denom))

    # Split at the point where the inner argument changes sign to help
    # the adaptive rule; integrate out to where phi is negligible.
    upper = max(t + 40.0, 40.0)
    split = t / alpha if alpha > 0 and t / alpha > t else None
    if split is not None and t < split < upper:
        a1, _ = quad(integrand, t, split, epsabs=1e-16, epsrel=1e-11, limit=200)
        a2, _ = quad(integrand, split, upper, epsabs=1e-16, epsrel=1e-11, limit=200)
        return a1 + a2
    val, _ = quad(integrand, t, upper, epsabs=1e-16, epsrel=1e-11, limit=200)
    return val
