"""Monte Carlo CPF estimation and empirical inequality checkers.

estimate_cpf draws n independent trials, each with a fresh function pair
and a fresh point pair (the collision probability is an expectation over
both), in fixed 16384-trial batches whose streams depend only on
(seed, batch index); totals are summed in batch order, so estimates are
byte-identical for any DSH_THREADS setting.

The checkers compare estimated probabilistic CPFs against the two
correlation inequalities that every Hamming family must satisfy,

    f(alpha) >= f(0)^((1+alpha)/(1-alpha))   (reverse direction)
    f(alpha) <= f(0)^((1-alpha)/(1+alpha))   (forward direction)

at 3-sigma resolution, reporting "inconclusive" whenever the error bars
straddle the bound instead of silently passing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from ._rng import BATCH, batch_sizes, run_batches, stream
from .core import DshFamily
from .pairs import PairGenerator, correlated_bits_generator


@dataclass(frozen=True)
class EstimateReport:
    """Monte Carlo CPF estimate with binomial standard error."""

    argument: float
    estimate: float
    stderr: float
    n: int

    @property
    def low3(self) -> float:
        return self.estimate - 3.0 * self.stderr

    @property
    def high3(self) -> float:
        return self.estimate + 3.0 * self.stderr


@dataclass(frozen=True)
class RhoReport:
    """Log-probability ratio rho = ln(1/num)/ln(1/den)."""

    rho: float
    numerator_prob: float
    denominator_prob: float
    kind: str  # "rho_plus" | "rho_minus"


@dataclass(frozen=True)
class CheckReport:
    """Outcome of one inequality check."""

    verdict: str  # "consistent" | "violated" | "inconclusive"
    alpha: float
    baseline: EstimateReport
    at_alpha: EstimateReport
    bound_exponent: float
    direction: str  # "reverse" | "forward"


def estimate_cpf(
    family: DshFamily,
    pair_generator: PairGenerator,
    argument: float,
    n: int,
    seed: int,
) -> EstimateReport:
    """Fraction of n (fresh pair, fresh points) trials with h(x) = g(y).

    Args:
        family: the family under test.
        pair_generator: batched point-pair source; its domain must match.
        argument: the CPF argument the generator realizes (recorded in
            the report; the generator itself fixes the actual geometry).
        n: trial count.
        seed: master seed; batch b uses child streams (seed, b).
    """
    if n < 1:
        raise ValueError("need at least one trial")
    if pair_generator.domain_tag != family.domain_tag:
        raise ValueError(
            f"generator domain {pair_generator.domain_tag!r} does not match "
            f"family domain {family.domain_tag!r}"
        )

    def worker(b: int, size: int) -> int:
        rng_points = stream(seed, (b, 0))
        rng_family = stream(seed, (b, 1))
        xs, ys = pair_generator.batch(size, rng_points)
        hits = family._batch_collide(xs, ys, rng_family)
        return int(hits.sum())

    count = run_batches(worker, batch_sizes(n))
    est = count / n
    stderr = math.sqrt(est * (1.0 - est) / n)
    return EstimateReport(argument=float(argument), estimate=est, stderr=stderr, n=n)


def rho_report(numerator: float, denominator: float, kind: str) -> RhoReport:
    """rho from two collision probabilities, both required in (0,1)."""
    for p in (numerator, denominator):
        if not 0.0 < p < 1.0:
            raise ValueError(f"probability {p} outside (0,1)")
    rho = math.log(1.0 / numerator) / math.log(1.0 / denominator)
    return RhoReport(rho, numerator, denominator, kind)


# ---------------------------------------------------------------------------
# correlation-inequality checkers
# ---------------------------------------------------------------------------


def _ssse_check(
    family: DshFamily,
    alpha: float,
    n: int,
    seed: int,
    direction: str,
    baseline: Optional[EstimateReport],
) -> CheckReport:
    if family.domain_tag != "hamming":
        raise ValueError("correlation checkers apply to Hamming families")
    if not 0.0 <= alpha < 1.0:
        raise ValueError("alpha must lie in [0, 1)")
    d = family.dimension
    if baseline is None:
        baseline = estimate_cpf(
            family, correlated_bits_generator(d, 0.0), 0.0, n, seed
        )
    at_alpha = estimate_cpf(
        family, correlated_bits_generator(d, alpha), alpha, n, seed + 1
    )
    if direction == "reverse":
        e = (1.0 + alpha) / (1.0 - alpha)
        # bound: f(alpha) >= f(0)^e
        hi_bound = max(0.0, baseline.high3) ** e
        lo_bound = max(0.0, baseline.low3) ** e
        if at_alpha.high3 < lo_bound:
            verdict = "violated"
        elif at_alpha.low3 >= hi_bound:
            verdict = "consistent"
        else:
            verdict = "inconclusive"
    elif direction == "forward":
        e = (1.0 - alpha) / (1.0 + alpha)
        # bound: f(alpha) <= f(0)^e
        hi_bound = max(0.0, baseline.high3) ** e
        lo_bound = max(0.0, baseline.low3) ** e
        if at_alpha.low3 > hi_bound:
            verdict = "violated"
        elif at_alpha.high3 <= lo_bound:
            verdict = "consistent"
        else:
            verdict = "inconclusive"
    else:
        raise ValueError(f"unknown direction {direction!r}")
    return CheckReport(verdict, alpha, baseline, at_alpha, e, direction)


def check_reverse_ssse(
    family: DshFamily,
    alpha: float,
    n: int,
    seed: int,
    baseline: Optional[EstimateReport] = None,
) -> CheckReport:
    """Check f(alpha) >= f(0)^((1+alpha)/(1-alpha)) at 3-sigma resolution.

    Pass a precomputed baseline report to share the f(0) estimate across
    several alphas; otherwise it is estimated here with the same n.
    """
    return _ssse_check(family, alpha, n, seed, "reverse", baseline)


def check_forward_ssse(
    family: DshFamily,
    alpha: float,
    n: int,
    seed: int,
    baseline: Optional[EstimateReport] = None,
) -> CheckReport:
    """Check f(alpha) <= f(0)^((1-alpha)/(1+alpha)) at 3-sigma resolution."""
    return _ssse_check(family, alpha, n, seed, "forward", baseline)


def check_jensen_chain(
    p: Sequence[float], q: Sequence[float], c: float, slack: float = 1e-12
) -> bool:
    """Evaluate sum (p_i q_i)^c vs (sum p_i q_i)^(2c-1) in the c-dependent
    direction (>= for c >= 1, <= for c <= 1), with additive slack.

    The reversed direction is only guaranteed for c >= 1/2: the chain rests
    on x -> x^(2-1/c) being concave, which fails below c = 1/2, and simple
    two-atom distributions then violate the inequality outright. This
    function reports what actually holds for the given instance either way.
    """
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    if p.shape != q.shape or p.ndim != 1:
        raise ValueError("p and q must be 1-D with common support")
    for dist, label in ((p, "p"), (q, "q")):
        if (dist < 0).any() or abs(dist.sum() - 1.0) > 1e-9:
            raise ValueError(f"{label} is not a probability distribution")
    if c <= 0:
        raise ValueError("c must be positive")
    prod = p * q
    lhs = float(np.sum(prod**c))
    rhs = float(np.sum(prod) ** (2.0 * c - 1.0))
    if c >= 1.0:
        return lhs >= rhs - slack
    return lhs <= rhs + slack


# ---------------------------------------------------------------------------
# built-in Hamming family registry (used by the verify suites)
# ---------------------------------------------------------------------------


def builtin_hamming_families(d: int) -> dict[str, DshFamily]:
    """Every Hamming family shape the package ships, at dimension d."""
    from .combinators import concat as _concat
    from .hamming import (
        anti_bit_sampling_family,
        bit_sampling_family,
        polynomial_family,
        scaled_biased_anti_family,
        scaled_bit_sampling_family,
    )

    bit = bit_sampling_family(d)
    anti = anti_bit_sampling_family(d)
    fams: dict[str, DshFamily] = {
        "bit": bit,
        "anti": anti,
        "scaled_bit(0.5)": scaled_bit_sampling_family(d, 0.5),
        "scaled_biased_anti(0.5,0.5)": scaled_biased_anti_family(d, 0.5, 0.5),
        "concat(bit,anti)": _concat([bit, anti]),
    }
    fams["polyham(t+1)"] = polynomial_family([1.0, 1.0], d)[0]
    fams["polyham(t^2)"] = polynomial_family([0.0, 0.0, 1.0], d)[0]
    return fams
