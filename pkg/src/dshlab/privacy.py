"""Sketch-and-compare protocol for private closeness decisions.

Each party hashes its bit vector through N shared step-CPF functions
(sampled from a common master seed) and exchanges only the truncated
hash tokens. The receiver declares the points close when any position
of the two sketches matches. The step family is

    mixture[ q : power(bit-sampling, s),  1-q : never-collide ]

whose CPF q (1 - t)^s drops steeply between the close radius r and the
far radius c r; the exponent s is chosen to maximize the smaller of the
two decision margins. Sizing follows the repetition ladder

    t = ceil((1/delta)^(rho/(1-rho)))        (theory scale)
    N = ceil(C t ln(1/epsilon))              (hash count)
    b = max(ceil(log2 t), ceil(log2(N/delta))) + 2   (token bits)

with C a calibration constant (DEFAULT_C keeps several-sigma margins at
the reference configuration). Tokens are truncated to b bits through a
Carter-Wegman map, so a non-collision leaks only its b-bit token and a
spurious match happens with probability at most 2^-b per position.

A flat plateau-shaped CPF (exactly constant below r, exactly constant
above c r) is unattainable for any finite hash family, since every
finite family's CPF is a polynomial in t; the step family is the usable
approximation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .combinators import mixture, power
from .hamming import bit_sampling_family, const_pair_family
from ._rng import stream
from ._tokens import _splitmix64_int, mix_tokens

DEFAULT_C = 14.0
_MERSENNE61 = (1 << 61) - 1
_STEP_MIX = 0.25
_MAX_EXPONENT = 4096


@dataclass(frozen=True)
class ProtocolParams:
    """Decision radii (relative Hamming), error targets, and sketch sizing."""

    r: float
    c: float
    epsilon: float
    delta: float
    rho: float
    t: int
    n_hashes: int
    bits: int


def protocol_params(
    r: float,
    c: float,
    epsilon: float,
    delta: float,
    rho: float,
    C: float = DEFAULT_C,
) -> ProtocolParams:
    if not (r > 0.0 and c > 1.0 and c * r <= 1.0):
        raise ValueError("need r > 0, c > 1, and c r <= 1")
    for name, v in (("epsilon", epsilon), ("delta", delta), ("rho", rho)):
        if not 0.0 < v < 1.0:
            raise ValueError(f"{name} must lie in (0, 1)")
    t = math.ceil((1.0 / delta) ** (rho / (1.0 - rho)))
    n_hashes = math.ceil(C * t * math.log(1.0 / epsilon))
    bits = max(
        math.ceil(math.log2(t)) + 2,
        math.ceil(math.log2(n_hashes / delta)) + 2,
    )
    return ProtocolParams(
        r=r, c=c, epsilon=epsilon, delta=delta, rho=rho,
        t=t, n_hashes=n_hashes, bits=bits,
    )


def _step_cpf(s: int, dist: float) -> float:
    return _STEP_MIX * (1.0 - dist) ** s


def _decision_margins(s: int, params: ProtocolParams) -> float:
    """min(close-side slack, far-side slack) for step exponent s."""
    N, b = params.n_hashes, params.bits
    f_close = _step_cpf(s, params.r)
    f_far = _step_cpf(s, params.c * params.r)
    close_yes = -math.expm1(N * math.log1p(-f_close))
    far_yes = -math.expm1(N * math.log1p(-f_far)) + N * 2.0**-b
    return min(close_yes - (1.0 - params.epsilon), params.delta - far_yes)


@lru_cache(maxsize=64)
def _step_exponent(params: ProtocolParams) -> int:
    best_s, best_margin = 1, -math.inf
    for s in range(1, _MAX_EXPONENT + 1):
        m = _decision_margins(s, params)
        if m > best_margin:
            best_s, best_margin = s, m
    if best_margin <= 0.0:
        raise ValueError("no step exponent satisfies both error targets")
    return best_s


def step_family(d: int, params: ProtocolParams):
    """The mixture family the sketches realize, for CPF inspection."""
    s = _step_exponent(params)
    return mixture(
        [power(bit_sampling_family(d), s), const_pair_family(d, 0.0)],
        [_STEP_MIX, 1.0 - _STEP_MIX],
        name=f"step(d={d}, s={s})",
    )


def calibrate_C(
    r: float,
    c: float,
    epsilon: float,
    delta: float,
    rho: float,
    tol: float = 1e-3,
) -> float:
    """Smallest C for which some step exponent meets both error targets."""
    def feasible(C: float) -> bool:
        p = protocol_params(r, c, epsilon, delta, rho, C)
        best = max(
            _decision_margins(s, p) for s in range(1, _MAX_EXPONENT + 1)
        )
        return best > 0.0

    lo, hi = 0.05, 400.0
    if not feasible(hi):
        raise ValueError("error targets unreachable even at C = 400")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if feasible(mid):
            hi = mid
        else:
            lo = mid
    return hi


@dataclass(frozen=True)
class Sketch:
    """Truncated hash tokens for one side of the protocol.

    The instance field tags which shared-randomness draw produced the
    sketch; comparing tokens across instances would decide by chance.
    """

    tokens: np.ndarray
    bits: int
    side: str
    n_hashes: int
    instance: int


def make_sketch(
    x: np.ndarray, params: ProtocolParams, side: str, master_seed: int
) -> Sketch:
    """Hash a bit vector through the N shared step functions.

    Both sides must use the same master_seed; the data and query sides
    evaluate the two halves of each asymmetric pair. Every random draw
    happens unconditionally in a fixed order so the two sides stay on
    identical streams.
    """
    if side not in ("data", "query"):
        raise ValueError("side must be 'data' or 'query'")
    x = np.asarray(x)
    if x.ndim != 1 or not np.isin(x, (0, 1)).all():
        raise ValueError("x must be a 1-D 0/1 vector")
    d = x.size
    s = _step_exponent(params)
    N = params.n_hashes
    rng = stream(master_seed)
    a_cw = int(rng.integers(1, _MERSENNE61))
    c_cw = int(rng.integers(0, _MERSENNE61))
    informative = rng.random(N) < _STEP_MIX
    positions = rng.integers(0, d, size=(N, s))

    inner = mix_tokens([x[positions[:, j]].astype(np.uint64) for j in range(s)])
    # never-collide component: the data side holds token 0, the query
    # side token 1, so those positions cannot match
    const_token = np.uint64(0 if side == "data" else 1)
    comp = np.where(informative, np.uint64(0), np.uint64(1))
    body = np.where(informative, inner, const_token)
    raw = mix_tokens([comp, body])

    truncated = (raw.astype(object) * a_cw + c_cw) % _MERSENNE61 % (1 << params.bits)
    return Sketch(
        tokens=truncated.astype(np.uint64),
        bits=params.bits,
        side=side,
        n_hashes=N,
        instance=_splitmix64_int(master_seed & ((1 << 64) - 1)),
    )


def decide_close(sx: Sketch, sy: Sketch) -> bool:
    """Declare close when any sketch position matches."""
    if (
        sx.n_hashes != sy.n_hashes
        or sx.bits != sy.bits
        or sx.instance != sy.instance
    ):
        raise ValueError("sketches come from different protocol instances")
    if sx.side == sy.side:
        raise ValueError("need one data-side and one query-side sketch")
    return bool(np.any(sx.tokens == sy.tokens))


def leakage_estimate(sx: Sketch, sy: Sketch) -> int:
    """Bits revealed by the matching positions: collisions times token width."""
    if (
        sx.n_hashes != sy.n_hashes
        or sx.bits != sy.bits
        or sx.instance != sy.instance
    ):
        raise ValueError("sketches come from different protocol instances")
    return int(np.count_nonzero(sx.tokens == sy.tokens)) * sx.bits
