"""Family abstraction: asymmetric hash pairs with known collision laws.

A distance-sensitive family is a distribution over pairs of functions
(h, g) mapping points to 64-bit tokens, engineered so that

    Pr[h(x) = g(y)] = f(dist(x, y))

for a prescribed collision-probability function (CPF) f. Sampling h and g
jointly (they may share randomness) is what lets f be increasing or
unimodal in distance, which a single symmetric hash function cannot do.

Three point domains are supported, tagged "hamming" (0/1 vectors,
CPF argument: relative Hamming distance t in [0,1]), "sphere" (unit
vectors, CPF argument: inner product alpha in [-1,1]) and "euclidean"
(real vectors, CPF argument: distance delta >= 0).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from ._rng import stream

DOMAIN_TAGS = ("hamming", "sphere", "euclidean")

ARGUMENT_SEMANTICS = (
    "relative-hamming-distance",
    "inner-product",
    "euclidean-distance",
)


@dataclass(frozen=True)
class Cpf:
    """Collision-probability descriptor.

    kind: "closed_form" for elementary analytic CPFs, "bounded" for CPFs
        evaluated through numerical integration with guaranteed sandwich
        bounds available, "empirical" when no evaluator exists (eval is
        None and estimates are the only source of truth).
    eval: maps the CPF argument to a probability in [0, 1].
    argument_semantics: which quantity eval takes (one of
        ARGUMENT_SEMANTICS).
    """

    kind: str
    eval: Optional[Callable[[float], float]]
    argument_semantics: str

    def __post_init__(self) -> None:
        if self.kind not in ("closed_form", "bounded", "empirical"):
            raise ValueError(f"unknown cpf kind {self.kind!r}")
        if self.argument_semantics not in ARGUMENT_SEMANTICS:
            raise ValueError(f"unknown argument semantics {self.argument_semantics!r}")
        if self.kind == "empirical":
            if self.eval is not None:
                raise ValueError("empirical cpf must not carry an evaluator")
        elif self.eval is None:
            raise ValueError(f"{self.kind} cpf needs an evaluator")

    def __call__(self, x: float) -> float:
        if self.eval is None:
            raise ValueError("cpf is empirical; no evaluator available")
        return float(self.eval(x))


@dataclass(frozen=True)
class FunctionPair:
    """One sampled (h, g) pair. Immutable; h and g must be pure."""

    h: Callable[[np.ndarray], int]
    g: Callable[[np.ndarray], int]
    domain_tag: str
    dimension: int


class DshFamily:
    """Distribution over FunctionPairs with a declared CPF.

    Subclasses implement _sample(rng) returning h/g closures and, when a
    vectorized formulation exists, override _batch_collide with an exact
    distributional reduction. The base implementation of _batch_collide
    goes through sample_pair one trial at a time and is the definitional
    reference path that fast kernels are validated against.
    """

    def __init__(
        self,
        domain_tag: str,
        dimension: int,
        cpf: Optional[Cpf],
        name: str,
    ) -> None:
        if domain_tag not in DOMAIN_TAGS:
            raise ValueError(f"unknown domain {domain_tag!r}")
        if dimension < 1:
            raise ValueError("dimension must be >= 1")
        self.domain_tag = domain_tag
        self.dimension = dimension
        self.cpf = cpf
        self.name = name

    # -- sampling ---------------------------------------------------------

    def sample_pair(self, seed: int) -> FunctionPair:
        """Draw one (h, g) pair, deterministic in seed."""
        h, g = self._sample(stream(seed))
        return FunctionPair(h=h, g=g, domain_tag=self.domain_tag, dimension=self.dimension)

    def _sample(self, rng: np.random.Generator):
        raise NotImplementedError

    # -- vectorized collision kernel --------------------------------------

    def _batch_collide(
        self, xs: np.ndarray, ys: np.ndarray, rng: np.random.Generator
    ) -> np.ndarray:
        """Collision indicators for rows of (xs, ys), fresh pair per row."""
        return self._batch_collide_pointwise(xs, ys, rng)

    def _batch_collide_pointwise(
        self, xs: np.ndarray, ys: np.ndarray, rng: np.random.Generator
    ) -> np.ndarray:
        """Definitional reference path: sample_pair per row, then compare."""
        n = xs.shape[0]
        seeds = rng.integers(0, 2**63, size=n)
        out = np.empty(n, dtype=bool)
        for i in range(n):
            pair = self.sample_pair(int(seeds[i]))
            out[i] = pair.h(xs[i]) == pair.g(ys[i])
        return out

    def __repr__(self) -> str:
        return f"<DshFamily {self.name} d={self.dimension} on {self.domain_tag}>"


def _check_point(pair: FunctionPair, p: np.ndarray, label: str) -> np.ndarray:
    p = np.asarray(p)
    if p.ndim != 1 or p.shape[0] != pair.dimension:
        raise ValueError(
            f"{label} has shape {p.shape}, expected ({pair.dimension},) "
            f"for domain {pair.domain_tag}"
        )
    if pair.domain_tag == "hamming":
        vals = np.unique(p)
        if not np.isin(vals, (0, 1)).all():
            raise ValueError(f"{label} must be 0/1 valued for the hamming domain")
    return p


def sample_pair(family: DshFamily, seed: int) -> FunctionPair:
    """Module-level alias for family.sample_pair."""
    return family.sample_pair(seed)


def collide(pair: FunctionPair, x: np.ndarray, y: np.ndarray) -> bool:
    """True iff h(x) = g(y); validates domain and dimension."""
    x = _check_point(pair, x, "x")
    y = _check_point(pair, y, "y")
    return int(pair.h(x)) == int(pair.g(y))
