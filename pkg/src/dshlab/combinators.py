"""CPF-preserving family transformations: concat, power, mixture.

Concatenating families multiplies their CPFs (all components must collide
at once); mixing families with probabilities p_i takes the convex
combination sum p_i f_i (both sides learn which component was drawn, so
cross-component collisions are impossible); powering is concatenation of
k independent copies.

Composite tokens are tuples mixed to 64 bits (see _tokens); mixture
tokens include the drawn component index.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from ._tokens import mix_token_tuple, mix_tokens
from .core import Cpf, DshFamily


def _child(rng: np.random.Generator) -> np.random.Generator:
    """Deterministic child stream drawn from rng."""
    return np.random.default_rng(int(rng.integers(0, 2**63)))


def _common_domain(families: Sequence[DshFamily]) -> tuple[str, int]:
    domains = {f.domain_tag for f in families}
    dims = {f.dimension for f in families}
    if len(domains) != 1 or len(dims) != 1:
        raise ValueError("component families must share domain and dimension")
    return domains.pop(), dims.pop()


def _combined_cpf(
    families: Sequence[DshFamily], combine, kind_floor: str
) -> Cpf | None:
    """Build the composite Cpf when every component has an evaluator."""
    if any(f.cpf is None or f.cpf.eval is None for f in families):
        return None
    semantics = {f.cpf.argument_semantics for f in families}
    if len(semantics) != 1:
        raise ValueError("component CPFs must share argument semantics")
    kinds = {f.cpf.kind for f in families}
    kind = "bounded" if ("bounded" in kinds or kind_floor == "bounded") else "closed_form"
    evals = [f.cpf.eval for f in families]

    def eval_combined(x: float, _evals=tuple(evals), _combine=combine) -> float:
        return _combine([e(x) for e in _evals])

    return Cpf(kind=kind, eval=eval_combined, argument_semantics=semantics.pop())


class ConcatFamily(DshFamily):
    """Concatenation: CPF is the product of component CPFs."""

    def __init__(self, families: Sequence[DshFamily], name: str | None = None):
        if not families:
            raise ValueError("concat needs at least one family")
        domain, dim = _common_domain(families)
        self.components = list(families)
        cpf = _combined_cpf(self.components, lambda vals: float(np.prod(vals)), "closed_form")
        super().__init__(
            domain, dim, cpf, name or f"concat({', '.join(f.name for f in families)})"
        )

    def _sample(self, rng: np.random.Generator):
        pairs = [c.sample_pair(int(rng.integers(0, 2**63))) for c in self.components]

        def h(x: np.ndarray) -> int:
            return mix_token_tuple(tuple(int(p.h(x)) for p in pairs))

        def g(y: np.ndarray) -> int:
            return mix_token_tuple(tuple(int(p.g(y)) for p in pairs))

        return h, g

    def _batch_collide(self, xs, ys, rng):
        # All components must collide; each gets an independent stream.
        out = np.ones(xs.shape[0], dtype=bool)
        for comp in self.components:
            out &= comp._batch_collide(xs, ys, _child(rng))
        return out


class MixtureFamily(DshFamily):
    """Mixture: component i drawn with probability p_i at sampling time."""

    def __init__(
        self,
        families: Sequence[DshFamily],
        probs: Sequence[float],
        name: str | None = None,
    ):
        if len(families) != len(probs) or not families:
            raise ValueError("mixture needs matching nonempty families/probs")
        probs = [float(p) for p in probs]
        if min(probs) < 0 or abs(sum(probs) - 1.0) > 1e-12:
            raise ValueError("mixture probabilities must be nonnegative and sum to 1")
        domain, dim = _common_domain(families)
        self.components = list(families)
        self.probs = np.array(probs)

        def convex(vals: list[float]) -> float:
            return float(np.dot(self.probs, vals))

        cpf = _combined_cpf(self.components, convex, "closed_form")
        if name is None:
            parts = ", ".join(f"{p:g}*{f.name}" for p, f in zip(probs, families))
            name = f"mix({parts})"
        super().__init__(domain, dim, cpf, name)

    def _sample(self, rng: np.random.Generator):
        j = int(rng.choice(len(self.components), p=self.probs))
        pair = self.components[j].sample_pair(int(rng.integers(0, 2**63)))

        def h(x: np.ndarray, _j=j, _p=pair) -> int:
            return mix_token_tuple((_j, int(_p.h(x))))

        def g(y: np.ndarray, _j=j, _p=pair) -> int:
            return mix_token_tuple((_j, int(_p.g(y))))

        return h, g

    def _batch_collide(self, xs, ys, rng):
        n = xs.shape[0]
        # Both sides share the drawn component, so a row collides iff its
        # component's own pair collides on that row.
        choice = rng.choice(len(self.components), size=n, p=self.probs)
        out = np.zeros(n, dtype=bool)
        for j, comp in enumerate(self.components):
            # child stream drawn unconditionally so component stream
            # assignment does not depend on which rows drew it
            sub = _child(rng)
            mask = choice == j
            if mask.any():
                out[mask] = comp._batch_collide(xs[mask], ys[mask], sub)
        return out


def concat(families: Sequence[DshFamily], name: str | None = None) -> DshFamily:
    """Product-CPF concatenation of same-domain families."""
    return ConcatFamily(families, name=name)


def power(family: DshFamily, k: int) -> DshFamily:
    """Concatenation of k independent copies; CPF f^k."""
    if k < 1:
        raise ValueError("power needs k >= 1")
    return ConcatFamily([family] * k, name=f"pow({family.name}, {k})")


def mixture(
    families: Sequence[DshFamily],
    probs: Sequence[float],
    name: str | None = None,
) -> DshFamily:
    """Convex-combination mixture with component-index-tagged tokens."""
    return MixtureFamily(families, probs, name=name)
