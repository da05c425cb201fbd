"""Bucketed indexes for annulus search and range reporting.

The index stores each point under h(x) for L independently sampled
function pairs and probes bucket g(q) at query time, so the collision
probability between a stored point and a query is exactly the family
CPF at their distance. Two knobs keep the work bounded:

  * powering: the base family is raised to the smallest power whose CPF
    just outside the target range drops below 1/n, so the expected
    number of spurious bucket mates per repetition is below 1;
  * repetitions: L = ceil(e / f(r)) with f the powered CPF at the
    target distance, which caps the per-point miss probability at
    roughly e^-e ~= 0.066.

Annulus queries additionally stop scanning after 8 L candidate
occurrences (finishing the bucket they are in); range reporting drains
all L buckets and reports every verified point once. All candidates
are verified against exact distances before being returned.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .combinators import power
from .core import DshFamily, FunctionPair
from ._rng import stream

CANDIDATE_FACTOR = 8


@dataclass(frozen=True)
class AnnulusQueryParams:
    """Target distance r and the acceptance ring [r_minus, r_plus]."""

    r: float
    r_minus: float
    r_plus: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.r_minus <= self.r <= self.r_plus:
            raise ValueError("need 0 <= r_minus <= r <= r_plus")


def _exact_distance(domain_tag: str, points: np.ndarray, q: np.ndarray) -> np.ndarray:
    """Distance from q to each row: relative Hamming, or the norm |x - q|
    (which on the unit sphere is the chord length)."""
    if domain_tag == "hamming":
        return np.mean(points != q, axis=1)
    return np.linalg.norm(points - q[None, :], axis=1)


def _cpf_argument(family: DshFamily, dist: float) -> float:
    sem = family.cpf.argument_semantics
    if sem == "inner-product":
        # chord -> inner product on the unit sphere
        return 1.0 - dist * dist / 2.0
    return dist


def cpf_at_distance(family: DshFamily, dist: float) -> float:
    """Family CPF evaluated at a distance (chords mapped to inner products)."""
    if family.cpf is None or family.cpf.eval is None:
        raise ValueError("family needs an evaluatable CPF to build an index")
    return family.cpf(_cpf_argument(family, dist))


def _outside_probes(family: DshFamily, r_minus: float, r_plus: float) -> list[float]:
    """Distances just outside [r_minus, r_plus] where the CPF must be small.

    On the Hamming cube distances live on the grid i/d, so the probes
    are the nearest grid multiples strictly outside the ring; on
    continuous domains the ring boundary itself is the probe.
    """
    if family.domain_tag == "hamming":
        d = family.dimension
        probes = []
        k_lo = math.ceil(r_minus * d - 1e-12) - 1
        if k_lo >= 0:
            probes.append(k_lo / d)
        k_hi = math.floor(r_plus * d + 1e-12) + 1
        if k_hi <= d:
            probes.append(k_hi / d)
        return probes
    probes = []
    if r_minus > 0.0:
        probes.append(r_minus)
    probes.append(r_plus)
    return probes


def _choose_power(family: DshFamily, probes: list[float], n: int) -> int:
    f_out = max((cpf_at_distance(family, p) for p in probes), default=0.0)
    if f_out <= 0.0 or n <= 1:
        return 1
    if f_out >= 1.0:
        raise ValueError("CPF does not decay outside the target range")
    return max(1, math.ceil(math.log(1.0 / n) / math.log(f_out)))


@dataclass
class DshIndex:
    mode: str
    family: DshFamily
    powered: DshFamily
    pairs: list[FunctionPair]
    buckets: list[dict]
    points: np.ndarray
    L: int
    pwr: int
    cutoff: Optional[int]
    r_minus: float
    r_plus: float


@dataclass(frozen=True)
class QueryResult:
    """Verified point ids plus the raw candidate work the scan performed."""

    ids: tuple[int, ...]
    n_candidates: int
    n_buckets_probed: int


def _build(
    points: np.ndarray,
    family: DshFamily,
    mode: str,
    L: int,
    pwr: int,
    cutoff: Optional[int],
    r_minus: float,
    r_plus: float,
    seed: int,
) -> DshIndex:
    points = np.asarray(points)
    powered = power(family, pwr) if pwr > 1 else family
    rng = stream(seed)
    seeds = rng.integers(0, 2**63, size=L)
    pairs = [powered.sample_pair(int(s)) for s in seeds]
    buckets: list[dict] = []
    for pair in pairs:
        table: dict = {}
        for i in range(points.shape[0]):
            token = pair.h(points[i])
            table.setdefault(token, []).append(i)
        buckets.append(table)
    return DshIndex(
        mode=mode,
        family=family,
        powered=powered,
        pairs=pairs,
        buckets=buckets,
        points=points,
        L=L,
        pwr=pwr,
        cutoff=cutoff,
        r_minus=r_minus,
        r_plus=r_plus,
    )


def build_annulus_index(
    points: np.ndarray,
    family: DshFamily,
    params: AnnulusQueryParams,
    seed: int = 0,
) -> DshIndex:
    """Index for reporting a point at distance ~r inside [r_minus, r_plus]."""
    points = np.asarray(points)
    n = points.shape[0]
    pwr = _choose_power(family, _outside_probes(family, params.r_minus, params.r_plus), n)
    f_r = cpf_at_distance(family, params.r) ** pwr
    if f_r <= 0.0:
        raise ValueError("CPF vanishes at the target distance r")
    L = math.ceil(math.e / f_r)
    return _build(
        points,
        family,
        "annulus",
        L,
        pwr,
        CANDIDATE_FACTOR * L,
        params.r_minus,
        params.r_plus,
        seed,
    )


def annulus_query(index: DshIndex, q: np.ndarray) -> QueryResult:
    """Scan buckets g(q) until the candidate budget is spent; return the
    ids whose exact distance lands inside the ring."""
    if index.mode != "annulus":
        raise ValueError("index was not built for annulus queries")
    seen: list[int] = []
    n_cand = 0
    n_buckets = 0
    for pair, table in zip(index.pairs, index.buckets):
        if index.cutoff is not None and n_cand >= index.cutoff:
            break
        ids = table.get(pair.g(q))
        n_buckets += 1
        if not ids:
            continue
        seen.extend(ids)
        n_cand += len(ids)
    hits: tuple[int, ...] = ()
    if seen:
        cand = np.unique(np.asarray(seen, dtype=np.intp))
        dists = _exact_distance(index.family.domain_tag, index.points[cand], q)
        keep = (dists >= index.r_minus) & (dists <= index.r_plus)
        hits = tuple(int(i) for i in cand[keep])
    return QueryResult(ids=hits, n_candidates=n_cand, n_buckets_probed=n_buckets)


def build_range_index(
    points: np.ndarray,
    family: DshFamily,
    r: float,
    r_plus: float,
    seed: int = 0,
) -> DshIndex:
    """Index for reporting every point within distance r (verified out to
    r_plus), sized by the worst CPF value over [0, r]."""
    if not 0.0 <= r <= r_plus:
        raise ValueError("need 0 <= r <= r_plus")
    points = np.asarray(points)
    n = points.shape[0]
    pwr = _choose_power(family, _outside_probes(family, 0.0, r_plus), n)
    f_min = _grid_min_cpf(family, r) ** pwr
    if f_min <= 0.0:
        raise ValueError("CPF vanishes somewhere on [0, r]")
    L = math.ceil(math.e / f_min)
    return _build(points, family, "range", L, pwr, None, 0.0, r_plus, seed)


def _grid_min_cpf(family: DshFamily, r: float) -> float:
    if family.domain_tag == "hamming":
        d = family.dimension
        k_max = math.floor(r * d + 1e-12)
        grid = [i / d for i in range(k_max + 1)]
    else:
        grid = list(np.linspace(0.0, r, 65))
    return min(cpf_at_distance(family, t) for t in grid)


def range_report(index: DshIndex, q: np.ndarray) -> QueryResult:
    """Drain all L buckets for g(q); return each verified id once."""
    if index.mode != "range":
        raise ValueError("index was not built for range reporting")
    seen: list[int] = []
    n_cand = 0
    for pair, table in zip(index.pairs, index.buckets):
        ids = table.get(pair.g(q))
        if ids:
            seen.extend(ids)
            n_cand += len(ids)
    hits: tuple[int, ...] = ()
    if seen:
        cand = np.unique(np.asarray(seen, dtype=np.intp))
        dists = _exact_distance(index.family.domain_tag, index.points[cand], q)
        hits = tuple(int(i) for i in cand[dists <= index.r_plus])
    return QueryResult(ids=hits, n_candidates=n_cand, n_buckets_probed=index.L)
