"""Planted-instance demos: annulus search, range reporting, privacy.

Each builder synthesizes a dataset with known geometry (points planted
at exact distances from the queries plus background clutter), runs the
corresponding index or protocol, and reports measured recall, candidate
work, or decision rates next to what the CPF arithmetic predicts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .combinators import concat, power
from .core import DshFamily
from .hamming import anti_bit_sampling_family, bit_sampling_family
from .indexes import (
    AnnulusQueryParams,
    annulus_query,
    build_annulus_index,
    build_range_index,
    range_report,
    _exact_distance,
)
from .privacy import (
    DEFAULT_C,
    ProtocolParams,
    _step_exponent,
    decide_close,
    leakage_estimate,
    make_sketch,
    protocol_params,
)
from .sphere import AnnulusFamilyParams, annulus_family
from ._rng import stream


def _normalize_rows(a: np.ndarray) -> np.ndarray:
    return a / np.linalg.norm(a, axis=-1, keepdims=True)


# ---------------------------------------------------------------------------
# planted instances
# ---------------------------------------------------------------------------


def planted_hamming_annulus(
    n: int = 10_000, n_queries: int = 200, seed: int = 0
) -> tuple[np.ndarray, np.ndarray, DshFamily, AnnulusQueryParams]:
    """d = 32 cube: queries one bit off a common center, one planted point
    exactly 8 bits from each query, background points 28+ bits from the
    center (hence 27+ bits from every query, outside the ring). The CPF
    ((1-t)^3 t)^2 peaks near the planted distance 1/4."""
    d = 32
    rng = stream(seed, (101,))
    center = rng.integers(0, 2, d).astype(np.uint8)
    queries = np.tile(center, (n_queries, 1))
    planted = np.empty((n_queries, d), dtype=np.uint8)
    for j in range(n_queries):
        queries[j, int(rng.integers(d))] ^= 1
        p = queries[j].copy()
        p[rng.choice(d, 8, replace=False)] ^= 1
        planted[j] = p
    n_bg = n - n_queries
    background = np.tile(center, (n_bg, 1))
    for i in range(n_bg):
        k = int(rng.integers(28, d + 1))
        background[i, rng.choice(d, k, replace=False)] ^= 1
    points = np.vstack([planted, background])
    bit = bit_sampling_family(d)
    fam = power(concat([bit, bit, bit, anti_bit_sampling_family(d)]), 2)
    # r_plus = 0.76: first grid probe outside is 25/32 where the CPF is
    # 6.7e-5 <= 1/n, so the index stays at pwr 1; backgrounds sit at
    # >= 27/32 = 0.84, safely outside the ring.
    params = AnnulusQueryParams(r=0.25, r_minus=1.0 / 64.0, r_plus=0.76)
    return points, queries, fam, params


def planted_sphere_annulus(
    n: int = 10_000, n_queries: int = 200, seed: int = 0
) -> tuple[np.ndarray, np.ndarray, DshFamily, AnnulusQueryParams]:
    """d = 64 sphere: a tight query cluster, one planted point exactly
    orthogonal to each query (chord sqrt(2)), background points packed
    near the cluster where the annulus CPF is negligible."""
    d = 64
    rng = stream(seed, (103,))
    u = _normalize_rows(rng.standard_normal(d))
    queries = _normalize_rows(
        u[None, :] + 0.1 * _normalize_rows(rng.standard_normal((n_queries, d)))
    )
    v = rng.standard_normal((n_queries, d))
    v -= np.einsum("ij,ij->i", v, queries)[:, None] * queries
    planted = _normalize_rows(v)
    n_bg = n - n_queries
    background = _normalize_rows(
        u[None, :] + 0.311 * _normalize_rows(rng.standard_normal((n_bg, d)))
    )
    points = np.vstack([planted, background])
    fam = annulus_family(d, AnnulusFamilyParams(alpha_max=0.0, t_plus=1.0))
    # ring bounds in chord distance: alpha in [-0.85, 0.85]
    r_minus = math.sqrt(2.0 - 2.0 * 0.85)
    r_plus = math.sqrt(2.0 + 2.0 * 0.85)
    params = AnnulusQueryParams(r=math.sqrt(2.0), r_minus=r_minus, r_plus=r_plus)
    return points, queries, fam, params


def planted_hamming_range(
    n: int = 10_000, n_queries: int = 200, seed: int = 0
) -> tuple[np.ndarray, np.ndarray, DshFamily, float, float, tuple[int, ...]]:
    """d = 32 cube: per query, planted points at exactly 0, 2, and 4 bits
    (all within r = 4/32), background points uniform (16 bits away on
    average, far outside r_plus = 0.4)."""
    d = 32
    offsets = (0, 2, 4)
    rng = stream(seed, (105,))
    queries = rng.integers(0, 2, size=(n_queries, d)).astype(np.uint8)
    planted = np.empty((n_queries * len(offsets), d), dtype=np.uint8)
    for j in range(n_queries):
        for a, k in enumerate(offsets):
            p = queries[j].copy()
            if k:
                p[rng.choice(d, k, replace=False)] ^= 1
            planted[j * len(offsets) + a] = p
    n_bg = n - planted.shape[0]
    background = rng.integers(0, 2, size=(n_bg, d)).astype(np.uint8)
    points = np.vstack([planted, background])
    fam = power(bit_sampling_family(d), 19)
    return points, queries, fam, 4.0 / 32.0, 0.4, offsets


# ---------------------------------------------------------------------------
# annulus demo
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AnnulusDemoRow:
    query: int
    true_in_ring: int
    reported: int
    recall: float
    candidates: int
    buckets_probed: int


@dataclass(frozen=True)
class AnnulusDemoReport:
    domain: str
    dim: int
    n_points: int
    n_queries: int
    L: int
    pwr: int
    cutoff: int
    mean_recall: float
    mean_candidates: float
    max_candidates: int
    max_bucket: int
    rows: tuple[AnnulusDemoRow, ...]

    def to_csv(self) -> str:
        lines = ["query,true_in_ring,reported,recall,candidates,buckets_probed"]
        for r in self.rows:
            lines.append(
                f"{r.query},{r.true_in_ring},{r.reported},"
                f"{format(r.recall, '.17g')},{r.candidates},{r.buckets_probed}"
            )
        return "\n".join(lines) + "\n"


def run_annulus_demo(
    points: np.ndarray,
    queries: np.ndarray,
    family: DshFamily,
    params: AnnulusQueryParams,
    seed: int = 0,
) -> AnnulusDemoReport:
    index = build_annulus_index(points, family, params, seed=seed)
    max_bucket = max(
        (max(map(len, table.values()), default=0) for table in index.buckets),
        default=0,
    )
    rows = []
    for j in range(queries.shape[0]):
        q = queries[j]
        res = annulus_query(index, q)
        dists = _exact_distance(family.domain_tag, points, q)
        truth = np.nonzero((dists >= params.r_minus) & (dists <= params.r_plus))[0]
        found = len(set(res.ids) & set(int(i) for i in truth))
        recall = found / len(truth) if len(truth) else 1.0
        rows.append(
            AnnulusDemoRow(
                query=j,
                true_in_ring=int(len(truth)),
                reported=len(res.ids),
                recall=recall,
                candidates=res.n_candidates,
                buckets_probed=res.n_buckets_probed,
            )
        )
    return AnnulusDemoReport(
        domain=family.domain_tag,
        dim=family.dimension,
        n_points=points.shape[0],
        n_queries=queries.shape[0],
        L=index.L,
        pwr=index.pwr,
        cutoff=index.cutoff,
        mean_recall=float(np.mean([r.recall for r in rows])) if rows else 1.0,
        mean_candidates=float(np.mean([r.candidates for r in rows])) if rows else 0.0,
        max_candidates=max((r.candidates for r in rows), default=0),
        max_bucket=max_bucket,
        rows=tuple(rows),
    )


def annulus_demo(
    domain: str = "hamming",
    n: int = 10_000,
    n_queries: int = 200,
    seed: int = 0,
) -> AnnulusDemoReport:
    """Planted annulus instance end to end."""
    if domain == "hamming":
        points, queries, fam, params = planted_hamming_annulus(n, n_queries, seed)
    elif domain == "sphere":
        points, queries, fam, params = planted_sphere_annulus(n, n_queries, seed)
    else:
        raise ValueError("planted annulus instances exist for hamming and sphere")
    return run_annulus_demo(points, queries, fam, params, seed=seed + 1)


# ---------------------------------------------------------------------------
# range reporting demo
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RangeDemoReport:
    domain: str
    dim: int
    n_points: int
    n_queries: int
    L: int
    pwr: int
    offsets: tuple[int, ...]
    class_frequency: tuple[float, ...]
    mean_duplicate_factor: float
    all_within_r_plus: bool

    def to_csv(self) -> str:
        lines = ["offset_bits,reported_frequency"]
        for k, freq in zip(self.offsets, self.class_frequency):
            lines.append(f"{k},{format(freq, '.17g')}")
        return "\n".join(lines) + "\n"


def range_demo(
    n: int = 10_000, n_queries: int = 200, seed: int = 0
) -> RangeDemoReport:
    """Planted range-reporting instance: per-offset report frequency and
    the duplicate-candidate work factor."""
    points, queries, fam, r, r_plus, offsets = planted_hamming_range(
        n, n_queries, seed
    )
    index = build_range_index(points, fam, r, r_plus, seed=seed + 1)
    hits = np.zeros(len(offsets), dtype=np.int64)
    dup_factors = []
    all_ok = True
    for j in range(queries.shape[0]):
        q = queries[j]
        res = range_report(index, q)
        ids = set(res.ids)
        for a in range(len(offsets)):
            if j * len(offsets) + a in ids:
                hits[a] += 1
        if ids:
            dists = _exact_distance(fam.domain_tag, points[sorted(ids)], q)
            if np.any(dists > r_plus + 1e-12):
                all_ok = False
            dup_factors.append(res.n_candidates / len(ids))
    return RangeDemoReport(
        domain=fam.domain_tag,
        dim=fam.dimension,
        n_points=points.shape[0],
        n_queries=queries.shape[0],
        L=index.L,
        pwr=index.pwr,
        offsets=tuple(offsets),
        class_frequency=tuple(float(h) / queries.shape[0] for h in hits),
        mean_duplicate_factor=float(np.mean(dup_factors)) if dup_factors else 0.0,
        all_within_r_plus=all_ok,
    )


# ---------------------------------------------------------------------------
# privacy demo
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PrivacyDemoReport:
    params: ProtocolParams
    step_exponent: int
    n_pairs: int
    close_yes: int
    far_yes: int
    mean_leakage_close: float
    mean_leakage_far: float

    @property
    def close_yes_rate(self) -> float:
        return self.close_yes / self.n_pairs

    @property
    def far_yes_rate(self) -> float:
        return self.far_yes / self.n_pairs

    def to_csv(self) -> str:
        lines = ["kind,n,yes,no,yes_rate,mean_leakage_bits"]
        lines.append(
            f"close,{self.n_pairs},{self.close_yes},{self.n_pairs - self.close_yes},"
            f"{format(self.close_yes_rate, '.17g')},{format(self.mean_leakage_close, '.17g')}"
        )
        lines.append(
            f"far,{self.n_pairs},{self.far_yes},{self.n_pairs - self.far_yes},"
            f"{format(self.far_yes_rate, '.17g')},{format(self.mean_leakage_far, '.17g')}"
        )
        return "\n".join(lines) + "\n"


def privacy_demo(
    d: int = 128,
    r: float = 0.1,
    c: float = 2.0,
    epsilon: float = 0.05,
    delta: float = 0.05,
    rho: float = 0.5,
    n_pairs: int = 2000,
    seed: int = 0,
    C: float = DEFAULT_C,
) -> PrivacyDemoReport:
    """Confusion-matrix run: close pairs at floor(r d) bits, far pairs at
    ceil(c r d) bits, fresh protocol randomness per pair."""
    params = protocol_params(r, c, epsilon, delta, rho, C)
    k_close = math.floor(r * d)
    k_far = math.ceil(c * r * d)
    rng = stream(seed, (107,))
    close_yes = far_yes = 0
    leak_close: list[int] = []
    leak_far: list[int] = []
    for kind, k in (("close", k_close), ("far", k_far)):
        for _ in range(n_pairs):
            x = rng.integers(0, 2, d).astype(np.uint8)
            y = x.copy()
            y[rng.choice(d, k, replace=False)] ^= 1
            master_seed = int(rng.integers(0, 2**62))
            sx = make_sketch(x, params, "data", master_seed)
            sy = make_sketch(y, params, "query", master_seed)
            yes = decide_close(sx, sy)
            leak = leakage_estimate(sx, sy)
            if kind == "close":
                close_yes += yes
                leak_close.append(leak)
            else:
                far_yes += yes
                leak_far.append(leak)
    return PrivacyDemoReport(
        params=params,
        step_exponent=_step_exponent(params),
        n_pairs=n_pairs,
        close_yes=close_yes,
        far_yes=far_yes,
        mean_leakage_close=float(np.mean(leak_close)),
        mean_leakage_far=float(np.mean(leak_far)),
    )
