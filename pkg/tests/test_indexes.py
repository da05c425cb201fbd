"""Annulus and range-reporting indexes on planted instances."""

import numpy as np
import pytest

from dshlab.combinators import concat, power
from dshlab.demos import (
    planted_hamming_annulus,
    planted_hamming_range,
    planted_sphere_annulus,
    run_annulus_demo,
)
from dshlab.hamming import anti_bit_sampling_family, bit_sampling_family
from dshlab.indexes import (
    AnnulusQueryParams,
    annulus_query,
    build_annulus_index,
    build_range_index,
    cpf_at_distance,
    range_report,
)


def _hamming_family(d=32):
    bit = bit_sampling_family(d)
    return power(concat([bit, bit, bit, anti_bit_sampling_family(d)]), 2)


def test_params_validation():
    with pytest.raises(ValueError):
        AnnulusQueryParams(r=0.5, r_minus=0.6, r_plus=0.9)
    with pytest.raises(ValueError):
        AnnulusQueryParams(r=0.5, r_minus=0.1, r_plus=0.4)


def test_cpf_at_distance_maps_hamming_directly():
    fam = _hamming_family()
    assert abs(cpf_at_distance(fam, 0.25) - ((0.75**3) * 0.25) ** 2) < 1e-12


def test_cpf_at_distance_maps_sphere_chord_to_inner_product():
    from dshlab.sphere import simhash_family

    fam = simhash_family(8)
    # chord sqrt(2) on the unit sphere is alpha = 0
    assert abs(cpf_at_distance(fam, np.sqrt(2.0)) - 0.5) < 1e-12


def test_annulus_sizing_frozen():
    points, queries, fam, params = planted_hamming_annulus(n=500, n_queries=10, seed=1)
    index = build_annulus_index(points, fam, params, seed=2)
    assert index.pwr == 1
    assert index.L == 245
    assert index.cutoff == 8 * 245


def test_annulus_recall_small_instance():
    points, queries, fam, params = planted_hamming_annulus(n=1500, n_queries=40, seed=3)
    rep = run_annulus_demo(points, queries, fam, params, seed=4)
    assert rep.mean_recall >= 0.5
    assert rep.max_candidates <= rep.cutoff + 1500


def test_annulus_query_verifies_ring_membership():
    points, queries, fam, params = planted_hamming_annulus(n=800, n_queries=10, seed=5)
    index = build_annulus_index(points, fam, params, seed=6)
    for j in range(queries.shape[0]):
        res = annulus_query(index, queries[j])
        if res.ids:
            dists = (points[list(res.ids)] != queries[j]).mean(axis=1)
            assert np.all(dists >= params.r_minus - 1e-12)
            assert np.all(dists <= params.r_plus + 1e-12)


def test_annulus_cutoff_finishes_current_bucket():
    # hand-built index: every bucket returns all 30 points, cutoff 45.
    # bucket 1 brings 30 (< 45, keep going), bucket 2 brings 60 (>= 45,
    # stop); bucket 2 must be scanned to completion, bucket 3 never probed
    from dshlab.core import FunctionPair
    from dshlab.indexes import DshIndex

    d, n = 4, 30
    points = np.zeros((n, d), dtype=np.uint8)
    fam = bit_sampling_family(d)
    pairs = [
        FunctionPair(h=lambda x: 0, g=lambda y: 0, domain_tag="hamming", dimension=d)
        for _ in range(5)
    ]
    buckets = [{0: list(range(n))} for _ in range(5)]
    index = DshIndex(
        mode="annulus",
        family=fam,
        powered=fam,
        pairs=pairs,
        buckets=buckets,
        points=points,
        L=5,
        pwr=1,
        cutoff=45,
        r_minus=0.0,
        r_plus=1.0,
    )
    res = annulus_query(index, np.zeros(d, dtype=np.uint8))
    assert res.n_candidates == 60  # finished the second bucket (overshoot 15)
    assert res.n_buckets_probed == 2
    assert set(res.ids) == set(range(n))


def test_sphere_annulus_small_instance():
    points, queries, fam, params = planted_sphere_annulus(n=1200, n_queries=30, seed=9)
    rep = run_annulus_demo(points, queries, fam, params, seed=10)
    assert rep.mean_recall >= 0.5


def test_annulus_wrong_mode_rejected():
    points, _, fam, params = planted_hamming_annulus(n=300, n_queries=5, seed=11)
    index = build_annulus_index(points, fam, params, seed=12)
    with pytest.raises(ValueError):
        range_report(index, points[0])


def test_range_reporting_small_instance():
    points, queries, fam, r, r_plus, offsets = planted_hamming_range(
        n=1200, n_queries=40, seed=13
    )
    index = build_range_index(points, fam, r, r_plus, seed=14)
    assert index.mode == "range"
    hits = np.zeros(len(offsets))
    for j in range(queries.shape[0]):
        res = range_report(index, queries[j])
        ids = set(res.ids)
        dists = (points[sorted(ids)] != queries[j]).mean(axis=1) if ids else []
        assert np.all(np.asarray(dists) <= r_plus + 1e-12)
        for a in range(len(offsets)):
            hits[a] += j * len(offsets) + a in ids
    freqs = hits / queries.shape[0]
    assert freqs[0] == 1.0  # zero-offset point shares every bucket
    assert np.all(freqs > 0.5)


def test_range_power_scales_with_n():
    # bit^1 decays too slowly outside r_plus for large n at pwr 1
    d = 32
    fam = bit_sampling_family(d)
    rng = np.random.default_rng(15)
    points = rng.integers(0, 2, size=(4000, d)).astype(np.uint8)
    index = build_range_index(points, fam, 2 / 32, 0.25, seed=16)
    assert index.pwr > 1
    # powered family still reports the trivial self-match
    res = range_report(index, points[0])
    assert 0 in res.ids


def test_annulus_rejects_vanishing_cpf_at_r():
    d = 32
    fam = anti_bit_sampling_family(d)  # f(0) = 0
    points = np.zeros((10, d), dtype=np.uint8)
    with pytest.raises(ValueError):
        build_annulus_index(points, fam, AnnulusQueryParams(0.0, 0.0, 0.5), seed=17)
