"""End-to-end acceptance checks.

Each test prints one "[ACCEPTANCE] C{i} PASS/FAIL: label" line through
capsys.disabled(), so the lines appear in the run log even for passing
tests; the assertion carries the failing detail.
"""

import math
import os

import numpy as np

from dshlab._rng import stream
from dshlab.combinators import concat, mixture, power
from dshlab.csvio import rows_to_csv
from dshlab.demos import annulus_demo, privacy_demo, range_demo
from dshlab.euclidean import ShiftedBucketParams, e2dsh_family
from dshlab.familyspec import parse_family
from dshlab.hamming import (
    anti_bit_sampling_family,
    assembly_exact_cpf,
    bit_sampling_family,
    polynomial_family,
    scaled_biased_anti_family,
    scaled_bit_sampling_family,
)
from dshlab.lab import (
    builtin_hamming_families,
    check_forward_ssse,
    check_reverse_ssse,
    estimate_cpf,
)
from dshlab.pairs import (
    correlated_bits_generator,
    euclid_pair_generator,
    hamming_exact_generator,
    sphere_pair_generator,
)
from dshlab.polynomial import Polynomial
from dshlab.sphere import FilterParams, filter_cpf_bounds, filter_family, simhash_family
from dshlab.verify import (
    SUITES,
    _ASSEMBLY_POLYS,
    check_e2dsh_shape,
    check_jensen_random,
    check_rho_ladder,
    check_tail_sandwiches,
    check_valiant_identities,
    cpf_curve_rows,
    run_suite,
)


def _announce(capsys, index: int, label: str, ok: bool, detail: str = "") -> None:
    line = f"[ACCEPTANCE] C{index} {'PASS' if ok else 'FAIL'}: {label}"
    with capsys.disabled():
        print("\n" + line, flush=True)
    assert ok, line + (f" [{detail}]" if detail else "")


def _within_3se(estimate: float, target: float, n: int) -> bool:
    """Null-hypothesis z-test; degenerate targets demand an exact match."""
    if 0.0 < target < 1.0:
        return abs(estimate - target) <= 3.0 * math.sqrt(target * (1.0 - target) / n)
    return estimate == target


def test_c01_closed_form_cpf_agreement(capsys):
    n = 100_000
    d = 16
    failures = []

    def mc(fam, gen, seed):
        rep = estimate_cpf(fam, gen, gen.argument, n, seed)
        target = fam.cpf(gen.argument)
        if not _within_3se(rep.estimate, target, n):
            failures.append(f"{fam.name}@{gen.argument:g}")

    bit = bit_sampling_family(d)
    anti = anti_bit_sampling_family(d)
    hamming_fams = [
        bit,
        anti,
        scaled_bit_sampling_family(d, 0.5),
        scaled_biased_anti_family(d, 0.5, 0.5),
        concat([bit, anti]),
        mixture([bit, anti], [0.3, 0.7]),
        power(bit, 3),
        polynomial_family([0.0, 0.0, 1.0], d)[0],
        polynomial_family([1.0, 1.0], d)[0],
        polynomial_family([1.0, -1.0], d)[0],
        polynomial_family([8.0, 12.0, 5.0, 1.0], d)[0],
    ]
    for i, fam in enumerate(hamming_fams):
        for j, k in enumerate((0, 2, 4, 8, 12)):
            mc(fam, hamming_exact_generator(d, k / d), 1000 + 37 * i + j)

    for i, (k, deltas) in enumerate(
        ((0, (0.25, 0.5, 1.0, 2.0, 4.0)), (3, (1.0, 2.0, 3.0, 4.0, 8.0)))
    ):
        fam = e2dsh_family(8, ShiftedBucketParams(w=1.0, k=k))
        for j, delta in enumerate(deltas):
            mc(fam, euclid_pair_generator(8, delta), 2000 + 31 * i + j)

    sim = simhash_family(8)
    for j, alpha in enumerate((-0.8, -0.3, 0.0, 0.4, 0.8)):
        mc(sim, sphere_pair_generator(8, alpha), 3000 + j)

    _announce(
        capsys,
        1,
        "closed-form CPF within 3se at 5 grid points, n=1e5 per point",
        not failures,
        ", ".join(failures),
    )


def test_c02_filter_sandwich_and_symmetry(capsys):
    n = 1_000_000
    d = 8
    failures = []
    for ti, t in enumerate((2.0, 3.0)):
        plus = filter_family(d, FilterParams(t=t, sign="plus"))
        minus = filter_family(d, FilterParams(t=t, sign="minus"))
        for j, alpha in enumerate((-0.5, 0.0, 0.25, 0.5)):
            seed = 7000 + 100 * ti + j
            rep_p = estimate_cpf(plus, sphere_pair_generator(d, alpha), alpha, n, seed)
            lo, hi = filter_cpf_bounds(t, alpha)
            slack_lo = 3.0 * math.sqrt(lo * (1.0 - lo) / n)
            slack_hi = 3.0 * math.sqrt(hi * (1.0 - hi) / n)
            if not (lo - slack_lo <= rep_p.estimate <= hi + slack_hi):
                failures.append(f"band t={t:g},a={alpha:g}")
            rep_m = estimate_cpf(
                minus, sphere_pair_generator(d, -alpha), -alpha, n, seed + 50
            )
            gap = abs(rep_p.estimate - rep_m.estimate)
            if gap > 3.0 * math.hypot(rep_p.stderr, rep_m.stderr):
                failures.append(f"symmetry t={t:g},a={alpha:g}")
    _announce(
        capsys,
        2,
        "filter CPF inside analytic sandwich and plus/minus symmetric, n=1e6",
        not failures,
        ", ".join(failures),
    )


def test_c03_e2dsh_shape(capsys):
    results = check_e2dsh_shape(w=1.0, k=3, n_points=64, tol=1e-10)
    bad = [r.name for r in results if not r.ok]
    _announce(
        capsys,
        3,
        "e2dsh k=3,w=1: f(0)=0, one interior max, quadrature to 1e-10",
        not bad,
        ", ".join(bad),
    )


def test_c04_rho_ladder(capsys):
    results = check_rho_ladder(ks=(4, 8, 16, 32), c=2.0, r=1.0, final_bound=1.35)
    bad = [f"{r.name}: {r.detail}" for r in results if not r.ok]
    _announce(
        capsys,
        4,
        "rho_minus*c^2 decreasing over k=4..32, final <= 1.35",
        not bad,
        "; ".join(bad),
    )


def test_c05_ssse_consistency(capsys):
    n = 1_000_000
    d = 64
    violated = []
    for i, (name, fam) in enumerate(builtin_hamming_families(d).items()):
        base = estimate_cpf(
            fam, correlated_bits_generator(d, 0.0), 0.0, n, 9000 + i
        )
        for j, alpha in enumerate((0.25, 0.5, 0.75)):
            rev = check_reverse_ssse(fam, alpha, n, 9100 + 10 * i + j, baseline=base)
            if rev.verdict == "violated":
                violated.append(f"reverse/{name}@a={alpha:g}")
            fwd = check_forward_ssse(fam, alpha, n, 9400 + 10 * i + j, baseline=base)
            if fwd.verdict == "violated":
                violated.append(f"forward/{name}@a={alpha:g}")
    _announce(
        capsys,
        5,
        "no violated similarity-exponent verdict, d=64, n=1e6",
        not violated,
        ", ".join(violated),
    )


def test_c06_jensen_chain(capsys):
    results = check_jensen_random(instances=1000, slack=1e-12)
    ok = all(r.ok for r in results)
    _announce(
        capsys,
        6,
        "1000 random Jensen-chain instances hold with 1e-12 slack",
        ok,
        "; ".join(r.detail for r in results if not r.ok),
    )


def test_c07_tail_sandwiches(capsys):
    results = check_tail_sandwiches(
        ts=(1.0, 2.0), alphas=(-0.5, 0.0, 0.5), n=1_000_000
    )
    bad = [r.name for r in results if not r.ok]
    _announce(
        capsys,
        7,
        "normal and orthant tails inside analytic sandwiches, n=1e6",
        not bad,
        ", ".join(bad),
    )


def test_c08_embedding_identities(capsys):
    results = check_valiant_identities(n_pairs=100, seed=109, mc_n=100_000)
    bad = [r.name for r in results if not r.ok]
    _announce(
        capsys,
        8,
        "tensor embedding identity to 1e-9 on 100 pairs, composed CPF 3se",
        not bad,
        ", ".join(bad),
    )


def test_c09_polynomial_assembly_identity(capsys):
    n = 100_000
    d = 16
    failures = []
    for label, coeffs in _ASSEMBLY_POLYS.items():
        P = Polynomial(tuple(coeffs))
        fam, delta, assembly = polynomial_family(coeffs, d)
        worst = 0.0
        for t in np.linspace(0.0, 1.0, 32):
            lhs = P(float(t))
            rhs = delta * assembly_exact_cpf(assembly, float(t))
            worst = max(worst, abs(lhs - rhs) / max(1.0, abs(lhs)))
        if worst > 1e-8:
            failures.append(f"identity/{label} ({worst:.3g})")
        for j, k in enumerate((0, 4, 8, 12, 16)):
            gen = hamming_exact_generator(d, k / d)
            rep = estimate_cpf(fam, gen, gen.argument, n, 11000 + j)
            if not _within_3se(rep.estimate, P(k / d) / delta, n):
                failures.append(f"mc/{label}@t={k/d:g}")
    _announce(
        capsys,
        9,
        "P(t) = delta * assembled CPF to 1e-8 on 32-grid, MC within 3se",
        not failures,
        ", ".join(failures),
    )


def test_c10_annulus_recall_and_budget(capsys):
    rep = annulus_demo("hamming", n=10_000, n_queries=200, seed=0)
    budget_bad = [
        r.query
        for r in rep.rows
        if r.candidates > rep.cutoff + rep.max_bucket
    ]
    ok = rep.cutoff == 8 * rep.L and rep.mean_recall >= 0.5 and not budget_bad
    _announce(
        capsys,
        10,
        "planted annulus (n=1e4, 200 queries): recall >= 0.5, per-query budget 8L+overshoot",
        ok,
        f"recall={rep.mean_recall:.4f} over-budget queries={budget_bad[:5]}",
    )


def test_c11_range_reporting(capsys):
    rep = range_demo(n=10_000, n_queries=200, seed=0)
    freq_ok = all(f > 0.5 for f in rep.class_frequency)
    ok = freq_ok and rep.all_within_r_plus
    _announce(
        capsys,
        11,
        "planted range reporting: every in-range class frequency > 0.5, all <= r_plus",
        ok,
        f"frequencies={rep.class_frequency} within={rep.all_within_r_plus}",
    )


def test_c12_privacy_protocol(capsys):
    rep = privacy_demo(n_pairs=2000, seed=0)
    ok = rep.close_yes_rate >= 0.95 and rep.far_yes_rate <= 0.05
    _announce(
        capsys,
        12,
        "privacy protocol: close yes-rate >= 0.95, far yes-rate <= 0.05, 2000 pairs",
        ok,
        f"close={rep.close_yes_rate:.4f} far={rep.far_yes_rate:.4f}",
    )


def test_c13_reproducibility(capsys):
    def snapshot() -> bytes:
        parts = []
        for suite in sorted(SUITES):
            for r in run_suite(suite, seed=5):
                parts.append(f"{suite}|{r.name}|{r.verdict}|{r.detail}")
        fam = parse_family("concat(bit, anti)", default_dim=16)
        parts.append(rows_to_csv(cpf_curve_rows(fam, [0.0, 0.25, 0.5], n=20_000, seed=5)))
        return "\n".join(parts).encode()

    old = os.environ.get("DSH_THREADS")
    try:
        os.environ.pop("DSH_THREADS", None)
        baseline = snapshot()
        rerun = snapshot()
        os.environ["DSH_THREADS"] = "2"
        threaded2 = snapshot()
        os.environ["DSH_THREADS"] = "5"
        threaded5 = snapshot()
    finally:
        if old is None:
            os.environ.pop("DSH_THREADS", None)
        else:
            os.environ["DSH_THREADS"] = old
    ok = baseline == rerun == threaded2 == threaded5
    _announce(
        capsys,
        13,
        "suites and curves byte-identical across reruns and DSH_THREADS",
        ok,
        f"rerun={'ok' if baseline == rerun else 'DIFF'}"
        f" threads2={'ok' if baseline == threaded2 else 'DIFF'}"
        f" threads5={'ok' if baseline == threaded5 else 'DIFF'}",
    )
