"""Verification suites: Monte Carlo vs closed forms, analytic sandwiches,
shape checks, and inequality property tests.

Every check returns CheckResult rows with verdict "ok", "violated", or
"inconclusive"; a suite passes when nothing is violated. Monte Carlo
comparisons use three standard errors throughout, so a fixed seed gives
a deterministic verdict.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np
from scipy import integrate

from .combinators import concat, power
from .core import DshFamily
from .csvio import CsvRow
from .euclidean import ShiftedBucketParams, choose_w_k, e2dsh_cpf, e2dsh_family, rho_minus
from .hamming import assembly_exact_cpf, polynomial_family
from .lab import (
    builtin_hamming_families,
    check_forward_ssse,
    check_jensen_chain,
    check_reverse_ssse,
    estimate_cpf,
)
from .pairs import (
    correlated_bits_generator,
    euclid_pair_generator,
    generator_for,
    hamming_exact_generator,
    sphere_pair_generator,
)
from .polynomial import Polynomial
from .sphere import (
    FilterFamily,
    FilterParams,
    crosspolytope_family,
    filter_cpf_bounds,
    filter_family,
    polynomial_sphere_family,
    simhash_family,
    valiant_embed,
)
from .tails import bivariate_tail_bounds, bivariate_tail_exact, normal_tail_bounds, phi_bar
from ._rng import stream

OK = "ok"
VIOLATED = "violated"
INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class CheckResult:
    name: str
    verdict: str
    detail: str

    @property
    def ok(self) -> bool:
        return self.verdict != VIOLATED


def _binomial_se(p: float, n: int) -> float:
    p = min(max(p, 0.0), 1.0)
    return math.sqrt(p * (1.0 - p) / n)


def _three_sigma(name: str, estimate: float, n: int, target: float) -> CheckResult:
    """z-test of the estimate against the target at three sigma.

    The null-hypothesis sigma sqrt(target (1-target) / n) is used rather
    than the plug-in stderr, which degenerates to zero on empty counts;
    a target of exactly 0 or 1 demands an exact match.
    """
    if 0.0 < target < 1.0:
        se = _binomial_se(target, n)
    else:
        se = _binomial_se(estimate, n)
    gap = abs(estimate - target)
    verdict = OK if gap <= 3.0 * se else VIOLATED
    return CheckResult(
        name, verdict, f"estimate={estimate:.6g} target={target:.6g} 3se={3*se:.3g}"
    )


# ---------------------------------------------------------------------------
# hamming suite
# ---------------------------------------------------------------------------


def check_hamming_closed_forms(
    d: int = 16, n: int = 20_000, seed: int = 101
) -> list[CheckResult]:
    """MC agreement with the closed-form CPF for every builtin family."""
    results = []
    ks = [0, d // 8, d // 4, d // 2, (3 * d) // 4]
    for name, fam in builtin_hamming_families(d).items():
        for j, k in enumerate(ks):
            gen = hamming_exact_generator(d, k / d)
            rep = estimate_cpf(fam, gen, gen.argument, n, seed + j)
            results.append(
                _three_sigma(
                    f"hamming/{name}@t={gen.argument:g}",
                    rep.estimate,
                    n,
                    fam.cpf(gen.argument),
                )
            )
    return results


_ASSEMBLY_POLYS: dict[str, list[float]] = {
    "(t+1)(t^2+4t+8)": [8.0, 12.0, 5.0, 1.0],
    "t^2": [0.0, 0.0, 1.0],
    "t+1": [1.0, 1.0],
    "1-t": [1.0, -1.0],
    "t^2+1": [1.0, 0.0, 1.0],
    "t^2+t+0.5": [0.5, 1.0, 1.0],
}


def check_polynomial_assemblies(
    d: int = 16, n: int = 20_000, seed: int = 103
) -> list[CheckResult]:
    """P(t) = delta * S(t) on a fine grid, then MC vs the assembled CPF."""
    results = []
    for label, coeffs in _ASSEMBLY_POLYS.items():
        P = Polynomial(tuple(coeffs))
        fam, delta, assembly = polynomial_family(coeffs, d)
        worst = 0.0
        for t in np.linspace(0.0, 1.0, 33):
            lhs = P(float(t))
            rhs = delta * assembly_exact_cpf(assembly, float(t))
            worst = max(worst, abs(lhs - rhs) / max(1.0, abs(lhs)))
        verdict = OK if worst <= 1e-8 else VIOLATED
        results.append(
            CheckResult(f"assembly/{label}", verdict, f"max rel err {worst:.3g}")
        )
        for j, k in enumerate((0, d // 4, d // 2, d)):
            gen = hamming_exact_generator(d, k / d)
            rep = estimate_cpf(fam, gen, gen.argument, n, seed + j)
            results.append(
                _three_sigma(
                    f"assembly-mc/{label}@t={gen.argument:g}",
                    rep.estimate,
                    n,
                    fam.cpf(gen.argument),
                )
            )
    return results


# ---------------------------------------------------------------------------
# sphere suite
# ---------------------------------------------------------------------------


def check_filter_sandwich(
    ts: Sequence[float] = (2.0,),
    alphas: Sequence[float] = (0.0, 0.25),
    n: int = 100_000,
    seed: int = 107,
    d: int = 8,
) -> list[CheckResult]:
    """MC estimate inside [lower - 3se, upper + 3se], plus/minus symmetry."""
    results = []
    for t in ts:
        plus = filter_family(d, FilterParams(t=t, sign="plus"))
        minus = filter_family(d, FilterParams(t=t, sign="minus"))
        for j, alpha in enumerate(alphas):
            gen = sphere_pair_generator(d, alpha)
            rep = estimate_cpf(plus, gen, alpha, n, seed + j)
            lo, hi = filter_cpf_bounds(t, alpha)
            slack_lo = 3.0 * _binomial_se(lo, n)
            slack_hi = 3.0 * _binomial_se(hi, n)
            in_band = (rep.estimate >= lo - slack_lo) and (rep.estimate <= hi + slack_hi)
            results.append(
                CheckResult(
                    f"filter-sandwich/t={t:g},a={alpha:g}",
                    OK if in_band else VIOLATED,
                    f"estimate={rep.estimate:.6g} band=[{lo:.6g},{hi:.6g}]"
                    f" slack=[{slack_lo:.3g},{slack_hi:.3g}]",
                )
            )
            results.append(
                _three_sigma(
                    f"filter-exact/t={t:g},a={alpha:g}",
                    rep.estimate,
                    n,
                    plus.cpf(alpha),
                )
            )
            gen_m = sphere_pair_generator(d, -alpha)
            rep_m = estimate_cpf(minus, gen_m, -alpha, n, seed + 50 + j)
            sym_gap = abs(rep.estimate - rep_m.estimate)
            sym_se = 3.0 * math.hypot(rep.stderr, rep_m.stderr)
            results.append(
                CheckResult(
                    f"filter-symmetry/t={t:g},a={alpha:g}",
                    OK if sym_gap <= sym_se else VIOLATED,
                    f"plus(a)={rep.estimate:.6g} minus(-a)={rep_m.estimate:.6g} 3se={sym_se:.3g}",
                )
            )
    return results


def check_valiant_identities(
    n_pairs: int = 100, seed: int = 109, mc_n: int = 20_000
) -> list[CheckResult]:
    """Embedding inner-product identity, then the composed family's CPF."""
    rng = stream(seed)
    worst_dot = worst_norm = 0.0
    for _ in range(n_pairs):
        d = int(rng.integers(2, 7))
        deg = int(rng.integers(1, 5))
        coeffs = rng.standard_normal(deg + 1)
        coeffs /= np.sum(np.abs(coeffs))
        P = Polynomial(tuple(float(c) for c in coeffs))
        x = rng.standard_normal(d)
        x /= np.linalg.norm(x)
        y = rng.standard_normal(d)
        y /= np.linalg.norm(y)
        ex = valiant_embed(P, x, "data")
        ey = valiant_embed(P, y, "query")
        worst_dot = max(worst_dot, abs(float(ex @ ey) - P(float(x @ y))))
        worst_norm = max(
            worst_norm,
            abs(np.linalg.norm(ex) - 1.0),
            abs(np.linalg.norm(ey) - 1.0),
        )
    results = [
        CheckResult(
            "valiant/identity",
            OK if worst_dot <= 1e-9 else VIOLATED,
            f"max |<ex,ey> - P(<x,y>)| = {worst_dot:.3g}",
        ),
        CheckResult(
            "valiant/norms",
            OK if worst_norm <= 1e-9 else VIOLATED,
            f"max norm error {worst_norm:.3g}",
        ),
    ]
    P = Polynomial((0.3, -0.2, 0.5))
    d = 4
    base = simhash_family(1 + d + d * d)
    fam = polynomial_sphere_family(P, base, d)
    for j, alpha in enumerate((-0.8, -0.4, 0.0, 0.4, 0.8)):
        gen = sphere_pair_generator(d, alpha)
        rep = estimate_cpf(fam, gen, alpha, mc_n, seed + 200 + j)
        results.append(
            _three_sigma(
                f"valiant-mc/a={alpha:g}", rep.estimate, mc_n, fam.cpf(alpha)
            )
        )
    return results


def check_crosspolytope(
    d: int = 8,
    alphas: Sequence[float] = (0.0, 0.3, 0.6, 0.9),
    n: int = 50_000,
    seed: int = 111,
) -> list[CheckResult]:
    """f(0) = 1/(2d) exactly; empirical CPF increasing in alpha."""
    plus = crosspolytope_family(d, "plus")
    minus = crosspolytope_family(d, "minus")
    reps = []
    for j, alpha in enumerate(alphas):
        gen = sphere_pair_generator(d, alpha)
        reps.append(estimate_cpf(plus, gen, alpha, n, seed + j))
    results = [
        _three_sigma("crosspoly/f(0)", reps[0].estimate, n, 1.0 / (2 * d))
    ]
    gen0 = sphere_pair_generator(d, 0.0)
    rep_m = estimate_cpf(minus, gen0, 0.0, n, seed + 40)
    results.append(
        _three_sigma("crosspoly-minus/f(0)", rep_m.estimate, n, 1.0 / (2 * d))
    )
    for lo, hi in zip(reps, reps[1:]):
        sep = hi.estimate + 3 * hi.stderr >= lo.estimate - 3 * lo.stderr
        results.append(
            CheckResult(
                f"crosspoly/monotone@a={hi.argument:g}",
                OK if sep else VIOLATED,
                f"f({lo.argument:g})={lo.estimate:.5g} <= f({hi.argument:g})={hi.estimate:.5g}",
            )
        )
    return results


# ---------------------------------------------------------------------------
# euclidean suite
# ---------------------------------------------------------------------------


def _e2dsh_quadrature(params: ShiftedBucketParams, delta: float) -> float:
    """Integrate the bucket-alignment triangle against the Gaussian gap:
    f(delta) = E_Z[max(0, 1 - |delta Z / w - k|)]."""
    w, k = params.w, params.k
    lo = (k - 1) * w / delta
    hi = (k + 1) * w / delta

    def integrand(z: float) -> float:
        s = delta * z / w - k
        return math.exp(-0.5 * z * z) / math.sqrt(2 * math.pi) * (1.0 - abs(s))

    val, _ = integrate.quad(integrand, lo, hi, epsabs=1e-14, epsrel=1e-12, limit=200)
    return val


def check_e2dsh_shape(
    w: float = 1.0, k: int = 3, n_points: int = 64, tol: float = 1e-10
) -> list[CheckResult]:
    """f(0) = 0, a single interior maximum, quadrature cross-check."""
    params = ShiftedBucketParams(w=w, k=k)
    results = []
    at_zero = e2dsh_cpf(params, 0.0)
    results.append(
        CheckResult(
            "e2dsh/zero", OK if at_zero == 0.0 else VIOLATED, f"f(0)={at_zero!r}"
        )
    )
    grid = np.linspace(1e-3, 12.0, 256)
    vals = np.array([e2dsh_cpf(params, float(t)) for t in grid])
    diffs = np.sign(np.diff(vals))
    changes = int(np.count_nonzero(np.diff(diffs[diffs != 0])))
    results.append(
        CheckResult(
            "e2dsh/unimodal",
            OK if changes == 1 else VIOLATED,
            f"{changes} sign change(s) in the finite differences (want 1)",
        )
    )
    worst = 0.0
    for delta in np.linspace(0.05, 12.0, n_points):
        closed = e2dsh_cpf(params, float(delta))
        quad_val = _e2dsh_quadrature(params, float(delta))
        worst = max(worst, abs(closed - quad_val))
    results.append(
        CheckResult(
            "e2dsh/quadrature",
            OK if worst <= tol else VIOLATED,
            f"max |closed - quadrature| = {worst:.3g}",
        )
    )
    return results


def check_rho_ladder(
    ks: Sequence[int] = (4, 8, 16, 32),
    c: float = 2.0,
    r: float = 1.0,
    final_bound: float = 1.35,
) -> list[CheckResult]:
    """rho_minus * c^2 decreases along k and ends below final_bound."""
    values = []
    for k in ks:
        params = choose_w_k(c, k)
        values.append(rho_minus(params, r, c).rho * c * c)
    decreasing = all(a > b for a, b in zip(values, values[1:]))
    results = [
        CheckResult(
            "rho/decreasing",
            OK if decreasing else VIOLATED,
            "values " + ", ".join(f"{v:.4f}" for v in values),
        ),
        CheckResult(
            "rho/final",
            OK if values[-1] <= final_bound else VIOLATED,
            f"rho*c^2 = {values[-1]:.4f} at k={ks[-1]} (bound {final_bound})",
        ),
    ]
    return results


def check_e2dsh_mc(
    d: int = 8, n: int = 20_000, seed: int = 113
) -> list[CheckResult]:
    results = []
    for w, k, deltas in ((1.0, 0, (0.25, 0.5, 1.0, 2.0, 4.0)), (1.0, 3, (1.0, 2.0, 3.0, 4.0, 8.0))):
        fam = e2dsh_family(d, ShiftedBucketParams(w=w, k=k))
        for j, delta in enumerate(deltas):
            gen = euclid_pair_generator(d, delta)
            rep = estimate_cpf(fam, gen, delta, n, seed + j)
            results.append(
                _three_sigma(
                    f"e2dsh-mc/k={k}@delta={delta:g}",
                    rep.estimate,
                    n,
                    fam.cpf(delta),
                )
            )
    return results


# ---------------------------------------------------------------------------
# bounds suite
# ---------------------------------------------------------------------------


def check_tail_sandwiches(
    ts: Sequence[float] = (1.0, 2.0),
    alphas: Sequence[float] = (-0.5, 0.0, 0.5),
    n: int = 1_000_000,
    seed: int = 115,
) -> list[CheckResult]:
    """MC orthant masses inside the analytic sandwiches and 3se of exact."""
    rng = stream(seed)
    results = []
    for t in ts:
        z = rng.standard_normal(n)
        est = float(np.mean(z >= t))
        se = math.sqrt(max(est * (1 - est), 1e-12) / n)
        lo, hi = normal_tail_bounds(t)
        in_band = lo - 3 * se <= est <= hi + 3 * se
        results.append(
            CheckResult(
                f"tail/t={t:g}",
                OK if in_band else VIOLATED,
                f"estimate={est:.6g} band=[{lo:.6g},{hi:.6g}] 3se={3*se:.3g}",
            )
        )
        exact = phi_bar(t)
        results.append(
            CheckResult(
                f"tail-exact-in-band/t={t:g}",
                OK if lo <= exact <= hi else VIOLATED,
                f"exact={exact:.6g} in [{lo:.6g},{hi:.6g}]",
            )
        )
        for alpha in alphas:
            u = rng.standard_normal(n)
            v = alpha * u + math.sqrt(1 - alpha * alpha) * rng.standard_normal(n)
            est2 = float(np.mean((u >= t) & (v >= t)))
            se2 = math.sqrt(max(est2 * (1 - est2), 1e-12) / n)
            lo2, hi2 = bivariate_tail_bounds(t, alpha)
            exact2 = bivariate_tail_exact(t, alpha)
            in_band2 = lo2 - 3 * se2 <= est2 <= hi2 + 3 * se2
            results.append(
                CheckResult(
                    f"orthant/t={t:g},a={alpha:g}",
                    OK if in_band2 else VIOLATED,
                    f"estimate={est2:.6g} band=[{lo2:.6g},{hi2:.6g}] 3se={3*se2:.3g}",
                )
            )
            results.append(
                _three_sigma(
                    f"orthant-exact/t={t:g},a={alpha:g}", est2, n, exact2
                )
            )
    return results


# ---------------------------------------------------------------------------
# ssse suite
# ---------------------------------------------------------------------------


def check_ssse_families(
    d: int = 64,
    alphas: Sequence[float] = (0.25, 0.5, 0.75),
    n: int = 100_000,
    seed: int = 117,
) -> list[CheckResult]:
    """Reverse and forward similarity-exponent inequalities for every
    builtin family; anything "violated" fails the suite."""
    results = []
    for name, fam in builtin_hamming_families(d).items():
        for j, alpha in enumerate(alphas):
            rev = check_reverse_ssse(fam, alpha, n, seed + j)
            results.append(
                CheckResult(
                    f"ssse-reverse/{name}@a={alpha:g}", rev.verdict,
                    f"baseline={rev.baseline.estimate:.5g} at_alpha={rev.at_alpha.estimate:.5g} exp={rev.bound_exponent:.4g}",
                )
            )
            fwd = check_forward_ssse(fam, alpha, n, seed + 30 + j)
            results.append(
                CheckResult(
                    f"ssse-forward/{name}@a={alpha:g}", fwd.verdict,
                    f"baseline={fwd.baseline.estimate:.5g} at_alpha={fwd.at_alpha.estimate:.5g} exp={fwd.bound_exponent:.4g}",
                )
            )
    return results


# ---------------------------------------------------------------------------
# jensen suite
# ---------------------------------------------------------------------------


def check_jensen_random(
    instances: int = 1000, seed: int = 119, slack: float = 1e-12
) -> list[CheckResult]:
    rng = stream(seed)
    failures = 0
    first = ""
    for i in range(instances):
        k = int(rng.integers(2, 7))
        p = rng.dirichlet(np.ones(k))
        q = rng.dirichlet(np.ones(k))
        # c >= 1/2 is where the two-sided statement is guaranteed; see
        # check_jensen_chain's docstring for the boundary.
        c = float(rng.uniform(0.5, 5.0))
        try:
            ok = check_jensen_chain(list(p), list(q), c, slack=slack)
        except ValueError:
            ok = False
        if not ok:
            failures += 1
            if not first:
                first = f"first failure at instance {i}: c={c:.4g}"
    verdict = OK if failures == 0 else VIOLATED
    detail = f"{instances - failures}/{instances} instances hold (c in [0.5, 5])"
    if first:
        detail += "; " + first
    return [CheckResult("jensen/random-instances", verdict, detail)]


# ---------------------------------------------------------------------------
# suites and curve sampling
# ---------------------------------------------------------------------------

SUITES: dict[str, tuple] = {
    "hamming": (check_hamming_closed_forms, check_polynomial_assemblies),
    "sphere": (check_filter_sandwich, check_valiant_identities, check_crosspolytope),
    "euclidean": (check_e2dsh_shape, check_rho_ladder, check_e2dsh_mc),
    "bounds": (check_tail_sandwiches,),
    "ssse": (check_ssse_families,),
    "jensen": (check_jensen_random,),
}


def run_suite(suite: str, seed: Optional[int] = None) -> list[CheckResult]:
    """Run one named suite; optional seed override for the MC checks."""
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}; choose from {sorted(SUITES)}")
    results = []
    for i, fn in enumerate(SUITES[suite]):
        kwargs = {}
        if seed is not None and "seed" in fn.__code__.co_varnames:
            kwargs["seed"] = seed + 1000 * i
        results.extend(fn(**kwargs))
    return results


def cpf_curve_rows(
    family: DshFamily, grid: Sequence[float], n: int = 0, seed: int = 0
) -> list[CsvRow]:
    """Sample a CPF curve; MC columns are filled when n > 0."""
    rows = []
    for j, arg in enumerate(grid):
        est = stderr = None
        n_col = None
        arg_out = float(arg)
        if n > 0:
            gen = generator_for(family.domain_tag, family.dimension, arg_out)
            rep = estimate_cpf(family, gen, gen.argument, n, seed + j)
            est, stderr, n_col = rep.estimate, rep.stderr, n
            arg_out = gen.argument
        closed = None
        if family.cpf is not None and family.cpf.eval is not None:
            closed = family.cpf(arg_out)
        lo = hi = None
        if isinstance(family, FilterFamily) and -1.0 < arg_out < 1.0:
            a = arg_out if family.params.sign == "plus" else -arg_out
            lo, hi = filter_cpf_bounds(family.params.t, a)
        rows.append(
            CsvRow(
                family=family.name,
                argument=arg_out,
                estimate=est,
                stderr=stderr,
                n=n_col,
                closed_form=closed,
                lower_bound=lo,
                upper_bound=hi,
            )
        )
    return rows
