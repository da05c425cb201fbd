"""Light-weight runs of the verification checks (full sizes live in the
acceptance suite)."""

import pytest

from dshlab.familyspec import parse_family
from dshlab.verify import (
    SUITES,
    check_e2dsh_shape,
    check_hamming_closed_forms,
    check_rho_ladder,
    cpf_curve_rows,
    run_suite,
)


def test_suite_registry():
    assert set(SUITES) == {
        "hamming",
        "sphere",
        "euclidean",
        "bounds",
        "ssse",
        "jensen",
    }
    with pytest.raises(ValueError):
        run_suite("nosuchsuite")


def test_jensen_suite_passes():
    results = run_suite("jensen")
    assert all(r.ok for r in results)
    assert results[0].verdict == "ok"


def test_hamming_closed_forms_small():
    results = check_hamming_closed_forms(d=8, n=4000, seed=3)
    assert results
    assert all(r.verdict == "ok" for r in results)


def test_shape_checks_need_no_sampling():
    assert all(r.verdict == "ok" for r in check_e2dsh_shape())
    assert all(r.verdict == "ok" for r in check_rho_ladder())


def test_curve_rows_closed_form_only():
    fam = parse_family("bit", default_dim=8)
    rows = cpf_curve_rows(fam, [0.0, 0.25, 1.0], n=0)
    assert [r.argument for r in rows] == [0.0, 0.25, 1.0]
    assert all(r.estimate is None and r.n is None for r in rows)
    assert [r.closed_form for r in rows] == [1.0, 0.75, 0.0]


def test_curve_rows_with_sampling():
    fam = parse_family("bit", default_dim=8)
    rows = cpf_curve_rows(fam, [0.25], n=2000, seed=11)
    row = rows[0]
    assert row.n == 2000
    assert row.argument == 0.25
    assert row.closed_form == pytest.approx(0.75)
    assert abs(row.estimate - 0.75) <= 5 * row.stderr


def test_curve_rows_fill_filter_bounds():
    plus = parse_family("filter(t=2)", default_dim=8)
    minus = parse_family("filter(t=2, sign=minus)", default_dim=8)
    prow = cpf_curve_rows(plus, [0.25], n=0)[0]
    mrow = cpf_curve_rows(minus, [-0.25], n=0)[0]
    assert prow.lower_bound is not None and prow.upper_bound is not None
    assert prow.lower_bound < prow.closed_form < prow.upper_bound
    # the minus family at -alpha mirrors the plus family at +alpha
    assert mrow.lower_bound == prow.lower_bound
    assert mrow.upper_bound == prow.upper_bound
    assert mrow.closed_form == pytest.approx(prow.closed_form)


def test_run_suite_seed_override_is_deterministic():
    a = run_suite("jensen", seed=42)
    b = run_suite("jensen", seed=42)
    assert [(r.name, r.verdict, r.detail) for r in a] == [
        (r.name, r.verdict, r.detail) for r in b
    ]
