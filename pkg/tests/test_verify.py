from __future__ import annotations

import json
from fractions import Fraction

import pytest

from modschwarz import forms
from modschwarz.qseries import QExp
from modschwarz.verify import (
    IdentityRecord,
    catalog,
    get_record,
    run_catalog,
    run_identity,
)


def test_catalog_shape():
    recs = catalog()
    assert len(recs) >= 16
    ids = [r.id for r in recs]
    assert len(set(ids)) == len(ids)
    assert all(r.anchor.strip() for r in recs)
    assert get_record("tetra-table").subchecks == 5


def test_unknown_record():
    with pytest.raises(KeyError):
        get_record("no-such-identity")


@pytest.mark.parametrize("rid", ["e4-theta", "lambda-schwarz", "theta-jacobi"])
def test_simple_records_pass_at_fifty(rid):
    v = run_identity(get_record(rid), 50)
    assert v.status == "pass" and v.order == 50 and v.first_mismatch is None


def test_resource_guard():
    v = run_identity(get_record("e4-theta"), 10**6)
    assert v.status == "skipped" and "insufficient precision budget" in v.reason


def test_tetra_table_expands_to_five_rows():
    v = run_identity(get_record("tetra-table"))
    assert v.passed
    rows = {c.label.split(" ")[0] for c in v.checks}
    assert len(rows) == 5
    assert any("swapped" in c.note or "as listed" in c.note for c in v.checks)


def test_convention_warnings_are_structured():
    w = run_identity(get_record("omega2-lambda")).warnings
    assert w and any("16 lambda^2/(1 - lambda)" in x for x in w)
    assert run_identity(get_record("theta-eta-quotients")).warnings
    assert run_identity(get_record("schwarz-power-rule")).warnings


def test_failing_record_reports_first_mismatch():
    bad = IdentityRecord(
        "bad",
        "E4 = E6 (deliberately false)",
        "equal",
        lhs=lambda p, n, be: forms.form("E4", n, be),
        rhs=lambda p, n, be: forms.form("E6", n, be),
    )
    v = run_identity(bad, 10)
    assert v.status == "fail"
    assert v.first_mismatch["exponent"] == "1/1"
    assert v.first_mismatch["lhs"] == "240/1"


def test_recipe_error_becomes_skipped():
    def boom(p, n, be):
        raise ZeroDivisionError("recipe blew up")

    rec = IdentityRecord("boom", "always raises", "equal", lhs=boom, rhs=boom)
    v = run_identity(rec, 10)
    assert v.status == "skipped" and "recipe blew up" in v.reason


def test_fit_record_checks_squares():
    rec = IdentityRecord(
        "fit-demo",
        "{lambda, tau}/2pi^2 = E4/4",
        "fit",
        lhs=lambda p, n, be: __import__("modschwarz.schwarz", fromlist=["x"]).schwarzian_norm(
            forms.form("lambda", n + 4, be)
        ),
        expected=lambda p: (Fraction(1, 4), Fraction(1, 4)),
    )
    assert run_identity(rec, 20).passed
    wrong = IdentityRecord(
        "fit-wrong",
        "wrong expected coefficients",
        "fit",
        lhs=rec.lhs,
        expected=lambda p: (Fraction(1, 9), Fraction(1, 4)),
    )
    assert not run_identity(wrong, 20).passed


def test_bad_record_kind():
    with pytest.raises(ValueError):
        IdentityRecord("x", "anchor", "nonsense")
    with pytest.raises(ValueError):
        IdentityRecord("x", "", "equal")


def test_run_catalog_sorted_and_json():
    ids = ["theta-jacobi", "e4-theta", "hyperelliptic"]
    out = run_catalog(ids, order=30, jobs=2)
    assert [v.id for v in out] == sorted(ids)
    for v in out:
        data = json.loads(json.dumps(v.to_json()))
        assert set(data) >= {"id", "status", "order", "first_mismatch", "warnings"}
        assert data["status"] == "pass"


def test_summary_text():
    v = run_identity(get_record("omega2-lambda"), 20)
    text = v.summary()
    assert text.startswith("PASS") and "warning:" in text


def test_zero_series_record():
    rec = IdentityRecord("z", "0 = 0", "equal", lhs=lambda p, n, be: QExp.zero(n), rhs=lambda p, n, be: QExp.zero(n))
    assert run_identity(rec, 5).passed


def test_full_catalog_at_fifty():
    out = run_catalog(order=50, jobs=2)
    assert len(out) == len(catalog())
    assert all(v.status == "pass" for v in out), [v.id for v in out if not v.passed]


def test_complex_record_raises_precision_past_default():
    v = run_identity(get_record("octahedral"), 36)
    assert v.passed
    assert any("working precision raised" in w for w in v.warnings)
    assert not run_identity(get_record("octahedral")).warnings
