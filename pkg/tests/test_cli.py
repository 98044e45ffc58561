from __future__ import annotations

import json

import pytest

from modschwarz import forms
from modschwarz.cli import main
from modschwarz.qseries import QExp


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_expand_text(capsys):
    code, out, _ = run(capsys, "expand", "E4", "--order", "4")
    assert code == 0
    assert out.strip() == "1 + 240 q + 2160 q^2 + 6720 q^3 + O(q^4)"


def test_expand_json_round_trips(capsys):
    code, out, _ = run(capsys, "expand", "lambda", "--order", "10", "--json")
    assert code == 0
    assert QExp.from_json(json.loads(out)) == forms.form("lambda", 10)


def test_expand_power(capsys):
    code, out, _ = run(capsys, "expand", "one_minus_lambda", "--power", "1/2", "--order", "2")
    assert code == 0 and out.startswith("1 - 8 q^(1/2) + 32 q")


def test_output_is_deterministic(capsys):
    first = run(capsys, "classify", "--a", "1/9", "--b", "1/36", "--json")
    second = run(capsys, "classify", "--a", "1/9", "--b", "1/36", "--json")
    assert first == second


def test_schwarzian_lambda(capsys):
    code, out, _ = run(capsys, "schwarzian", "lambda", "--order", "3")
    assert code == 0 and out.strip() == "1/4 + 60 q + 540 q^2 + O(q^3)"


def test_fit_rational_function(capsys):
    code, out, _ = run(capsys, "fit", "--num", "0,1", "--den=-2,1,0,1", "--order", "30", "--json")
    data = json.loads(out)
    assert code == 0
    assert data["coeff_theta2_8"] == "1/36" and data["coeff_phi4"] == "4/9"
    assert data["residual_ok"] is True


def test_frobenius(capsys):
    code, out, _ = run(capsys, "frobenius", "--a", "1/9", "--b", "1/36", "--order", "20", "--json")
    data = json.loads(out)
    assert code == 0
    assert data["r"] == "1/3" and data["logarithmic"] is False
    assert data["h_lead_exponent"] == "-1/3"


def test_frobenius_rejects_vanishing_cusp(capsys):
    code, out, _ = run(capsys, "frobenius", "--a", "0", "--b", "1/4")
    assert code == 1 and "vanishes at the cusp" in out


def test_classify_a4(capsys):
    code, out, _ = run(capsys, "classify", "--a", "1/9", "--b", "1/36", "--json")
    data = json.loads(out)
    assert code == 0 and data["exists"] and data["group_label"] == "A4"
    assert data["cusp_widths"] == [3, 6]


def test_classify_fraction_sugar(capsys):
    code, out, _ = run(capsys, "classify", "--n1", "1", "--m1", "4", "--n2", "1", "--m2", "6")
    assert code == 0 and "S4" in out


def test_classify_rejection_is_a_decision(capsys):
    code, out, _ = run(capsys, "classify", "--a", "1/49", "--b", "1/36")
    assert code == 0 and "exists: False" in out and "not admissible" in out


def test_table(capsys):
    code, out, _ = run(capsys, "table")
    assert code == 0
    assert "Gamma0(2) ∩ Gamma(3)" in out and "(n-1)/2" in out


def test_cosets(capsys):
    code, out, _ = run(capsys, "cosets", "--relators", "b^2,a^5,(ba)^3", "--json")
    assert code == 0 and json.loads(out)["order"] == 60


def test_cosets_overflow_is_compute_error(capsys):
    code, _, err = run(capsys, "cosets", "--relators", "b^2", "--max", "200")
    assert code == 3 and err


def test_verify_json(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "lambda-schwarz", "--json", "--order", "30")
    assert code == 0
    data = json.loads(out)
    assert data["id"] == "lambda-schwarz" and data["status"] == "pass"


def test_verify_list(capsys):
    code, out, _ = run(capsys, "verify", "--list")
    assert code == 0 and "tetra-table" in out


def test_verify_skip_exit_code(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "e4-theta", "--order", "1000000")
    assert code == 1 and "insufficient precision budget" in out


@pytest.mark.parametrize(
    "argv",
    [
        ["verify", "--suite", "no-such-record"],
        ["expand", "E9"],
        ["expand", "E4", "--order", "0"],
        ["classify", "--a", "x"],
        ["bogus"],
        [],
    ],
)
def test_usage_errors(capsys, argv):
    code, _, _ = run(capsys, *argv)
    assert code == 2
