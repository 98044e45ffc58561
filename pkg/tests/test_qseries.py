from __future__ import annotations

import json
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import series
from modschwarz.qseries import (
    RATIONAL,
    Backend,
    BackendMismatch,
    DomainError,
    LogQExp,
    NotAPerfectPower,
    PrecisionError,
    QExp,
    eq_to_order,
    exact_root,
    exp0,
    log1,
    nth_root,
    pow_int,
    power,
    substitute_power,
    theta_derivative,
)

F = Fraction
q = QExp.monomial(1, 20)


def support_gcd_ok(h: QExp) -> bool:
    if h.is_zero:
        return True
    g = h.branch_den
    for e, _ in h.items():
        g = math.gcd(g, (e * h.branch_den).numerator)
    return g == 1


def test_from_coeffs_and_accessors():
    h = QExp.from_coeffs([0, 1, 2], prec=5)
    assert h.valuation == 1
    assert h.prec == 5
    assert h.coeff(2) == 2
    assert h.coeff(4) == 0
    with pytest.raises(PrecisionError):
        h.coeff(5)


def test_branch_denominator_reduced():
    h = QExp.from_terms({F(1, 2): 1, F(3, 2): 4}, F(7, 2))
    assert h.branch_den == 2
    sq = h * h
    assert sq.branch_den == 1
    assert sq == QExp.from_coeffs([0, 1, 8, 16], prec=4)


def test_zero_series():
    z = QExp.zero(5)
    assert z.is_zero and z.prec == 5
    assert (q - q).is_zero


def test_format_matches_expected_text():
    h = QExp.from_coeffs([1, 240, 2160, 6720])
    assert str(h) == "1 + 240 q + 2160 q^2 + 6720 q^3 + O(q^4)"
    g = QExp.from_terms({F(-1, 3): 1, F(2, 3): -2}, F(5, 3))
    assert str(g) == "q^(-1/3) - 2 q^(2/3) + O(q^(5/3))"


def test_inverse_multiplies_back():
    f = 1 - q - q**2 + q**5
    assert eq_to_order(f * f.inverse(), QExp.constant(1, 20), 20)
    g = (q + 3 * q**2).shift(F(1, 3))
    assert eq_to_order((g * g.inverse()), QExp.constant(1, 19), 19)


def test_division_by_vanishing_series():
    with pytest.raises(DomainError):
        q / QExp.zero(10)


def test_geometric_series():
    inv = (1 - q).inverse()
    assert all(inv.coeff(k) == 1 for k in range(20))


def test_pow_int_matches_repeated_product():
    f = 1 + 2 * q - q**3
    assert pow_int(f, 5) == f * f * f * f * f
    assert pow_int(f, -2) == (f * f).inverse()


def test_rational_power_root_and_square_back():
    f = 1 - 16 * q + 7 * q**2
    r = power(f, F(1, 2))
    assert eq_to_order(r * r, f, 20)
    c = nth_root(f.shift(3), 3)
    assert c.valuation == 1
    assert eq_to_order(c * c * c, f.shift(3), 20)


def test_power_needs_perfect_leading_coefficient():
    with pytest.raises(NotAPerfectPower):
        power(2 + q, F(1, 2))
    r = power(2 + q, F(1, 2), normalize_leading=True)
    assert r.coeff(0) == 1
    assert eq_to_order(r * r, (2 + q).scale(F(1, 2)), 20)


def test_power_of_fractional_leading_exponent():
    h = power(q.scale(4), F(1, 2))
    assert h.valuation == F(1, 2) and h.coeff(F(1, 2)) == 2


def test_exact_root():
    assert exact_root(F(4096), 3) == 16
    assert exact_root(F(9, 4), 2) == F(3, 2)
    assert exact_root(F(-8), 3) == -2
    assert exact_root(F(2), 2) is None
    assert exact_root(F(-4), 2) is None


def test_log_exp_inverse():
    f = 1 + q - 3 * q**2 + q**4
    assert eq_to_order(exp0(log1(f)), f, 20)
    # log(1 - q) = -sum q^n / n
    L = log1(1 - q)
    assert [L.coeff(n) for n in range(1, 6)] == [F(-1, n) for n in range(1, 6)]


def test_log_exp_domain():
    with pytest.raises(DomainError):
        log1(2 + q)
    with pytest.raises(DomainError):
        exp0(1 + q)


def test_theta_derivative():
    h = QExp.from_terms({F(-1, 3): 1, F(2, 3): 5}, 3)
    d = theta_derivative(h)
    assert d.coeff(F(-1, 3)) == F(-1, 3)
    assert d.coeff(F(2, 3)) == F(10, 3)


def test_log_extended_series():
    L = LogQExp(1, q)
    assert theta_derivative(L) == 1 + q
    assert str(L).startswith("log q")
    assert (L + L).log_coeff == 2


def test_substitute_power():
    f = 1 + q + 2 * q**2
    g = substitute_power(f, 3)
    assert g.coeff(3) == 1 and g.coeff(6) == 2 and g.coeff(1) == 0
    assert g.prec == 60
    with pytest.raises(ValueError):
        substitute_power(f, 0)


def test_eq_to_order_reports_first_mismatch():
    a = 1 + q + q**3
    b = 1 + q + 2 * q**3
    cmp = eq_to_order(a, b, 10)
    assert not cmp.equal
    assert cmp.exponent == 3 and cmp.lhs == 1 and cmp.rhs == 2
    assert eq_to_order(a, b, 3)
    with pytest.raises(PrecisionError):
        eq_to_order(a, b, 50)


def test_complex_backend_and_tolerance():
    be = Backend.complex(128)
    a = (1 + q).to_backend(be)
    b = a + QExp.monomial(2, 20, be.ctx.mpf(2) ** -60, be)
    with pytest.raises(ValueError):
        eq_to_order(a, b, 10)
    assert not eq_to_order(a, b, 10, tol=be.tolerance)
    assert eq_to_order(a, b, 10, tol=be.ctx.mpf(2) ** -50)
    # round-off far below the working precision is chopped
    c = a + QExp.monomial(2, 20, be.ctx.mpf(2) ** -110, be)
    assert c == a


def test_backend_mismatch():
    be = Backend.complex(128)
    with pytest.raises(BackendMismatch):
        q + q.to_backend(be)
    with pytest.raises(BackendMismatch):
        q.to_backend(be).to_backend(RATIONAL)


def test_backend_names():
    assert Backend.complex(256).name == "complex256"
    assert Backend.parse("complex128") == Backend.complex(128)
    assert Backend.parse("rational") is RATIONAL


def test_json_round_trip_rational():
    h = QExp.from_terms({F(1, 3): F(-2, 7), F(4, 3): 5}, F(10, 3))
    data = json.loads(json.dumps(h.to_json()))
    assert data["branch_den"] == 3 and data["backend"] == "rational"
    assert data["coeffs"][0] == "-2/7"
    assert all("/" in c for c in data["coeffs"])
    assert QExp.from_json(data) == h


def test_json_round_trip_complex():
    be = Backend.complex(128)
    h = (1 + q.scale(F(1, 3))).to_backend(be)
    back = QExp.from_json(json.loads(json.dumps(h.to_json())))
    assert back.backend == be
    assert eq_to_order(back, h, 20, tol=be.ctx.mpf(2) ** -120)


# -- properties -----------------------------------------------------------------

prop = settings(max_examples=30, deadline=None)


@prop
@given(series(), series(), series())
def test_ring_axioms(f, g, h):
    assert f + g == g + f
    assert f * g == g * f
    assert (f + g) + h == f + (g + h)
    assert (f * g) * h == f * (g * h)
    lhs = f * (g + h)
    rhs = f * g + f * h
    M = min(lhs.prec, rhs.prec)
    assert eq_to_order(lhs, rhs, M)
    assert (f - f).is_zero


@prop
@given(series(), series())
def test_derivation_rule(f, g):
    lhs = theta_derivative(f * g)
    rhs = theta_derivative(f) * g + f * theta_derivative(g)
    M = min(lhs.prec, rhs.prec)
    assert eq_to_order(lhs, rhs, M)


@prop
@given(series(), series())
def test_branch_denominator_minimal(f, g):
    for h in (f, g, f + g, f * g, theta_derivative(f)):
        assert support_gcd_ok(h)


@prop
@given(series(), st.integers(1, 4), st.integers(1, 4))
def test_substitute_power_composes(f, j, k):
    assert substitute_power(substitute_power(f, j), k) == substitute_power(f, j * k)


@prop
@given(series(min_terms=6), st.integers(2, 5))
def test_root_power_round_trip(f, n):
    if f.is_zero:
        return
    r = power(f, F(1, n), normalize_leading=True)
    back = pow_int(r, n)
    target = f.scale(1 / f.leading_coefficient)
    assert eq_to_order(back, target, min(back.prec, target.prec))
