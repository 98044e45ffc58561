"""Normalized Schwarzian derivative and the weight-4 fit.

With D = q d/dq and g = D^2 h / D h, the Schwarzian in tau satisfies
{h, tau} / (2 pi^2) = g^2 - 2 D(g).  Everything here works in those
normalized units, so rational series stay rational.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Sequence

import mpmath

from modschwarz import forms
from modschwarz.qseries import (
    Comparison,
    DomainError,
    LogQExp,
    RATIONAL,
    PrecisionError,
    QExp,
    as_fraction,
    eq_to_order,
    exact_root,
    theta_derivative,
)


def schwarzian_norm(h: QExp | LogQExp) -> QExp:
    """{h, tau} / (2 pi^2) as a series."""
    dh = theta_derivative(h)
    if dh.is_zero:
        raise DomainError("h locally constant at truncation: D h vanishes to working order")
    g = theta_derivative(dh) / dh
    S = g * g - theta_derivative(g).scale(2)
    if S.order < 1 and not S.is_zero:
        raise PrecisionError("order loss: fewer than one coefficient of the Schwarzian is known")
    if S.is_zero and S.prec <= 0:
        raise PrecisionError("order loss: fewer than one coefficient of the Schwarzian is known")
    return S


def mobius_apply(h: QExp, M: Sequence[Sequence[Any]]) -> QExp:
    """(a h + b) / (c h + d) for M = [[a, b], [c, d]]."""
    (a, b), (c, d) = M
    be = h.backend
    a, b, c, d = (be.coerce(x) for x in (a, b, c, d))
    if a * d - b * c == 0:
        raise DomainError("Moebius matrix is singular")
    num = _affine(h, a, b)
    den = _affine(h, c, d)
    if den.is_zero:
        raise DomainError("Moebius denominator vanishes to working order")
    return num / den


def _affine(h: QExp, a: Any, b: Any) -> QExp:
    if a == 0:
        return QExp.constant(b, h.prec, h.backend)
    out = h.scale(a)
    return out + b if b != 0 else out


@dataclass(frozen=True)
class FitResult:
    """Outcome of fitting S = a_norm * theta2^8 + b_norm * (theta3 theta4)^4.

    ``as_squares`` holds the rational square roots (sqrt(a_norm), sqrt(b_norm))
    when both exist.
    """

    a_norm: Any
    b_norm: Any
    residual_ok: bool
    checked_order: int
    as_squares: tuple[Fraction, Fraction] | None
    comparison: Comparison | None = None

    @property
    def max_residual(self) -> Any:
        return self.comparison.max_residual if self.comparison is not None else 0

    @property
    def first_mismatch(self) -> Comparison | None:
        if self.comparison is None or self.comparison.equal:
            return None
        return self.comparison

    def to_json(self) -> dict:
        squares = None
        if self.as_squares is not None:
            a_root, b_root = self.as_squares
            squares = {"n1_over_m1": _fmt(b_root), "n2_over_m2": _fmt(a_root)}
        return {
            "coeff_theta2_8": _fmt_value(self.a_norm),
            "coeff_phi4": _fmt_value(self.b_norm),
            "squares": squares,
            "residual_ok": self.residual_ok,
            "order": self.checked_order,
        }


def _fmt(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def _fmt_value(x: Any) -> Any:
    try:
        return _fmt(as_fraction(x))
    except (TypeError, ValueError):
        return [mpmath.nstr(x.real, 30), mpmath.nstr(x.imag, 30)]


def rational_sqrt(x: Any) -> Fraction | None:
    r = exact_root(x, 2)
    return None if r is None else as_fraction(r)


def fit_weight4(S: QExp, checked_order: int, tol: Any = None) -> FitResult:
    """Fit S against theta2^8 (coefficient a) and (theta3 theta4)^4 (coefficient b).

    The basis is triangular in (q^0, q^1): theta2^8 = 256 q + ..., and
    (theta3 theta4)^4 = 1 - 16 q + ....  The remaining coefficients up to
    checked_order are verified exactly (or within ``tol`` for a complex
    backend, default 2^-(precision/2)).
    """
    if not S.is_zero and S.valuation < 0:
        raise DomainError("not a holomorphic weight-4 candidate: negative leading exponent")
    if S.prec < checked_order:
        raise PrecisionError(f"series known only below q^{S.prec}, cannot check to q^{checked_order}")
    if S.prec < 2:
        raise PrecisionError("need the q^0 and q^1 coefficients to fit")
    be = S.backend
    if tol is None:
        tol = be.tolerance
    b = S.coeff(0)
    a = (S.coeff(1) + 16 * b) / 256
    theta2_8 = forms.form("theta2_8", checked_order, be)
    phi4 = forms.form("phi4", checked_order, be)
    model = _model(theta2_8, phi4, a, b, checked_order)
    cmp = eq_to_order(S, model, checked_order, tol=None if be.is_rational else tol)
    squares = None
    if be.is_rational:
        ra, rb = rational_sqrt(a), rational_sqrt(b)
        if ra is not None and rb is not None:
            squares = (ra, rb)
    return FitResult(a, b, cmp.equal, checked_order, squares, cmp)


def _model(theta2_8: QExp, phi4: QExp, a: Any, b: Any, order: int) -> QExp:
    out = QExp.zero(order, theta2_8.backend)
    if a != 0:
        out = out + theta2_8.scale(a)
    if b != 0:
        out = out + phi4.scale(b)
    return out


def weight4_combination(a: Any, b: Any, order: int, backend=None) -> QExp:
    """a * theta2^8 + b * (theta3 theta4)^4."""
    be = backend or RATIONAL
    a, b = be.coerce(a), be.coerce(b)
    return _model(forms.form("theta2_8", order, be), forms.form("phi4", order, be), a, b, order)
