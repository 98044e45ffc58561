"""Frobenius solutions at the cusp at infinity.

For a normalized weight-4 form S (so that F = 2 pi^2 S) the equation
y'' + (F/2) y = 0 becomes D^2 y = (S/4) y with D = q d/dq.  With
S = r^2 + S_1 q + ... the dominant solution is y1 = q^(r/2) sum a_n q^n,
where n (n + r) a_n = sum_{j=1..n} (S_j / 4) a_{n-j} and a_0 = 1.

A Schwarzian solution h is recovered from D h = y1^-2 (the Wronskian
normalized to one), integrated termwise; the q^0 term integrates to log q.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from gmpy2 import mpq

from modschwarz.qseries import (
    DomainError,
    LogQExp,
    PrecisionError,
    QExp,
    as_fraction,
    exact_root,
)
from modschwarz.schwarz import weight4_combination


class IndicialError(DomainError):
    pass


def indicial(S: QExp) -> Fraction:
    """Positive root r of the indicial equation: the constant term of S is r^2."""
    if not S.backend.is_rational:
        raise NotImplementedError("indicial exponents are computed in the rational backend")
    if not S.is_zero and S.valuation < 0:
        raise IndicialError("S has a pole at the cusp: not a holomorphic form")
    c = S.coeff(0)
    if c == 0:
        raise IndicialError("F vanishes at the cusp: no admissible indicial exponent")
    if c < 0:
        raise IndicialError("constant term is negative: the indicial exponent is not real")
    r = exact_root(c, 2)
    if r is None:
        raise IndicialError(
            f"constant term {as_fraction(c)} is not a rational square; use the complex backend"
        )
    return as_fraction(r)


@dataclass(frozen=True)
class FrobeniusTarget:
    S: QExp
    r: Fraction

    def __post_init__(self) -> None:
        if self.S.backend.is_rational is False:
            raise NotImplementedError("Frobenius solving uses the rational backend")
        if self.S.branch_den != 1 and not self.S.is_zero:
            raise DomainError("S must have integer exponents")
        if self.S.coeff(0) != mpq(self.r) ** 2:
            raise DomainError("constant term of S must equal r^2")

    @classmethod
    def from_series(cls, S: QExp) -> FrobeniusTarget:
        return cls(S, indicial(S))


@dataclass(frozen=True)
class FrobeniusSolution:
    y1: QExp
    h: LogQExp
    logarithmic: bool
    r: Fraction


def _coeffs(S: QExp, n: int) -> list:
    return [S.coeff(k) for k in range(n)]


def solve_y1(target: FrobeniusTarget, order: int) -> QExp:
    """y1 = q^(r/2) (1 + a_1 q + ...), exact below q^(r/2 + order)."""
    if order < 1:
        raise ValueError("order must be at least 1")
    S = target.S
    if S.prec < order:
        raise PrecisionError(f"S known only below q^{S.prec}; need q^{order}")
    r = mpq(target.r)
    s4 = [c / 4 for c in _coeffs(S, order)]
    nz = [(j, c) for j, c in enumerate(s4) if j > 0 and c != 0]
    alpha = [mpq(0)] * order
    alpha[0] = mpq(1)
    for n in range(1, order):
        acc = mpq(0)
        for j, c in nz:
            if j > n:
                break
            acc += c * alpha[n - j]
        alpha[n] = acc / (n * (n + r))
    y = QExp.from_coeffs(alpha)
    return y.shift(target.r / 2)


def solve_h(target: FrobeniusTarget, order: int) -> FrobeniusSolution:
    """Schwarzian solution h with D h = y1^-2, so {h, tau} = 2 pi^2 S."""
    y1 = solve_y1(target, order)
    dh = (y1 * y1).inverse()
    r = target.r
    log_coeff = mpq(0)
    terms = []
    N = dh.branch_den
    for i, w in enumerate(dh.coeffs):
        k = dh.lead_exp + i
        if w == 0:
            terms.append(w)
        elif k == 0:
            log_coeff = w
            terms.append(mpq(0))
        else:
            terms.append(w * mpq(N, k))
    body = QExp._build(dh.backend, N, dh.lead_exp, terms, dh.lead_exp + dh.order)
    h = LogQExp(log_coeff, body)
    logarithmic = r.denominator == 1 and log_coeff != 0
    return FrobeniusSolution(y1, h, logarithmic, r)


def target_from_weights(a_norm: Fraction | int, b_norm: Fraction | int, order: int) -> FrobeniusTarget:
    """S = a_norm * theta2^8 + b_norm * (theta3 theta4)^4 with its indicial exponent."""
    S = weight4_combination(Fraction(a_norm), Fraction(b_norm), order)
    return FrobeniusTarget.from_series(S)
