"""Identity catalog and the engine that checks it.

Each record is data: a kind, recipes for the two sides (or for a series to
fit), a fixed parameter list and a default order.  ``run_identity``
evaluates a record to a verdict; ``run_catalog`` runs several, optionally
in worker processes, and reports them sorted by id.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Any, Callable, Sequence

from gmpy2 import mpq

from modschwarz import forms, frobenius, groups
from modschwarz.qseries import (
    RATIONAL,
    Backend,
    Comparison,
    DomainError,
    PrecisionError,
    QExp,
    SeriesError,
    eq_to_order,
    power,
    substitute_power,
)
from modschwarz.schwarz import fit_weight4, rational_sqrt, schwarzian_norm, weight4_combination

MAX_ORDER = 1000
OCTA_RESIDUAL = 1e-40
BITS_PER_ORDER = 8

Recipe = Callable[[Any, int, Backend], QExp]


@dataclass(frozen=True)
class Check:
    label: str
    ok: bool
    comparison: Comparison | None = None
    note: str = ""

    def to_json(self) -> dict:
        return {"label": self.label, "status": "pass" if self.ok else "fail", "note": self.note}


@dataclass(frozen=True)
class IdentityRecord:
    """One checkable statement.

    kind ``equal``: lhs(p) = rhs(p) to the order.
    kind ``fit``: lhs(p) is a weight-4 form with coefficients expected(p)
    on (theta2^8, (theta3 theta4)^4), matched exactly along with their
    rational square roots.
    kind ``custom``: custom(p, order, backend) returns a list of checks.
    """

    id: str
    anchor: str
    kind: str
    lhs: Recipe | None = None
    rhs: Recipe | None = None
    expected: Callable[[Any], tuple[Any, Any]] | None = None
    custom: Callable[[Any, int, Backend], list[Check]] | None = None
    params: tuple = (None,)
    backend: Backend = RATIONAL
    default_order: int = 50
    pad: int = 4
    warnings: tuple = ()

    def __post_init__(self) -> None:
        if self.kind not in ("equal", "fit", "custom"):
            raise ValueError(f"unknown record kind {self.kind!r}")
        if not self.anchor:
            raise ValueError("record needs an anchor")

    @property
    def subchecks(self) -> int:
        return len(self.params)


@dataclass(frozen=True)
class Verdict:
    id: str
    status: str
    order: int
    first_mismatch: dict | None = None
    warnings: tuple[str, ...] = ()
    checks: tuple[Check, ...] = ()
    reason: str = ""

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_json(self) -> dict:
        out = {
            "id": self.id,
            "status": self.status,
            "order": self.order,
            "first_mismatch": self.first_mismatch,
            "warnings": list(self.warnings),
            "checks": [c.to_json() for c in self.checks],
        }
        if self.reason:
            out["reason"] = self.reason
        return out

    def summary(self) -> str:
        head = f"{self.status.upper():7s} {self.id} (order {self.order})"
        lines = [head]
        if self.reason:
            lines.append(f"    reason: {self.reason}")
        for c in self.checks:
            if not c.ok or c.note:
                flag = "ok" if c.ok else "FAIL"
                lines.append(f"    [{flag}] {c.label}" + (f": {c.note}" if c.note else ""))
        if self.first_mismatch:
            m = self.first_mismatch
            lines.append(f"    first mismatch at q^{m['exponent']}: lhs {m['lhs']} rhs {m['rhs']}")
        for w in self.warnings:
            lines.append(f"    warning: {w}")
        return "\n".join(lines)


# -- helpers -----------------------------------------------------------------


def _f(name: str) -> Recipe:
    return lambda p, n, be: forms.form(name, n, be)


def _label(p: Any) -> str:
    if p is None:
        return "identity"
    if isinstance(p, Fraction):
        return f"r = {p}"
    return str(p)


def _close(x: Any, y: Any, be: Backend, tol: Any) -> bool:
    if be.is_rational:
        return x == y
    return abs(x - be.coerce(y)) <= tol


def _sq(x: Fraction) -> Fraction:
    return x * x


def _frac(x: Any) -> Fraction:
    return Fraction(int(x.numerator), int(x.denominator))


# -- recipes -----------------------------------------------------------------


def _theta_jacobi_lhs(p, n, be):
    return forms.form("theta3", n, be) ** 4


def _theta_jacobi_rhs(p, n, be):
    return forms.form("theta2", n, be) ** 4 + forms.form("theta4", n, be) ** 4


def _e4_rhs(p, n, be):
    return forms.form("theta2_8", n, be) + forms.form("phi4", n, be)


def _eta_quotient(p, n, be):
    e1, e2, e4 = (forms.form(f"eta_{k}", n + 2, be) for k in (1, 2, 4))
    if p == "theta2":
        return (e4 * e4 / e2).scale(2)
    if p == "theta3":
        return e2**5 / (e1 * e1 * e4 * e4)
    return e1 * e1 / e2


def _theta_at_2tau(p, n, be):
    return substitute_power(forms.form(p, n, be), 2)


def _lambda_schwarz(p, n, be):
    return schwarzian_norm(forms.form("lambda", n + 2, be))


def _e4_quarter(p, n, be):
    return forms.form("E4", n, be).scale(Fraction(1, 4))


def _t_schwarz(p, n, be):
    return schwarzian_norm(forms.form("t_haupt", n + 2, be))


def _one_minus_lambda_pow(p, n, be):
    return schwarzian_norm(power(forms.form("one_minus_lambda", n + 2, be), p))


def _lambda_pow(p, n, be):
    return schwarzian_norm(forms.frac_power("lambda", p, True, order=n + 2, backend=be).series)


def _lambda_pow_rhs(p, n, be):
    return forms.form("theta2theta3_4", n, be).scale(Fraction(1, 4)) + forms.form("theta4_8", n, be).scale(
        _sq(p) / 4
    )


def _lambda2_pow(p, n, be):
    lam2 = substitute_power(forms.form("lambda", n + 2, be), 2)
    return schwarzian_norm(power(lam2, p, normalize_leading=True))


def _omega2_rhs(p, n, be):
    lam = forms.form("lambda", n + 2, be)
    return (lam * lam).scale(16) / (1 - lam)


def _omega2_delta_rhs(p, n, be):
    d = forms.form("Delta", n + 2, be)
    return (substitute_power(d, 2) / d).scale(4096)


def _hyper_lhs(p, n, be):
    y = forms.form("lam_over", n + 2, be)
    return y * y


def _hyper_rhs(p, n, be):
    return 1 + forms.form("omega2", n + 2, be).inverse().scale(64)


def _gamma04(p, n, be):
    root = forms.frac_power("omega2", Fraction(1, 2), order=n + 4, backend=be).series
    return schwarzian_norm(forms.form("lam_over", n + 4, be) * root)


def _power_rule_lhs(p, n, be):
    return schwarzian_norm(QExp.monomial(p, n + 2, backend=be))


def _power_rule_rhs(p, n, be):
    return QExp.constant(_sq(p), n, be)


# -- warnings (structured convention notes) -----------------------------------


def _warn_eta_quotients(order: int, be: Backend) -> list[str]:
    out = []
    for name in ("theta2", "theta3", "theta4"):
        q = _eta_quotient(name, 8, be)
        cmp = eq_to_order(q, forms.form(name, 8, be).truncate(q.prec), min(q.prec, 4), tol=be.tolerance or None)
        if not cmp.equal:
            out.append(
                f"the eta-quotient often quoted for {name}(tau) expands to {name}(2 tau): "
                f"compared with {name}(tau) it differs first at q^{cmp.exponent}"
            )
    return out


def _warn_omega2_sign(order: int, be: Backend) -> list[str]:
    lam = forms.form("lambda", 8, be)
    variant = (lam * lam).scale(16) / (lam - 1)
    cmp = eq_to_order(forms.form("omega2", 6, be), variant, 6, tol=be.tolerance or None)
    if cmp.equal:
        return []
    return [
        "the variant omega2 = 16 lambda^2/(lambda - 1) has the wrong sign; the verified identity is "
        f"16 lambda^2/(1 - lambda): at q^{cmp.exponent} omega2 has {cmp.lhs} but the variant gives {cmp.rhs}"
    ]


def _warn_q_constant(order: int, be: Backend) -> list[str]:
    c = schwarzian_norm(QExp.monomial(1, 4, backend=be)).coeff(0)
    return [
        f"{{q, tau}} = {c} * 2 pi^2 = 2 pi^2, not 4 pi^2; only 2 pi^2 is consistent with "
        "{h, tau} = 2 pi^2 (n1/m1)^2 + ... at the cusp"
    ]


# -- custom checks -----------------------------------------------------------

# rows (n1, n2, d): h = P(t)/Q(t), coefficient lists in ascending powers of t
TETRA_ROWS: tuple[tuple[tuple[int, int, int], tuple[int, ...], tuple[int, ...]], ...] = (
    ((1, 2, 3), (0, 1), (-2, 1, 0, 1)),
    ((1, 4, 7), (0, -14, 0, 0, 14, 0, 0, 1), (-2, 0, 0, 7)),
    ((5, 1, 9), (0, 0, 0, 0, 0, 16, 0, 0, 1), (-256, 0, 0, 384, 0, 0, 240, 0, 0, 5)),
    ((1, 5, 9), (0, -1, 0, 0, 2), (10, 0, 0, -60, 0, 0, 12, 0, 0, 1)),
    ((5, 2, 11), (256, 0, 0, 0, 0, 0, 528, 0, 0, 55), (0, 0, 0, 0, 0, 352, 0, 0, 110, 0, 0, 1)),
)


def _eval_to(P: Sequence[int], Q: Sequence[int], tname: str, order: int, be: Backend, t_series=None) -> QExp:
    """P(t)/Q(t) with enough input precision for its Schwarzian to reach q^order."""
    extra = 4
    while True:
        t = t_series(order + extra) if t_series else forms.form(tname, order + extra, be)
        h = forms.rational_eval(P, Q, t)
        S = schwarzian_norm(h)
        if S.prec >= order:
            return S
        extra *= 2
        if extra > 8 * (order + 16):
            raise PrecisionError("could not reach the requested order")


def _tetra_row(row, order: int, be: Backend) -> list[Check]:
    (n1, n2, d), P, Q = row
    S = _eval_to(P, Q, "t_haupt", order, be)
    fit = fit_weight4(S, order)
    got = (_frac(fit.b_norm), _frac(fit.a_norm))  # (phi4, theta2^8)
    as_listed = got == (_sq(Fraction(n1, 3)), _sq(Fraction(n2, 6)))
    swapped = got == (_sq(Fraction(n2, 3)), _sq(Fraction(n1, 6)))
    orient = "as listed" if as_listed else ("slots swapped" if swapped else "no match")
    ok_fit = fit.residual_ok and (as_listed or swapped)
    deg = max(forms.poly_degree(P), forms.poly_degree(Q))
    # widths (3, 6); the local exponent n/3 sits on the phi4 slot
    k1, k2 = (n1, n2) if as_listed else (n2, n1)
    gA4 = groups.GroupId("A4")
    kd = groups.kernel_descriptor(gA4)
    g = groups.genus(gA4.order, *kd.widths)
    cov = groups.covering_degree(g, gA4.order, *kd.widths, k1, k2)
    label = f"({n1},{n2},{d})"
    return [
        Check(
            f"{label} fit",
            ok_fit,
            fit.comparison,
            f"phi4 {got[0]}, theta2^8 {got[1]} ({orient})",
        ),
        Check(f"{label} degree", deg == d and cov == d and d == 2 * (n1 + n2) - 3, note=f"max deg {deg}, covering degree {cov}"),
    ]


def _tetra(p, order, be) -> list[Check]:
    return _tetra_row(p, order, be)


# (n, n1, n2, d) with h as P(t)/Q(t), t = (1 - lambda)^(1/n)
def _dihedral_rows() -> tuple:
    rows = [
        ((2, 3, 1, 3), (-1, 3, -3, 1), (1, 0, 3)),
        ((3, 3, 1, 4), (-1, 2, 0, -2, 1), (1, 0, 0, 2)),
    ]
    for n in range(2, 6):
        for n2 in range(1, 5):
            if math.gcd(n, n2) == 1:
                rows.append(((n, 1, n2, n2), (0,) * n2 + (1,), (1,)))
    return tuple(rows)


DIHEDRAL_ROWS = _dihedral_rows()


def _dihedral(row, order, be) -> list[Check]:
    (n, n1, n2, d), P, Q = row
    tfun = lambda k: power(forms.form("one_minus_lambda", k, be), Fraction(1, n))  # noqa: E731
    S = _eval_to(P, Q, "", order, be, t_series=tfun)
    fit = fit_weight4(S, order)
    want = (_sq(Fraction(n1, 2)), _sq(Fraction(n2, 2 * n)))  # (phi4, theta2^8), widths (2, 2n)
    got = (_frac(fit.b_norm), _frac(fit.a_norm))
    deg = max(forms.poly_degree(P), forms.poly_degree(Q))
    gid = groups.GroupId("D2n", n, "fricke")
    kd = groups.kernel_descriptor(gid)
    g = groups.genus(gid.order, *kd.widths)
    cov = groups.covering_degree(g, gid.order, *kd.widths, n1, n2)
    closed = Fraction(n, 2) * (n1 - 1) + n2
    label = f"({n},{n1},{n2},{d})"
    return [
        Check(f"{label} fit", fit.residual_ok and got == want, fit.comparison, f"phi4 {got[0]}, theta2^8 {got[1]}"),
        Check(
            f"{label} degree",
            deg == d and cov == d and closed == d,
            note=f"max deg {deg}, covering degree {cov}",
        ),
    ]


def octahedral_pair(order: int, be: Backend) -> tuple[QExp, QExp, QExp]:
    """(x, h_plus, h_minus) with x = (1 - lambda)^(1/3) on the principal branches."""
    ctx = be.ctx
    i = ctx.mpc(0, 1)
    r3 = ctx.sqrt(3)
    x = power(forms.form("one_minus_lambda", order, be), Fraction(1, 3))
    s = power(1 + x + x * x, Fraction(1, 2))
    den = x - 1
    base = (x + 1).scale(r3 * i)
    h_plus = power((base + s.scale(2 * i)) / den, Fraction(1, 2))
    h_minus = power((base - s.scale(2 * i)) / den, Fraction(1, 2))
    return x, h_plus, h_minus


def _x_relation(h: QExp, be: Backend) -> QExp:
    ctx = be.ctx
    c = 2 * ctx.mpc(0, 1) * ctx.sqrt(3)
    h2 = h * h
    h4 = h2 * h2
    return (h4 + h2.scale(c) + 1) / (h4 - h2.scale(c) + 1)


def _octahedral(p, order, be) -> list[Check]:
    if be.is_rational:
        raise DomainError("the octahedral record needs the complex backend")
    tol = be.tolerance
    work = order + 12
    x, hp, hm = octahedral_pair(work, be)
    checks = []
    for name, h in (("h+", hp), ("h-", hm)):
        cmp = eq_to_order(_x_relation(h, be), x, order, tol=tol)
        ok = cmp.equal and cmp.max_residual < OCTA_RESIDUAL
        checks.append(Check(f"x-relation for {name}", ok, cmp, f"max residual {float(cmp.max_residual):.2e}"))
    prod = hp * hm
    cmp = eq_to_order(prod, QExp.constant(1, prod.prec, be), order, tol=tol)
    checks.append(
        Check("h- h+ = 1", cmp.equal and cmp.max_residual < OCTA_RESIDUAL, cmp, f"max residual {float(cmp.max_residual):.2e}")
    )
    fit = fit_weight4(schwarzian_norm(hp), order, tol=tol)
    ea, eb = Fraction(1, 36), Fraction(1, 16)
    dev = max(abs(fit.a_norm - be.coerce(ea)), abs(fit.b_norm - be.coerce(eb)))
    worst = max(fit.max_residual, dev)
    checks.append(
        Check(
            "Schwarzian fit of h+",
            fit.residual_ok and worst < OCTA_RESIDUAL,
            fit.comparison,
            f"theta2^8 ~ 1/36, phi4 ~ 1/16, max residual {float(worst):.2e}",
        )
    )
    return checks


FROBENIUS_PARAMS = (
    (Fraction(1, 3), Fraction(1, 6)),
    (Fraction(1, 4), Fraction(1, 6)),
    (Fraction(1, 3), Fraction(1, 8)),
    (Fraction(1, 5), Fraction(1, 6)),
    (Fraction(1, 3), Fraction(1, 10)),
    (Fraction(2, 5), Fraction(3, 7)),
    (Fraction(1, 2), Fraction(1, 2)),
    (Fraction(1), Fraction(1, 3)),
    (Fraction(2), Fraction(1, 5)),
    (Fraction(3), Fraction(2, 3)),
)


def _frobenius(p, order, be) -> list[Check]:
    if p == "theta2_8-only":
        S = weight4_combination(1, 0, order)
        try:
            frobenius.FrobeniusTarget.from_series(S)
        except frobenius.IndicialError as e:
            return [Check("theta2^8-only target rejected", True, note=str(e))]
        return [Check("theta2^8-only target rejected", False, note="accepted")]
    at_inf, at_zero = p
    target = frobenius.target_from_weights(_sq(at_zero), _sq(at_inf), order + 2)
    sol = frobenius.solve_h(target, order + 2)
    S2 = schwarzian_norm(sol.h)
    cmp = eq_to_order(S2, target.S, order)
    log_expected = target.r.denominator == 1
    label = f"r = {at_inf}, r0 = {at_zero}"
    return [
        Check(f"{label} round trip", cmp.equal, cmp),
        Check(
            f"{label} log flag",
            sol.logarithmic == log_expected,
            note=f"logarithmic = {sol.logarithmic}",
        ),
    ]


# -- catalog -------------------------------------------------------------------


def _build_catalog() -> tuple[IdentityRecord, ...]:
    half = Fraction(1, 2)
    third = Fraction(1, 3)
    return (
        IdentityRecord(
            "theta-jacobi", "theta3^4 = theta2^4 + theta4^4", "equal", _theta_jacobi_lhs, _theta_jacobi_rhs
        ),
        IdentityRecord("e4-theta", "E4 = theta2^8 + (theta3 theta4)^4", "equal", _f("E4"), _e4_rhs),
        IdentityRecord(
            "theta-eta-quotients",
            "2 eta(4t)^2/eta(2t), eta(2t)^5/(eta(t)^2 eta(4t)^2), eta(t)^2/eta(2t) = theta2, theta3, theta4 at 2t",
            "equal",
            _eta_quotient,
            _theta_at_2tau,
            params=("theta2", "theta3", "theta4"),
            warnings=(_warn_eta_quotients,),
        ),
        IdentityRecord(
            "lambda-schwarz", "{lambda, tau} = (pi^2/2) E4", "equal", _lambda_schwarz, _e4_quarter
        ),
        IdentityRecord(
            "t-schwarz",
            "{t, tau} = 2 pi^2 (1/6)^2 theta2^8 + 2 pi^2 (1/3)^2 (theta3 theta4)^4",
            "fit",
            _t_schwarz,
            expected=lambda p: (Fraction(1, 36), Fraction(1, 9)),
        ),
        IdentityRecord(
            "tetra-table",
            "tetrahedral solutions h = P(t)/Q(t) with local data (n1, n2) and degree d = 2(n1 + n2) - 3",
            "custom",
            custom=_tetra,
            params=TETRA_ROWS,
            default_order=30,
        ),
        IdentityRecord(
            "dihedral-pow",
            "{(1 - lambda)^r, tau} = (pi^2/2) (theta3 theta4)^4 + (pi^2/2) r^2 theta2^8",
            "fit",
            _one_minus_lambda_pow,
            expected=lambda r: (_sq(r) / 4, Fraction(1, 4)),
            params=(half, third, Fraction(2, 5), Fraction(3, 4)),
        ),
        IdentityRecord(
            "dihedral-lambda",
            "{lambda^r, tau} = (pi^2/2) (theta2 theta3)^4 + (pi^2/2) r^2 theta4^8",
            "equal",
            _lambda_pow,
            _lambda_pow_rhs,
            params=(half, third),
        ),
        IdentityRecord(
            "dihedral-2tau",
            "{lambda(2 tau)^r, tau} = 2 pi^2 r^2 (theta3 theta4)^4 + (pi^2/8) theta2^8",
            "fit",
            _lambda2_pow,
            expected=lambda r: (Fraction(1, 16), _sq(r)),
            params=(half, third),
        ),
        IdentityRecord(
            "dihedral-table",
            "dihedral solutions h = P(t)/Q(t), t = (1 - lambda)^(1/n), degree d = (n/2)(n1 - 1) + n2",
            "custom",
            custom=_dihedral,
            params=DIHEDRAL_ROWS,
            default_order=30,
        ),
        IdentityRecord(
            "octahedral",
            "x = (1 - lambda)^(1/3) = (h^4 + 2i sqrt3 h^2 + 1)/(h^4 - 2i sqrt3 h^2 + 1), h- h+ = 1, "
            "{h+, tau} = 2 pi^2 (1/6)^2 theta2^8 + 2 pi^2 (1/4)^2 (theta3 theta4)^4",
            "custom",
            custom=_octahedral,
            backend=Backend.complex(256),
            default_order=30,
        ),
        IdentityRecord(
            "omega2-delta", "omega2 = 2^12 Delta(2 tau)/Delta(tau)", "equal", _f("omega2"), _omega2_delta_rhs
        ),
        IdentityRecord(
            "omega2-lambda",
            "omega2 = 16 lambda^2/(1 - lambda)",
            "equal",
            _f("omega2"),
            _omega2_rhs,
            warnings=(_warn_omega2_sign,),
        ),
        IdentityRecord(
            "hyperelliptic", "((lambda - 2)/lambda)^2 = 1 + 64/omega2", "equal", _hyper_lhs, _hyper_rhs
        ),
        IdentityRecord(
            "gamma04-haupt",
            "{((lambda - 2)/lambda) omega2^(1/2), tau} = 2 pi^2 (theta3 theta4)^4 + 2 pi^2 (1/16) theta2^8",
            "fit",
            _gamma04,
            expected=lambda p: (Fraction(1, 16), Fraction(1)),
        ),
        IdentityRecord(
            "schwarz-power-rule",
            "{q^r, tau} = 2 pi^2 r^2",
            "equal",
            _power_rule_lhs,
            _power_rule_rhs,
            params=(Fraction(1, 5), half, Fraction(1), Fraction(3)),
            warnings=(_warn_q_constant,),
        ),
        IdentityRecord(
            "frobenius-roundtrip",
            "{h, tau} = 2 pi^2 S for h built from the Frobenius solution at infinity; "
            "log term exactly for integer exponents; S = theta2^8 alone has no solution",
            "custom",
            custom=_frobenius,
            params=FROBENIUS_PARAMS + ("theta2_8-only",),
            default_order=40,
        ),
    )


CATALOG: tuple[IdentityRecord, ...] = _build_catalog()
_BY_ID = {r.id: r for r in CATALOG}


def catalog() -> list[IdentityRecord]:
    return list(CATALOG)


def get_record(record_id: str) -> IdentityRecord:
    try:
        return _BY_ID[record_id]
    except KeyError:
        raise KeyError(f"unknown record {record_id!r}; known: {', '.join(sorted(_BY_ID))}") from None


# -- engine --------------------------------------------------------------------


def _mismatch(cmp: Comparison | None, be: Backend) -> dict | None:
    if cmp is None or cmp.equal:
        return None
    return cmp.mismatch_json(be)


def _run_param(rec: IdentityRecord, p: Any, order: int, be: Backend) -> list[Check]:
    tol = None if be.is_rational else be.tolerance
    if rec.kind == "custom":
        return rec.custom(p, order, be)
    pad = rec.pad
    for _ in range(5):
        work = order + pad
        try:
            lhs = rec.lhs(p, work, be)
            if rec.kind == "equal":
                rhs = rec.rhs(p, work, be)
                cmp = eq_to_order(lhs, rhs, order, tol=tol)
                return [Check(_label(p), cmp.equal, cmp)]
            fit = fit_weight4(lhs, order, tol=tol)
        except PrecisionError:
            pad *= 2
            continue
        ea, eb = rec.expected(p)
        ok = fit.residual_ok and _close(fit.a_norm, ea, be, tol) and _close(fit.b_norm, eb, be, tol)
        if be.is_rational and ok:
            want = (_root(ea), _root(eb))
            ok = fit.as_squares == want
        note = f"theta2^8 {_show(fit.a_norm)}, phi4 {_show(fit.b_norm)}"
        return [Check(_label(p), ok, fit.comparison, note)]
    raise PrecisionError("could not reach the requested order")


def _root(x: Fraction) -> Fraction | None:
    return rational_sqrt(mpq(x))


def _show(x: Any) -> str:
    try:
        f = _frac(x)
        return str(f)
    except (AttributeError, TypeError):
        return str(x)


def run_identity(rec: IdentityRecord, order: int | None = None) -> Verdict:
    """Evaluate a record at the given order (its default when None)."""
    n = rec.default_order if order is None else order
    if n < 1:
        raise ValueError("order must be at least 1")
    be = rec.backend
    if n > MAX_ORDER:
        return Verdict(rec.id, "skipped", n, reason="insufficient precision budget")
    warnings: list[str] = []
    if not be.is_rational and n > rec.default_order:
        # coefficients grow with the order; keep the absolute residual budget
        be = Backend.complex(be.precision + BITS_PER_ORDER * (n - rec.default_order))
        warnings.append(f"working precision raised to {be.precision} bits for order {n}")
    checks: list[Check] = []
    try:
        for p in rec.params:
            checks.extend(_run_param(rec, p, n, be))
        for w in rec.warnings:
            warnings.extend([w] if isinstance(w, str) else w(n, be))
    except (SeriesError, groups.GroupError, ArithmeticError, ValueError) as e:
        return Verdict(rec.id, "skipped", n, checks=tuple(checks), reason=f"{type(e).__name__}: {e}")
    failed = [c for c in checks if not c.ok]
    first = None
    for c in failed:
        first = _mismatch(c.comparison, be)
        if first:
            break
    status = "fail" if failed else "pass"
    return Verdict(rec.id, status, n, first, tuple(warnings), tuple(checks))


def _run_by_id(args: tuple[str, int | None]) -> Verdict:
    # worker side: drop raw comparisons, whose mpmath values do not pickle
    rid, order = args
    v = run_identity(get_record(rid), order)
    return replace(v, checks=tuple(replace(c, comparison=None) for c in v.checks))


def run_catalog(ids: Sequence[str] | None = None, order: int | None = None, jobs: int = 1) -> list[Verdict]:
    """Run records (all when ids is None); results sorted by id."""
    selected = sorted(ids) if ids else sorted(_BY_ID)
    for rid in selected:
        get_record(rid)
    if jobs <= 1 or len(selected) <= 1:
        results = [run_identity(get_record(r), order) for r in selected]
    else:
        with ProcessPoolExecutor(max_workers=min(jobs, len(selected))) as pool:
            results = list(pool.map(_run_by_id, [(r, order) for r in selected]))
    return sorted(results, key=lambda v: v.id)


def default_jobs() -> int:
    try:
        return max(1, len(os.sched_getaffinity(0)))
    except AttributeError:  # pragma: no cover - non-Linux
        return os.cpu_count() or 1
