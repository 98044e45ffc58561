"""Named classical modular forms as memoized q-expansions.

All forms are computed exactly over the rationals from their product or
divisor-sum definitions and converted on demand to a complex backend.
``form(name, order)`` returns a series known exactly below q^order.
"""

from __future__ import annotations

import threading
from fractions import Fraction
from typing import Any, Callable, NamedTuple, Sequence

from gmpy2 import mpq

from modschwarz.qseries import (
    RATIONAL,
    Backend,
    DomainError,
    QExp,
    exact_root,
    power,
)

FORM_NAMES = (
    "eta_1",
    "eta_2",
    "eta_3",
    "eta_4",
    "eta_6",
    "theta2",
    "theta3",
    "theta4",
    "E4",
    "E6",
    "Delta",
    "lambda",
    "one_minus_lambda",
    "omega2",
    "t_haupt",
    "theta2_8",
    "phi4",
    "theta4_8",
    "theta2theta3_4",
    "lam_over",
)


class UnknownForm(KeyError):
    pass


# -- integer product helpers -------------------------------------------


def _mul_binomial(c: list[int], m: int, sign: int, times: int = 1) -> None:
    """In place: c *= (1 + sign * s^m)^times, truncated to len(c)."""
    L = len(c)
    for _ in range(times):
        if sign > 0:
            for i in range(L - 1, m - 1, -1):
                c[i] += c[i - m]
        else:
            for i in range(L - 1, m - 1, -1):
                c[i] -= c[i - m]


def _product(length: int, factors: Sequence[tuple[int, int, int, int]]) -> list[int]:
    """prod over n >= 1 of (1 + sign s^(a n + b))^e, for each (a, b, sign, e) in factors."""
    c = [0] * length
    c[0] = 1
    for a, b, sign, e in factors:
        n = 1
        while a * n + b < length:
            m = a * n + b
            if m > 0:
                _mul_binomial(c, m, sign, e)
            n += 1
    return c


def _sigma(n: int, k: int) -> int:
    total = 0
    d = 1
    while d * d <= n:
        if n % d == 0:
            total += d**k
            e = n // d
            if e != d:
                total += e**k
        d += 1
    return total


def _ints(c: Sequence[int], start: int, den: int, stop: int) -> QExp:
    return QExp._build(RATIONAL, den, start, [mpq(x) for x in c], stop)


# -- recipes at a given absolute precision P (an integer >= 1) -----------


def _euler(P: int) -> list[int]:
    return _product(P, [(1, 0, -1, 1)])


def _eta(k: int, P: int) -> QExp:
    # q^(k/24) prod (1 - q^(kn)), on the grid t = q^(1/24)
    base = _euler(P)
    vals = [0] * (24 * P)
    for i, x in enumerate(base):
        if k * i < P:
            vals[24 * k * i] = x
    return _ints(vals, k, 24, 24 * P)


def _theta2(P: int) -> QExp:
    # 2 q^(1/8) prod (1 - q^n)(1 + q^n)^2 on t = q^(1/8)
    c = _product(P, [(1, 0, -1, 1), (1, 0, 1, 2)])
    vals = [0] * (8 * P)
    vals[::8] = [2 * x for x in c]
    return _ints(vals, 1, 8, 8 * P)


def _theta34(P: int, sign: int) -> QExp:
    # prod (1 - s^(2n))(1 + sign s^(2n-1))^2 with s = q^(1/2)
    c = _product(2 * P, [(2, 0, -1, 1), (2, -1, sign, 2)])
    return _ints(c, 0, 2, 2 * P)


def _eisenstein(P: int, k: int, scale: int) -> QExp:
    c = [1] + [scale * _sigma(n, k - 1) for n in range(1, P)]
    return _ints(c, 0, 1, P)


def _delta(P: int) -> QExp:
    c = _product(P, [(1, 0, -1, 24)])
    return _ints(c, 1, 1, P + 1)


def _omega2(P: int) -> QExp:
    c = _product(P, [(1, 0, 1, 24)])
    return _ints([4096 * x for x in c], 1, 1, P + 1)


def _t_haupt(P: int) -> QExp:
    # eta(2)eta(3)^3 / (eta(1)eta(6)^3) = q^(-1/3) * ratio of Euler products
    num = _product(P, [(2, 0, -1, 1), (3, 0, -1, 3)])
    den = _product(P, [(1, 0, -1, 1), (6, 0, -1, 3)])
    return (_ints(num, 0, 1, P) / _ints(den, 0, 1, P)).shift(Fraction(-1, 3))


def _derived(P: int, name: str) -> QExp:
    g = lambda n: _raw(n, P)  # noqa: E731
    if name == "lambda":
        return g("theta2") ** 4 / g("theta3") ** 4
    if name == "one_minus_lambda":
        return g("theta4") ** 4 / g("theta3") ** 4
    if name == "theta2_8":
        return g("theta2") ** 8
    if name == "phi4":
        return (g("theta3") * g("theta4")) ** 4
    if name == "theta4_8":
        return g("theta4") ** 8
    if name == "theta2theta3_4":
        return (g("theta2") * g("theta3")) ** 4
    if name == "lam_over":
        lam = g("lambda")
        return (lam - 2) / lam
    raise UnknownForm(name)


_PRIMITIVE: dict[str, Callable[[int], QExp]] = {
    "eta_1": lambda P: _eta(1, P),
    "eta_2": lambda P: _eta(2, P),
    "eta_3": lambda P: _eta(3, P),
    "eta_4": lambda P: _eta(4, P),
    "eta_6": lambda P: _eta(6, P),
    "theta2": _theta2,
    "theta3": lambda P: _theta34(P, 1),
    "theta4": lambda P: _theta34(P, -1),
    "E4": lambda P: _eisenstein(P, 4, 240),
    "E6": lambda P: _eisenstein(P, 6, -504),
    "Delta": _delta,
    "omega2": _omega2,
    "t_haupt": _t_haupt,
}


def _raw(name: str, P: int) -> QExp:
    if name in _PRIMITIVE:
        return _PRIMITIVE[name](P)
    return _derived(P, name)


# -- memoized registry -------------------------------------------------

_cache: dict[tuple[str, Backend], QExp] = {}
_lock = threading.Lock()


def _lookup(name: str, order: int, backend: Backend) -> QExp | None:
    with _lock:
        hit = _cache.get((name, backend))
    if hit is not None and hit.prec >= order:
        return hit.truncate(order)
    return None


def form(name: str, order: int, backend: Backend = RATIONAL) -> QExp:
    """Expansion of a named form, exact below q^order."""
    if name not in FORM_NAMES:
        raise UnknownForm(f"unknown form {name!r}; known: {', '.join(FORM_NAMES)}")
    if order < 1:
        raise ValueError("order must be at least 1")
    hit = _lookup(name, order, backend)
    if hit is not None:
        return hit
    if backend.is_rational:
        pad = 2
        while True:
            value = _raw(name, order + pad)
            if value.prec >= order:
                break
            pad *= 2
    else:
        value = form(name, order, RATIONAL).to_backend(backend)
    value = value.truncate(order)
    with _lock:
        old = _cache.get((name, backend))
        if old is None or old.prec < value.prec:
            _cache[(name, backend)] = value
    return value


def clear_cache() -> None:
    with _lock:
        _cache.clear()


class FracPower(NamedTuple):
    """Result of :func:`frac_power`.

    ``series`` equals base**exponent divided by ``lead_coeff**exponent``
    when the leading coefficient was normalized away, else base**exponent.
    """

    series: QExp
    lead_coeff: Any
    exponent: Fraction
    normalized: bool

    def dropped(self) -> Any:
        """The constant factor removed by normalization (None if not rational)."""
        if not self.normalized:
            return mpq(1) if self.series.backend.is_rational else self.series.backend.one
        if self.series.backend.is_rational:
            e = self.exponent
            base = mpq(self.lead_coeff) ** e.numerator if e.numerator >= 0 else 1 / mpq(self.lead_coeff) ** -e.numerator
            return exact_root(base, e.denominator)
        ctx = self.series.backend.ctx
        return ctx.exp(ctx.log(self.lead_coeff) * (ctx.mpf(self.exponent.numerator) / self.exponent.denominator))


def frac_power(
    base: str | QExp,
    exponent: Fraction | int | str,
    normalize_leading: bool = False,
    *,
    order: int = 30,
    backend: Backend = RATIONAL,
) -> FracPower:
    """base**exponent on the principal branch; base may be a form name."""
    e = Fraction(exponent)
    series = form(base, order, backend) if isinstance(base, str) else base
    if series.is_zero:
        raise DomainError("fractional power of a series that vanishes to working order")
    lead = series.leading_coefficient
    out = power(series, e, normalize_leading=normalize_leading)
    return FracPower(out, lead, e, normalize_leading)


def _horner(coeffs: Sequence[Any], t: QExp) -> QExp:
    backend = t.backend
    cs = [backend.coerce(c) for c in coeffs]
    while len(cs) > 1 and cs[-1] == 0:
        cs.pop()
    acc = QExp.constant(cs[-1], t.prec if t.prec > 0 else 1, backend) if len(cs) == 1 else None
    if acc is not None:
        return acc
    acc = t.scale(cs[-1]) + cs[-2]
    for c in reversed(cs[:-2]):
        acc = acc * t + c
    return acc


def rational_eval(P: Sequence[Any], Q: Sequence[Any], t: QExp) -> QExp:
    """P(t)/Q(t) with coefficient lists in ascending powers of t."""
    if not P or not Q:
        raise ValueError("coefficient lists must be non-empty")
    num = _horner(P, t)
    den = _horner(Q, t)
    if den.is_zero:
        raise DomainError("denominator vanishes to working order")
    return num / den


def poly_degree(coeffs: Sequence[Any]) -> int:
    d = len(coeffs) - 1
    while d > 0 and coeffs[d] == 0:
        d -= 1
    return d
