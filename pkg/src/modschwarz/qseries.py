"""Truncated Puiseux series in q = exp(2 pi i tau).

A :class:`QExp` lives on the grid t = q^(1/N) and is known modulo
O(t^(lead_exp + order)).  Coefficients are exact rationals (``gmpy2.mpq``)
or mpmath complex numbers at a fixed binary precision; the backend is
carried by every series and never coerced implicitly.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Iterable, Iterator, Mapping, Sequence

import gmpy2
import mpmath
from gmpy2 import mpq


class SeriesError(ArithmeticError):
    """Base class for series arithmetic failures."""


class BackendMismatch(SeriesError):
    pass


class PrecisionError(SeriesError):
    pass


class NotAPerfectPower(SeriesError):
    pass


class DomainError(SeriesError):
    pass


_CONTEXTS: dict[int, mpmath.ctx_mp.MPContext] = {}
_CONTEXT_LOCK = threading.Lock()


def _context(bits: int) -> mpmath.ctx_mp.MPContext:
    with _CONTEXT_LOCK:
        ctx = _CONTEXTS.get(bits)
        if ctx is None:
            ctx = mpmath.MPContext()
            ctx.prec = bits
            _CONTEXTS[bits] = ctx
        return ctx


@dataclass(frozen=True)
class Backend:
    """Coefficient domain tag: ``rational`` or ``complex<bits>``."""

    kind: str = "rational"
    precision: int = 0

    def __post_init__(self) -> None:
        if self.kind == "rational":
            if self.precision != 0:
                raise ValueError("rational backend takes no precision")
        elif self.kind == "complex":
            if self.precision < 64:
                raise ValueError("complex backend needs at least 64 bits")
        else:
            raise ValueError(f"unknown backend kind {self.kind!r}")

    @classmethod
    def complex(cls, bits: int = 256) -> Backend:
        return cls("complex", bits)

    @classmethod
    def parse(cls, name: str) -> Backend:
        if name == "rational":
            return RATIONAL
        if name.startswith("complex"):
            digits = name[len("complex"):]
            return cls.complex(int(digits) if digits else 256)
        raise ValueError(f"unknown backend {name!r}")

    @property
    def name(self) -> str:
        return "rational" if self.is_rational else f"complex{self.precision}"

    @property
    def is_rational(self) -> bool:
        return self.kind == "rational"

    @property
    def ctx(self) -> mpmath.ctx_mp.MPContext:
        if self.is_rational:
            raise TypeError("rational backend has no mpmath context")
        return _context(self.precision)

    @property
    def tolerance(self) -> Any:
        """Comparison tolerance used by verification: 2^-(precision/2)."""
        if self.is_rational:
            return 0
        return self.ctx.ldexp(1, -(self.precision // 2))

    @property
    def zero(self) -> Any:
        return mpq(0) if self.is_rational else self.ctx.mpc(0)

    @property
    def one(self) -> Any:
        return mpq(1) if self.is_rational else self.ctx.mpc(1)

    def coerce(self, x: Any) -> Any:
        if self.is_rational:
            if isinstance(x, (int, Fraction)) or type(x) in (type(mpq(0)), type(gmpy2.mpz(0))):
                return mpq(x)
            if isinstance(x, str):
                return mpq(Fraction(x))
            raise BackendMismatch(f"cannot use {type(x).__name__} in the rational backend")
        ctx = self.ctx
        if isinstance(x, (Fraction,)) or type(x) is type(mpq(0)):
            return ctx.mpc(ctx.mpf(int(x.numerator)) / int(x.denominator))
        if isinstance(x, str):
            return ctx.mpc(ctx.mpf(x))
        return ctx.mpc(x)

    def __str__(self) -> str:
        return self.name


RATIONAL = Backend()

_MPQ = type(mpq(0))


def _is_scalar(x: Any) -> bool:
    return isinstance(x, (int, Fraction, complex, float)) or type(x) in (
        _MPQ,
        type(gmpy2.mpz(0)),
        mpmath.mpc,
        mpmath.mpf,
    ) or isinstance(x, (mpmath.ctx_mp_python.mpc, mpmath.ctx_mp_python.mpf))


def _as_fraction(x: Any) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if type(x) is _MPQ:
        return Fraction(int(x.numerator), int(x.denominator))
    return Fraction(x)


def exact_root(c: Any, n: int) -> mpq | None:
    """The rational n-th root of c when it exists, else None."""
    c = mpq(c)
    if n <= 0:
        raise ValueError("root degree must be positive")
    if c == 0:
        return mpq(0)
    sign = 1
    if c < 0:
        if n % 2 == 0:
            return None
        sign, c = -1, -c
    num, num_exact = gmpy2.iroot(c.numerator, n)
    den, den_exact = gmpy2.iroot(c.denominator, n)
    if not (num_exact and den_exact):
        return None
    return sign * mpq(num, den)


def _rational_power(c: Any, alpha: Fraction) -> mpq | None:
    c = mpq(c)
    p, s = alpha.numerator, alpha.denominator
    if p < 0:
        if c == 0:
            raise DomainError("negative power of zero")
        c, p = 1 / c, -p
    return exact_root(c**p, s)


class QExp:
    """Truncated series sum_k c_k t^(lead_exp + k), t = q^(1/branch_den).

    Instances are immutable and normalized: the leading coefficient is
    nonzero (unless the series is zero to its precision) and the branch
    denominator is reduced to the gcd of the exponent support.  A zero
    series stores ``lead_exp`` equal to its precision and ``order == 0``.
    """

    __slots__ = ("branch_den", "lead_exp", "coeffs", "order", "backend")

    branch_den: int
    lead_exp: int
    coeffs: tuple
    order: int
    backend: Backend

    def __init__(self, branch_den: int, lead_exp: int, coeffs: tuple, order: int, backend: Backend):
        object.__setattr__(self, "branch_den", branch_den)
        object.__setattr__(self, "lead_exp", lead_exp)
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "backend", backend)

    def __setattr__(self, name: str, value: Any) -> None:
        raise AttributeError("QExp is immutable")

    # -- construction -------------------------------------------------

    @classmethod
    def _build(cls, backend: Backend, N: int, start: int, coeffs: Sequence, stop: int) -> QExp:
        """Normalize raw grid data: coeffs[i] multiplies t^(start+i), unknown from t^stop."""
        n = max(0, stop - start)
        vals = list(coeffs[:n])
        if len(vals) < n:
            vals.extend([backend.zero] * (n - len(vals)))
        if not backend.is_rational and vals:
            _chop(vals, backend)
        first = next((i for i, c in enumerate(vals) if c != 0), None)
        if first is None:
            g = math.gcd(N, stop)
            return cls(N // g, stop // g, (), 0, backend)
        start += first
        vals = vals[first:]
        g = math.gcd(N, start)
        if g > 1:
            for i, c in enumerate(vals):
                if c != 0:
                    g = math.gcd(g, i)
                    if g == 1:
                        break
        if g > 1:
            vals = vals[::g]
            N //= g
            start //= g
            # floor on the precision boundary: never claim more than is known
            stop //= g
            vals = vals[: stop - start]
        return cls(N, start, tuple(vals), stop - start, backend)

    @classmethod
    def zero(cls, prec: Fraction | int, backend: Backend = RATIONAL) -> QExp:
        prec = Fraction(prec)
        return cls._build(backend, prec.denominator, prec.numerator, (), prec.numerator)

    @classmethod
    def monomial(
        cls, exponent: Fraction | int, prec: Fraction | int, coeff: Any = 1, backend: Backend = RATIONAL
    ) -> QExp:
        return cls.from_terms({Fraction(exponent): coeff}, prec, backend)

    @classmethod
    def constant(cls, c: Any, prec: Fraction | int, backend: Backend = RATIONAL) -> QExp:
        return cls.monomial(0, prec, c, backend)

    @classmethod
    def from_coeffs(
        cls,
        coeffs: Sequence,
        prec: Fraction | int | None = None,
        *,
        start: int = 0,
        branch_den: int = 1,
        backend: Backend = RATIONAL,
    ) -> QExp:
        """Series with ``coeffs[i]`` at exponent (start + i)/branch_den.

        ``prec`` is the absolute exponent from which coefficients are
        unknown; by default it sits just past the last given coefficient.
        """
        vals = [backend.coerce(c) for c in coeffs]
        if prec is None:
            stop = start + len(vals)
        else:
            p = Fraction(prec) * branch_den
            stop = math.floor(p)
        return cls._build(backend, branch_den, start, vals, stop)

    @classmethod
    def from_terms(
        cls, terms: Mapping[Any, Any], prec: Fraction | int, backend: Backend = RATIONAL
    ) -> QExp:
        prec = Fraction(prec)
        exps = {Fraction(e): backend.coerce(c) for e, c in terms.items()}
        N = prec.denominator
        for e in exps:
            N = math.lcm(N, e.denominator)
        stop = int(prec * N)
        live = [e for e, c in exps.items() if e < prec]
        if not live:
            return cls._build(backend, N, stop, (), stop)
        start = int(min(live) * N)
        vals = [backend.zero] * (stop - start)
        for e in live:
            vals[int(e * N) - start] += exps[e]
        return cls._build(backend, N, start, vals, stop)

    # -- inspection ---------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def valuation(self) -> Fraction:
        return Fraction(self.lead_exp, self.branch_den)

    @property
    def prec(self) -> Fraction:
        return Fraction(self.lead_exp + self.order, self.branch_den)

    @property
    def leading_coefficient(self) -> Any:
        if self.is_zero:
            raise DomainError("zero series has no leading coefficient")
        return self.coeffs[0]

    def coeff(self, exponent: Fraction | int) -> Any:
        e = Fraction(exponent)
        if e >= self.prec:
            raise PrecisionError(f"coefficient of q^{e} unknown (series known below q^{self.prec})")
        k = e * self.branch_den
        if k.denominator != 1:
            return self.backend.zero
        i = int(k) - self.lead_exp
        if i < 0:
            return self.backend.zero
        return self.coeffs[i]

    def items(self) -> Iterator[tuple[Fraction, Any]]:
        """Nonzero terms as (exponent, coefficient) pairs."""
        for i, c in enumerate(self.coeffs):
            if c != 0:
                yield Fraction(self.lead_exp + i, self.branch_den), c

    def has_integer_exponents(self) -> bool:
        return self.branch_den == 1

    def _grid(self, N: int) -> tuple[int, list, int]:
        """Re-express on the finer grid t = q^(1/N); N must be a multiple of branch_den."""
        k = N // self.branch_den
        if k == 1:
            return self.lead_exp, list(self.coeffs), self.lead_exp + self.order
        vals = [self.backend.zero] * (self.order * k)
        vals[::k] = self.coeffs
        return self.lead_exp * k, vals, (self.lead_exp + self.order) * k

    def _check(self, other: QExp) -> None:
        if self.backend != other.backend:
            raise BackendMismatch(f"cannot combine {self.backend} and {other.backend} series")

    # -- arithmetic ---------------------------------------------------

    def __neg__(self) -> QExp:
        return QExp(self.branch_den, self.lead_exp, tuple(-c for c in self.coeffs), self.order, self.backend)

    def __pos__(self) -> QExp:
        return self

    def __add__(self, other: Any) -> QExp:
        if _is_scalar(other):
            return self._add_scalar(other)
        if not isinstance(other, QExp):
            return NotImplemented
        self._check(other)
        N = math.lcm(self.branch_den, other.branch_den)
        sa, ca, pa = self._grid(N)
        sb, cb, pb = other._grid(N)
        start, stop = min(sa, sb), min(pa, pb)
        if stop <= start:
            return QExp._build(self.backend, N, stop, (), stop)
        vals = [self.backend.zero] * (stop - start)
        for s, cs in ((sa, ca), (sb, cb)):
            off = s - start
            for i, c in enumerate(cs[: max(0, stop - s)]):
                if c != 0:
                    vals[off + i] += c
        return QExp._build(self.backend, N, start, vals, stop)

    __radd__ = __add__

    def _add_scalar(self, x: Any) -> QExp:
        c = self.backend.coerce(x)
        if c == 0:
            return self
        if self.prec <= 0:
            return self
        return self + QExp.constant(c, self.prec, self.backend)

    def __sub__(self, other: Any) -> QExp:
        if _is_scalar(other):
            return self._add_scalar(-self.backend.coerce(other))
        if not isinstance(other, QExp):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: Any) -> QExp:
        if _is_scalar(other):
            return (-self)._add_scalar(other)
        return NotImplemented

    def __mul__(self, other: Any) -> QExp:
        if _is_scalar(other):
            return self.scale(other)
        if not isinstance(other, QExp):
            return NotImplemented
        self._check(other)
        N = math.lcm(self.branch_den, other.branch_den)
        sa, ca, pa = self._grid(N)
        sb, cb, pb = other._grid(N)
        start = sa + sb
        stop = min(pa + sb, pb + sa)
        n = stop - start
        if n <= 0:
            return QExp._build(self.backend, N, stop, (), stop)
        vals = _convolve(ca, cb, n, self.backend.zero)
        return QExp._build(self.backend, N, start, vals, stop)

    __rmul__ = __mul__

    def scale(self, x: Any) -> QExp:
        c = self.backend.coerce(x)
        if c == 0:
            return QExp.zero(self.prec, self.backend)
        return QExp._build(
            self.backend, self.branch_den, self.lead_exp, [c * v for v in self.coeffs], self.lead_exp + self.order
        )

    def inverse(self) -> QExp:
        """1/self via leading-term normalization and the geometric recurrence."""
        if self.is_zero:
            raise DomainError(f"division by a series that vanishes to O(q^{self.prec})")
        b = self.coeffs
        n = self.order
        inv0 = 1 / b[0]
        nz = [(j, c) for j, c in enumerate(b) if j > 0 and c != 0]
        g = [self.backend.zero] * n
        g[0] = inv0
        for k in range(1, n):
            acc = self.backend.zero
            for j, c in nz:
                if j > k:
                    break
                gk = g[k - j]
                if gk != 0:
                    acc += c * gk
            g[k] = -acc * inv0
        return QExp._build(self.backend, self.branch_den, -self.lead_exp, g, -self.lead_exp + n)

    def __truediv__(self, other: Any) -> QExp:
        if _is_scalar(other):
            c = self.backend.coerce(other)
            if c == 0:
                raise DomainError("division by zero scalar")
            return self.scale(1 / c)
        if not isinstance(other, QExp):
            return NotImplemented
        self._check(other)
        return self * other.inverse()

    def __rtruediv__(self, other: Any) -> QExp:
        if _is_scalar(other):
            return self.inverse().scale(other)
        return NotImplemented

    def __pow__(self, n: int) -> QExp:
        if not isinstance(n, int):
            return NotImplemented
        return pow_int(self, n)

    # -- structure ----------------------------------------------------

    def truncate(self, prec: Fraction | int) -> QExp:
        """Forget everything from q^prec on (no-op if already coarser)."""
        p = Fraction(prec)
        if p >= self.prec:
            return self
        N = math.lcm(self.branch_den, p.denominator)
        s, vals, _ = self._grid(N)
        stop = int(p * N)
        if stop <= s:
            return QExp._build(self.backend, N, stop, (), stop)
        return QExp._build(self.backend, N, s, vals, stop)

    def shift(self, exponent: Fraction | int) -> QExp:
        """Multiply by q^exponent."""
        e = Fraction(exponent)
        N = math.lcm(self.branch_den, e.denominator)
        s, vals, stop = self._grid(N)
        d = int(e * N)
        return QExp._build(self.backend, N, s + d, vals, stop + d)

    def D(self) -> QExp:
        """The derivation q d/dq."""
        return theta_derivative(self)

    def substitute_power(self, k: int) -> QExp:
        return substitute_power(self, k)

    def to_backend(self, backend: Backend) -> QExp:
        if backend == self.backend:
            return self
        if backend.is_rational:
            raise BackendMismatch("complex series cannot be converted to the rational backend")
        if not self.backend.is_rational:
            return QExp(self.branch_den, self.lead_exp, tuple(backend.ctx.mpc(c) for c in self.coeffs), self.order, backend)
        return QExp(self.branch_den, self.lead_exp, tuple(backend.coerce(c) for c in self.coeffs), self.order, backend)

    def chop(self, tol: Any) -> QExp:
        """Zero every coefficient of magnitude <= tol (complex backend cleanup)."""
        vals = [c if abs(c) > tol else self.backend.zero for c in self.coeffs]
        return QExp._build(self.backend, self.branch_den, self.lead_exp, vals, self.lead_exp + self.order)

    # -- comparison / display ----------------------------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, QExp):
            return NotImplemented
        return (
            self.backend == other.backend
            and self.branch_den == other.branch_den
            and self.lead_exp == other.lead_exp
            and self.order == other.order
            and self.coeffs == other.coeffs
        )

    def __hash__(self) -> int:
        return hash((self.backend, self.branch_den, self.lead_exp, self.order, self.coeffs))

    def __str__(self) -> str:
        return format_series(self)

    def __repr__(self) -> str:
        head = format_series(self, max_terms=6)
        return f"QExp({head}, backend={self.backend})"

    def to_json(self) -> dict:
        if self.backend.is_rational:
            coeffs = [_fmt_rational(c) for c in self.coeffs]
        else:
            ctx = self.backend.ctx
            digits = int(self.backend.precision * 0.30103) + 3
            coeffs = [[ctx.nstr(c.real, digits), ctx.nstr(c.imag, digits)] for c in self.coeffs]
        return {
            "branch_den": self.branch_den,
            "lead_exp": self.lead_exp,
            "order": self.order,
            "backend": self.backend.name,
            "coeffs": coeffs,
        }

    @classmethod
    def from_json(cls, data: Mapping[str, Any]) -> QExp:
        backend = Backend.parse(data["backend"])
        N, e, order = int(data["branch_den"]), int(data["lead_exp"]), int(data["order"])
        if backend.is_rational:
            vals = [mpq(Fraction(c)) for c in data["coeffs"]]
        else:
            ctx = backend.ctx
            vals = [ctx.mpc(ctx.mpf(str(re)), ctx.mpf(str(im))) for re, im in data["coeffs"]]
        return cls._build(backend, N, e, vals, e + order)


def _chop(vals: list, backend: Backend) -> None:
    scale = max((abs(c) for c in vals), default=0)
    if not scale:
        return
    ctx = backend.ctx
    tol = scale * ctx.ldexp(1, -(3 * backend.precision) // 4)
    zero = backend.zero
    for i, c in enumerate(vals):
        if c != 0 and abs(c) <= tol:
            vals[i] = zero


def _convolve(ca: Sequence, cb: Sequence, n: int, zero: Any) -> list:
    nza = [(i, c) for i, c in enumerate(ca[:n]) if c != 0]
    nzb = [(j, c) for j, c in enumerate(cb[:n]) if c != 0]
    out = [zero] * n
    for i, x in nza:
        lim = n - i
        for j, y in nzb:
            if j >= lim:
                break
            out[i + j] += x * y
    return out


def _fmt_rational(c: Any) -> str:
    c = mpq(c)
    return f"{c.numerator}/{c.denominator}"


def _fmt_exponent(e: Fraction) -> str:
    if e == 0:
        return ""
    if e == 1:
        return "q"
    if e.denominator == 1:
        return f"q^{e.numerator}"
    return f"q^({e.numerator}/{e.denominator})"


def _fmt_coeff(c: Any, backend: Backend) -> tuple[str, str]:
    """Sign and magnitude strings for a coefficient."""
    if backend.is_rational:
        c = mpq(c)
        sign = "-" if c < 0 else "+"
        a = abs(c)
        mag = str(a.numerator) if a.denominator == 1 else f"{a.numerator}/{a.denominator}"
        return sign, mag
    ctx = backend.ctx
    if c.imag == 0:
        sign = "-" if c.real < 0 else "+"
        return sign, ctx.nstr(abs(c.real), 15)
    return "+", "(" + ctx.nstr(c, 15) + ")"


def format_series(h: QExp, max_terms: int | None = None) -> str:
    """Render as ``1 + 240 q + 2160 q^2 + O(q^3)``."""
    parts: list[str] = []
    shown = 0
    truncated = False
    for e, c in h.items():
        if max_terms is not None and shown >= max_terms:
            truncated = True
            break
        sign, mag = _fmt_coeff(c, h.backend)
        mono = _fmt_exponent(e)
        if mono and mag == "1":
            body = mono
        elif mono:
            body = f"{mag} {mono}"
        else:
            body = mag
        if not parts:
            parts.append(body if sign == "+" else f"-{body}")
        else:
            parts.append(f"{sign} {body}")
        shown += 1
    if truncated:
        parts.append("+ ...")
    p = h.prec
    tail = "O(1)" if p == 0 else f"O({_fmt_exponent(p)})"
    if not parts:
        return tail
    return " ".join(parts) + " + " + tail


# -- operations ---------------------------------------------------------


def theta_derivative(h: QExp | LogQExp) -> QExp:
    """D = q d/dq; on a log-extended series D(log q) = 1."""
    if isinstance(h, LogQExp):
        body = theta_derivative(h.body)
        if h.log_coeff == 0:
            return body
        return body + h.body.backend.coerce(h.log_coeff)
    N = h.branch_den
    if h.backend.is_rational:
        vals = [c * mpq(h.lead_exp + i, N) if c != 0 else c for i, c in enumerate(h.coeffs)]
    else:
        vals = [c * (h.lead_exp + i) / N if c != 0 else c for i, c in enumerate(h.coeffs)]
    if h.is_zero:
        return h
    return QExp._build(h.backend, N, h.lead_exp, vals, h.lead_exp + h.order)


def pow_int(h: QExp, n: int) -> QExp:
    """h^n by repeated squaring (negative n inverts first)."""
    if n < 0:
        return pow_int(h.inverse(), -n)
    if n == 0:
        if h.is_zero:
            raise DomainError("0^0 of a truncated series")
        return QExp.constant(1, h.order, h.backend)
    result = None
    base = h
    while n:
        if n & 1:
            result = base if result is None else result * base
        n >>= 1
        if n:
            base = base * base
    return result


def power(h: QExp, alpha: Fraction | int, normalize_leading: bool = False) -> QExp:
    """h^alpha for rational alpha with the principal branch on the leading term.

    The unit part (1 + u)^alpha is computed with the recurrence
    k g_k = sum_j ((alpha + 1) j - k) u_j g_{k-j}.
    """
    alpha = Fraction(alpha)
    if alpha.denominator == 1:
        out = pow_int(h, alpha.numerator)
        if normalize_leading:
            out = out.scale(1 / out.leading_coefficient)
        return out
    if h.is_zero:
        raise DomainError("fractional power of a series that vanishes to working order")
    backend = h.backend
    c0 = h.coeffs[0]
    if normalize_leading:
        lead = backend.one
    elif backend.is_rational:
        lead = _rational_power(c0, alpha)
        if lead is None:
            raise NotAPerfectPower(
                f"leading coefficient {_fmt_rational(c0)} is not an exact {alpha.denominator}-th power"
                + (f" (after raising to the {alpha.numerator})" if alpha.numerator != 1 else "")
            )
    else:
        ctx = backend.ctx
        lead = ctx.mpc(ctx.exp(ctx.log(c0) * (ctx.mpf(alpha.numerator) / alpha.denominator)))
    n = h.order
    inv0 = 1 / c0
    f = [c * inv0 for c in h.coeffs]
    if backend.is_rational:
        a1 = mpq(alpha.numerator, alpha.denominator) + 1
    else:
        ctx = backend.ctx
        a1 = ctx.mpf(alpha.numerator) / alpha.denominator + 1
    nz = [(j, c) for j, c in enumerate(f) if j > 0 and c != 0]
    g = [backend.zero] * n
    g[0] = backend.one
    for k in range(1, n):
        acc = backend.zero
        for j, c in nz:
            if j > k:
                break
            gk = g[k - j]
            if gk != 0:
                acc += (a1 * j - k) * c * gk
        g[k] = acc / k
    s = alpha.denominator
    N = h.branch_den * s
    start = h.lead_exp * alpha.numerator
    vals = [backend.zero] * (n * s)
    vals[::s] = [lead * x for x in g]
    return QExp._build(backend, N, start, vals, start + n * s)


def nth_root(h: QExp, n: int, normalize_leading: bool = False) -> QExp:
    if n <= 0:
        raise ValueError("root degree must be positive")
    return power(h, Fraction(1, n), normalize_leading=normalize_leading)


def log1(h: QExp) -> QExp:
    """log(h) for h = 1 + O(q^(positive))."""
    if h.is_zero or h.lead_exp != 0 or h.coeffs[0] != 1:
        raise DomainError("log1 needs a series of the form 1 + O(t)")
    d = theta_derivative(h) / h
    N = d.branch_den
    if d.is_zero:
        return QExp.zero(h.prec, h.backend)
    vals = []
    for i, c in enumerate(d.coeffs):
        k = d.lead_exp + i
        if c == 0:
            vals.append(c)
        elif h.backend.is_rational:
            vals.append(c * mpq(N, k))
        else:
            vals.append(c * N / k)
    out = QExp._build(h.backend, N, d.lead_exp, vals, d.lead_exp + d.order)
    return out.truncate(h.prec)


def exp0(h: QExp) -> QExp:
    """exp(h) for h of strictly positive valuation."""
    if not h.is_zero and h.lead_exp <= 0:
        raise DomainError("exp0 needs a series of the form O(t)")
    backend = h.backend
    N = h.branch_den
    stop = h.lead_exp + h.order
    if stop <= 0:
        raise PrecisionError("exp0 of a series with no known terms")
    s, vals, _ = h._grid(N)
    u = [backend.zero] * stop
    for i, c in enumerate(vals):
        u[s + i] = c
    nz = [(j, c * j) for j, c in enumerate(u) if c != 0]
    g = [backend.zero] * stop
    g[0] = backend.one
    for k in range(1, stop):
        acc = backend.zero
        for j, c in nz:
            if j > k:
                break
            gk = g[k - j]
            if gk != 0:
                acc += c * gk
        g[k] = acc / k
    return QExp._build(backend, N, 0, g, stop)


def substitute_power(h: QExp, k: int) -> QExp:
    """q -> q^k, realizing f(k tau) from f(tau)."""
    if k <= 0:
        raise ValueError("substitution power must be positive")
    if k == 1:
        return h
    vals = [h.backend.zero] * (h.order * k)
    vals[::k] = h.coeffs
    return QExp._build(h.backend, h.branch_den, h.lead_exp * k, vals, (h.lead_exp + h.order) * k)


@dataclass(frozen=True)
class Comparison:
    equal: bool
    order: Fraction
    exponent: Fraction | None = None
    lhs: Any = None
    rhs: Any = None
    max_residual: Any = 0

    def __bool__(self) -> bool:
        return self.equal

    def mismatch_json(self, backend: Backend) -> dict | None:
        if self.equal:
            return None
        return {
            "exponent": f"{self.exponent.numerator}/{self.exponent.denominator}",
            "lhs": _coeff_json(self.lhs, backend),
            "rhs": _coeff_json(self.rhs, backend),
        }


def _coeff_json(c: Any, backend: Backend) -> Any:
    if backend.is_rational:
        return _fmt_rational(c)
    ctx = backend.ctx
    return [ctx.nstr(c.real, 20), ctx.nstr(c.imag, 20)]


def eq_to_order(a: QExp, b: QExp, M: Fraction | int, tol: Any = None) -> Comparison:
    """Compare all coefficients with exponent < M.

    Exact in the rational backend; the complex backend needs ``tol`` and
    tests |a_k - b_k| <= tol.
    """
    a._check(b)
    M = Fraction(M)
    if M > a.prec or M > b.prec:
        raise PrecisionError(f"insufficient precision: asked for O(q^{M}), have O(q^{min(a.prec, b.prec)})")
    rational = a.backend.is_rational
    if not rational and tol is None:
        raise ValueError("complex backend comparison needs a tolerance")
    N = math.lcm(a.branch_den, b.branch_den)
    lo = min(a.valuation, b.valuation)
    worst = 0
    k = math.floor(lo * N)
    while Fraction(k, N) < M:
        e = Fraction(k, N)
        x, y = a.coeff(e), b.coeff(e)
        if rational:
            if x != y:
                return Comparison(False, M, e, x, y, abs(x - y))
        else:
            r = abs(x - y)
            if r > worst:
                worst = r
            if r > tol:
                return Comparison(False, M, e, x, y, r)
        k += 1
    return Comparison(True, M, max_residual=worst)


class LogQExp:
    """log_coeff * log q + body, with log q = 2 pi i tau."""

    __slots__ = ("log_coeff", "body")

    def __init__(self, log_coeff: Any, body: QExp):
        object.__setattr__(self, "log_coeff", body.backend.coerce(log_coeff))
        object.__setattr__(self, "body", body)

    def __setattr__(self, name: str, value: Any) -> None:
        raise AttributeError("LogQExp is immutable")

    @property
    def backend(self) -> Backend:
        return self.body.backend

    @property
    def prec(self) -> Fraction:
        return self.body.prec

    @property
    def is_logarithmic(self) -> bool:
        return self.log_coeff != 0

    def D(self) -> QExp:
        return theta_derivative(self)

    def __add__(self, other: Any) -> LogQExp:
        if isinstance(other, LogQExp):
            return LogQExp(self.log_coeff + other.log_coeff, self.body + other.body)
        if isinstance(other, QExp) or _is_scalar(other):
            return LogQExp(self.log_coeff, self.body + other)
        return NotImplemented

    __radd__ = __add__

    def __neg__(self) -> LogQExp:
        return LogQExp(-self.log_coeff, -self.body)

    def __sub__(self, other: Any) -> LogQExp:
        return self + (-other)

    def __rsub__(self, other: Any) -> LogQExp:
        return (-self) + other

    def __mul__(self, x: Any) -> LogQExp:
        if _is_scalar(x):
            c = self.backend.coerce(x)
            return LogQExp(self.log_coeff * c, self.body.scale(c))
        return NotImplemented

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if isinstance(other, QExp):
            return self.log_coeff == 0 and self.body == other
        if not isinstance(other, LogQExp):
            return NotImplemented
        return self.log_coeff == other.log_coeff and self.body == other.body

    def __hash__(self) -> int:
        return hash((self.log_coeff, self.body))

    def __str__(self) -> str:
        if self.log_coeff == 0:
            return str(self.body)
        sign, mag = _fmt_coeff(self.log_coeff, self.backend)
        head = ("" if sign == "+" else "-") + ("" if mag == "1" else mag + " ") + "log q"
        rest = str(self.body)
        if rest.startswith("-"):
            return f"{head} - {rest[1:]}"
        return f"{head} + {rest}"

    def __repr__(self) -> str:
        return f"LogQExp({self})"

    def to_json(self) -> dict:
        backend = self.backend
        return {"log_coeff": _coeff_json(self.log_coeff, backend), "body": self.body.to_json()}


def as_fraction(x: Any) -> Fraction:
    """Exact rational coefficient as a ``fractions.Fraction``."""
    return _as_fraction(x)


def parse_fraction(text: str) -> Fraction:
    return Fraction(text.strip())


def terms_from(pairs: Iterable[tuple[Any, Any]]) -> dict:
    return {Fraction(e): c for e, c in pairs}
