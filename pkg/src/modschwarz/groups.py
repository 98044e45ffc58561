"""Finite quotients of Gamma0(2)-bar and the classification of solution groups.

Gamma0(2)-bar is the free product Z * Z/2 = <a, b | b^2>, with a = T and
b = R T^-1, so R = b a.  Quotients are described by relators in a, b and
their orders are computed with HLT coset enumeration over the trivial
subgroup.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import sympy

DEFAULT_MAX_COSETS = 10**6

# letters are signed ints: a = 1, b = 2, negative for inverses
A, B = 1, 2
Word = tuple[int, ...]


class GroupError(ValueError):
    pass


class EnumerationOverflow(RuntimeError):
    """Coset enumeration defined more than max_cosets cosets."""


# -- words ---------------------------------------------------------------


def free_reduce(word: Iterable[int]) -> Word:
    out: list[int] = []
    for x in word:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def cyclic_reduce(word: Iterable[int]) -> Word:
    w = list(free_reduce(word))
    while len(w) > 1 and w[0] == -w[-1]:
        w = w[1:-1]
    return tuple(w)


def inverse(word: Sequence[int]) -> Word:
    return tuple(-x for x in reversed(word))


def power(word: Sequence[int], k: int) -> Word:
    base = tuple(word) if k >= 0 else inverse(word)
    return free_reduce(base * abs(k))


def commutator(u: Sequence[int], v: Sequence[int]) -> Word:
    return free_reduce(tuple(u) + tuple(v) + inverse(u) + inverse(v))


T_WORD: Word = (A,)
R_WORD: Word = (B, A)

_LETTERS = {"a": (A,), "b": (B,), "A": (-A,), "B": (-B,), "T": T_WORD, "R": R_WORD}


def format_word(word: Sequence[int]) -> str:
    """(1, 1, 2, -1) -> 'a^2 b a^-1'."""
    parts: list[str] = []
    i = 0
    while i < len(word):
        x = word[i]
        j = i
        while j < len(word) and word[j] == x:
            j += 1
        k = j - i
        name = "a" if abs(x) == A else "b"
        e = k if x > 0 else -k
        parts.append(name if e == 1 else f"{name}^{e}")
        i = j
    return " ".join(parts) if parts else "1"


class _Parser:
    """Relator grammar: word := factor*, factor := atom ('^' int)?,
    atom := letter | '(' word ')' | '[' word ',' word ']'.
    Letters a, b (A, B for inverses) and T, R meaning a and b a."""

    def __init__(self, text: str):
        self.tokens = re.findall(r"-?\d+|[abABTR()\[\],^]", text.replace(" ", ""))
        if "".join(self.tokens) != text.replace(" ", "").replace("*", ""):
            raise GroupError(f"cannot parse relator {text!r}")
        self.i = 0

    def peek(self) -> str | None:
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def take(self, tok: str | None = None) -> str:
        t = self.peek()
        if t is None or (tok is not None and t != tok):
            raise GroupError(f"expected {tok or 'token'} in relator")
        self.i += 1
        return t

    def word(self) -> Word:
        out: Word = ()
        while self.peek() not in (None, ")", "]", ","):
            out = out + self.factor()
        return out

    def factor(self) -> Word:
        t = self.take()
        if t == "(":
            base = self.word()
            self.take(")")
        elif t == "[":
            u = self.word()
            self.take(",")
            v = self.word()
            self.take("]")
            base = commutator(u, v)
        elif t in _LETTERS:
            base = _LETTERS[t]
        else:
            raise GroupError(f"unexpected {t!r} in relator")
        if self.peek() == "^":
            self.take("^")
            e = self.take()
            try:
                base = power(base, int(e))
            except ValueError:
                raise GroupError(f"bad exponent {e!r}") from None
        return base


def parse_relator(text: str) -> Word:
    p = _Parser(text)
    w = p.word()
    if p.peek() is not None:
        raise GroupError(f"trailing input in relator {text!r}")
    return cyclic_reduce(w)


def parse_relators(text: str) -> list[Word]:
    return [parse_relator(part) for part in _split_top(text)]


def _split_top(text: str) -> list[str]:
    parts, depth, cur = [], 0, ""
    for ch in text:
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append(cur)
            cur = ""
        else:
            cur += ch
    if cur.strip():
        parts.append(cur)
    return [p for p in (s.strip() for s in parts) if p]


@dataclass(frozen=True)
class Presentation:
    """<a, b | relators>; b^2 is always included."""

    relators: tuple[Word, ...]
    generators: tuple[str, str] = ("a", "b")

    def __post_init__(self) -> None:
        rels = [cyclic_reduce(r) for r in self.relators]
        rels = [r for r in rels if r]
        if (B, B) not in rels and (-B, -B) not in rels:
            rels.insert(0, (B, B))
        object.__setattr__(self, "relators", tuple(dict.fromkeys(rels)))

    @classmethod
    def parse(cls, text: str) -> Presentation:
        return cls(tuple(parse_relators(text)))

    def __str__(self) -> str:
        return "<a, b | " + ", ".join(format_word(r) for r in self.relators) + ">"


# -- coset enumeration -----------------------------------------------------


@dataclass(frozen=True)
class CosetTable:
    """Permutation action of a and b on the cosets of the trivial subgroup."""

    a: tuple[int, ...]
    b: tuple[int, ...]

    @property
    def order(self) -> int:
        return len(self.a)

    def image(self, word: Sequence[int]) -> tuple[int, ...]:
        n = self.order
        inv_a = _invert(self.a)
        inv_b = _invert(self.b)
        perms = {A: self.a, -A: inv_a, B: self.b, -B: inv_b}
        cur = list(range(n))
        for x in word:
            p = perms[x]
            cur = [p[c] for c in cur]
        return tuple(cur)

    def element_order(self, word: Sequence[int]) -> int:
        return _perm_order(self.image(word))


def _invert(p: Sequence[int]) -> tuple[int, ...]:
    out = [0] * len(p)
    for i, j in enumerate(p):
        out[j] = i
    return tuple(out)


def _perm_order(p: Sequence[int]) -> int:
    seen = [False] * len(p)
    result = 1
    for i in range(len(p)):
        if seen[i]:
            continue
        k, j = 0, i
        while not seen[j]:
            seen[j] = True
            j = p[j]
            k += 1
        result = math.lcm(result, k)
    return result


class _Enumerator:
    """HLT coset enumeration with union-find coincidence processing."""

    # columns: 0 = a, 1 = a^-1, 2 = b, 3 = b^-1
    COL = {A: 0, -A: 1, B: 2, -B: 3}
    INV = (1, 0, 3, 2)

    def __init__(self, relators: Sequence[Word], max_cosets: int):
        self.rels = [[self.COL[x] for x in r] for r in relators]
        self.max = max_cosets
        self.table: list[list[int | None]] = [[None] * 4]
        self.parent = [0]
        self.defined = 1

    def rep(self, c: int) -> int:
        root = c
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[c] != root:
            self.parent[c], c = root, self.parent[c]
        return root

    def alive(self, c: int) -> bool:
        return self.parent[c] == c

    def define(self, c: int, x: int) -> None:
        if self.defined >= self.max:
            raise EnumerationOverflow(f"enumeration exceeded max_cosets = {self.max}")
        d = len(self.table)
        self.table.append([None] * 4)
        self.parent.append(d)
        self.defined += 1
        self.table[c][x] = d
        self.table[d][self.INV[x]] = c

    def scan_and_fill(self, c: int, w: list[int]) -> None:
        t = self.table
        f, b = c, c
        i, j = 0, len(w) - 1
        while True:
            while i <= j and t[f][w[i]] is not None:
                f = t[f][w[i]]
                i += 1
            if i > j:
                if f != b:
                    self.coincidence(f, b)
                return
            while j >= i and t[b][self.INV[w[j]]] is not None:
                b = t[b][self.INV[w[j]]]
                j -= 1
            if j < i:
                self.coincidence(f, b)
                return
            if i == j:
                t[f][w[i]] = b
                t[b][self.INV[w[i]]] = f
                return
            self.define(f, w[i])

    def coincidence(self, x: int, y: int) -> None:
        queue: list[int] = []

        def merge(k: int, l: int) -> None:
            k, l = self.rep(k), self.rep(l)
            if k == l:
                return
            lo, hi = min(k, l), max(k, l)
            self.parent[hi] = lo
            queue.append(hi)

        merge(x, y)
        t = self.table
        qi = 0
        while qi < len(queue):
            e = queue[qi]
            qi += 1
            for col in range(4):
                f = t[e][col]
                if f is None:
                    continue
                ic = self.INV[col]
                if t[f][ic] == e:
                    t[f][ic] = None
                e1, f1 = self.rep(e), self.rep(f)
                if t[e1][col] is not None:
                    merge(f1, t[e1][col])
                elif t[f1][ic] is not None:
                    merge(e1, t[f1][ic])
                else:
                    t[e1][col] = f1
                    t[f1][ic] = e1

    def run(self) -> CosetTable:
        c = 0
        while c < len(self.table):
            if self.alive(c):
                for w in self.rels:
                    self.scan_and_fill(c, w)
                    if not self.alive(c):
                        break
                if self.alive(c):
                    for x in range(4):
                        if self.table[c][x] is None:
                            self.define(c, x)
            c += 1
        live = [k for k in range(len(self.table)) if self.alive(k)]
        index = {k: i for i, k in enumerate(live)}
        a = tuple(index[self.rep(self.table[k][0])] for k in live)
        b = tuple(index[self.rep(self.table[k][2])] for k in live)
        return CosetTable(a, b)


def coset_table(p: Presentation, max_cosets: int = DEFAULT_MAX_COSETS) -> CosetTable:
    if max_cosets < 1:
        raise ValueError("max_cosets must be positive")
    return _Enumerator(p.relators, max_cosets).run()


def coset_enumerate(p: Presentation, max_cosets: int = DEFAULT_MAX_COSETS) -> int:
    """Order of the group presented by p; raises EnumerationOverflow past max_cosets."""
    return coset_table(p, max_cosets).order


# -- groups and kernels ----------------------------------------------------

GROUP_KINDS = ("A4", "S4", "A5", "D2n", "C2n", "C")
VARIANTS = ("primary", "fricke")


@dataclass(frozen=True)
class GroupId:
    """Image of the projective representation.

    ``C`` with odd ``n`` stands for a cyclic group of odd order n; it has no
    torsion-free kernel and exists only to report that.
    """

    kind: str
    n: int | None = None
    variant: str = "primary"

    def __post_init__(self) -> None:
        if self.kind not in GROUP_KINDS:
            raise GroupError(f"unknown group kind {self.kind!r}")
        if self.variant not in VARIANTS:
            raise GroupError(f"unknown variant {self.variant!r}")
        if self.kind in ("D2n", "C2n", "C"):
            if self.n is None or self.n < 1:
                raise GroupError(f"{self.kind} needs n >= 1")
        elif self.n is not None:
            raise GroupError(f"{self.kind} takes no parameter")

    @property
    def order(self) -> int:
        return {"A4": 12, "S4": 24, "A5": 60}.get(self.kind) or (
            self.n if self.kind == "C" else 2 * self.n
        )

    @property
    def label(self) -> str:
        if self.kind in ("D2n", "C2n"):
            return f"{self.kind[0]}{2 * self.n}"
        if self.kind == "C":
            return f"C{self.n}"
        return self.kind

    def __str__(self) -> str:
        return self.label if self.variant == "primary" else f"{self.label} ({self.variant})"

    def to_json(self) -> dict:
        return {"kind": self.kind, "n": self.n, "variant": self.variant, "label": self.label, "order": self.order}


# a generator of a kernel: ("normal", word) for normal-closure generators,
# ("plain", word) for extra subgroup generators
TRWord = tuple[tuple[str, int], ...]


@dataclass(frozen=True)
class KernelDescriptor:
    group: GroupId
    description: str
    generators: tuple[TRWord, ...]
    widths: tuple[int, int]
    with_commutator: bool
    presentation: Presentation = field(compare=False)

    @property
    def generator_strings(self) -> list[str]:
        out = [format_tr(w) for w in self.generators]
        if self.with_commutator:
            out.append("[T, R]")
        return out

    @property
    def ab_strings(self) -> list[str]:
        out = [format_word(tr_to_ab(w)) for w in self.generators]
        if self.with_commutator:
            out.append(format_word(commutator(T_WORD, R_WORD)))
        return out


def tr_to_ab(w: TRWord) -> Word:
    out: Word = ()
    for letter, e in w:
        out = out + power(T_WORD if letter == "T" else R_WORD, e)
    return free_reduce(out)


def format_tr(w: TRWord) -> str:
    return " ".join(letter if e == 1 else f"{letter}^{e}" for letter, e in w)


def _kernel_spec(kind: str, variant: str, n, odd: bool) -> tuple[list[TRWord], tuple, bool]:
    """Generators, widths and commutator flag; n may be an int or a sympy symbol."""
    if kind == "A4":
        return [(("T", 3),), (("R", 3),)], (3, 6), False
    if kind in ("S4", "A5"):
        p = 4 if kind == "S4" else 5
        t, r = (p, 3) if variant == "primary" else (3, p)
        return [(("T", t),), (("R", r),)], (t, 2 * r), False
    if kind == "D2n":
        t, r = (n, 2) if variant == "primary" else (2, n)
        return [(("T", t),), (("R", r),)], (t, 2 * r), False
    # C2n
    if not odd:
        return [(("T", 2 * n),), (("R", 2 * n),), (("T", n + 1), ("R", -1))], (2 * n, 4 * n), True
    if variant == "primary":
        return [(("T", n),), (("R", 2 * n),), (("R", n + 1), ("T", -1))], (n, 4 * n), True
    return [(("T", 2 * n),), (("R", n),), (("T", n + 1), ("R", -1))], (2 * n, 2 * n), True


def _describe(kind: str, gens: Sequence[TRWord], commutator_gen: bool) -> str:
    if kind == "A4":
        return "Gamma0(2) ∩ Gamma(3)"
    parts = ["".join(_sym_word(l, e) for l, e in w) for w in gens]
    if commutator_gen:
        return "<" + ", ".join(parts + ["[T, R]"]) + ">"
    return "N(" + ", ".join(parts) + ")"


def kernel_descriptor(g: GroupId) -> KernelDescriptor:
    """Kernel generators and cusp widths (m1 at infinity, m2 at 0)."""
    k, n, v = g.kind, g.n, g.variant
    if k == "C":
        if n % 2:
            raise GroupError(
                "no torsion-free kernel: a cyclic image of odd order forces R T^-1 into the kernel"
            )
        return kernel_descriptor(GroupId("C2n", n // 2, v))
    if v != "primary" and (k == "A4" or (k == "C2n" and n % 2 == 0)):
        raise GroupError(f"{g.label} has a single torsion-free kernel; no fricke variant")
    gens, widths, comm = _kernel_spec(k, v, n, odd=bool(n and n % 2))
    rels = [tr_to_ab(w) for w in gens]
    if comm:
        rels.append(commutator(T_WORD, R_WORD))
    return KernelDescriptor(
        g, _describe(k, gens, comm), tuple(gens), widths, comm, Presentation(tuple(rels))
    )


def widths_from_table(table: CosetTable) -> tuple[int, int]:
    """(ord T, 2 ord R) in the quotient: the cusp widths of the kernel."""
    return table.element_order(T_WORD), 2 * table.element_order(R_WORD)


def genus(group_order: int, m1: int, m2: int) -> Fraction:
    """1 + |G| (1/4 - 1/(2 m1) - 1/m2)."""
    if min(group_order, m1, m2) <= 0:
        raise ValueError("arguments must be positive")
    return 1 + group_order * (Fraction(1, 4) - Fraction(1, 2 * m1) - Fraction(1, m2))


def covering_degree(g: Fraction | int, group_order: int, m1: int, m2: int, n1: int, n2: int) -> int:
    """Degree of h on the kernel's curve from Riemann-Hurwitz, mu = |G|."""
    mu = group_order
    d = 1 - Fraction(g) + Fraction(mu, 2 * m1) * (n1 - 1) + Fraction(mu, m2) * (n2 - 1)
    if d.denominator != 1:
        raise GroupError(f"inconsistent ramification data: degree {d} is not an integer")
    return int(d)


# -- classification ----------------------------------------------------------


@dataclass(frozen=True)
class ClassificationInput:
    """Local exponents n1/m1 at infinity and n2/m2 at 0 (reduced on construction).

    A zero flag marks a vanishing weight-4 coefficient; the matching
    fraction is then ignored.
    """

    n1: int
    m1: int
    n2: int
    m2: int
    a_zero: bool = False
    b_zero: bool = False

    def __post_init__(self) -> None:
        for name in ("n1", "m1", "n2", "m2"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be a positive integer")
        g1 = math.gcd(self.n1, self.m1)
        g2 = math.gcd(self.n2, self.m2)
        object.__setattr__(self, "n1", self.n1 // g1)
        object.__setattr__(self, "m1", self.m1 // g1)
        object.__setattr__(self, "n2", self.n2 // g2)
        object.__setattr__(self, "m2", self.m2 // g2)

    @classmethod
    def from_fractions(cls, at_inf: Fraction, at_zero: Fraction) -> ClassificationInput:
        x, y = Fraction(at_inf), Fraction(at_zero)
        if x < 0 or y < 0:
            raise ValueError("local exponents must be nonnegative")
        return cls(
            x.numerator or 1, x.denominator, y.numerator or 1, y.denominator, a_zero=x == 0, b_zero=y == 0
        )

    @property
    def at_inf(self) -> Fraction:
        return Fraction(0) if self.a_zero else Fraction(self.n1, self.m1)

    @property
    def at_zero(self) -> Fraction:
        return Fraction(0) if self.b_zero else Fraction(self.n2, self.m2)


@dataclass(frozen=True)
class ClassificationResult:
    exists: bool
    rationale: str
    group: GroupId | None = None
    group_label: str | None = None
    kernel: str | None = None
    kernel_generators: tuple[str, ...] | None = None
    cusp_widths: tuple[int, int] | None = None
    genus: Fraction | None = None
    degree: int | None = None

    def to_json(self) -> dict:
        return {
            "exists": self.exists,
            "rationale": self.rationale,
            "group": self.group.to_json() if self.group else None,
            "group_label": self.group_label,
            "kernel": self.kernel,
            "kernel_generators": list(self.kernel_generators) if self.kernel_generators else None,
            "cusp_widths": list(self.cusp_widths) if self.cusp_widths else None,
            "genus": _fmt_frac(self.genus) if self.genus is not None else None,
            "degree": self.degree,
        }


def _fmt_frac(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


# exceptional images: width pair -> group
_EXCEPTIONAL = {
    (3, 6): GroupId("A4"),
    (4, 6): GroupId("S4"),
    (3, 8): GroupId("S4", variant="fricke"),
    (5, 6): GroupId("A5"),
    (3, 10): GroupId("A5", variant="fricke"),
}


def principal_index(m: int) -> int:
    """[PSL2(Z) : Gamma(m)-bar]."""
    if m == 1:
        return 1
    if m == 2:
        return 6
    idx = m**3
    for p in sympy.primefactors(m):
        idx = idx * (p * p - 1) // (p * p)
    return idx // 2


def principal_genus(m: int) -> Fraction:
    mu = principal_index(m)
    return 1 + Fraction(mu * (m - 6), 12 * m)


def _cyclic_pattern(m1: int, m2: int) -> bool:
    # widths of the cyclic kernels: (2n, 4n) n even, (n, 4n) and (2n, 2n) n odd
    if m2 == 2 * m1 and m1 % 2 == 0 and (m1 // 2) % 2 == 1:
        return True
    if m2 == 4 * m1 and (m1 % 2 == 1 or (m1 % 2 == 0 and (m1 // 2) % 2 == 0)):
        return True
    return False


def group_for_widths(m1: int, m2: int) -> GroupId | None:
    if (m1, m2) in _EXCEPTIONAL:
        return _EXCEPTIONAL[(m1, m2)]
    if m2 == 4:
        return GroupId("D2n", m1)
    if m1 == 2 and m2 % 2 == 0:
        return GroupId("D2n", m2 // 2, "fricke")
    return None


def classify(inp: ClassificationInput) -> ClassificationResult:
    """Decide whether the equation with these local exponents has a modular solution."""
    if inp.a_zero or inp.b_zero:
        return ClassificationResult(
            False, "F vanishes at a cusp: an equation whose weight-4 form vanishes at a cusp has no modular solution"
        )
    n1, m1, n2, m2 = inp.n1, inp.m1, inp.n2, inp.m2
    if (n1, m1) == (n2, m2):
        m = m1
        if 2 <= m <= 5:
            g = principal_genus(m)
            mu = principal_index(m)
            d = 1 - g + Fraction(mu, 2 * m) * (n1 - 1)
            return ClassificationResult(
                True,
                f"equal coefficients with m = {m}: invariance group is the principal congruence group Gamma({m})",
                group=None,
                group_label=f"Gamma({m})",
                kernel=f"Gamma({m})",
                cusp_widths=(m, m),
                genus=g,
                degree=int(d) if d.denominator == 1 else None,
            )
        return ClassificationResult(
            False,
            f"equal coefficients require m in {{2, 3, 4, 5}}; got m = {m}",
            cusp_widths=(m, m),
        )
    gid = group_for_widths(m1, m2)
    if gid is None:
        if _cyclic_pattern(m1, m2):
            return ClassificationResult(
                False, "cyclic image admits no solution, n > 1", cusp_widths=(m1, m2)
            )
        return ClassificationResult(False, f"width pair ({m1},{m2}) not admissible", cusp_widths=(m1, m2))
    kd = kernel_descriptor(gid)
    g = genus(gid.order, m1, m2)
    d = covering_degree(g, gid.order, m1, m2, n1, n2)
    case = "exceptional image" if gid.kind in ("A4", "S4", "A5") else "dihedral image"
    return ClassificationResult(
        True,
        f"{case} {gid.label} with cusp widths ({m1},{m2})",
        group=gid,
        group_label=gid.label,
        kernel=kd.description,
        kernel_generators=tuple(kd.generator_strings),
        cusp_widths=kd.widths,
        genus=g,
        degree=d,
    )


# -- summary table -------------------------------------------------------------


@dataclass(frozen=True)
class TableRow:
    group: str
    kernel: str
    widths: tuple
    genus: object

    def cells(self) -> tuple[str, str, str, str]:
        return (
            self.group,
            self.kernel,
            "(" + ",".join(_sym(w) for w in self.widths) + ")",
            _sym(self.genus),
        )


def _sym(x: object) -> str:
    if isinstance(x, Fraction):
        return _fmt_frac(x)
    return str(x).replace("*", "").replace(" ", "")


def _sym_word(letter: str, e: object) -> str:
    if e == 1:
        return letter
    s = _sym(e)
    return f"{letter}^{s}" if len(s) == 1 and s.isdigit() else f"{letter}^{{{s}}}"


_TABLE_ROWS = (
    ("A4", "primary", "A4", False),
    ("S4", "primary", "S4", False),
    ("S4", "fricke", "S4", False),
    ("A5", "primary", "A5", False),
    ("A5", "fricke", "A5", False),
    ("D2n", "primary", "D2n for n >= 1", False),
    ("D2n", "fricke", "D2n for n >= 1", False),
    ("C2n", "primary", "C2n for n even", False),
    ("C2n", "primary", "C2n for n odd", True),
    ("C2n", "fricke", "C2n for n odd", True),
)


def summary_table() -> list[TableRow]:
    """Every row from the kernel data and the genus formula, with n symbolic."""
    n = sympy.Symbol("n", positive=True, integer=True)
    rows = []
    for kind, variant, label, odd in _TABLE_ROWS:
        gens, (m1, m2), comm = _kernel_spec(kind, variant, n, odd)
        order = {"A4": 12, "S4": 24, "A5": 60}.get(kind, 2 * n)
        g = sympy.factor(1 + order * (sympy.Rational(1, 4) - sympy.Rational(1, 2) / m1 - sympy.Integer(1) / m2))
        rows.append(TableRow(label, _describe(kind, gens, comm), (m1, m2), g))
    return rows


def concrete_rows(n_max: int = 12) -> list[tuple[GroupId, KernelDescriptor, Fraction]]:
    """All kernels with n <= n_max and their genera."""
    ids = [GroupId("A4"), GroupId("S4"), GroupId("S4", variant="fricke"), GroupId("A5"), GroupId("A5", variant="fricke")]
    for n in range(1, n_max + 1):
        ids += [GroupId("D2n", n), GroupId("D2n", n, "fricke"), GroupId("C2n", n)]
        if n % 2:
            ids.append(GroupId("C2n", n, "fricke"))
    out = []
    for gid in ids:
        kd = kernel_descriptor(gid)
        out.append((gid, kd, genus(gid.order, *kd.widths)))
    return out


def format_table(rows: Sequence[TableRow]) -> str:
    header = ("G", "Gamma", "(m1, m2)", "Genus")
    cells = [header] + [r.cells() for r in rows]
    widths = [max(len(c[i]) for c in cells) for i in range(4)]
    lines = []
    for k, c in enumerate(cells):
        lines.append("  ".join(s.ljust(w) for s, w in zip(c, widths)).rstrip())
        if k == 0:
            lines.append("  ".join("-" * w for w in widths))
    return "\n".join(lines)


def classify_squares(at_inf_sq: Fraction, at_zero_sq: Fraction) -> ClassificationResult:
    """classify from normalized coefficients: (n1/m1)^2 on (theta3 theta4)^4, (n2/m2)^2 on theta2^8."""
    x, y = Fraction(at_inf_sq), Fraction(at_zero_sq)
    if x == 0 or y == 0:
        return classify(ClassificationInput(1, 1, 1, 1, a_zero=x == 0, b_zero=y == 0))
    roots = []
    for v in (x, y):
        if v < 0:
            return ClassificationResult(False, f"coefficient {v} is negative: the local exponent is not real")
        rn, en = sympy.integer_nthroot(v.numerator, 2)
        rd, ed = sympy.integer_nthroot(v.denominator, 2)
        if not (en and ed):
            return ClassificationResult(
                False, f"coefficient {v} is not the square of a rational: the local monodromy has infinite order"
            )
        roots.append(Fraction(int(rn), int(rd)))
    return classify(ClassificationInput.from_fractions(*roots))
