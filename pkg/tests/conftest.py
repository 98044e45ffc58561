from __future__ import annotations

from fractions import Fraction

from hypothesis import strategies as st

from modschwarz.qseries import QExp

ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def record_acceptance(number: int, ok: bool, detail: str) -> None:
    ACCEPTANCE[number] = (ok, detail)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k}: {'PASS' if ok else 'FAIL'} - {detail}")


small_fractions = st.fractions(min_value=-20, max_value=20, max_denominator=7)


@st.composite
def series(draw, max_den: int = 3, min_terms: int = 4, max_terms: int = 12, lead_range: int = 3):
    """Random truncated Puiseux series with small rational coefficients."""
    N = draw(st.integers(1, max_den))
    start = draw(st.integers(-lead_range * N, lead_range * N))
    n = draw(st.integers(min_terms, max_terms))
    coeffs = draw(st.lists(small_fractions, min_size=n, max_size=n))
    return QExp.from_coeffs(coeffs, start=start, branch_den=N)


@st.composite
def unit_series(draw, terms: int = 12, lead: Fraction | None = None):
    """q^lead (1 + ...) with integer-grid tail; lead drawn when not given."""
    if lead is None:
        m = draw(st.integers(1, 6))
        n = draw(st.integers(1, 6).filter(lambda k: k != 0))
        lead = Fraction(n, m)
    tail = draw(st.lists(st.integers(-5, 5), min_size=terms - 1, max_size=terms - 1))
    return QExp.from_coeffs([1] + tail).shift(lead)
