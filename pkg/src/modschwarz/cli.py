"""Command-line interface.

Exit codes: 0 success, 1 verification failure, 2 usage error,
3 computation error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Sequence

from modschwarz import forms, frobenius, groups, verify
from modschwarz.qseries import RATIONAL, Backend, QExp, SeriesError, eq_to_order
from modschwarz.schwarz import fit_weight4, schwarzian_norm, weight4_combination

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_COMPUTE = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not an exact fraction: {text!r}") from None


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def _coeff_list(text: str) -> list[Fraction]:
    return [_fraction(c) for c in text.split(",") if c.strip()]


def _shared(p: argparse.ArgumentParser, order_default: int | None = 30) -> None:
    p.add_argument("--order", type=_positive, default=order_default, help="truncation order (exponent bound)")
    p.add_argument("--backend", choices=("rational", "complex"), default="rational")
    p.add_argument("--precision", type=_positive, default=256, help="bits for the complex backend")
    p.add_argument("--json", action="store_true", help="machine-readable output")


def _series_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("name", nargs="?", help="form name: " + ", ".join(forms.FORM_NAMES))
    p.add_argument("--power", type=_fraction, help="raise the form to this rational power")
    p.add_argument("--normalize", action="store_true", help="rescale the leading coefficient to 1 before --power")
    p.add_argument("--num", type=_coeff_list, help="numerator P, ascending coefficients (with --den)")
    p.add_argument("--den", type=_coeff_list, help="denominator Q, ascending coefficients")
    p.add_argument("--t", dest="tname", default="t_haupt", help="form substituted into P/Q (default t_haupt)")


def _weights(p: argparse.ArgumentParser) -> None:
    p.add_argument("--a", type=_fraction, help="(n1/m1)^2: coefficient of (theta3 theta4)^4, cusp at infinity")
    p.add_argument("--b", type=_fraction, help="(n2/m2)^2: coefficient of theta2^8, cusp at 0")
    for k in ("n1", "m1", "n2", "m2"):
        p.add_argument(f"--{k}", type=_positive)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="modschwarz", description="Exact q-series kernel for level-2 modular Schwarzian equations."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("expand", help="print the q-expansion of a form")
    _series_args(p)
    _shared(p)

    p = sub.add_parser("schwarzian", help="normalized Schwarzian {h, tau}/(2 pi^2)")
    _series_args(p)
    _shared(p)

    p = sub.add_parser("fit", help="fit {h, tau}/(2 pi^2) against theta2^8 and (theta3 theta4)^4")
    _series_args(p)
    _shared(p)

    p = sub.add_parser("frobenius", help="solve for h at the cusp at infinity and round-trip")
    _weights(p)
    _shared(p)

    p = sub.add_parser("classify", help="decide whether a modular solution exists")
    _weights(p)
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("table", help="kernel / cusp width / genus table")
    p.add_argument("--n", type=_positive, help="also list concrete kernels for 1..N")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("cosets", help="order of <a, b | relators> by coset enumeration")
    p.add_argument("--relators", required=True, help='e.g. "b^2,a^3,(ba)^3"')
    p.add_argument("--max", type=_positive, default=groups.DEFAULT_MAX_COSETS)
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("verify", help="run the identity catalog")
    p.add_argument("--suite", default="all", help="'all', a record id, or comma-separated ids")
    p.add_argument("--order", type=_positive, default=None, help="override each record's default order")
    p.add_argument("--jobs", type=_positive, default=None, help="worker processes (default: available CPUs)")
    p.add_argument("--list", action="store_true", help="list record ids and exit")
    p.add_argument("--json", action="store_true")
    return parser


def _backend(args: argparse.Namespace) -> Backend:
    return RATIONAL if args.backend == "rational" else Backend.complex(args.precision)


def _emit(args: argparse.Namespace, payload: object, text: str) -> None:
    if args.json:
        print(json.dumps(payload, indent=2, ensure_ascii=False))
    else:
        print(text)


def _build_series(args: argparse.Namespace, order: int) -> QExp:
    be = _backend(args)
    if args.num is not None or args.den is not None:
        if args.num is None or args.den is None:
            raise UsageError("--num and --den go together")
        if args.tname not in forms.FORM_NAMES:
            raise UsageError(f"unknown form {args.tname!r}")
        t = forms.form(args.tname, order, be)
        return forms.rational_eval(args.num, args.den, t)
    if args.name is None:
        raise UsageError("give a form name or --num/--den")
    if args.name not in forms.FORM_NAMES:
        raise UsageError(f"unknown form {args.name!r}; known: {', '.join(forms.FORM_NAMES)}")
    h = forms.form(args.name, order, be)
    if args.power is not None:
        h = forms.frac_power(h, args.power, args.normalize).series
    return h


def _schwarzian_to(args: argparse.Namespace, order: int) -> QExp:
    # schwarzian_norm loses a little precision; widen the input until the output reaches the order
    extra = 4
    while True:
        S = schwarzian_norm(_build_series(args, order + extra))
        if S.prec >= order:
            return S.truncate(order)
        extra *= 2
        if extra > 16 * order + 64:
            raise SeriesError("could not reach the requested order")


def cmd_expand(args: argparse.Namespace) -> int:
    h = _build_series(args, args.order)
    if args.power is not None or args.num is not None:
        h = h.truncate(args.order)
    _emit(args, h.to_json(), str(h))
    return EXIT_OK


def cmd_schwarzian(args: argparse.Namespace) -> int:
    S = _schwarzian_to(args, args.order)
    _emit(args, S.to_json(), str(S))
    return EXIT_OK


def cmd_fit(args: argparse.Namespace) -> int:
    S = _schwarzian_to(args, args.order)
    fit = fit_weight4(S, args.order)
    payload = fit.to_json()
    lines = [
        f"coeff_theta2_8 = {payload['coeff_theta2_8']}",
        f"coeff_phi4     = {payload['coeff_phi4']}",
        f"residual_ok    = {fit.residual_ok} (checked to q^{args.order})",
    ]
    if payload["squares"]:
        sq = payload["squares"]
        lines.append(f"squares: n1/m1 = {sq['n1_over_m1']} (cusp at infinity), n2/m2 = {sq['n2_over_m2']} (cusp at 0)")
    if fit.first_mismatch is not None:
        m = fit.first_mismatch
        lines.append(f"first mismatch at q^{m.exponent}: {m.lhs} vs {m.rhs}")
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK if fit.residual_ok else EXIT_FAIL


def _squares(args: argparse.Namespace) -> tuple[Fraction, Fraction]:
    sugar = [args.n1, args.m1, args.n2, args.m2]
    if any(v is not None for v in sugar):
        if args.a is not None or args.b is not None:
            raise UsageError("use either --a/--b or --n1/--m1/--n2/--m2")
        if any(v is None for v in sugar):
            raise UsageError("--n1, --m1, --n2, --m2 must all be given")
        return Fraction(args.n1, args.m1) ** 2, Fraction(args.n2, args.m2) ** 2
    if args.a is None or args.b is None:
        raise UsageError("--a and --b are required")
    if args.a < 0 or args.b < 0:
        raise UsageError("--a and --b must be nonnegative")
    return args.a, args.b


def cmd_frobenius(args: argparse.Namespace) -> int:
    if args.backend != "rational":
        raise UsageError("frobenius works in the rational backend")
    a_sq, b_sq = _squares(args)
    order = args.order
    S = weight4_combination(b_sq, a_sq, order + 2)
    try:
        target = frobenius.FrobeniusTarget.from_series(S)
    except frobenius.IndicialError as e:
        payload = {"exists": False, "reason": str(e)}
        _emit(args, payload, f"no Frobenius solution: {e}")
        return EXIT_FAIL
    sol = frobenius.solve_h(target, order + 2)
    S2 = schwarzian_norm(sol.h)
    cmp = eq_to_order(S2, target.S, order)
    body = sol.h.body
    lead = body.valuation if not body.is_zero else None
    payload = {
        "r": f"{sol.r.numerator}/{sol.r.denominator}",
        "logarithmic": sol.logarithmic,
        "h_lead_exponent": None if lead is None else f"{lead.numerator}/{lead.denominator}",
        "h": sol.h.to_json(),
        "round_trip": "pass" if cmp.equal else "fail",
        "order": order,
    }
    head = str(sol.h)
    if len(head) > 200:
        head = head[:200] + " ..."
    text = "\n".join(
        [
            f"S = {b_sq} theta2^8 + {a_sq} (theta3 theta4)^4",
            f"indicial exponent r = {sol.r}",
            f"logarithmic: {sol.logarithmic}",
            f"h = {head}",
            f"round trip to q^{order}: {'pass' if cmp.equal else 'fail'}",
        ]
    )
    _emit(args, payload, text)
    return EXIT_OK if cmp.equal else EXIT_FAIL


def cmd_classify(args: argparse.Namespace) -> int:
    a_sq, b_sq = _squares(args)
    res = groups.classify_squares(a_sq, b_sq)
    lines = [
        f"input: coeff_phi4 = {a_sq}, coeff_theta2_8 = {b_sq}",
        f"exists: {res.exists}",
        f"rationale: {res.rationale}",
    ]
    if res.exists:
        lines += [
            f"group: {res.group_label}",
            f"kernel: {res.kernel}",
            f"cusp widths (m1, m2): {res.cusp_widths}",
            f"genus: {res.genus}",
            f"degree: {res.degree}",
        ]
    _emit(args, res.to_json(), "\n".join(lines))
    return EXIT_OK


def cmd_table(args: argparse.Namespace) -> int:
    rows = groups.summary_table()
    payload: dict = {"rows": [dict(zip(("group", "kernel", "widths", "genus"), r.cells())) for r in rows]}
    text = groups.format_table(rows)
    if args.n:
        concrete = []
        lines = []
        for gid, kd, g in groups.concrete_rows(args.n):
            gs = f"{g.numerator}" if g.denominator == 1 else f"{g.numerator}/{g.denominator}"
            concrete.append({"group": str(gid), "kernel": kd.description, "widths": list(kd.widths), "genus": gs})
            lines.append(f"{str(gid):16s} {kd.description:44s} {str(kd.widths):10s} {gs}")
        payload["concrete"] = concrete
        text += "\n\n" + "\n".join(lines)
    _emit(args, payload, text)
    return EXIT_OK


def cmd_cosets(args: argparse.Namespace) -> int:
    try:
        pres = groups.Presentation.parse(args.relators)
    except groups.GroupError as e:
        raise UsageError(str(e)) from None
    table = groups.coset_table(pres, args.max)
    m1, m2 = groups.widths_from_table(table)
    payload = {"presentation": str(pres), "order": table.order, "order_T": m1, "order_R": m2 // 2}
    _emit(args, payload, f"{pres}\norder {table.order}")
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    if args.list:
        for rec in verify.catalog():
            print(f"{rec.id:22s} {rec.anchor}")
        return EXIT_OK
    if args.suite == "all":
        ids = None
    else:
        ids = [s.strip() for s in args.suite.split(",") if s.strip()]
        for rid in ids:
            try:
                verify.get_record(rid)
            except KeyError as e:
                raise UsageError(e.args[0]) from None
    jobs = args.jobs or verify.default_jobs()
    verdicts = verify.run_catalog(ids, args.order, jobs)
    if args.json:
        out = verdicts[0].to_json() if len(verdicts) == 1 and ids else [v.to_json() for v in verdicts]
        print(json.dumps(out, indent=2))
    else:
        for v in verdicts:
            print(v.summary())
        passed = sum(v.passed for v in verdicts)
        print(f"{passed}/{len(verdicts)} records pass")
    return EXIT_OK if all(v.passed for v in verdicts) else EXIT_FAIL


COMMANDS = {
    "expand": cmd_expand,
    "schwarzian": cmd_schwarzian,
    "fit": cmd_fit,
    "frobenius": cmd_frobenius,
    "classify": cmd_classify,
    "table": cmd_table,
    "cosets": cmd_cosets,
    "verify": cmd_verify,
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return COMMANDS[args.command](args)
    except UsageError as e:
        print(f"modschwarz {args.command}: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (SeriesError, groups.GroupError, groups.EnumerationOverflow, ArithmeticError, ValueError) as e:
        print(f"modschwarz {args.command}: computation error: {e}", file=sys.stderr)
        return EXIT_COMPUTE


if __name__ == "__main__":
    raise SystemExit(main())
