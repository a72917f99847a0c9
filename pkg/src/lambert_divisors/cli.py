"""Command-line front end.

Exit codes: 0 success, 1 an asserted identity did not pass, 2 usage error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from typing import Sequence

from . import divisor_functions as dfn
from .coefficient_sums import FormulaVariant
from .divisor_functions import ModeError, SymbolicShift
from .exact_arith import exact_pow, stirling_first_unsigned, stirling_second
from .expansions import (
    Method,
    l_coeff,
    l_oracle,
    s00_coeff,
    s00_oracle,
    s01_coeff,
    s01_oracle,
    s4_coeff,
    s8_coeff,
)
from .power_series import TruncationError, coefficient, lambert_sigma_gf, lambert_term
from .verifier import (
    CATALOG,
    DERIVED,
    GridError,
    auto_resolution,
    list_identities,
    render_value,
    reports_to_json,
    verify,
)

SERIES_ORDER_CAP = 512
FORMATS = ("markdown", "csv", "json-lines")


class UsageError(ValueError):
    pass


# --- argument helpers --------------------------------------------------------


def int_range(text: str) -> list[int]:
    """``"12"`` or ``"1..10"``."""
    try:
        if ".." in text:
            lo, hi = (int(t) for t in text.split("..", 1))
            if lo > hi:
                raise UsageError(f"empty range {text!r}")
            return list(range(lo, hi + 1))
        return [int(text)]
    except ValueError as exc:
        if isinstance(exc, UsageError):
            raise
        raise UsageError(f"expected an integer or lo..hi, got {text!r}") from None


def parse_alpha(text: str):
    try:
        if text in ("a", "sym", "symbolic", "alpha"):
            return SymbolicShift(0)
        try:
            return dfn.IntegerExp(int(text))
        except ValueError:
            return dfn.RealExp(float(text))
    except ValueError:
        raise UsageError(f"bad alpha {text!r}; use an integer, a real or 'sym'") from None


def parse_variant(text: str):
    if text == "auto":
        return "auto"
    try:
        return FormulaVariant.parse(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _positive(name: str, values: list[int]) -> list[int]:
    if any(v < 1 for v in values):
        raise UsageError(f"--{name} must be positive")
    return values


# --- rendering ---------------------------------------------------------------


def _cell(value) -> str:
    return render_value(value)


def render_rows(header: list[str], rows: list[list], fmt: str) -> str:
    cells = [[_cell(c) for c in row] for row in rows]
    if fmt == "markdown":
        lines = ["| " + " | ".join(header) + " |", "|" + "|".join("---" for _ in header) + "|"]
        lines += ["| " + " | ".join(r) + " |" for r in cells]
        return "\n".join(lines) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(cells)
        return buf.getvalue()
    return "".join(json.dumps(dict(zip(header, r))) + "\n" for r in cells)


def parse_markdown_table(text: str) -> list[list[str]]:
    rows = []
    for line in text.splitlines():
        line = line.strip()
        if not line.startswith("|") or set(line) <= set("|-"):
            continue
        rows.append([c.strip() for c in line.strip("|").split("|")])
    return rows


# --- subcommands -------------------------------------------------------------


def cmd_compute(args) -> str:
    fn = args.function
    if fn == "stirling":
        if args.kind not in (1, 2):
            raise UsageError("--kind must be 1 or 2")
        table = stirling_first_unsigned if args.kind == 1 else stirling_second
        ns, ks = int_range(args.n), int_range(args.k or "0")
        if any(n < 0 for n in ns):
            raise UsageError("--n must be non-negative")
        rows = [[n, k, table(n, k)] for n in ns for k in ks]
        header = ["n", "k", "value"]
    else:
        alpha = parse_alpha(args.alpha)
        ns = _positive("n", int_range(args.n))
        ms = _positive("m", int_range(args.m or "1"))
        ks = int_range(args.k or "0")
        if any(k < 0 for k in ks):
            raise UsageError("--k must be non-negative")
        if fn == "sigma":
            rows = [[n, dfn.sigma(alpha, n)] for n in ns]
            header = ["n", "value"]
        elif fn == "sigma-bounded":
            rows = [[n, m, dfn.sigma_bounded(alpha, m, n)] for n in ns for m in ms]
            header = ["n", "m", "value"]
        else:
            rows = [[n, m, k, dfn.binomial_divisor_sum(alpha, k, m, n)] for n in ns for m in ms for k in ks]
            header = ["n", "m", "k", "value"]
    if len(rows) == 1 and args.format == "markdown":
        return _cell(rows[0][-1]) + "\n"
    return render_rows(header, rows, args.format)


def bounded_sigma_table(n_max: int, m_max: int, alpha=None) -> tuple[list[str], list[list]]:
    alpha = alpha if alpha is not None else SymbolicShift(0)
    header = ["n"] + [f"m={m}" for m in range(1, m_max + 1)]
    rows = [[n] + [dfn.sigma_bounded(alpha, m, n) for m in range(1, m_max + 1)] for n in range(1, n_max + 1)]
    return header, rows


def cmd_table(args) -> str:
    if args.n_max < 1 or args.m_max < 1:
        raise UsageError("--n-max and --m-max must be positive")
    header, rows = bounded_sigma_table(args.n_max, args.m_max, parse_alpha(args.alpha))
    return render_rows(header, rows, args.format)


_SERIES_CLOSED = {"L": l_coeff, "S00": s00_coeff, "S01": s01_coeff}
_SERIES_ORACLE = {"L": l_oracle, "S00": s00_oracle, "S01": s01_oracle}


def _series_value(gf: str, at: int, alpha, args, method: Method, variant, order: int):
    exact_int = isinstance(alpha, dfn.IntegerExp)
    if method is Method.ORACLE_SERIES and not exact_int:
        raise UsageError("the series oracle needs an exact integer --alpha")
    if gf == "F":
        if method is Method.ORACLE_SERIES:
            return coefficient(lambert_sigma_gf(alpha.value, order), at)
        return dfn.sigma(alpha, at) if at >= 1 else 0
    if gf == "lambert":
        m, k = args.m, args.k
        if m < 1 or k < 0:
            raise UsageError("lambert needs --m >= 1 and --k >= 0")
        if method is Method.ORACLE_SERIES:
            a = alpha.value
            return coefficient(lambert_term(lambda i: exact_pow(i, a), m, k, order), at)
        return dfn.binomial_divisor_sum(alpha, k, m, at) if at >= 1 else 0
    s = args.s
    if at < 1:
        raise UsageError("--at must be positive for the derivative coefficients")
    if gf in _SERIES_CLOSED:
        if s < 0:
            raise UsageError("--s must be non-negative")
        fn = _SERIES_ORACLE[gf] if method is Method.ORACLE_SERIES else _SERIES_CLOSED[gf]
        return fn(s, at, alpha)
    if s < 1:
        raise UsageError("S4/S8 need --s >= 1")
    fn = s4_coeff if gf == "S4" else s8_coeff
    return fn(s, at, alpha, method, variant, order if method is Method.ORACLE_SERIES else None)


def _default_series_method(gf: str, alpha) -> Method:
    exact_int = isinstance(alpha, dfn.IntegerExp)
    if gf in ("F", "lambert"):
        return Method.ORACLE_SERIES if exact_int else Method.CLOSED_FORM
    if gf in _SERIES_CLOSED:
        return Method.CLOSED_FORM
    return Method.ORACLE_SERIES if exact_int else Method.BOUNDED_SUMS


def cmd_series(args) -> str:
    alpha = parse_alpha(args.alpha)
    ats = int_range(args.at)
    if any(a < 0 for a in ats):
        raise UsageError("--at must be non-negative")
    if args.order is not None and not 0 <= args.order <= SERIES_ORDER_CAP:
        raise UsageError(f"--order must be in 0..{SERIES_ORDER_CAP}")
    order = args.order if args.order is not None else max(ats) + max(args.s, 0) + 8
    if order > SERIES_ORDER_CAP:
        raise UsageError(f"requested order {order} exceeds the cap {SERIES_ORDER_CAP}")
    if max(ats) > order:
        raise UsageError(f"--at {max(ats)} is beyond the truncation order {order}")
    method = Method(args.method) if args.method else _default_series_method(args.gf, alpha)
    if method in (Method.BINOMIAL_SUMS, Method.BOUNDED_SUMS) and args.gf not in ("S4", "S8"):
        raise UsageError(f"method {method.value} applies only to S4 and S8")
    if method is Method.CLOSED_FORM and args.gf in ("S4", "S8"):
        raise UsageError("S4/S8 have no closed form; use oracle, binomial or bounded")
    variant = args.variant
    if variant == "auto":
        variant = auto_resolution().chosen or FormulaVariant()
    uses_variant = args.gf in ("S4", "S8")
    vlabel = variant.label() if uses_variant else "-"
    rows = [[x, _series_value(args.gf, x, alpha, args, method, variant, order)] for x in ats]
    if args.format == "markdown":
        lines = [_cell(v) for _, v in rows] if len(rows) == 1 else None
        if lines is None:
            return render_rows(["at", "value"], rows, "markdown") + f"# gf={args.gf} method={method.value} variant={vlabel}\n"
        return lines[0] + f"\n# gf={args.gf} method={method.value} variant={vlabel}\n"
    tagged = [[x, v, args.gf, method.value, vlabel] for x, v in rows]
    return render_rows(["at", "value", "gf", "method", "variant"], tagged, args.format)


def cmd_verify(args, out) -> int:
    ids = list(CATALOG) if args.identity == "all" else [args.identity]
    if args.identity != "all" and args.identity not in CATALOG:
        listing = "\n".join(CATALOG)
        raise UsageError(f"unknown identity {args.identity!r}; known identities:\n{listing}")
    if args.grid and args.identity == "all":
        raise UsageError("--grid needs a single identity")
    variant = args.variant
    reports = []
    for ident in ids:
        reports.append(
            verify(ident, args.grid, variant, max_counterexamples=args.max_counterexamples,
                   deterministic=args.deterministic)
        )
    if variant == "auto" and any(CATALOG[i].uses_variant for i in ids):
        res = auto_resolution()
        chosen = res.chosen.label() if res.chosen else "unresolved"
        out.write(f"variant auto-resolution: {chosen}\n")
        for label, row in res.evidence.items():
            cells = ", ".join(f"{k} {p}/{n}" for k, (p, n) in row.items())
            out.write(f"  {label}: {cells}\n")
    for rep in reports:
        out.write(rep.summary() + "\n")
    if args.out:
        doc = reports_to_json(reports)
        if args.out == "-":
            out.write(doc + "\n")
        else:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(doc + "\n")
    asserted = [r for r in reports if args.strict or r.identity not in DERIVED]
    return 0 if all(r.verdict == "pass" for r in asserted) else 1


def cmd_list(args) -> str:
    rows = [[i, g, c] for i, c, g in list_identities()]
    if args.format == "markdown":
        return "".join(f"{i}\t{g}\t{c}\n" for i, g, c in rows)
    return render_rows(["identity", "default_grid", "citation"], rows, args.format)


# --- parser ------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="lambert-divisors", description="Divisor sums, Lambert series coefficients and identity checks.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("compute", help="sigma, bounded sigma, binomial divisor sums, Stirling numbers")
    c.add_argument("function", choices=["sigma", "sigma-bounded", "B", "stirling"])
    c.add_argument("--alpha", default="1", help="integer, real, or 'sym' for symbolic")
    c.add_argument("--n", required=True, help="value or lo..hi")
    c.add_argument("--m", help="value or lo..hi (default 1)")
    c.add_argument("--k", help="value or lo..hi (default 0)")
    c.add_argument("--kind", type=int, default=1, help="Stirling kind, 1 or 2")
    c.add_argument("--format", choices=FORMATS, default="markdown")

    t = sub.add_parser("table", help="bounded divisor sum table")
    t.add_argument("which", choices=["bounded-sigma"])
    t.add_argument("--n-max", type=int, default=21)
    t.add_argument("--m-max", type=int, default=4)
    t.add_argument("--alpha", default="sym")
    t.add_argument("--format", choices=FORMATS, default="markdown")

    s = sub.add_parser("series", help="power series coefficients")
    s.add_argument("what", choices=["coeff"])
    s.add_argument("--gf", required=True, choices=["F", "lambert", "L", "S00", "S01", "S4", "S8"])
    s.add_argument("--alpha", default="1")
    s.add_argument("--at", required=True, help="coefficient index or lo..hi")
    s.add_argument("--m", type=int, default=1)
    s.add_argument("--k", type=int, default=0)
    s.add_argument("--s", type=int, default=1)
    s.add_argument("--order", type=int, help=f"truncation order (at most {SERIES_ORDER_CAP})")
    s.add_argument("--method", choices=[m.value for m in Method])
    s.add_argument("--variant", type=parse_variant, default="auto")
    s.add_argument("--format", choices=FORMATS, default="markdown")

    v = sub.add_parser("verify", help="verify one identity or all of them")
    v.add_argument("identity", help="identity id or 'all'")
    v.add_argument("--grid", help="comma-separated name=lo..hi overrides")
    v.add_argument("--variant", type=parse_variant, default="auto")
    v.add_argument("--strict", action="store_true", help="derived identities also decide the exit code")
    v.add_argument("--out", help="write the JSON report here ('-' for stdout)")
    v.add_argument("--deterministic", action="store_true", help="omit timings so reports are byte-identical")
    v.add_argument("--max-counterexamples", type=int, default=10)

    ls = sub.add_parser("list", help="list the identity catalog")
    ls.add_argument("what", choices=["identities"])
    ls.add_argument("--format", choices=FORMATS, default="markdown")
    return p


def main(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        if args.command == "verify":
            return cmd_verify(args, out)
        handler = {"compute": cmd_compute, "table": cmd_table, "series": cmd_series, "list": cmd_list}
        out.write(handler[args.command](args))
        return 0
    except (UsageError, GridError, ModeError, TruncationError) as exc:
        err.write(f"error: {exc}\n")
        return 2
    except SystemExit as exc:  # --help
        return int(exc.code or 0)


if __name__ == "__main__":
    sys.exit(main())
