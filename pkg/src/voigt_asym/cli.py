"""Command-line front end.

Subcommands: ``eval`` (one point, any method), ``table1`` / ``table2``
(regenerate the built-in regression tables, optionally checking them against
the frozen expected values), ``scan`` (CSV of estimate errors over an angle
grid, for plotting), and ``coeffs`` (dump the expansion coefficients at one
(phi, alpha)).

Exit codes: 0 success, 1 table check mismatch, 2 domain error, 3 precision
failure, 64 usage error. Warnings go to stderr and do not affect the exit
code. Output is deterministic for fixed flags: values are printed through
a fixed-precision decimal formatter in every mode.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
from dataclasses import dataclass

from . import tables
from .coefficients import A2k, B2k, Bhat2k, c_of_phi
from .exceptions import DomainError, PrecisionError
from .expansions import (
    THETA_COLLAR_OVER_PI,
    TruncationPlan,
    algebraic_partial_sums,
    evaluate_via_expansion,
    optimal_truncation,
    theorem1,
    theorem2,
)
from .numerics import DEFAULT_CONTEXT, PrecisionContext, mp_context, pochhammer
from .oracle import (
    VoigtArgument,
    reduce_to_first_quadrant,
    remainder_exact,
    voigt_exact_erfc,
    voigt_quadrature,
)

ENV_PRECISION = "VOIGT_PRECISION"
EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_DOMAIN = 2
EXIT_PRECISION = 3
EXIT_USAGE = 64


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def format_mantissa_exp(value, sig: int, signed: bool = True) -> str:
    """Render ``value`` as mantissa(exponent), e.g. +1.73161445(-7)."""
    mctx = mp_context(sig + 15)
    v = mctx.mpf(value)
    if v == 0:
        return ("+" if signed else "") + "0." + "0" * (sig - 1) + "(+0)"
    sign = "-" if v < 0 else ("+" if signed else "")
    a = abs(v)
    expo = int(mctx.floor(mctx.log10(a)))
    mant = a / mctx.mpf(10) ** expo
    q = mctx.mpf(10) ** (sig - 1)
    mant = mctx.floor(mant * q + mctx.mpf(1) / 2) / q
    if mant >= 10:
        mant /= 10
        expo += 1
    mant_s = mctx.nstr(mant, sig, strip_zeros=False)
    if "." not in mant_s:
        mant_s += "." + "0" * (sig - 1)
    frac = sig - 1
    head, tail = mant_s.split(".")
    mant_s = head + "." + (tail + "0" * frac)[:frac]
    return "%s%s(%+d)" % (sign, mant_s, expo)


def _numstr(v, digits: int) -> str:
    mctx = mp_context(digits + 5)
    return mctx.nstr(mctx.mpf(v), digits)


@dataclass(frozen=True)
class OutputRecord:
    """One evaluation, ready for serialization in any output mode."""

    x: object
    y: object
    r: object
    theta_over_pi: object
    method: str
    K: object
    L: object
    err_estimate: object
    k_terms: object = None
    m: object = None
    alpha: object = None

    def fields(self, digits: int):
        def s(v):
            return "" if v is None else _numstr(v, digits)

        return [
            ("x", s(self.x)),
            ("y", s(self.y)),
            ("r", s(self.r)),
            ("theta_over_pi", s(self.theta_over_pi)),
            ("method", self.method),
            ("K", s(self.K)),
            ("L", s(self.L)),
            ("err_estimate", s(self.err_estimate)),
            ("k_terms", self.k_terms),
            ("m", self.m),
            ("alpha", None if self.alpha is None else s(self.alpha)),
        ]

    def to_json(self, digits: int) -> str:
        return json.dumps(dict(self.fields(digits)))

    def to_csv(self, digits: int) -> str:
        pairs = self.fields(digits)
        header = ",".join(name for name, _ in pairs)
        row = ",".join("" if v is None else str(v) for _, v in pairs)
        return header + "\n" + row

    def to_table(self, digits: int) -> str:
        lines = []
        for name, v in self.fields(digits):
            if name in ("K", "L", "err_estimate") and v != "":
                v = format_mantissa_exp(getattr(self, name), min(digits, 12))
            lines.append("%-14s %s" % (name, "" if v is None else v))
        return "\n".join(lines)


def _resolve_digits(args) -> int:
    if getattr(args, "precision", None) is not None:
        return args.precision
    env = os.environ.get(ENV_PRECISION)
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise _UsageError(
                "%s must be an integer digit count, got %r" % (ENV_PRECISION, env)
            )
    return DEFAULT_CONTEXT.digits


def _parse_point(args, ctx: PrecisionContext):
    cartesian = args.x is not None or args.y is not None
    polar = args.r is not None or args.theta_over_pi is not None
    if cartesian and polar:
        raise _UsageError("give either --x/--y or --r/--theta-over-pi, not both")
    if cartesian:
        if args.x is None or args.y is None:
            raise _UsageError("--x and --y must be given together")
        arg, sign_K, sign_L = reduce_to_first_quadrant(args.x, args.y, ctx)
        mctx = ctx.mp()
        return arg, sign_K, sign_L, mctx.mpf(args.x), mctx.mpf(args.y)
    if args.r is None or args.theta_over_pi is None:
        raise _UsageError("--r and --theta-over-pi must be given together")
    mctx = ctx.mp()
    theta = mctx.mpf(args.theta_over_pi) * mctx.pi
    arg = VoigtArgument.from_polar(args.r, theta, ctx)
    return arg, 1, 1, arg.x, arg.y


def cmd_eval(args) -> int:
    ctx = PrecisionContext(digits=_resolve_digits(args))
    arg, sign_K, sign_L, x_in, y_in = _parse_point(args, ctx)
    mctx = ctx.mp()
    method = args.method
    k_terms = None
    m_used = None
    alpha = None
    if method == "oracle":
        ev = voigt_exact_erfc(arg, ctx)
    elif method == "quadrature":
        ev = voigt_quadrature(arg, ctx)
    elif method == "algebraic":
        plan = (
            optimal_truncation(arg.r, ctx)
            if args.m is None
            else TruncationPlan.for_m(args.m, arg.r, ctx)
        )
        ev = algebraic_partial_sums(arg, plan.m, ctx)
        # accuracy is limited by the first omitted term plus the
        # exponentially small remainder the sum cannot see
        r = mctx.convert(arg.r)
        nxt = _next_term_magnitude(mctx, plan.m, r)
        ev = dataclasses.replace(
            ev, err_estimate=ctx.mp().mpf(nxt + mctx.exp(-r * r))
        )
        m_used, alpha = plan.m, plan.alpha
    elif method in ("theorem1", "theorem2"):
        variant = "eq41" if method == "theorem1" else "eq42"
        k_terms = args.k_terms
        ev = evaluate_via_expansion(arg, variant, k_terms, args.m, ctx)
        plan = (
            optimal_truncation(arg.r, ctx)
            if args.m is None
            else TruncationPlan.for_m(args.m, arg.r, ctx)
        )
        m_used, alpha = plan.m, plan.alpha
    else:
        raise _UsageError("unknown method %r" % (method,))

    out = ctx.mp()
    record = OutputRecord(
        x=x_in, y=y_in, r=arg.r, theta_over_pi=out.mpf(arg.theta) / out.pi,
        method=method, K=out.mpf(sign_K * ev.K), L=out.mpf(sign_L * ev.L),
        err_estimate=ev.err_estimate, k_terms=k_terms, m=m_used, alpha=alpha,
    )
    digits = ctx.digits
    if args.format == "csv":
        print(record.to_csv(digits))
    elif args.format == "table":
        print(record.to_table(digits))
    else:
        print(record.to_json(digits))
    return EXIT_OK


def _next_term_magnitude(mctx, m: int, r):
    # magnitude of algebraic term k = m: (1/2)_m / (sqrt(pi) r^{2m+1})
    return mctx.convert(pochhammer(0.5, m)) / (mctx.sqrt(mctx.pi) * r ** (2 * m + 1))


def _table1_cells(ctx: PrecisionContext):
    mctx = ctx.mp()
    angles = [mctx.mpf(t) * mctx.pi for t in tables.TABLE1_ANGLES]
    args_ = [VoigtArgument.from_polar(tables.TABLE1_R, th, ctx) for th in angles]
    plan = TruncationPlan.for_m(tables.TABLE1_M, tables.TABLE1_R, ctx)
    rows = {}
    for kt in sorted(tables.TABLE1_ROWS):
        e1 = theorem1(args_[0], plan, kt, ctx)
        e2 = theorem2(args_[1], plan, kt, ctx)
        rows[kt] = (e1.Khat, e1.Lhat, e2.Khat, e2.Lhat)
    foot_evals = [remainder_exact(a, tables.TABLE1_M, ctx) for a in args_]
    foot = (foot_evals[0].K, foot_evals[0].L, foot_evals[1].K, foot_evals[1].L)
    return rows, foot, plan


def _table2_cells(ctx: PrecisionContext):
    import warnings as _w

    mctx = ctx.mp()
    plan = TruncationPlan.for_m(tables.TABLE2_M, tables.TABLE2_R, ctx)
    rows = {}
    with _w.catch_warnings():
        _w.simplefilter("ignore")
        for key in tables.TABLE2_ANGLES:
            th = mctx.mpf(key) * mctx.pi
            a = VoigtArgument.from_polar(tables.TABLE2_R, th, ctx)
            exact = remainder_exact(a, tables.TABLE2_M, ctx)
            e1 = theorem1(a, plan, tables.TABLE2_K_TERMS, ctx)
            e2 = theorem2(a, plan, tables.TABLE2_K_TERMS, ctx)
            cells = []
            for est, ref, is_L in ((e1.Khat, exact.K, False), (e1.Lhat, exact.L, True),
                                   (e2.Khat, exact.K, False), (e2.Lhat, exact.L, True)):
                if is_L and a.x == 0:
                    cells.append(None)
                else:
                    cells.append(abs(est - ref) / abs(ref))
            rows[key] = tuple(cells)
    return rows, plan


def _check_cells(computed, expected, sig: int, describe) -> list:
    mismatches = []
    for key in expected:
        for i, want in enumerate(expected[key]):
            got = computed[key][i]
            if want is None:
                continue
            tol = tables.tolerance_last_digit(want, sig)
            if abs(float(got) - float(want)) > tol * 1.0000001:
                mismatches.append(
                    "%s: computed %s expected %s (tolerance %.1e)"
                    % (describe(key, i), format_mantissa_exp(got, sig), want, tol)
                )
    return mismatches


_T1_COLS = ("Khat@0.1", "Lhat@0.1", "Khat@0.375", "Lhat@0.375")
_T2_COLS = ("eq41 Khat", "eq41 Lhat", "eq42 Khat", "eq42 Lhat")


def cmd_table1(args) -> int:
    ctx = PrecisionContext(digits=_resolve_digits(args))
    rows, foot, plan = _table1_cells(ctx)
    sig = tables.TABLE1_SIG

    if args.format == "json":
        payload = {
            "r": tables.TABLE1_R,
            "m": tables.TABLE1_M,
            "alpha": _numstr(plan.alpha, 6),
            "columns": list(_T1_COLS),
            "rows": [
                {"k": kt - 1, "cells": [_numstr(v, sig) for v in rows[kt]]}
                for kt in sorted(rows)
            ],
            "exact": [_numstr(v, sig) for v in foot],
        }
        print(json.dumps(payload))
    elif args.format == "csv":
        print("k," + ",".join(_T1_COLS))
        for kt in sorted(rows):
            print("%d,%s" % (kt - 1, ",".join(_numstr(v, sig) for v in rows[kt])))
        print("exact," + ",".join(_numstr(v, sig) for v in foot))
    else:
        print(
            "remainders at r = %s, m = %d (theta/pi = %s via eq41, %s via eq42)"
            % (tables.TABLE1_R, tables.TABLE1_M, *tables.TABLE1_ANGLES)
        )
        print("%-6s %s" % ("k", "  ".join("%-16s" % c for c in _T1_COLS)))
        for kt in sorted(rows):
            print(
                "%-6d %s"
                % (kt - 1, "  ".join("%-16s" % format_mantissa_exp(v, sig) for v in rows[kt]))
            )
        print(
            "%-6s %s"
            % ("exact", "  ".join("%-16s" % format_mantissa_exp(v, sig) for v in foot))
        )

    if args.check:
        expected = dict(tables.TABLE1_ROWS)
        computed = dict(rows)
        expected["exact"] = tables.TABLE1_FOOT
        computed["exact"] = foot

        def describe(key, i):
            row = "exact" if key == "exact" else "k=%d" % (key - 1)
            return "table1 %s %s" % (row, _T1_COLS[i])

        mismatches = _check_cells(computed, expected, sig, describe)
        if mismatches:
            for line in mismatches:
                print(line, file=sys.stderr)
            return EXIT_CHECK_FAILED
    return EXIT_OK


def cmd_table2(args) -> int:
    ctx = PrecisionContext(digits=_resolve_digits(args))
    rows, plan = _table2_cells(ctx)
    sig = tables.TABLE2_SIG

    def cell_str(v, table_mode):
        if v is None:
            return "-"
        return format_mantissa_exp(v, sig, signed=False) if table_mode else _numstr(v, sig)

    if args.format == "json":
        payload = {
            "r": tables.TABLE2_R,
            "m": tables.TABLE2_M,
            "k_terms": tables.TABLE2_K_TERMS,
            "columns": list(_T2_COLS),
            "rows": [
                {"theta_over_pi": key, "cells": [
                    None if v is None else _numstr(v, sig) for v in rows[key]]}
                for key in tables.TABLE2_ANGLES
            ],
        }
        print(json.dumps(payload))
    elif args.format == "csv":
        print("theta_over_pi," + ",".join(c.replace(" ", "_") for c in _T2_COLS))
        for key in tables.TABLE2_ANGLES:
            print("%s,%s" % (key, ",".join(cell_str(v, False) for v in rows[key])))
    else:
        print(
            "relative errors of the remainder estimates at r = %s, m = %d, "
            "%d terms" % (tables.TABLE2_R, tables.TABLE2_M, tables.TABLE2_K_TERMS)
        )
        print("%-10s %s" % ("theta/pi", "  ".join("%-12s" % c for c in _T2_COLS)))
        for key in tables.TABLE2_ANGLES:
            print(
                "%-10s %s"
                % (key, "  ".join("%-12s" % cell_str(v, True) for v in rows[key]))
            )

    if args.check:
        def describe(key, i):
            return "table2 theta/pi=%s %s" % (key, _T2_COLS[i])

        mismatches = _check_cells(rows, tables.TABLE2_ROWS, sig, describe)
        if mismatches:
            for line in mismatches:
                print(line, file=sys.stderr)
            return EXIT_CHECK_FAILED
    return EXIT_OK


def cmd_scan(args) -> int:
    if args.n < 2:
        raise _UsageError("--n must be at least 2")
    ctx = PrecisionContext(digits=_resolve_digits(args))
    mctx = ctx.mp()
    top = mctx.mpf(1) / 2
    if args.variant == "eq41":
        top = top - mctx.mpf(THETA_COLLAR_OVER_PI)
    plan = optimal_truncation(args.r, ctx)

    import warnings as _w

    lines = ["theta_over_pi,rel_err_K,rel_err_L"]
    with _w.catch_warnings():
        _w.simplefilter("ignore")
        for j in range(args.n):
            frac = top * j / (args.n - 1)
            a = VoigtArgument.from_polar(args.r, frac * mctx.pi, ctx)
            exact = remainder_exact(a, plan.m, ctx)
            est = (
                theorem1(a, plan, args.k_terms, ctx)
                if args.variant == "eq41"
                else theorem2(a, plan, args.k_terms, ctx)
            )
            rel_K = abs(est.Khat - exact.K) / abs(exact.K)
            rel_L = (
                "nan"
                if a.x == 0
                else _numstr(abs(est.Lhat - exact.L) / abs(exact.L), 6)
            )
            lines.append("%s,%s,%s" % (_numstr(frac, 8), _numstr(rel_K, 6), rel_L))
    print("\n".join(lines))
    return EXIT_OK


def cmd_coeffs(args) -> int:
    ctx = PrecisionContext(digits=_resolve_digits(args))
    mctx = ctx.mp()
    phi = mctx.mpf(args.phi)
    alpha = mctx.mpf(args.alpha)
    if args.kmax < 0 or args.kmax > 5:
        raise DomainError("--kmax must lie in [0, 5], got %d" % (args.kmax,))
    c = c_of_phi(phi, ctx)
    rows = []
    for k in range(args.kmax + 1):
        A = None if phi == 0 else A2k(phi, alpha, k, ctx)
        B = B2k(phi, alpha, k, ctx)
        Bh = Bhat2k(phi, alpha, k, ctx)
        rows.append((k, A, B, Bh))

    digits = min(ctx.digits, 12)

    def pair(v):
        if v is None:
            return None
        return {"re": _numstr(v.real, digits), "im": _numstr(v.imag, digits)}

    if args.format == "json":
        payload = {
            "phi": _numstr(phi, digits),
            "alpha": _numstr(alpha, digits),
            "c": pair(mctx.mpc(c)),
            "coefficients": [
                {"k": k, "A": pair(A), "B": pair(B), "Bhat": pair(Bh)}
                for k, A, B, Bh in rows
            ],
        }
        print(json.dumps(payload))
    else:
        def fmt(v):
            if v is None:
                return "%-30s" % "(singular at phi = 0)"
            return "%-30s" % (
                "%s %s" % (_numstr(v.real, digits), _numstr(v.imag, digits))
            )

        print("phi    %s" % _numstr(phi, digits))
        print("alpha  %s" % _numstr(alpha, digits))
        print("c(phi) %s %s" % (_numstr(mctx.mpc(c).real, digits), _numstr(mctx.mpc(c).imag, digits)))
        print("%-3s %-30s %-30s %-30s" % ("k", "A_2k (re im)", "B_2k (re im)", "Bhat_2k (re im)"))
        for k, A, B, Bh in rows:
            print("%-3d %s %s %s" % (k, fmt(A), fmt(B), fmt(Bh)))
    return EXIT_OK


def build_parser() -> _Parser:
    parser = _Parser(prog="voigt-asym", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--precision", type=int, default=None,
                       help="working decimal digits (default 40, or $%s)" % ENV_PRECISION)

    p_eval = sub.add_parser("eval", help="evaluate (K, L) at one point")
    p_eval.add_argument("--x", default=None)
    p_eval.add_argument("--y", default=None)
    p_eval.add_argument("--r", default=None)
    p_eval.add_argument("--theta-over-pi", default=None)
    p_eval.add_argument(
        "--method", default="oracle",
        choices=("oracle", "quadrature", "algebraic", "theorem1", "theorem2"),
    )
    p_eval.add_argument("--k-terms", type=int, default=3)
    p_eval.add_argument("--m", type=int, default=None,
                        help="override the optimal truncation order")
    p_eval.add_argument("--format", default="json", choices=("json", "csv", "table"))
    add_common(p_eval)
    p_eval.set_defaults(func=cmd_eval)

    for name, fn in (("table1", cmd_table1), ("table2", cmd_table2)):
        p = sub.add_parser(name, help="regenerate built-in table %s" % name[-1])
        p.add_argument("--check", action="store_true",
                       help="compare against the frozen expected values")
        p.add_argument("--format", default="table", choices=("table", "csv", "json"))
        add_common(p)
        p.set_defaults(func=fn)

    p_scan = sub.add_parser("scan", help="CSV of estimate errors over an angle grid")
    p_scan.add_argument("--r", required=True)
    p_scan.add_argument("--n", type=int, default=11)
    p_scan.add_argument("--variant", default="eq42", choices=("eq41", "eq42"))
    p_scan.add_argument("--k-terms", type=int, default=3)
    add_common(p_scan)
    p_scan.set_defaults(func=cmd_scan)

    p_c = sub.add_parser("coeffs", help="dump expansion coefficients at (phi, alpha)")
    p_c.add_argument("--phi", required=True)
    p_c.add_argument("--alpha", required=True)
    p_c.add_argument("--kmax", type=int, default=2)
    p_c.add_argument("--format", default="table", choices=("table", "json"))
    add_common(p_c)
    p_c.set_defaults(func=cmd_coeffs)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except _UsageError as exc:
        print("usage error: %s" % (exc,), file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        # malformed numeric literals surface here from the parsing layer
        print("usage error: %s" % (exc,), file=sys.stderr)
        return EXIT_USAGE
    except PrecisionError as exc:
        print("precision failure: %s" % (exc,), file=sys.stderr)
        return EXIT_PRECISION
    except DomainError as exc:
        print("domain error: %s" % (exc,), file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
