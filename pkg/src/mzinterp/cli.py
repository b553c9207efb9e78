"""Command-line front end: ``mzinterp {psi,g,zeta,stuffle,delannoy,verify}``.

Exit status is 0 on success, 2 on a usage error and 1 when the evaluation
itself fails (domain, region or convergence), in which case a JSON error
object is written to standard error.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import re
import sys
import time
from fractions import Fraction
from typing import Sequence

from .combinatorics import DelannoyTable
from .g_function import (
    GEvalStrategy,
    g_eval,
    g_explicit,
    g_newton,
    g_recursive,
    g_series_lt1,
)
from .kernel import EvalResult, Method, MZError
from .mellin import QuadratureSpec, psi_auto, psi_mellin
from .quasi_shuffle import ADDITIVE, MULTIPLICATIVE, elements, harmonic_product, render
from .verify import SUITES, run_suite
from .zeta_series import SeriesConfig, psi_series, psi_shift_w, zeta, zeta_truncated

TOL_ENV = "MZINTERP_TOL"
DEFAULT_TOL = 1e-12

_NUM = r"(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?(?:/\d+)?"
_COMPLEX = re.compile(rf"^(?P<re>[+-]?{_NUM})?(?:(?P<sign>[+-])(?P<im>{_NUM})?[ij])?$")
_PURE_IM = re.compile(rf"^(?P<sign>[+-])?(?P<im>{_NUM})?[ij]$")


def _real(text: str) -> float:
    return float(Fraction(text)) if "/" in text else float(text)


def parse_complex(text: str) -> complex:
    """``RE``, ``RE+IMi``, ``RE-IMi`` or ``IMi``; parts may be ``p/q``."""
    t = text.strip().replace(" ", "")
    m = _PURE_IM.match(t)
    if m and t[-1] in "ij":
        im = _real(m.group("im")) if m.group("im") else 1.0
        return complex(0.0, -im if m.group("sign") == "-" else im)
    m = _COMPLEX.match(t)
    if not t or not m or m.group("re") is None:
        raise argparse.ArgumentTypeError(f"not a complex literal: {text!r}")
    re_part = _real(m.group("re"))
    if m.group("sign") is None:
        return complex(re_part, 0.0)
    im = _real(m.group("im")) if m.group("im") else 1.0
    return complex(re_part, -im if m.group("sign") == "-" else im)


def parse_tuple(text: str) -> tuple[complex, ...]:
    if text.strip() in ("", "()"):
        return ()
    return tuple(parse_complex(part) for part in text.split(","))


def parse_rational_tuple(text: str) -> tuple[Fraction, ...]:
    if text.strip() in ("", "()"):
        return ()
    try:
        return tuple(Fraction(part.strip()) for part in text.split(","))
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational tuple: {text!r}") from exc


def _positive_float(text: str) -> float:
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _default_tol() -> float:
    raw = os.environ.get(TOL_ENV)
    if raw is None:
        return DEFAULT_TOL
    try:
        v = float(raw)
    except ValueError:
        v = -1.0
    if not v > 0:
        raise ValueError(f"{TOL_ENV} must be a positive decimal, got {raw!r}")
    return v


# -- output ----------------------------------------------------------------


def _result_dict(res: EvalResult, elapsed_ms: float | None) -> dict:
    return {
        "value": {"re": res.value.real, "im": res.value.imag},
        "abs_error": res.abs_error,
        "method": res.method.value,
        "work": res.work,
        "elapsed_ms": elapsed_ms,
    }


def _emit_result(res: EvalResult, fmt: str, elapsed_ms: float | None, out) -> None:
    data = _result_dict(res, elapsed_ms)
    if fmt == "json":
        out.write(json.dumps(data) + "\n")
    elif fmt == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["re", "im", "abs_error", "method", "work", "elapsed_ms"])
        w.writerow([repr(res.value.real), repr(res.value.imag), repr(res.abs_error),
                    res.method.value, res.work, "" if elapsed_ms is None else elapsed_ms])
    else:
        v = res.value
        out.write(f"{v.real!r}{'+' if v.imag >= 0 else '-'}{abs(v.imag)!r}i"
                  f"  (abs_error {res.abs_error:.3g}, method {res.method.value})\n")


def _timed(fn):
    t0 = time.perf_counter()
    res = fn()
    return res, 1000.0 * (time.perf_counter() - t0)


# -- subcommands -------------------------------------------------------------


def _cmd_psi(args) -> EvalResult:
    tol = args.tol
    cfg = SeriesConfig(tol=min(tol, 1e-13))
    quad = QuadratureSpec(target_tol=max(tol, 1e-10)) if args.method in ("mellin", "shift") else None
    if args.method == "auto":
        return psi_auto(args.s, args.w, tol)
    if args.method == "series":
        return psi_series(args.s, args.w, cfg)
    if args.method == "mellin":
        return psi_mellin(args.s, args.w, quad)
    return psi_shift_w(args.s, args.w, lambda s, w: psi_mellin(s, w, quad) if s else
                       EvalResult(1.0, 0.0, Method.EXACT, 0))


def _cmd_g(args) -> EvalResult:
    strat = GEvalStrategy(series_tol=min(args.tol, 1e-12))
    m = args.method
    if m == "auto":
        return g_eval(args.q, args.w, strat)
    if m == "series":
        return g_series_lt1(args.q, args.w, args.tol)
    if m == "newton":
        return g_newton(args.q, args.w, args.tol)
    if m == "explicit":
        return EvalResult(g_explicit(args.q, args.w), 0.0, Method.EXPLICIT, len(args.q) ** 2)
    return EvalResult(g_recursive(args.q, args.w, strat), 0.0, Method.RECURSION, 2 ** len(args.q))


def _cmd_zeta(args) -> EvalResult:
    if args.N is not None:
        return EvalResult(zeta_truncated(args.s, args.N), 0.0, Method.EXACT, args.N * len(args.s))
    return zeta(args.s, SeriesConfig(tol=min(args.tol, 1e-13)))


def _cmd_stuffle(args, out) -> None:
    flavor = ADDITIVE if args.flavor == "additive" else MULTIPLICATIVE
    prod = harmonic_product(elements(args.a, flavor), elements(args.b, flavor))
    if args.format == "json":
        terms = [{"tuple": [str(x) for x in key], "coeff": c} for key, c in prod.items()]
        out.write(json.dumps({"flavor": flavor, "terms": terms}) + "\n")
    elif args.format == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["coeff", "tuple"])
        for key, c in prod.items():
            w.writerow([c, "(" + ",".join(str(x) for x in key) + ")"])
    else:
        out.write(render(prod) + "\n")


def _cmd_delannoy(args, out) -> None:
    table = DelannoyTable.build(args.c, args.d)
    if args.table:
        rows = list(table.rows())
    else:
        rows = [(args.c, args.d, m, D) for m, D in table.row(args.c, args.d).items()]
    if not args.all_layers:
        rows = [r for r in rows if r[3] != 0]
    if args.format == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["c", "d", "m", "D"])
        w.writerows(rows)
    elif args.format == "json":
        out.write(json.dumps([dict(zip("cdmD", r)) for r in rows]) + "\n")
    else:
        for c, d, m, D in rows:
            prefix = f"c={c} d={d} " if args.table else ""
            out.write(f"{prefix}m={m}: {D}\n")


def _cmd_verify(args, out) -> int:
    report = run_suite(args.suite, args.seed, args.samples)
    data = report.as_dict()
    if args.format == "json":
        out.write(json.dumps(data) + "\n")
    elif args.format == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["identity", "samples", "max_deviation", "tolerance", "passed"])
        for c in data["checks"]:
            w.writerow([c["identity"], c["samples"], repr(c["max_deviation"]), c["tolerance"], c["passed"]])
    else:
        for c in data["checks"]:
            mark = "PASS" if c["passed"] else "FAIL"
            out.write(f"{mark}  {c['identity']}  samples={c['samples']}  "
                      f"max_dev={c['max_deviation']:.3g}  tol={c['tolerance']:g}\n")
        out.write(f"suite {data['suite']} (seed {data['seed']}): {'pass' if report.passed else 'FAIL'}\n")
    return 0 if report.passed else 1


# -- parser ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="mzinterp", description="Interpolated multiple zeta values.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, formats=("json", "csv", "plain"), default="json", tol=True):
        sp.add_argument("--format", choices=formats, default=default)
        if tol:
            sp.add_argument("--tol", type=_positive_float, default=None,
                            help=f"target tolerance (default ${TOL_ENV} or {DEFAULT_TOL:g})")
            sp.add_argument("--timing", action="store_true", help="report elapsed_ms")

    sp = sub.add_parser("psi", help="evaluate Psi(s; w)")
    sp.add_argument("--s", type=parse_tuple, required=True)
    sp.add_argument("--w", type=parse_complex, required=True)
    sp.add_argument("--method", choices=("auto", "series", "mellin", "shift"), default="auto")
    common(sp)

    sp = sub.add_parser("g", help="evaluate G(q; w)")
    sp.add_argument("--q", type=parse_tuple, required=True)
    sp.add_argument("--w", type=parse_complex, required=True)
    sp.add_argument("--method", choices=("auto", "explicit", "recursion", "series", "newton"), default="auto")
    common(sp)

    sp = sub.add_parser("zeta", help="multiple zeta value, or its truncation with --N")
    sp.add_argument("--s", type=parse_tuple, required=True)
    sp.add_argument("--N", type=int, default=None)
    common(sp)

    sp = sub.add_parser("stuffle", help="harmonic product of two tuples")
    sp.add_argument("--flavor", choices=("additive", "multiplicative"), required=True)
    sp.add_argument("--a", type=parse_rational_tuple, required=True)
    sp.add_argument("--b", type=parse_rational_tuple, required=True)
    common(sp, default="plain", tol=False)

    sp = sub.add_parser("delannoy", help="layer counts D^m(c, d)")
    sp.add_argument("--c", type=int, required=True)
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--table", action="store_true", help="all (c', d') up to (c, d)")
    sp.add_argument("--all-layers", action="store_true", help="include zero layers")
    common(sp, default="plain", tol=False)

    sp = sub.add_parser("verify", help="run a seeded identity suite")
    sp.add_argument("--suite", choices=tuple(SUITES) + ("all",), default="all")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--samples", type=int, default=20)
    common(sp, default="plain", tol=False)
    return p


_VALUE_FLAGS = {"--s", "--w", "--q", "--a", "--b", "--tol", "--N", "--c", "--d", "--seed", "--samples"}
_NEGATIVE = re.compile(r"^-[\d.]")


def _glue_negative_values(argv: Sequence[str]) -> list[str]:
    """Join ``--w -0.4+1.1i`` into ``--w=-0.4+1.1i`` so argparse does not
    mistake a negative complex literal for an option."""
    out: list[str] = []
    i = 0
    while i < len(argv):
        a = argv[i]
        if a in _VALUE_FLAGS and i + 1 < len(argv) and _NEGATIVE.match(argv[i + 1]):
            out.append(f"{a}={argv[i + 1]}")
            i += 2
            continue
        out.append(a)
        i += 1
    return out


def run(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    parser = build_parser()
    argv = _glue_negative_values(sys.argv[1:] if argv is None else list(argv))
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if getattr(args, "tol", "absent") is None:
        try:
            args.tol = _default_tol()
        except ValueError as exc:
            err.write(f"mzinterp: error: {exc}\n")
            return 2
    for name in ("c", "d", "N", "samples"):
        v = getattr(args, name, None)
        if v is not None and (v < 0 or (name == "samples" and v == 0)):
            parser.print_usage(err)
            err.write(f"mzinterp: error: --{name} out of range\n")
            return 2
    try:
        if args.command == "stuffle":
            _cmd_stuffle(args, out)
            return 0
        if args.command == "delannoy":
            _cmd_delannoy(args, out)
            return 0
        if args.command == "verify":
            return _cmd_verify(args, out)
        handler = {"psi": _cmd_psi, "g": _cmd_g, "zeta": _cmd_zeta}[args.command]
        res, ms = _timed(lambda: handler(args))
        _emit_result(res, args.format, round(ms, 3) if args.timing else None, out)
        return 0
    except (MZError, ValueError, ArithmeticError) as exc:
        payload = {"error": {"type": type(exc).__name__, "message": str(exc)}}
        best = getattr(exc, "best", None)
        if best is not None:
            payload["error"]["best"] = _result_dict(best, None)
        err.write(json.dumps(payload) + "\n")
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
