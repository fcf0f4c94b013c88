"""``jp`` command-line front end.

Exit codes: 0 success, 1 a reported check failed, 2 usage error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from fractions import Fraction

import mpmath

from .conjugates import NoValidN, RationalInput, embedding_pair, jp_conjugate_trace, theorem3_report, tail_max
from .convergence import WindowInvalid, bounds_report, classify_ideal_convergence, delta_trace, determinant_report
from .exactnum import ExactNumError, format_element, format_fraction, parse_point
from .expansion import Digit, Inadmissible, NotInDomain, State, expand, trace_to_dict, verify_identities
from .geometry import EnumerationTooLarge, OutOfParameterDomain, TOutOfRange, cell, cell_measure, enumerate_and_decay, polygon_area

EXIT_OK, EXIT_CHECK, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational: {text!r}") from exc


def _word(text: str) -> list[Digit]:
    """``"0/1,1/2"`` -> [(0,1), (1,2)]: each digit written ``a/b``."""
    out = []
    for part in text.split(","):
        try:
            a, b = part.strip().split("/")
            out.append(Digit(int(a), int(b)))
        except ValueError as exc:
            raise argparse.ArgumentTypeError(f"bad digit {part!r}; expected a/b") from exc
    return out


def _dump(obj, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(obj, indent=2, sort_keys=False)
    raise UsageError(f"format {fmt!r} is not available for this command")


def _csv(rows: list[list]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerows(rows)
    return buf.getvalue()


def _point(args) -> State:
    try:
        alpha, beta = parse_point(args.point)
    except ExactNumError as exc:
        raise UsageError(str(exc)) from exc
    try:
        s = State(alpha, beta)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    if not s.in_domain():
        raise NotInDomain(f"point ({format_element(alpha)}, {format_element(beta)}) is outside 0 <= alpha <= beta, 1 <= beta")
    return s


# ---------------------------------------------------------------------------


def cmd_expand(args) -> tuple[int, str]:
    t = expand(_point(args), horizon=args.horizon)
    rep = verify_identities(t)
    code = EXIT_OK if rep.ok else EXIT_CHECK
    if args.format == "csv":
        rows = [["n", "a", "b", "r", "p", "q", "alpha", "beta"]]
        for n, d in enumerate(t.digits):
            s = t.states[n]
            rows.append([n, d.a, d.b, t.rn(n), t.pn(n), t.qn(n), format_element(s.alpha), format_element(s.beta)])
        return code, _csv(rows)
    out = trace_to_dict(t)
    out["identities"] = {"checked": rep.count(), "failures": [[k, n] for k, n, _ in rep.failures]}
    return code, _dump(out, args.format)


def cmd_diagnose(args) -> tuple[int, str]:
    t = expand(_point(args), horizon=args.horizon)
    d = delta_trace(t)
    rep = classify_ideal_convergence(t, d, window=args.window)
    ids = verify_identities(t)
    dets = determinant_report(t, d)
    bnd = bounds_report(t, d)
    out = {
        "length": t.length,
        "termination": t.termination.to_dict(),
        "report": rep.to_dict(),
        "identities": {"checked": ids.count(), "failures": [[k, n] for k, n, _ in ids.failures]},
        "determinants": {"checked": len(dets), "failures": [[k, n] for k, n, ok in dets if not ok]},
        "inequalities": {
            "checked": bnd.count(),
            "skipped": len(bnd.skipped),
            "failures": [[c.lemma, c.which, c.n, c.case] for c in bnd.failures],
        },
        "delta_closed_forms": d.ok,
    }
    bad = ids.failures or any(not ok for _, _, ok in dets) or bnd.failures or not d.ok
    return (EXIT_CHECK if bad else EXIT_OK), _dump(out, args.format)


def cmd_conjugates(args) -> tuple[int, str]:
    p = _point(args)
    t = expand(p, horizon=args.horizon)
    fld = p.alpha.field
    if fld.degree == 1:
        raise UsageError("a rational point has no nontrivial embedding")
    try:
        ea, eb = embedding_pair(fld, args.embedding)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    c = jp_conjugate_trace(t, ea, eb)
    d = delta_trace(t)
    qty = {str(n): mpmath.nstr(abs(v), 10) for n, v in enumerate(c.quantity) if v is not None}
    out = {"embedding": args.embedding, "alpha_root": ea.root_index, "beta_root": eb.root_index}
    try:
        rep = theorem3_report(t, d, c)
        out["report"] = rep.to_dict()
    except NoValidN as exc:
        out["report"] = {"verdict": "no-valid-N", "reason": str(exc), "tail_max": mpmath.nstr(tail_max(c), 10)}
    out["quantity_abs"] = qty
    out["checks"] = {"checked": len(c.checks), "failures": [[k, n] for k, n, ok in c.checks if not ok]}
    return (EXIT_OK if c.ok else EXIT_CHECK), _dump(out, args.format)


def cmd_cells(args) -> tuple[int, str]:
    c = cell(args.word)
    area = polygon_area(c).value
    s, full = cell_measure(args.word, args.t)
    ok = area == full.value
    if args.format == "csv":
        rows = [["vertex", "x", "y"]] + [[i, format_fraction(x), format_fraction(y)] for i, (x, y) in enumerate(c.vertices)]
        return (EXIT_OK if ok else EXIT_CHECK), _csv(rows)
    out = {
        "word": [[d.a, d.b] for d in c.word],
        "kind": c.kind,
        "vertices": [[format_fraction(x), format_fraction(y)] for x, y in c.vertices],
        "polygon_area": format_fraction(area),
        "t": format_fraction(args.t),
        "strip_measure": format_fraction(s.value),
        "cell_measure": format_fraction(full.value),
        "agree": ok,
    }
    return (EXIT_OK if ok else EXIT_CHECK), _dump(out, args.format)


def cmd_decay(args) -> tuple[int, str]:
    rep = enumerate_and_decay(args.m, args.depth)
    rows = []
    for n, v, bound, ok in rep.rows():
        rows.append((n, v, bound, ok))
    code = EXIT_OK if rep.ok else EXIT_CHECK
    if args.format == "csv":
        out = [["n", "measure_num", "measure_den", "bound_num", "bound_den", "pass"]]
        # the bound on row n is the ceiling (1 - 1/m^2)|D_m(n-1)| that row n must stay under
        for n, v, _, _ in rows:
            if n == 0:
                out.append([0, v.numerator, v.denominator, "", "", str(rep.base_ok).lower()])
            else:
                b = rep.bounds[n - 1]
                out.append([n, v.numerator, v.denominator, b.numerator, b.denominator, str(rep.passes[n - 1] and rep.identity[n - 1]).lower()])
        return code, _csv(out)
    obj = {
        "m": rep.m,
        "depth": rep.depth,
        "levels": [
            {
                "n": n,
                "measure": format_fraction(v),
                "words": rep.word_counts[n],
                "bound": None if n == 0 else format_fraction(rep.bounds[n - 1]),
                "pass": rep.base_ok if n == 0 else (rep.passes[n - 1] and rep.identity[n - 1]),
            }
            for n, v, _, _ in rows
        ],
        "ok": rep.ok,
    }
    return code, _dump(obj, args.format)


def cmd_selftest(args) -> tuple[int, str]:
    from .selftest import run

    ok, lines = run()
    if args.format == "json":
        return (EXIT_OK if ok else EXIT_CHECK), _dump({"ok": ok, "lines": lines}, "json")
    return (EXIT_OK if ok else EXIT_CHECK), "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="jp", description="Exact Jacobi-Perron expansions, diagnostics and cell geometry.")
    p.add_argument("--precision-cap", type=int, default=None, help="maximum working precision in bits (overrides JP_PRECISION_CAP)")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, formats=("json",), default="json"):
        sp.add_argument("--format", choices=formats, default=default)
        sp.add_argument("--precision-cap", type=int, default=argparse.SUPPRESS)

    e = sub.add_parser("expand", help="expand a point and emit the trace")
    e.add_argument("--point", required=True)
    e.add_argument("--horizon", type=int, default=60)
    common(e, ("json", "csv"))

    d = sub.add_parser("diagnose", help="identity, inequality and convergence diagnostics")
    d.add_argument("--point", required=True)
    d.add_argument("--horizon", type=int, default=60)
    d.add_argument("--window", type=_fraction, default=Fraction(1, 2))
    common(d)

    c = sub.add_parser("conjugates", help="conjugate tracking and the vanishing quantity")
    c.add_argument("--point", required=True)
    c.add_argument("--embedding", choices=("real2", "complex", "complex-conj", "complex-swap"), default="complex")
    c.add_argument("--horizon", type=int, default=60)
    common(c)

    g = sub.add_parser("cells", help="vertices and measures of one cell")
    g.add_argument("--word", type=_word, required=True)
    g.add_argument("--t", type=_fraction, default=Fraction(1))
    common(g, ("json", "csv"))

    y = sub.add_parser("decay", help="exact measure decay of bounded-digit cells")
    y.add_argument("--m", type=int, required=True)
    y.add_argument("--depth", type=int, required=True)
    common(y, ("csv", "json"), "csv")

    s = sub.add_parser("selftest", help="run the built-in invariant suite")
    common(s, ("text", "json"), "text")
    return p


COMMANDS = {
    "expand": cmd_expand,
    "diagnose": cmd_diagnose,
    "conjugates": cmd_conjugates,
    "cells": cmd_cells,
    "decay": cmd_decay,
    "selftest": cmd_selftest,
}


def run(argv: list[str] | None = None, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    try:
        args = build_parser().parse_args(argv)
        for name in ("horizon", "depth"):
            if getattr(args, name, 0) < 0:
                raise UsageError(f"--{name} must be non-negative")
        if getattr(args, "m", 2) < 2:
            raise UsageError("--m must be at least 2")
        if args.precision_cap is not None:
            if args.precision_cap < 64:
                raise UsageError("--precision-cap must be at least 64")
            os.environ["JP_PRECISION_CAP"] = str(args.precision_cap)
        code, text = COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"jp: usage error: {exc}", file=err)
        return EXIT_USAGE
    except (NotInDomain, Inadmissible, OutOfParameterDomain, TOutOfRange, WindowInvalid, RationalInput, EnumerationTooLarge) as exc:
        print(f"jp: {type(exc).__name__}: {exc}", file=err)
        return EXIT_USAGE
    out.write(text if text.endswith("\n") else text + "\n")
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
