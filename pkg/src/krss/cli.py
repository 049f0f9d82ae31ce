"""Command-line front end.

Subcommands ``coeff``, ``bredon``, ``ss``, ``abutment`` and ``verify``.
Output goes to stdout or ``--out``; ``--figure`` additionally writes a
matplotlib rendering (PNG or PDF by suffix).  Exit codes: 0 ok, 1 a
verification failure, 2 a usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import acceptance, krtower as kt
from .bredon import BredonError, ro_graded
from .equivcw import CWError, parse_space
from .mackey import by_name
from .render import ChartStyle, RenderError, coefficient_table, page_chart, render, save_figure, table_chart

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

THEORY = {("hz", "pt"): "pt", ("hz", "orbit"): "orbit", ("hzet", "pt"): "etale", ("hzet", "orbit"): "orbit"}


class UsageError(Exception):
    pass


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def cmd_coeff(args) -> int:
    theory = THEORY[(args.theory, args.site)]
    if args.pmin > args.pmax or args.qmin > args.qmax:
        raise UsageError("empty window: need pmin <= pmax and qmin <= qmax")
    rows = coefficient_table(theory, args.pmin, args.pmax, args.qmin, args.qmax)
    title = f"H^{{p,q}}({args.site}) [{args.theory}]"
    chart = table_chart(rows, args.pmin, args.pmax, args.qmin, args.qmax, title)
    _emit(render(chart, args.format), args.out)
    if args.figure:
        save_figure(chart, args.figure)
    return EXIT_OK


def cmd_bredon(args) -> int:
    try:
        space = parse_space(args.space)
        m = by_name(args.mackey)
        g = ro_graded(space, args.p, args.q, m)
    except (CWError, BredonError, ValueError) as exc:
        raise UsageError(str(exc)) from exc
    _emit(f"{g}\n", args.out)
    return EXIT_OK


def _variant(args) -> kt.Variant:
    return kt.Variant.parse(args.variant, getattr(args, "mode", "stable"))


def cmd_ss(args) -> int:
    try:
        space = kt.Space.parse(args.space)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    run = kt.run_to_einfty(space, _variant(args), args.nmax)
    r = 4 if args.page == "inf" else int(args.page)
    page = run.page(r)
    label = "E_inf" if args.page == "inf" else f"E_{r}"
    title = f"{label} {space} {args.variant} {args.mode}"
    chart = page_chart(page, ChartStyle(args.indexing), title)
    text = render(chart, args.format)
    if args.format == "text":
        lines = [text.rstrip("\n")]
        for n in range(-args.nmax, args.nmax + 1):
            reason = run.certified.get(n)
            if reason is not None:
                lines.append(f"column {n}: not certified ({reason})")
        text = "\n".join(lines) + "\n"
    _emit(text, args.out)
    if args.figure:
        save_figure(chart, args.figure)
    return EXIT_OK


def cmd_abutment(args) -> int:
    try:
        space = kt.Space.parse(args.space)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    n = args.degree
    run = kt.run_to_einfty(space, _variant(args), max(12, abs(n)))
    col = run.columns[n]
    ref = kt.reference(space, n)
    reason = run.certified.get(n)
    if args.format == "json":
        doc = {
            "degree": n,
            "space": str(space),
            "variant": args.variant,
            "certified": reason is None,
            "reason": reason,
            "pieces": [{"weight": w, "p": p, "group": str(g)} for w, p, g in col.pieces],
            "reference": str(ref),
            "assembles": kt.matches(col, ref),
        }
        _emit(json.dumps(doc, indent=1) + "\n", args.out)
        return EXIT_OK
    lines = [f"degree {n} of {space} ({args.variant})"]
    if reason is not None:
        lines.append(f"indeterminate: {reason}")
    else:
        for w, p, g in col.pieces:
            lines.append(f"  filtration {p:>3}  weight {w:>3}  {g}")
        if not col.pieces:
            lines.append("  0")
        lines.append(f"reference {ref}: {'assembles' if kt.matches(col, ref) else 'does not assemble'}")
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def _report_figures(directory: str) -> list[str]:
    """Charts backing the report: the coefficient table and both pt sequences."""
    d = Path(directory)
    d.mkdir(parents=True, exist_ok=True)
    written = []
    rows = coefficient_table("pt", -8, 8, -8, 8)
    path = d / "coefficients_pt.png"
    save_figure(table_chart(rows, -8, 8, -8, 8, "H^{p,q}(pt)"), str(path))
    written.append(str(path))
    for v in (kt.KR, kt.KR_ET):
        run = kt.cached_run("pt", kt.Variant(v))
        for r in (3, 4):
            path = d / f"{v.lower()}_pt_e{r}.png"
            save_figure(page_chart(run.page(r), ChartStyle("adams"), f"E_{r} pt {v}"), str(path))
            written.append(str(path))
    return written


def cmd_verify(args) -> int:
    results = acceptance.run_suite(args.suite)
    if args.format == "json":
        text = acceptance.report_json(results)
    else:
        text = "".join(r.line() + f" ({r.seconds}s)\n" for r in results)
        text += f"suite {args.suite}: {'pass' if all(r.passed for r in results) else 'FAIL'}\n"
    _emit(text, args.out)
    if args.figures:
        for path in _report_figures(args.figures):
            print(f"figure {path}", file=sys.stderr)
    return EXIT_OK if all(r.passed for r in results) else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="krss", description="Bredon cohomology over Z/2 and the KR spectral sequence.")
    sub = ap.add_subparsers(dest="command", required=True)

    c = sub.add_parser("coeff", help="coefficient table of H^{p,q}")
    c.add_argument("--theory", choices=["hz", "hzet"], default="hz")
    c.add_argument("--site", choices=["pt", "orbit"], default="pt")
    for name, default in (("pmin", -8), ("pmax", 8), ("qmin", -8), ("qmax", 8)):
        c.add_argument(f"--{name}", type=int, default=default)
    c.add_argument("--format", choices=["text", "json", "svg"], default="text")
    c.add_argument("--out")
    c.add_argument("--figure", help="also write a PNG or PDF figure here")
    c.set_defaults(func=cmd_coeff)

    b = sub.add_parser("bredon", help="one RO(Z/2)-graded Bredon group")
    b.add_argument("--space", default="pt", help="S(p,q), orbit(E), smash(E,E) or pt")
    b.add_argument("--mackey", choices=["Z", "Zop", "A"], default="Z")
    b.add_argument("--p", type=int, required=True)
    b.add_argument("--q", type=int, required=True)
    b.add_argument("--out")
    b.set_defaults(func=cmd_bredon)

    s = sub.add_parser("ss", help="a page of the KR spectral sequence")
    s.add_argument("--space", default="pt", help="pt, orbit or S(c,d)")
    s.add_argument("--variant", choices=["kr", "kret"], default="kr")
    s.add_argument("--mode", choices=["stable", "unstable"], default="stable")
    s.add_argument("--page", choices=["2", "3", "4", "inf"], default="inf")
    s.add_argument("--format", choices=["text", "json", "svg"], default="text")
    s.add_argument("--indexing", choices=["serre", "adams"], default="serre")
    s.add_argument("--nmax", type=int, default=12, help="certify columns |n| <= nmax")
    s.add_argument("--out")
    s.add_argument("--figure", help="also write a PNG or PDF figure here")
    s.set_defaults(func=cmd_ss)

    a = sub.add_parser("abutment", help="associated graded of one column")
    a.add_argument("--space", default="pt")
    a.add_argument("--variant", choices=["kr", "kret"], default="kr")
    a.add_argument("--degree", type=int, required=True)
    a.add_argument("--format", choices=["text", "json"], default="text")
    a.add_argument("--out")
    a.set_defaults(func=cmd_abutment)

    v = sub.add_parser("verify", help="run acceptance suites")
    v.add_argument("suite", choices=list(acceptance.SUITES))
    v.add_argument("--format", choices=["text", "json"], default="text")
    v.add_argument("--out")
    v.add_argument("--figures", metavar="DIR", help="write report figures into DIR")
    v.set_defaults(func=cmd_verify)
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (UsageError, RenderError) as exc:
        print(f"krss {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
