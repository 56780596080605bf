"""Command line entry point: ``hodgerees <command> ...``."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Sequence

from . import curves
from .document import ParseError, parse_mhs_file
from .linalg import default_tolerance
from .mhs import InvalidStructure, alpha_from_tables, deligne_splitting, hodge_numbers, is_r_split
from .rees_chern import chern_rees_p2, mhs_filtrations
from .verify import PROPERTIES, run_verify

EXIT_OK, EXIT_USAGE, EXIT_INPUT, EXIT_PROPERTY = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _tol(args) -> float:
    if args.tol is not None:
        if not args.tol > 0:
            raise UsageError("--tol must be positive")
        return args.tol
    try:
        return default_tolerance()
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _grid(name: str, table, keys=None) -> list[str]:
    """A p-by-q table, p decreasing down the rows."""
    keys = [k for k, v in table.items() if v] if keys is None else keys
    if not keys:
        return [f"{name}: (all zero)"]
    ps = sorted({p for p, _ in keys})
    qs = sorted({q for _, q in keys})
    width = max(3, *(len(str(table.get((p, q), 0))) for p in ps for q in qs),
                *(len(str(q)) for q in qs))
    lines = [f"{name} (rows p, columns q):"]
    lines.append(" " * 6 + " ".join(str(q).rjust(width) for q in qs))
    for p in reversed(ps):
        cells = " ".join(str(table.get((p, q), 0)).rjust(width) for q in qs)
        lines.append(f"  {str(p).rjust(3)} {cells}")
    return lines


def _load(path: str):
    return parse_mhs_file(path)


def cmd_alpha(args) -> int:
    h = _load(args.file)
    print(f"alpha: {alpha_from_tables(hodge_numbers(h))}")
    return EXIT_OK


def report_text(h) -> str:
    hn = hodge_numbers(h)
    a = alpha_from_tables(hn)
    split = deligne_splitting(h)
    gr = {n: h.weight_step(n).dim - h.weight_step(n - 1).dim for n in h.weights()}
    gr_text = ", ".join(f"{n}:{d}" for n, d in gr.items() if d) or "none"
    lines = [f"dim: {h.ambient_dim}",
             f"field: {'gaussian_rational' if h.backend.exact else 'complex_f64'}",
             f"Gr^W dims: {gr_text}"]
    lines += _grid("h^{p,q}", hn.h)
    lines += _grid("t^{p,q}", hn.t)
    lines += _grid("f^{p,q} = dim F^p ∩ F̄^q", hn.f, list(hn.f))
    lines += _grid("dim I^{p,q}", {k: s.dim for k, s in split.items()})
    ch = chern_rees_p2(*mhs_filtrations(h))
    lines.append(f"R-split: {'true' if is_r_split(h) else 'false'}")
    lines.append(f"alpha: {a}")
    lines.append(f"c1 of the Rees bundle: {ch.c1w2}")
    lines.append(f"c2 == alpha: {'true' if -ch.ch2w4 == a else 'false'} (c2 = {-ch.ch2w4})")
    return "\n".join(lines)


def cmd_report(args) -> int:
    print(report_text(_load(args.file)))
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.cases < 0:
        raise UsageError("--cases must be nonnegative")
    only = None
    if args.only:
        only = [s.strip() for s in args.only.split(",") if s.strip()]
        unknown = [s for s in only if s not in PROPERTIES]
        if unknown:
            raise UsageError(f"unknown properties: {', '.join(unknown)}; "
                             f"choose from {', '.join(PROPERTIES)}")
    indices = [args.case] if args.case is not None else None
    report = run_verify(args.seed, args.cases, only=only, workers=args.workers,
                        case_indices=indices)
    print(report.summary())
    return EXIT_OK if report.ok else EXIT_PROPERTY


def _points(text: str) -> list:
    if text is None or not text.strip():
        return []
    return [curves.parse_point(t) for t in text.split(",")]


def _pairs(text: str) -> list:
    if text is None or not text.strip():
        return []
    out = []
    for chunk in text.split(","):
        if chunk.count(":") != 1:
            raise UsageError(f"pair {chunk!r} must look like P:Q")
        p, q = chunk.split(":")
        out.append((curves.parse_point(p), curves.parse_point(q)))
    return out


def _curve_report(pm, t11: int, formula: int, rank: int) -> str:
    lines = [f"period matrix ({pm.shape[0]}x{pm.shape[1]}):", str(pm.entries) if pm.shape[0] else "(empty)",
             f"t^1,1: {t11}",
             f"alpha1 (formula): {formula}",
             f"alpha1 (rank): {rank}",
             f"agree: {'yes' if formula == rank else 'no'}"]
    return "\n".join(lines)


def cmd_curve0(args) -> int:
    tol = _tol(args)
    try:
        cfg = curves.Genus0Config(_points(args.punctures), _pairs(args.pairs))
    except curves.DegenerateConfiguration:
        raise
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    pm = curves.period_matrix_genus0(cfg, tol)
    print(_curve_report(pm, curves.t11_from_periods(pm, tol), curves.alpha1_genus0(cfg, tol),
                        curves.alpha1_genus0_rank(cfg, tol)))
    return EXIT_OK


def cmd_curve1(args) -> int:
    tol = _tol(args)
    try:
        tau = curves.parse_point(args.tau)
        if tau is curves.INF:
            raise ValueError("tau must be a finite complex number")
        cfg = curves.Genus1Config(complex(tau), _points(args.punctures), _pairs(args.pairs))
    except curves.DegenerateConfiguration:
        raise
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    pm = curves.period_matrix_genus1(cfg, tol)
    print(_curve_report(pm, curves.t11_from_periods(pm, tol), curves.alpha1_genus1(cfg, tol),
                        curves.alpha1_genus1_rank(cfg, tol)))
    return EXIT_OK


def cmd_scan(args) -> int:
    tol = _tol(args)
    if args.steps < 2:
        raise UsageError("--steps must be at least 2")
    if not (args.re_min < args.re_max and args.im_min < args.im_max):
        raise UsageError("empty rectangle")
    rows = curves.scan_m04(args.re_min, args.re_max, args.im_min, args.im_max, args.steps,
                           tol, workers=args.workers)
    text = curves.scan_csv(rows)
    try:
        Path(args.out).write_text(text)
    except OSError as exc:
        print(f"error: cannot write {args.out}: {exc.strerror}", file=sys.stderr)
        return EXIT_INPUT
    zero = sum(1 for r in rows if r.flag == "ok" and r.alpha1 == 0)
    skipped = sum(1 for r in rows if r.flag != "ok")
    print(f"wrote {len(rows)} rows to {args.out} ({zero} with alpha1 = 0, {skipped} degenerate)")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="hodgerees", description="R-splitting level of mixed Hodge structures")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("alpha", help="print alpha of an MHS document")
    p.add_argument("file")
    p.set_defaults(func=cmd_alpha)

    p = sub.add_parser("report", help="Hodge numbers, Deligne splitting and alpha of a document")
    p.add_argument("file")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("verify", help="run the seeded property suite")
    p.add_argument("--seed", default="1")
    p.add_argument("--cases", type=int, default=200)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--only", help="comma separated property names")
    p.add_argument("--case", type=int, help="run a single case index")
    p.set_defaults(func=cmd_verify)

    for name, func, help_ in (("curve0", cmd_curve0, "punctured nodal rational curve"),
                              ("curve1", cmd_curve1, "punctured nodal elliptic curve")):
        p = sub.add_parser(name, help=help_)
        if name == "curve1":
            p.add_argument("--tau", required=True)
        p.add_argument("--punctures", default="")
        p.add_argument("--pairs", default="", help="P:Q,P:Q,...")
        p.add_argument("--tol", type=float)
        p.set_defaults(func=func)

    p = sub.add_parser("scan-m04", help="alpha1 over a grid of the fourth point")
    p.add_argument("--re-min", type=float, default=-1.0)
    p.add_argument("--re-max", type=float, default=2.0)
    p.add_argument("--im-min", type=float, default=-1.5)
    p.add_argument("--im-max", type=float, default=1.5)
    p.add_argument("--steps", type=int, default=41)
    p.add_argument("--out", default="scan_m04.csv")
    p.add_argument("--tol", type=float)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_scan)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"hodgerees {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ParseError, InvalidStructure, curves.DegenerateConfiguration) as exc:
        print(f"hodgerees {args.command}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"hodgerees {args.command}: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
