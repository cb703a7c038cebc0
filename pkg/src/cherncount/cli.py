"""Command line front end.

Exit status is 0 on success, 1 on a domain error and 2 on a usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from . import chern, chow, fan, ideals, limits, pipeline
from .chow import format_rational
from .errors import CherncountError


def _emit(args, text: str, data) -> None:
    if args.json:
        print(json.dumps(data, indent=2))
    else:
        print(text)


def _ideal_arg(text: str) -> ideals.MonomialIdeal:
    return ideals.parse_ideal(text)


# -- ideal ---------------------------------------------------------------------


def cmd_ideal(args) -> None:
    I = _ideal_arg(args.expr)
    op = args.op
    if op == "show":
        _emit(args, I.render(), I.to_json())
    elif op == "colength":
        n = I.colength()
        _emit(args, str(n), {"colength": n})
    elif op == "closure":
        J = ideals.integral_closure(I)
        _emit(args, J.render(), J.to_json())
    elif op == "transform":
        J = ideals.quadratic_transform(I)
        _emit(args, J.render(), J.to_json())
    elif op == "measure":
        ms = ideals.measuring_sequence(I)
        _emit(args, f"kx={ms.kx} ky={ms.ky}", {"kx": ms.kx, "ky": ms.ky})
    elif op == "degenerate":
        J = limits.degeneration_ideal(I, args.dir)
        _emit(args, J.render(), J.to_json())
    elif op == "filtration":
        f = ideals.filtration(I)
        monos = f.quotient_monomials()
        lines = [f"{k:2d}  {K.render():<28}" + (f"  (+{monos[k - 1]})" if k else "")
                 for k, K in enumerate(f.chain)]
        data = {"chain": [K.to_json() for K in f.chain], "quotients": [[m.a, m.b] for m in monos]}
        _emit(args, "\n".join(lines), data)


def cmd_ideal_binary(args) -> None:
    I, J = _ideal_arg(args.left), _ideal_arg(args.right)
    if args.op == "sum":
        K = I + J
    elif args.op == "product":
        K = I * J
    else:
        m = limits.quotient_monomial(I, J)
        _emit(args, m.render(), {"monomial": [m.a, m.b]})
        return
    _emit(args, K.render(), K.to_json())


# -- fan -----------------------------------------------------------------------


def _fmt(q) -> str:
    return "-" if q is None else format_rational(q)


def _build_fan(text: str, complete: bool, case: str) -> fan.Fan2D:
    rays = fan.parse_rays(text)
    if complete:
        return fan.Fan2D.complete(rays)
    return fan.Fan2D.standard(rays, fan.FanCase(case))


def cmd_fan_info(args) -> None:
    rays = fan.parse_rays(args.rays)
    if args.complete:
        f = fan.Fan2D.complete(rays)
        diag = None
    else:
        diag = fan.validate_standard_fan(rays)
        if not diag.valid:
            if args.json:
                _emit(args, "", {"diagnostics": diag.to_json()})
            else:
                print("invalid standard fan:")
                for e in diag.errors:
                    print(f"  {e}")
            raise SystemExit(1)
        f = fan.Fan2D.standard(rays, fan.FanCase(args.case))
    matrix = fan.intersection_matrix(f)
    labels = [str(r) for r in f.rays]
    width = max(len(s) for s in labels) + 1
    lines = ["rays (clockwise): " + " ".join(labels), "intersection matrix:"]
    for lab, row in zip(labels, matrix):
        lines.append(lab.rjust(width) + " " + " ".join(_fmt(v).rjust(5) for v in row))
    data = {
        "rays": [list(r) for r in f.rays],
        "intersection_matrix": [[None if v is None else format_rational(v) for v in row] for row in matrix],
    }
    if diag is not None:
        lines.append("valid standard fan; bounding rays: " + (", ".join(str(r) for r in diag.bounding_rays) or "none"))
        lines.append("all adjacent cones unimodular" if diag.unimodular else
                     "singular cones: " + ", ".join(f"{a}{b}" for a, b in diag.singular_cones))
        lines.append("ray data (a,b): " + " ".join(f"{r}->{f.ray_data(r)}" for r in f.rays))
        data["diagnostics"] = diag.to_json()
        data["ray_data"] = [list(f.ray_data(r)) for r in f.rays]
    _emit(args, "\n".join(lines), data)


def cmd_fan_pullback(args) -> None:
    coarse = _build_fan(args.coarse, args.complete, args.case)
    fine = _build_fan(args.fine, args.complete, args.case)
    ray = fan.parse_rays(args.ray)
    if len(ray) != 1:
        raise fan.FanError("--ray takes exactly one ray")
    pb = fan.pullback_divisor(coarse, fine, ray[0])
    text = " + ".join(f"{format_rational(c)}*D{r}" for r, c in pb if c)
    _emit(args, text, {"pullback": [[list(r), format_rational(c)] for r, c in pb]})


# -- chow ----------------------------------------------------------------------


def cmd_chow(args) -> None:
    ring = chow.make_ring(args.ring)
    x = chow.parse_class(args.expr, ring)
    if args.op == "reduce":
        _emit(args, x.render(), {"ring": ring.kind.value, "class": x.render()})
    else:
        p = chow.integrate(x)
        _emit(args, p.render(), {"ring": ring.kind.value, "result": p.to_json()})


# -- table3 --------------------------------------------------------------------


def cmd_table3(args) -> None:
    if args.solve:
        cons = chern.build_constraints()
        sol = chern.solve_multiplicities(cons)
        lines = [f"{c.kind.value:<13} {c.label:<40} {c.render()}" for c in cons]
        lines.append("solution: " + ", ".join(f"{n}={format_rational(v)}" for n, v in sol.items()))
        data = {
            "constraints": [{"kind": c.kind.value, "label": c.label, "equation": c.render()} for c in cons],
            "solution": {n: format_rational(v) for n, v in sol.items()},
        }
        _emit(args, "\n".join(lines), data)
        return
    report = chern.table3_report()
    header = "row        " + " ".join(f"{str(c):>6}" for c in chern.TABLE3_COLUMNS) + "  check"
    lines = [header]
    for e in report:
        status = f"{e['check']}: {'ok' if e['ok'] else 'MISMATCH'}"
        lines.append(f"{e['key']:<10} " + " ".join(f"{v:>6}" for v in e["row"]) + f"  {status}")
    _emit(args, "\n".join(lines), {"columns": [str(c) for c in chern.TABLE3_COLUMNS], "rows": report})
    if not all(e["ok"] for e in report):
        raise SystemExit(1)


# -- count ---------------------------------------------------------------------


def cmd_count(args) -> None:
    indices = list(range(2, 9)) if args.all else [args.i]
    reports = [pipeline.count(i, args.ambient) if not args.all else pipeline.count(i) for i in indices]
    lines, data = [], []
    for r in reports:
        row = r.to_json()
        text = r.render()
        if args.surface:
            value = pipeline.specialize(r.result, args.surface, args.degree)
            row["specialized"] = {"surface": args.surface, "degree": args.degree, "value": format_rational(value)}
            text += f"\n  on {args.surface} with d={args.degree}: {format_rational(value)}"
        lines.append(text)
        data.append(row)
    _emit(args, "\n".join(lines), data if args.all else data[0])


# -- parser --------------------------------------------------------------------


def _direction(text: str) -> limits.DegenerationDirection:
    try:
        return limits.DegenerationDirection.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(add_help=False)
    top.add_argument("--json", action="store_true", help="machine-readable output")
    # Subcommands accept --json as well without resetting a value given earlier.
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help="machine-readable output")
    parser = argparse.ArgumentParser(prog="cherncount", description="Exact Chern-class counts of singular curves.",
                                     parents=[top])
    sub = parser.add_subparsers(dest="verb", required=True)

    p_ideal = sub.add_parser("ideal", help="monomial ideal calculus", parents=[common])
    isub = p_ideal.add_subparsers(dest="op", required=True)
    for op, helptext in [("show", "canonical form"), ("colength", "dimension of R/I"),
                         ("closure", "integral closure"), ("transform", "quadratic transform"),
                         ("measure", "measuring sequence"), ("filtration", "colength-one chain down to I")]:
        p = isub.add_parser(op, help=helptext, parents=[common])
        p.add_argument("expr")
        p.set_defaults(func=cmd_ideal)
    p = isub.add_parser("degenerate", help="flat limit under a substitution", parents=[common])
    p.add_argument("expr")
    p.add_argument("--dir", type=_direction, default=limits.DegenerationDirection.X_BY_Y2,
                   help="x+ty2 (default) or y+tx")
    p.set_defaults(func=cmd_ideal)
    for op in ("sum", "product", "quotient"):
        p = isub.add_parser(op, help=f"{op} of two ideals" if op != "quotient" else "monomial spanning I/J",
                            parents=[common])
        p.add_argument("left")
        p.add_argument("right")
        p.set_defaults(func=cmd_ideal_binary)

    p_fan = sub.add_parser("fan", help="toric fan calculus", parents=[common])
    fsub = p_fan.add_subparsers(dest="op", required=True)
    p = fsub.add_parser("info", help="intersection matrix and diagnostics", parents=[common])
    p.add_argument("--rays", required=True, help='e.g. "(-1,0);(0,1);(1,2);(0,-1)"')
    p.add_argument("--complete", action="store_true", help="treat the rays as a complete cyclic fan")
    p.add_argument("--case", choices=["M41", "M32"], default="M41")
    p.set_defaults(func=cmd_fan_info)
    p = fsub.add_parser("pullback", help="pull a divisor back to a subdivision", parents=[common])
    p.add_argument("--coarse", required=True)
    p.add_argument("--fine", required=True)
    p.add_argument("--ray", required=True)
    p.add_argument("--complete", action="store_true")
    p.add_argument("--case", choices=["M41", "M32"], default="M41")
    p.set_defaults(func=cmd_fan_pullback)

    p_chow = sub.add_parser("chow", help="Chow ring normal forms", parents=[common])
    csub = p_chow.add_subparsers(dest="op", required=True)
    for op in ("reduce", "integrate"):
        p = csub.add_parser(op, parents=[common])
        p.add_argument("--ring", required=True, choices=["S", "B", "C23", "C22P", "Y"])
        p.add_argument("expr")
        p.set_defaults(func=cmd_chow)

    p_tab = sub.add_parser("table3", help="first Chern classes over Y", parents=[common])
    g = p_tab.add_mutually_exclusive_group()
    g.add_argument("--verify", action="store_true", help="check every row (default)")
    g.add_argument("--solve", action="store_true", help="print the multiplicity system and its solution")
    p_tab.set_defaults(func=cmd_table3)

    p_count = sub.add_parser("count", help="the counts N_i", parents=[common])
    g = p_count.add_mutually_exclusive_group(required=True)
    g.add_argument("--i", type=int, choices=range(2, 9), metavar="{2..8}")
    g.add_argument("--all", action="store_true")
    p_count.add_argument("--ambient", choices=["S", "B", "C23", "Y"])
    p_count.add_argument("--surface", choices=["p2", "P2"])
    p_count.add_argument("--degree", type=int)
    p_count.set_defaults(func=cmd_count)
    return parser


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if getattr(args, "surface", None) and args.degree is None:
            parser.error("--surface needs --degree")
        if getattr(args, "all", False) and getattr(args, "ambient", None):
            parser.error("--ambient applies to a single --i")
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        args.func(args)
    except CherncountError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except SystemExit as exc:
        return int(exc.code or 0)
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
