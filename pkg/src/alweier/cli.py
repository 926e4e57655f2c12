"""Command line front end: ``alweier <subcommand> ...``."""

import argparse
import csv
import io
import json
import sys
from pathlib import Path

from . import __version__
from .arith import exact_divisors
from .fixedpoints import enumerate_fixed_points, nu
from .quadforms import class_number, reduced_forms
from .table1 import compare_row, format_point, load_table, table_levels
from .weierstrass import classify
from .wronskian import (
    DEFAULT_DIGITS,
    basis_path,
    default_basis_dir,
    default_truncation,
    load_basis,
    optimize_point,
    verdict,
)


def provenance(**extra):
    block = {"tool": "alweier", "version": __version__}
    block.update({k: v for k, v in extra.items() if v is not None})
    return block


def parse_range(text):
    try:
        lo, hi = (int(v) for v in text.split(".."))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected A..B, got {text!r}") from None
    if lo < 1 or hi < lo:
        raise argparse.ArgumentTypeError(f"empty or invalid range {text!r}")
    return lo, hi


def digits_arg(text):
    d = int(text)
    if d < 15:
        raise argparse.ArgumentTypeError("digits must be at least 15")
    return d


def _emit(text, output):
    if output:
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)


def _json(obj):
    return json.dumps(obj, indent=2) + "\n"


def cmd_class_number(args):
    _emit(_json({"d": args.d, "class_number": class_number(args.d)}), args.output)


def cmd_reduced_forms(args):
    forms = [list(f) for f in reduced_forms(args.d)]
    _emit(_json({"d": args.d, "forms": forms}), args.output)


def cmd_nu(args):
    report = nu(args.q, args.level).as_dict()
    report["provenance"] = provenance()
    _emit(_json(report), args.output)


def cmd_fixed_points(args):
    points = enumerate_fixed_points(args.level)
    if args.normalize:
        points = [optimize_point(p)[0] for p in points]
    out = {
        "level": args.level,
        "points": [p.as_dict(args.digits) for p in points],
        "provenance": provenance(digits=args.digits),
    }
    _emit(_json(out), args.output)


def _sweep_rows(lo, hi):
    for N in range(lo, hi + 1):
        for Q in exact_divisors(N):
            if Q > 1:
                yield classify(N, Q)


def _sweep_csv(lo, hi):
    buf = io.StringIO()
    buf.write(f"# alweier {__version__} sweep {lo}..{hi}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["N", "Q", "nu", "g0", "gplus", "status"])
    for v in _sweep_rows(lo, hi):
        writer.writerow([v.N, v.Q, v.nu, v.g0, str(v.g_plus), v.status.value])
    return buf.getvalue()


def cmd_classify(args):
    if args.sweep:
        _emit(_sweep_csv(*args.sweep), args.output)
        return
    if args.level is None:
        raise SystemExit("classify: give --level N or --sweep A..B")
    qs = [args.q] if args.q else [q for q in exact_divisors(args.level) if q > 1]
    out = {"verdicts": [classify(args.level, q).as_dict() for q in qs], "provenance": provenance()}
    _emit(_json(out), args.output)


def cmd_sweep(args):
    _emit(_sweep_csv(*args.range), args.output)


def cmd_wronskian(args):
    basis = load_basis(args.basis)
    if basis.level != args.level:
        raise ValueError(f"{args.basis} is a level {basis.level} basis, not level {args.level}")
    trunc = args.trunc or default_truncation(basis)
    points = enumerate_fixed_points(args.level)
    if not args.all_fixed_points:
        points = points[:1]
    results = []
    for pt in points:
        res = verdict(basis, pt, digits=args.digits, trunc=trunc)
        entry = {"form": list(pt.form)}
        entry.update(res.as_dict())
        results.append(entry)
    out = {
        "level": args.level,
        "points": results,
        "provenance": provenance(digits=args.digits, truncation=trunc, basis=Path(args.basis).name),
    }
    _emit(_json(out), args.output)


def table1_rows(basis_dir, digits, trunc):
    """One dict per exceptional level; verdicts where a basis file exists."""
    table = load_table()
    rows = []
    for N in table_levels():
        cmp = compare_row(N, table[N])
        path = basis_path(basis_dir, N) if basis_dir else None
        basis = load_basis(path) if path and path.exists() else None
        points = []
        for pt in cmp.computed:
            entry = {"form": list(pt.form), "x": str(pt.x), "y^2": str(pt.y_squared)}
            if basis is not None:
                res = verdict(basis, pt, digits=digits, trunc=trunc or default_truncation(basis))
                entry["verdict"] = res.verdict.value
            points.append(entry)
        rows.append({"N": N, "matches_printed": cmp.matched, "points": points})
    return rows


def cmd_table1(args):
    basis_dir = None if args.no_basis else (args.basis_dir or default_basis_dir())
    rows = table1_rows(basis_dir, args.digits, args.trunc)
    if args.format == "json":
        out = {"rows": rows, "provenance": provenance(digits=args.digits, truncation=args.trunc)}
        _emit(_json(out), args.output)
        return
    lines = [f"# alweier {__version__} table1 digits={args.digits} truncation={args.trunc or 'default'}"]
    for row in rows:
        cells = []
        for p in row["points"]:
            cell = f"{p['x']} + i*sqrt({p['y^2']})"
            if "verdict" in p:
                cell += f" [{p['verdict']}]"
            cells.append(cell)
        flag = "ok" if row["matches_printed"] else "MISMATCH"
        lines.append(f"{row['N']:>4} {flag:8} " + " ; ".join(cells))
    _emit("\n".join(lines) + "\n", args.output)


def build_parser():
    parser = argparse.ArgumentParser(prog="alweier", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_):
        p = sub.add_parser(name, help=help_)
        p.set_defaults(func=func)
        p.add_argument("-o", "--output", help="write to this file instead of stdout")
        return p

    p = add("class-number", cmd_class_number, "class number h(-d)")
    p.add_argument("--d", type=int, required=True)
    p = add("reduced-forms", cmd_reduced_forms, "reduced primitive forms of discriminant -d")
    p.add_argument("--d", type=int, required=True)

    p = add("nu", cmd_nu, "number of fixed points of W_Q on X_0(N)")
    p.add_argument("--level", type=int, required=True)
    p.add_argument("--q", type=int, required=True)

    p = add("fixed-points", cmd_fixed_points, "fixed points of W_N as CM points")
    p.add_argument("--level", type=int, required=True)
    p.add_argument("--digits", type=digits_arg, default=30)
    p.add_argument("--normalize", action="store_true", help="move each point to maximal height")

    p = add("classify", cmd_classify, "Weierstrass status of W_Q fixed points")
    p.add_argument("--level", type=int)
    p.add_argument("--q", type=int)
    p.add_argument("--sweep", type=parse_range, metavar="A..B")

    p = add("sweep", cmd_sweep, "CSV of (N, Q, nu, g0, gplus, status) over a range of levels")
    p.add_argument("range", type=parse_range, metavar="A..B")

    p = add("wronskian", cmd_wronskian, "numerical Wronskian test at W_N fixed points")
    p.add_argument("--level", type=int, required=True)
    p.add_argument("--basis", required=True)
    p.add_argument("--all-fixed-points", action="store_true")
    p.add_argument("--digits", type=digits_arg, default=DEFAULT_DIGITS)
    p.add_argument("--trunc", type=int)

    p = add("table1", cmd_table1, "regenerate the table of W_N fixed points at exceptional levels")
    p.add_argument("--basis-dir", help="directory of s2_<N>.txt basis files (default: shipped fixtures)")
    p.add_argument("--no-basis", action="store_true", help="skip the Wronskian column")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--digits", type=digits_arg, default=DEFAULT_DIGITS)
    p.add_argument("--trunc", type=int)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except (ValueError, ArithmeticError, OSError) as exc:
        print(f"alweier {args.command}: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
