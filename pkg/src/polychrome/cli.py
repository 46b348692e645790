"""Command-line front end.

Exit codes: 0 polychromatic / SAT (or UNSAT under ``--mode refute``) / bound
computed; 1 verified false / the other search verdict; 2 usage error;
3 search budget exhausted.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from polychrome import __version__
from polychrome.bounds import (
    BOUND_CSV_HEADER,
    BoundReport,
    binomial_upper,
    max_product_lower,
    pig_bound,
    qd_closed_form,
)
from polychrome.colorings import (
    CATALOG,
    catalog,
    catalog_target,
    format_coloring,
    parse_coloring,
    parse_params,
)
from polychrome.core import PunctureSpec
from polychrome.grid import apply_puncture, format_sequence, shape_sequence
from polychrome.search import (
    EXHAUSTED,
    MODES,
    SAT,
    Budget,
    SimpleSearchProblem,
    search_concrete,
    search_simple,
)
from polychrome.verify import TargetSpec, sequence_color_table, verify_concrete, verify_residues

EXIT_OK, EXIT_FALSE, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3

WINDOW_NOTE = (
    "note: a simple-search verdict covers only colorings restricted to the window; "
    "extending UNSAT to all colorings of large cubes relies on the reduction to simple "
    "colorings, and search-concrete checks a fixed Q_n directly"
)


class UsageError(Exception):
    def __init__(self, flag: str, message: str):
        super().__init__(f"{flag}: {message}")
        self.flag = flag


def _ints(text: str, flag: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise UsageError(flag, f"expected comma-separated integers, got {text!r}") from None


def _load_coloring(args, required: bool = True):
    """The coloring chosen by --catalog/--params or --coloring, plus its default target."""
    if args.catalog and args.coloring:
        raise UsageError("--coloring", "give either --catalog or --coloring, not both")
    if args.catalog:
        try:
            params = parse_params(args.params or "")
            return catalog(args.catalog, **params), catalog_target(args.catalog, **params)
        except ValueError as exc:
            raise UsageError("--params" if args.catalog in CATALOG else "--catalog", str(exc)) from None
    if args.coloring:
        try:
            return parse_coloring(Path(args.coloring).read_text()), None
        except (OSError, ValueError) as exc:
            raise UsageError("--coloring", str(exc)) from None
    if args.params:
        raise UsageError("--params", "parameters need --catalog")
    if required:
        raise UsageError("--catalog", "a coloring source is required (--catalog or --coloring)")
    return None, None


def _target(args, default=None) -> TargetSpec:
    if args.target:
        try:
            return TargetSpec.parse(args.target)
        except ValueError as exc:
            raise UsageError("--target", str(exc)) from None
    if default is not None:
        return TargetSpec(*default)
    raise UsageError("--target", "a target is required")


def _header(args) -> str:
    skip = {"func", "format", "out"}
    config = " ".join(f"{k}={v}" for k, v in sorted(vars(args).items()) if k not in skip and v not in (None, False))
    return f"# polychrome {__version__}\n# config: {config}\n"


def _emit(args, body: str, csv: str | None = None) -> None:
    if args.format == "csv" and csv is not None:
        text = csv
    elif args.format == "report":
        text = _header(args) + body
        if csv is not None:
            text += "\n" + csv
    else:
        text = body
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


# -- commands --------------------------------------------------------------------

def cmd_verify_residue(args) -> int:
    coloring, default = _load_coloring(args)
    target = _target(args, default)
    try:
        verdict = verify_residues(target, coloring, wlog=args.wlog, method=args.method)
    except ValueError as exc:
        raise UsageError("--wlog" if args.wlog else "--coloring", str(exc)) from None
    _emit(args, verdict.to_text())
    return EXIT_OK if verdict else EXIT_FALSE


def cmd_verify_concrete(args) -> int:
    coloring, default = _load_coloring(args)
    target = _target(args, default)
    if args.n is None:
        raise UsageError("--n", "concrete verification needs the host dimension")
    try:
        verdict = verify_concrete(args.n, target, coloring, workers=args.workers)
    except ValueError as exc:
        raise UsageError("--n", str(exc)) from None
    _emit(args, verdict.to_text())
    return EXIT_OK if verdict else EXIT_FALSE


def cmd_bound(args) -> int:
    d = args.d
    target = None
    if args.target:
        target = _target(args)
        d = target.d
    if d is None:
        raise UsageError("--d", "a dimension is required (--d or --target)")
    i = target.i if target else args.i
    try:
        if args.kind == "closed":
            report = BoundReport("closed", qd_closed_form(d), d, 1)
        elif args.kind == "binom":
            report = BoundReport("binom", binomial_upper(d, i), d, i)
        elif args.kind == "maxprod":
            report = BoundReport("maxprod", max_product_lower(d, i), d, i)
        else:
            gaps = _ints(args.gaps, "--gaps") if args.gaps else (0,) * (d + 1)
            if len(gaps) != d + 1:
                raise UsageError("--gaps", f"need {d + 1} entries for d={d}")
            seq = shape_sequence(gaps, i)
            if args.puncture:
                seq = apply_puncture(seq, PunctureSpec.parse(args.puncture))
            report = pig_bound(seq)
    except ValueError as exc:
        raise UsageError(f"--{args.kind}", str(exc)) from None
    csv = f"{BOUND_CSV_HEADER}\n{report.csv_row()}\n"
    body = f"{report.value}\n" if args.format == "text" else report.to_line() + "\n"
    _emit(args, body, csv)
    return EXIT_OK


def _search_exit(status: str, mode: str) -> int:
    if status == EXHAUSTED:
        return EXIT_BUDGET
    wanted = status != SAT if mode == "refute" else status == SAT
    return EXIT_OK if wanted else EXIT_FALSE


def _budget(args) -> Budget:
    return Budget(max_nodes=args.max_nodes, max_seconds=args.budget)


def cmd_search_simple(args) -> int:
    target = _target(args)
    fixed = []
    for tok in filter(None, (args.fix or "").split(",")):
        cell, sep, color = tok.partition("=")
        if not sep or not cell.isdigit():
            raise UsageError("--fix", f"expected cell=color with a digit string cell, got {tok!r}")
        fixed.append((tuple(int(ch) for ch in cell), int(color)))
    if args.window is None and args.n is None:
        raise UsageError("--window", "give --window or --n")
    window = args.window if args.window is not None else args.n - target.i
    try:
        problem = SimpleSearchProblem(target.d, target.i, args.r, window, tuple(fixed), target.puncture)
    except ValueError as exc:
        raise UsageError("--window", str(exc)) from None
    out = search_simple(problem, mode=args.mode, cap=args.cap, budget=_budget(args), seed=args.seed)
    print(f"seconds: {out.seconds:.3f}", file=sys.stderr)
    body = out.to_text() + WINDOW_NOTE + "\n"
    if args.format != "csv":
        for k, sol in enumerate(out.solutions, start=1):
            body += f"\n# solution {k}\n" + format_coloring(sol)
    if args.solutions_dir:
        folder = Path(args.solutions_dir)
        folder.mkdir(parents=True, exist_ok=True)
        for k, sol in enumerate(out.solutions, start=1):
            (folder / f"solution-{k:04d}.txt").write_text(format_coloring(sol))
    csv = "status,solutions,nodes\n" + f"{out.status},{len(out.solutions)},{out.nodes}\n"
    _emit(args, body, csv)
    return _search_exit(out.status, args.mode)


def cmd_search_concrete(args) -> int:
    target = _target(args)
    if args.n is None:
        raise UsageError("--n", "concrete search needs the host dimension")
    try:
        out = search_concrete(args.n, target, args.r, budget=_budget(args), mode=args.mode,
                              cap=args.cap, seed=args.seed)
    except ValueError as exc:
        raise UsageError("--n", str(exc)) from None
    print(f"seconds: {out.seconds:.3f}", file=sys.stderr)
    body = out.to_text()
    if out.solutions and args.format != "csv":
        from polychrome.core import enumerate_subcubes

        body += "\n# first solution (pattern -> color)\n"
        for p, c in zip(enumerate_subcubes(args.n, target.i), out.solutions[0]):
            body += f"{p} -> {c}\n"
    csv = "status,solutions,nodes\n" + f"{out.status},{len(out.solutions)},{out.nodes}\n"
    _emit(args, body, csv)
    return _search_exit(out.status, args.mode)


def cmd_table(args) -> int:
    coloring, default = _load_coloring(args)
    target = _target(args, default)
    try:
        table = sequence_color_table(target, coloring)
    except ValueError as exc:
        raise UsageError("--coloring", str(exc)) from None
    # CSV is the only rendering of a table
    _emit(args, table.to_csv())
    return EXIT_OK


def cmd_shapes(args) -> int:
    coloring, _ = _load_coloring(args, required=False)
    gaps = _ints(args.gaps, "--gaps")
    if len(gaps) < 2:
        raise UsageError("--gaps", "need at least two gap entries")
    try:
        seq = shape_sequence(gaps, args.i)
        if args.puncture:
            seq = apply_puncture(seq, PunctureSpec.parse(args.puncture))
    except ValueError as exc:
        raise UsageError("--puncture" if args.puncture else "--gaps", str(exc)) from None
    text = format_sequence(seq)
    if args.format in ("svg", "report"):
        from polychrome.plotting import render_sequence

        try:
            svg = render_sequence(seq, coloring)
        except ValueError as exc:
            raise UsageError("--i", str(exc)) from None
        if args.format == "svg":
            if args.out:
                Path(args.out).write_text(svg)
            else:
                sys.stdout.write(svg)
            return EXIT_OK
        if not args.out:
            raise UsageError("--out", "the report format writes files; give an output path")
        figure = Path(args.out).with_suffix(".svg")
        figure.write_text(svg)
        text += f"figure: {figure.name}\n"
    cells = "cell,level,multiplicity\n" + "".join(
        f"{' '.join(map(str, c))},{sum(c)},{m}\n" for c, m in sorted(seq.cell_multiset().items())
    )
    _emit(args, text, cells)
    return EXIT_OK


def cmd_catalog(args) -> int:
    rows = []
    for e in CATALOG.values():
        rows.append((e.name, " ".join(e.params) or "-", e.summary))
    body = "".join(f"{n:10} params: {p:4} {s}\n" for n, p, s in rows)
    csv = "name,params,summary\n" + "".join(f"{n},{p},\"{s}\"\n" for n, p, s in rows)
    _emit(args, body, csv)
    return EXIT_OK


# -- parser ----------------------------------------------------------------------

def _add_common(p: argparse.ArgumentParser, coloring: bool = True) -> None:
    if coloring:
        p.add_argument("--catalog", help="built-in coloring name (see the catalog command)")
        p.add_argument("--params", help="catalog parameters, e.g. k=3")
        p.add_argument("--coloring", metavar="FILE", help="coloring spec file")
    p.add_argument("--format", choices=("text", "csv", "svg", "report"), default="text")
    p.add_argument("--out", help="write output here instead of stdout")


def _add_search(p: argparse.ArgumentParser) -> None:
    p.add_argument("--target", required=True, help="e.g. d=3,i=2,puncture=none")
    p.add_argument("--r", type=int, required=True, help="palette size")
    p.add_argument("--mode", choices=MODES, default="first")
    p.add_argument("--cap", type=int, help="stop after this many solutions (mode all)")
    p.add_argument("--budget", type=float, help="wall-clock limit in seconds")
    p.add_argument("--max-nodes", type=int, help="search node limit")
    p.add_argument("--seed", type=int, help="perturb the variable order")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="polychrome", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"polychrome {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify-residue", help="check a periodic coloring over all gap residues")
    _add_common(p)
    p.add_argument("--target", help="defaults to the catalog coloring's own target")
    p.add_argument("--wlog", action="store_true", help="pin the outer gaps to zero")
    p.add_argument("--method", choices=("search", "enumerate"), default="search")
    p.set_defaults(func=cmd_verify_residue)

    p = sub.add_parser("verify-concrete", help="brute force over every embedding in Q_n")
    _add_common(p)
    p.add_argument("--target")
    p.add_argument("--n", type=int)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_verify_concrete)

    p = sub.add_parser("bound", help="closed-form, counting and binomial bounds")
    _add_common(p, coloring=False)
    kind = p.add_mutually_exclusive_group(required=True)
    for name in ("pig", "binom", "maxprod", "closed"):
        kind.add_argument(f"--{name}", dest="kind", action="store_const", const=name)
    p.add_argument("--d", type=int)
    p.add_argument("--i", type=int, default=1)
    p.add_argument("--target")
    p.add_argument("--gaps", help="gap vector for --pig (default all zeros)")
    p.add_argument("--puncture", help="deletion for --pig, e.g. vertex:[111] or edge:[0*1]")
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("search-simple", help="search simple colorings on a window of cells")
    _add_common(p, coloring=False)
    _add_search(p)
    p.add_argument("--window", type=int, help="highest cell level")
    p.add_argument("--n", type=int, help="use the window of Q_n (level n - i)")
    p.add_argument("--fix", help="pinned cells, e.g. 000=0,100=1")
    p.add_argument("--solutions-dir", help="write each solution as a coloring spec file")
    p.set_defaults(func=cmd_search_simple)

    p = sub.add_parser("search-concrete", help="search raw colorings of a fixed Q_n")
    _add_common(p, coloring=False)
    _add_search(p)
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_search_concrete)

    p = sub.add_parser("table", help="per-residue color sets of each shape (CSV)")
    _add_common(p)
    p.add_argument("--target")
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("shapes", help="shape sequence of one embedding, as text, CSV or SVG")
    _add_common(p)
    p.add_argument("--gaps", required=True, help="host gap vector, e.g. 0,1,0,2")
    p.add_argument("--i", type=int, default=1)
    p.add_argument("--puncture", help="e.g. vertex:[0110]")
    p.set_defaults(func=cmd_shapes)

    p = sub.add_parser("catalog", help="list the built-in colorings")
    _add_common(p, coloring=False)
    p.set_defaults(func=cmd_catalog)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"polychrome: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
