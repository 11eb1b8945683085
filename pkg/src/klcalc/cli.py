"""Command-line front end.

Commands
    group     -- build a group and dump its basic statistics
    klpoly    -- the full KL coefficient table, or one entry
    cells     -- a cell decomposition with shapes, a-values, Duflo involutions
    classify  -- parabolic block classification: survivors, Cartan determinants
    character -- the graded class of one functor applied to one simple
    verify    -- run the verification suites
    report    -- classification as CSV files plus rendered figures

Output is UTF-8 JSON on stdout (``--format csv`` for delimited output) and
is byte-deterministic for fixed inputs and version: every list is in the
canonical element order and no timestamps are emitted (timing goes to
stderr).  Exit codes: 0 success, 1 verification failure, 2 usage error.

Elements on the command line are comma-separated 1-based generator indices
(``--theta 1,2,1``); with ``--perm`` they are read as one-line permutations
instead.  KL tables are cached per group descriptor under ``--cache-dir``
(default from $KLCALC_CACHE_DIR); ``verify`` deliberately ignores the cache
so that its tables always pass through the build-time self-checks.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from pathlib import Path

from . import __version__
from .cache import cache_load, cache_store, default_cache_dir
from .cells import a_value, cells_via_mu, duflo_involution
from .coxeter import (
    CoxeterGroup,
    CoxeterMatrix,
    GroupElement,
    InfiniteGroup,
    InvalidMatrix,
    TypeA,
    build_group,
)
from .grothendieck import engine
from .hecke import build_kl_table
from .laurent import render_poly
from .parablock import block_report, build_block
from .verify import SUITE_NAMES, run_suites


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InvalidMatrix, InfiniteGroup, ValueError) as exc:
        parser.exit(2, f"klcalc: {exc}\n")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="klcalc",
        description="exact Kazhdan-Lusztig combinatorics and parabolic block classification",
    )
    parser.add_argument("--version", action="version", version=f"klcalc {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, cache: bool = True) -> None:
        p.add_argument("--format", choices=("json", "csv"), default="json")
        if cache:
            p.add_argument("--cache-dir", default=default_cache_dir(),
                           help="directory for cached KL tables (default $KLCALC_CACHE_DIR)")

    p = sub.add_parser("group", help="group statistics")
    p.add_argument("--type", dest="kind", choices=("A",), default="A")
    p.add_argument("--rank", type=int)
    p.add_argument("--coxeter-matrix", metavar="FILE",
                   help="JSON file with the Coxeter matrix rows")
    common(p, cache=False)
    p.set_defaults(func=cmd_group)

    p = sub.add_parser("klpoly", help="KL coefficient table")
    p.add_argument("--rank", type=int, required=True)
    p.add_argument("--x")
    p.add_argument("--y")
    p.add_argument("--perm", action="store_true",
                   help="read --x/--y as one-line permutations")
    common(p)
    p.set_defaults(func=cmd_klpoly)

    p = sub.add_parser("cells", help="cell decomposition")
    p.add_argument("--rank", type=int, required=True)
    p.add_argument("--kind", choices=("left", "right", "two-sided"), required=True)
    common(p)
    p.set_defaults(func=cmd_cells)

    p = sub.add_parser("classify", help="surviving functors on a parabolic block")
    p.add_argument("--rank", type=int, required=True)
    p.add_argument("--parabolic", default="",
                   help="comma-separated generator indices (empty for the full block)")
    p.add_argument("--full-checks", action="store_true",
                   help="include the family independence check at any rank")
    common(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("character", help="graded class of a functor applied to a simple")
    p.add_argument("--rank", type=int, required=True)
    p.add_argument("--theta", required=True)
    p.add_argument("--simple", required=True)
    p.add_argument("--perm", action="store_true")
    common(p)
    p.set_defaults(func=cmd_character)

    p = sub.add_parser("verify", help="run verification suites")
    p.add_argument("--suite", choices=SUITE_NAMES, required=True)
    p.add_argument("--rank", type=int, default=4)
    p.add_argument("--threads", type=int, default=1)
    common(p, cache=False)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("report", help="write CSV tables and figures for a block")
    p.add_argument("--rank", type=int, required=True)
    p.add_argument("--parabolic", default="")
    p.add_argument("--out", required=True, metavar="DIR")
    p.add_argument("--cache-dir", default=default_cache_dir())
    p.set_defaults(func=cmd_report)

    return parser


# -- shared helpers -----------------------------------------------------------

def _emit(args, obj: dict, csv_rows: list[list] | None = None) -> None:
    if getattr(args, "format", "json") == "csv" and csv_rows is not None:
        writer = csv.writer(sys.stdout, lineterminator="\n")
        writer.writerows(csv_rows)
    else:
        json.dump(obj, sys.stdout, indent=2)
        sys.stdout.write("\n")


def _get_table(args, group: CoxeterGroup):
    cache_dir = getattr(args, "cache_dir", None)
    if cache_dir:
        table = cache_load(group, cache_dir)
        if table is not None:
            return table
    t0 = time.time()
    table = build_kl_table(group, verify=True)
    print(f"klcalc: built KL table for {group.size} elements "
          f"in {time.time() - t0:.2f}s", file=sys.stderr)
    if cache_dir:
        cache_store(table, cache_dir)
    return table


def _parse_word(group: CoxeterGroup, text: str, as_perm: bool) -> GroupElement:
    text = text.strip()
    if text in ("", "e"):
        return group.identity
    parts = [int(t) for t in text.split(",")]
    if as_perm:
        return group.element_from_perm(parts)
    return group.element_from_word(parts)


def _parse_subset(text: str) -> frozenset[int]:
    text = text.strip()
    if not text:
        return frozenset()
    return frozenset(int(t) for t in text.split(","))


# -- commands -----------------------------------------------------------------

def cmd_group(args) -> int:
    if args.coxeter_matrix:
        rows = json.loads(Path(args.coxeter_matrix).read_text())
        desc = CoxeterMatrix(tuple(tuple(int(x) for x in r) for r in rows))
    else:
        if not args.rank:
            raise ValueError("--rank is required for --type A")
        desc = TypeA(args.rank)
    group = build_group(desc)
    lengths: dict[int, int] = {}
    for i in range(group.size):
        lengths[group.length[i]] = lengths.get(group.length[i], 0) + 1
    obj = {
        "descriptor": desc.canonical_json(),
        "generators": group.rank,
        "order": group.size,
        "longest_element": repr(group.longest),
        "longest_length": group.longest.length,
        "length_histogram": [lengths[k] for k in sorted(lengths)],
    }
    rows = [["order", group.size], ["generators", group.rank],
            ["longest_element", repr(group.longest)],
            ["longest_length", group.longest.length]]
    _emit(args, obj, rows)
    return 0


def cmd_klpoly(args) -> int:
    group = build_group(TypeA(args.rank))
    table = _get_table(args, group)
    if (args.x is None) != (args.y is None):
        raise ValueError("--x and --y must be given together")
    entries = []
    if args.x is not None:
        x = _parse_word(group, args.x, args.perm)
        y = _parse_word(group, args.y, args.perm)
        entries.append((y, x))
    else:
        for xi in range(group.size):
            for yi in sorted(table.cols[xi]):
                entries.append((GroupElement(group, yi), GroupElement(group, xi)))
    ents = [
        {
            "y": repr(y),
            "x": repr(x),
            "h": str(table.h(y, x)),
            "mu": table.mu(y, x),
        }
        for (y, x) in sorted(entries, key=lambda p: (p[1].index, p[0].index))
    ]
    obj = {"rank": args.rank, "entries": ents}
    rows = [["y", "x", "h", "mu"]] + [[e["y"], e["x"], e["h"], e["mu"]] for e in ents]
    _emit(args, obj, rows)
    return 0


def cmd_cells(args) -> int:
    group = build_group(TypeA(args.rank))
    table = _get_table(args, group)
    decomp = cells_via_mu(table, args.kind)
    cells = []
    for k in range(len(decomp.cells)):
        members = decomp.cell_elements(k)
        entry = {
            "index": k,
            "elements": [repr(w) for w in members],
            "size": len(members),
            "shape": str(decomp.shape(k)),
            "a_value": a_value(members[0]),
        }
        if args.kind in ("left", "right"):
            entry["duflo"] = repr(duflo_involution(members))
        entry["leq_cells"] = [
            j for j in range(len(decomp.cells)) if decomp.leq_cells(k, j)
        ]
        cells.append(entry)
    obj = {"rank": args.rank, "kind": args.kind, "cells": cells}
    rows = [["index", "size", "shape", "a_value", "elements"]] + [
        [c["index"], c["size"], c["shape"], c["a_value"], " ".join(c["elements"])]
        for c in cells
    ]
    _emit(args, obj, rows)
    return 0


def cmd_classify(args) -> int:
    group = build_group(TypeA(args.rank))
    table = _get_table(args, group)
    block = build_block(table, _parse_subset(args.parabolic))
    include = True if args.full_checks else None
    report = block_report(block, include_independence=include)
    rows = [["shape", "size", "right_cell_size", "cartan_det"]] + [
        [c["shape"], c["size"], c["right_cell_size"], c["cartan_det"]]
        for c in report["cells"]
    ]
    _emit(args, report, rows)
    return 0 if all(c["pass"] for c in report["checks"]) else 1


def cmd_character(args) -> int:
    group = build_group(TypeA(args.rank))
    table = _get_table(args, group)
    eng = engine(table)
    x = _parse_word(group, args.theta, args.perm)
    y = _parse_word(group, args.simple, args.perm)
    cls = eng.theta_on_simple(x.index, y.index)
    obj = {
        "rank": args.rank,
        "theta": repr(x),
        "simple": repr(y),
        "zero": cls.is_zero(),
        "class": cls.to_json(),
    }
    if not cls.is_zero():
        lo, hi = cls.degree_bounds()
        obj["degree_bounds"] = [lo, hi]
        obj["graded_length"] = hi - lo + 1
    rows = [["element", "coeff"]] + [[t["element"], t["coeff"]] for t in obj["class"]]
    _emit(args, obj, rows)
    return 0


def cmd_verify(args) -> int:
    t0 = time.time()
    report = run_suites(args.suite, args.rank, threads=args.threads)
    print(f"klcalc: suite '{args.suite}' rank {args.rank} "
          f"in {time.time() - t0:.2f}s", file=sys.stderr)
    for c in report["checks"]:
        mark = "ok" if c["pass"] else "FAIL"
        print(f"klcalc: [{mark}] {c['name']} {c.get('detail', '')}", file=sys.stderr)
    rows = [["name", "pass", "detail"]] + [
        [c["name"], c["pass"], c.get("detail", "")] for c in report["checks"]
    ]
    _emit(args, report, rows)
    return 0 if report["pass"] else 1


def cmd_report(args) -> int:
    from .plots import write_block_figures

    group = build_group(TypeA(args.rank))
    table = _get_table(args, group)
    block = build_block(table, _parse_subset(args.parabolic))
    report = block_report(block)
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)

    def write_csv(name: str, rows: list[list]) -> Path:
        path = outdir / name
        buf = io.StringIO()
        csv.writer(buf, lineterminator="\n").writerows(rows)
        path.write_text(buf.getvalue())
        return path

    files = [
        write_csv("classification.csv",
                  [["survivor"]] + [[w] for w in report["survivors"]]),
        write_csv("cells.csv",
                  [["shape", "size", "right_cell_size", "cartan_det"]] + [
                      [c["shape"], c["size"], c["right_cell_size"], c["cartan_det"]]
                      for c in report["cells"]
                  ]),
        write_csv("checks.csv",
                  [["name", "pass"]] + [[c["name"], c["pass"]] for c in report["checks"]]),
    ]
    files.extend(write_block_figures(block, outdir))
    json.dump(
        {"out": str(outdir), "files": [f.name for f in sorted(files)]},
        sys.stdout, indent=2,
    )
    sys.stdout.write("\n")
    return 0 if all(c["pass"] for c in report["checks"]) else 1


if __name__ == "__main__":
    sys.exit(main())
