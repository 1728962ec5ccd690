"""Command-line entry point.

Machine-readable output goes to stdout, logs to stderr. Exit codes: 0 success
or FOUND, 1 NONE, 2 UNKNOWN, 64 usage error, 65 bad input.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import io as gio
from .core import GraphError, semi_degree_report
from .factor import solve_one_factor
from .generators import (
    blow_up,
    blowup_spec_from_json,
    bipartite_tournament_case1,
    bipartite_tournament_case2,
    build_extremal,
    circle_tournament,
    random_oriented,
)
from .hamilton import SearchBudget, Status, find_cycle_through, find_hamilton_cycle, kelly_greedy
from .verify import check_degree_conditions, find_nonexpanding_set, sharpness_sweep, theorem_scan
from .walks import LiftBudgetExceeded, WalkError, build_balanced_closed_walk, lift_walk_to_hamilton

EXIT_OK, EXIT_NONE, EXIT_UNKNOWN = 0, 1, 2
EXIT_USAGE, EXIT_DATAERR = 64, 65
STATUS_EXIT = {Status.FOUND: EXIT_OK, Status.NONE: EXIT_NONE, Status.UNKNOWN: EXIT_UNKNOWN}

log = logging.getLogger("orientham")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _json(obj) -> str:
    return json.dumps(obj) + "\n"


def _load(path: str, fmt: str | None = None):
    try:
        return gio.load_graph(path, fmt)
    except FileNotFoundError as exc:
        raise gio.FormatError(f"no such file: {path}") from exc


def _load_spec(path: str):
    try:
        obj = json.loads(Path(path).read_text())
        return blowup_spec_from_json(obj)
    except FileNotFoundError as exc:
        raise gio.FormatError(f"no such file: {path}") from exc
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise gio.FormatError(f"bad BlowUpSpec document: {exc}") from exc


def _budget(args) -> SearchBudget:
    return SearchBudget(args.max_nodes, args.mode)


def _int_range(text: str) -> tuple[int, int]:
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            return int(lo), int(hi)
        return int(text), int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected N or LO..HI, got {text!r}") from None


# --------------------------------------------------------------------------
# handlers


def cmd_generate(args) -> int:
    part = None
    if args.what == "extremal":
        w = build_extremal(args.n)
        graph, part = w.graph, w.part
    elif args.what == "tournament":
        graph = circle_tournament(args.s)
    elif args.what == "bipartite":
        bt = bipartite_tournament_case1(args.k) if args.case == 1 else bipartite_tournament_case2(args.k)
        graph = bt.graph
    elif args.what == "random":
        graph = random_oriented(args.n, args.delta0, args.seed)
    else:
        spec = _load_spec(args.spec)
        if spec.pair_mode.kind == "mindeg" and args.seed is None:
            raise UsageError("generate blowup: min-degree pairs are random, --seed is required")
        graph = blow_up(spec, args.seed).graph
    _emit(gio.dumps(graph, args.format, part), args.out)
    return EXIT_OK


def cmd_solve(args) -> int:
    graph, _ = _load(args.input, args.in_format)
    if args.what == "one-factor":
        factor, violator = solve_one_factor(graph)
        if factor is not None:
            _emit(_json({"factor": [list(c) for c in factor.cycles]}), args.out)
            return EXIT_OK
        if args.certificate:
            _emit(_json({"violator": sorted(violator)}), args.out)
        else:
            _emit(_json({"factor": None}), args.out)
        return EXIT_NONE
    if args.what == "hamilton":
        result = find_hamilton_cycle(graph, _budget(args))
    else:
        result = find_cycle_through(graph, args.v, args.len, _budget(args))
    _emit(_json({"status": result.status.value, "cycle": list(result.cycle) if result.cycle else None,
                 "nodes": result.nodes}), args.out)
    return STATUS_EXIT[result.status]


def cmd_decompose(args) -> int:
    graph, _ = _load(args.input, args.in_format)
    if not graph.is_tournament():
        raise gio.FormatError("decompose kelly expects a tournament")
    cycles = kelly_greedy(graph, _budget(args))
    _emit(_json({"n": graph.n, "count": len(cycles), "cycles": [list(c) for c in cycles]}), args.out)
    return EXIT_OK


def cmd_walks(args) -> int:
    spec = _load_spec(args.spec)
    if spec.pair_mode.kind == "mindeg" and args.seed is None:
        raise UsageError("walks demo: min-degree pairs are random, --seed is required")
    try:
        walk = build_balanced_closed_walk(spec.R, spec.factor, spec, args.max_visits)
    except WalkError as exc:
        log.error("%s", exc)
        _emit(_json({"status": Status.NONE.value, "reason": str(exc)}), args.emit)
        return EXIT_NONE
    blown = blow_up(spec, args.seed)
    doc = {"walk": list(walk.vertices), "n": blown.graph.n}
    try:
        cycle = lift_walk_to_hamilton(spec, walk, blown, args.max_nodes)
    except LiftBudgetExceeded as exc:
        log.error("%s", exc)
        _emit(_json({**doc, "status": Status.UNKNOWN.value, "cycle": None}), args.emit)
        return EXIT_UNKNOWN
    except WalkError as exc:
        log.error("%s", exc)
        _emit(_json({**doc, "status": Status.NONE.value, "cycle": None}), args.emit)
        return EXIT_NONE
    _emit(_json({**doc, "status": Status.FOUND.value, "cycle": list(cycle)}), args.emit)
    if args.emit:
        sys.stdout.write(_json({"status": Status.FOUND.value, "n": blown.graph.n, "emitted": args.emit}))
    return EXIT_OK


def _table(headers: list[str], rows: list[list]) -> str:
    cells = [headers] + [[str(c) for c in row] for row in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(headers))]
    lines = ["  ".join(c.rjust(w) for c, w in zip(r, widths)) for r in cells]
    return "\n".join(lines) + "\n"


def cmd_verify(args) -> int:
    if args.what == "sharpness":
        reports = sharpness_sweep(args.n_min, args.n_max)
        ok = all(r.verdict for r in reports)
        if args.table:
            rows = [[r.n, r.expected_delta0, r.actual_delta0, r.has_one_factor,
                     r.bb_reachability_violations, r.verdict] for r in reports]
            sys.stdout.write(_table(["n", "expected", "actual", "1-factor", "BB-viol", "verdict"], rows))
        else:
            sys.stdout.write(_json({"all_verdicts": ok, "reports": [r.as_dict() for r in reports]}))
        return EXIT_OK if ok else EXIT_NONE
    if args.what == "scan":
        lo, hi = args.n
        if lo < 3 or hi < lo:
            raise UsageError("verify scan: --n must be LO..HI with 3 <= LO <= HI")
        report = theorem_scan(lo, hi, args.samples, args.seed, args.max_nodes, args.artifacts, args.jobs)
        if args.table:
            rows = [[r.n, r.threshold, r.found, r.none, r.unknown] for r in report.rows]
            sys.stdout.write(_table(["n", "delta0", "FOUND", "NONE", "UNKNOWN"], rows))
        else:
            sys.stdout.write(_json(report.as_dict()))
        return EXIT_OK
    graph, _ = _load(args.input, args.in_format)
    if args.what == "conditions":
        flags = check_degree_conditions(graph)
        rep = semi_degree_report(graph)
        sys.stdout.write(_json({"n": flags.n, "kko": flags.kko, "haggkvist_star": flags.haggkvist_star,
                                "delta0": rep.delta0, "delta_star": rep.delta_star}))
        return EXIT_OK
    if graph.n > 24 and args.seed is None:
        raise UsageError("verify expansion: graphs above 24 vertices use a seeded heuristic, --seed is required")
    result = find_nonexpanding_set(graph, args.c, args.seed)
    sys.stdout.write(_json({"found": result.found, "subset": sorted(result.subset) if result.found else None,
                            "exact": result.exact, "gap": result.gap}))
    return EXIT_OK if result.found else EXIT_NONE


def cmd_convert(args) -> int:
    graph, part = _load(args.input, args.in_format)
    _emit(gio.dumps(graph, args.to, part), args.out)
    return EXIT_OK


# --------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="orientham", description="Hamilton cycles and 1-factors in oriented graphs.")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    def graph_in(sp):
        sp.add_argument("--in", dest="input", required=True, help="input graph (.el or .json)")
        sp.add_argument("--in-format", choices=["el", "json"], help="override format detection")

    def search(sp):
        sp.add_argument("--max-nodes", type=int, default=10_000_000, help="backtracking node budget")
        sp.add_argument("--mode", choices=["auto", "dp", "backtrack"], default="auto", help="search strategy")

    def output(sp, formats=True):
        if formats:
            sp.add_argument("--format", choices=["el", "json", "dot"], default="el", help="output format")
        sp.add_argument("--out", help="write to this file instead of stdout")

    gen = sub.add_parser("generate", help="build graphs").add_subparsers(dest="what", required=True, parser_class=_Parser)
    g = gen.add_parser("extremal", help="extremal graph one below the threshold")
    g.add_argument("--n", type=int, required=True, help="number of vertices (>= 3)")
    output(g)
    g = gen.add_parser("tournament", help="circle tournament")
    g.add_argument("--s", type=int, required=True, help="number of vertices")
    output(g)
    g = gen.add_parser("bipartite", help="B-D bipartite tournament")
    g.add_argument("--case", type=int, choices=[1, 2], required=True, help="1: |B|=2k+1, 2: |B|=2k+2")
    g.add_argument("--k", type=int, required=True, help="size parameter")
    output(g)
    g = gen.add_parser("random", help="seeded oriented graph with a minimum semi-degree")
    g.add_argument("--n", type=int, required=True, help="number of vertices")
    g.add_argument("--delta0", type=int, required=True, help="minimum semi-degree to guarantee")
    g.add_argument("--seed", type=int, required=True, help="random seed")
    output(g)
    g = gen.add_parser("blowup", help="blow-up of a reduced graph")
    g.add_argument("--spec", required=True, help="BlowUpSpec JSON file")
    g.add_argument("--seed", type=int, help="random seed (required for mindeg pairs)")
    output(g)

    sol = sub.add_parser("solve", help="exact searches").add_subparsers(dest="what", required=True, parser_class=_Parser)
    s = sol.add_parser("hamilton", help="Hamilton cycle")
    graph_in(s)
    search(s)
    output(s, formats=False)
    s = sol.add_parser("cycle", help="cycle of a given length through a vertex")
    graph_in(s)
    s.add_argument("--v", type=int, required=True, help="vertex the cycle must contain")
    s.add_argument("--len", type=int, required=True, help="number of vertices on the cycle")
    search(s)
    output(s, formats=False)
    s = sol.add_parser("one-factor", help="1-factor or Hall violator")
    graph_in(s)
    s.add_argument("--certificate", action="store_true", help="print a violator when no 1-factor exists")
    output(s, formats=False)

    dec = sub.add_parser("decompose", help="edge-disjoint Hamilton cycles").add_subparsers(
        dest="what", required=True, parser_class=_Parser)
    d = dec.add_parser("kelly", help="greedy removal of Hamilton cycles from a tournament")
    graph_in(d)
    search(d)
    output(d, formats=False)

    wk = sub.add_parser("walks", help="balanced walks and lifting").add_subparsers(
        dest="what", required=True, parser_class=_Parser)
    w = wk.add_parser("demo", help="build a balanced closed walk and lift it to a Hamilton cycle")
    w.add_argument("--spec", required=True, help="BlowUpSpec JSON file")
    w.add_argument("--emit", help="write the result JSON here")
    w.add_argument("--seed", type=int, help="random seed (required for mindeg pairs)")
    w.add_argument("--max-visits", type=int, help="visit cap per cluster (default: cluster size)")
    w.add_argument("--max-nodes", type=int, default=1_000_000, help="embedding budget for mindeg pairs")

    ver = sub.add_parser("verify", help="threshold checks").add_subparsers(dest="what", required=True, parser_class=_Parser)
    v = ver.add_parser("sharpness", help="audit the extremal family over a range of n")
    v.add_argument("--n-min", type=int, default=3, help="first n (>= 3)")
    v.add_argument("--n-max", type=int, required=True, help="last n")
    v.add_argument("--table", action="store_true", help="human-readable table instead of JSON")
    v = ver.add_parser("scan", help="Hamilton search on random graphs at the threshold")
    v.add_argument("--n", type=_int_range, required=True, help="N or LO..HI")
    v.add_argument("--samples", type=int, required=True, help="graphs per n")
    v.add_argument("--seed", type=int, required=True, help="random seed")
    v.add_argument("--max-nodes", type=int, default=10_000_000, help="backtracking node budget")
    v.add_argument("--artifacts", default="scan-artifacts", help="directory for flagged NONE graphs")
    v.add_argument("--jobs", type=int, default=1, help="worker processes")
    v.add_argument("--table", action="store_true", help="human-readable table instead of JSON")
    v = ver.add_parser("expansion", help="search for a non-expanding middle-sized set")
    graph_in(v)
    v.add_argument("--c", type=float, required=True, help="expansion constant in (0, 1)")
    v.add_argument("--seed", type=int, help="random seed (required above 24 vertices)")
    v = ver.add_parser("conditions", help="threshold and delta-star flags for a graph")
    graph_in(v)

    c = sub.add_parser("convert", help="convert between el, json and dot")
    graph_in(c)
    c.add_argument("--to", choices=["el", "json", "dot"], required=True, help="output format")
    c.add_argument("--out", help="write to this file instead of stdout")
    return p


HANDLERS = {
    "generate": cmd_generate,
    "solve": cmd_solve,
    "decompose": cmd_decompose,
    "walks": cmd_walks,
    "verify": cmd_verify,
    "convert": cmd_convert,
}


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        sys.stderr.write(f"{exc}\n")
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return HANDLERS[args.verb](args)
    except UsageError as exc:
        sys.stderr.write(f"{exc}\n")
        return EXIT_USAGE
    except gio.FormatError as exc:
        sys.stderr.write(f"input error: {exc}\n")
        return EXIT_DATAERR
    except (GraphError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
