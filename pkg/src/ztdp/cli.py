"""Command line front end.

Subcommands:
  gen        write a grid or seeded random graph file
  decompose  build a tree decomposition (balanced / path / single-bag) and report metrics
  count      run one counting problem with the zeta engine, the table baseline, or brute force
  bench      sweep a grid family with both engines and emit a CSV

Counting reports go to stdout as JSON with a versioned "schema" field.  Answers
are decimal strings (they outgrow 64 bits quickly).  Exit code is 0 only if
every requested bound check passed; input/usage problems exit 2, failed checks
and cross-engine disagreements exit 1.
"""

import argparse
import csv
import json
import random
import sys
import time

from .decomp import (
    DecompositionError,
    balanced_td,
    bfs_layer_separator,
    format_tree_decomposition,
    grid_balanced_td,
    grid_path_decomposition,
    metrics,
    parse_tree_decomposition,
    single_bag_decomposition,
    to_modified_nice,
    validate,
)
from .engine import (
    EngineError,
    TableLimitError,
    evaluate,
    matching_polynomial_spec,
    packing_spec,
    perfect_matching_spec,
    set_cover_spec,
    table_dp_evaluate,
)
from .graphs import (
    GraphError,
    GridSpec,
    closed_neighborhood_hypergraph,
    file_comments,
    format_graph,
    grid_graph,
    make_graph,
    parse_graph,
    parse_hypergraph,
    primal_graph,
)
from .oracle import (
    BudgetError,
    bf_l_packings,
    bf_matchings_by_size,
    bf_perfect_matchings,
    bf_set_covers,
)

REPORT_SCHEMA = "ztdp/run-report/1"

PROBLEMS = ("pm", "matchpoly", "setcover", "domsets", "packings")
ENGINES = ("zeta", "table", "oracle")


class CliError(Exception):
    """Bad input or flags; maps to exit code 2."""


def _write_text(path, text):
    if path is None or path == "-":
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _read_text(path):
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as exc:
        raise CliError(str(exc))


def _grid_spec_from_comments(comments):
    # gen writes "c grid <lengths>"; decompose/count recover the geometry from it
    for line in comments:
        parts = line.split()
        if parts and parts[0] == "grid":
            try:
                lengths = tuple(int(t) for t in parts[1:])
                return GridSpec(lengths)
            except (ValueError, GraphError):
                raise CliError("malformed grid comment: %r" % line)
    return None


def cmd_gen(args):
    if args.kind == "grid":
        spec = GridSpec(tuple(args.lengths))
        g = grid_graph(spec)
        comment = "grid " + " ".join(str(x) for x in spec.lengths)
    else:
        if args.n is None:
            raise CliError("gen random needs -n")
        if not 0.0 <= args.p <= 1.0:
            raise CliError("edge probability must be in [0, 1]")
        rng = random.Random(args.seed)
        edges = [
            (u, v)
            for u in range(args.n)
            for v in range(u + 1, args.n)
            if rng.random() < args.p
        ]
        g = make_graph(args.n, edges)
        comment = "random n=%d p=%g seed=%d" % (args.n, args.p, args.seed)
    _write_text(args.output, format_graph(g, comments=[comment]))
    return 0


def cmd_decompose(args):
    text = _read_text(args.graph)
    g = parse_graph(text)
    spec = _grid_spec_from_comments(file_comments(text))

    if args.method == "single-bag":
        td = single_bag_decomposition(g.n)
    elif args.method == "path":
        if spec is None:
            raise CliError("path decomposition needs a grid input (a 'c grid ...' comment)")
        td = grid_path_decomposition(spec)
    elif spec is not None:
        td = grid_balanced_td(spec)
    else:
        td = balanced_td(g, bfs_layer_separator)

    report = validate(g, td)
    if not report.ok:
        raise CliError("constructed decomposition is invalid: " + report.summary())

    out = args.output
    if out is None:
        base = args.graph.rsplit(".", 1)[0]
        out = base + ".td"
    _write_text(out, format_tree_decomposition(td, g.n))

    m = metrics(td)
    print(json.dumps({
        "schema": "ztdp/decompose-report/1",
        "method": args.method,
        "file": out,
        "width": m.width,
        "tree_depth_h": m.tree_depth_h,
        "node_count": m.node_count,
        "join_count": m.join_count,
    }))
    return 0


def _load_instance(args):
    """Returns (kind, graph, hypergraph, grid spec or None).

    pm/matchpoly read a graph.  setcover/packings read a hypergraph, or a graph
    with --dom (closed neighborhoods).  domsets always applies the reduction.
    """
    text = _read_text(args.input)
    header = None
    for line in text.splitlines():
        parts = line.split()
        if parts and parts[0] == "p":
            header = parts[1] if len(parts) > 1 else None
            break
    spec = _grid_spec_from_comments(file_comments(text))

    if args.problem in ("pm", "matchpoly"):
        if header != "gr":
            raise CliError("%s needs a graph file (p gr header)" % args.problem)
        return "graph", parse_graph(text), None, spec

    if args.problem == "domsets" or args.dom:
        if header != "gr":
            raise CliError("--dom / domsets need a graph file")
        g = parse_graph(text)
        return "hypergraph", None, closed_neighborhood_hypergraph(g), spec
    if header == "hg":
        return "hypergraph", None, parse_hypergraph(text), None
    raise CliError("%s needs a hypergraph file, or a graph with --dom" % args.problem)


def _problem_spec(args, g, hg):
    if args.problem == "pm":
        return perfect_matching_spec()
    if args.problem == "matchpoly":
        return matching_polynomial_spec(g.n)
    if args.problem in ("setcover", "domsets"):
        return set_cover_spec()
    if args.l is None:
        raise CliError("packings needs -l")
    if not 0 <= args.l <= len(hg.hyperedges):
        raise CliError("-l out of range 0..%d" % len(hg.hyperedges))
    return packing_spec(args.l)


def _oracle_answer(args, g, hg):
    if args.problem == "pm":
        return bf_perfect_matchings(g)
    if args.problem == "matchpoly":
        return bf_matchings_by_size(g)
    if args.problem in ("setcover", "domsets"):
        return bf_set_covers(hg)
    return bf_l_packings(hg, args.l)


def _decomposition_for(args, obj, g):
    """Pick or load the tree decomposition for the zeta/table engines."""
    if args.td is not None:
        td = parse_tree_decomposition(_read_text(args.td))
        report = validate(obj, td)
        if not report.ok:
            raise CliError("supplied decomposition is invalid: " + report.summary())
        return td, None
    spec = args.grid_spec
    if spec is not None and g is not None and g.n == spec.volume:
        return grid_balanced_td(spec), spec
    base = g if g is not None else primal_graph(obj)
    return balanced_td(base, bfs_layer_separator), None


def _format_answer(answer):
    if isinstance(answer, list):
        return [str(c) for c in answer]
    return str(answer)


def cmd_count(args):
    kind, g, hg, spec = _load_instance(args)
    args.grid_spec = spec
    obj = g if kind == "graph" else hg
    problem = _problem_spec(args, g, hg)

    report = {
        "schema": REPORT_SCHEMA,
        "problem": args.problem,
        "engine": args.engine,
        "input": args.input,
        "modulus": args.modulus,
    }

    if args.engine == "oracle":
        if args.modulus is not None:
            raise CliError("--modulus is not supported with the oracle engine")
        t0 = time.perf_counter()
        answer = _oracle_answer(args, g, hg)
        report["answer"] = _format_answer(answer)
        report["wall_time"] = time.perf_counter() - t0
        report["checks"] = {}
        report["ok"] = True
        print(json.dumps(report))
        return 0

    td, used_spec = _decomposition_for(args, obj, g)
    mnd = to_modified_nice(td, obj)
    m = metrics(mnd)
    if args.engine == "table":
        answer, stats = table_dp_evaluate(mnd, problem, modulus=args.modulus)
    else:
        answer, stats = evaluate(mnd, problem, modulus=args.modulus,
                                 parallel=args.parallel)

    checks = {}
    if args.engine == "zeta":
        limit = mnd.leaf_count * 2 ** m.tree_depth_h
        checks["path_bound"] = {
            "ok": stats.leaf_evaluations <= limit,
            "leaf_evaluations": stats.leaf_evaluations,
            "limit": limit,
        }
    if used_spec is not None:
        d = len(used_spec.lengths)
        limit = (3 * d * used_spec.volume) // used_spec.min_length
        checks["grid_depth_bound"] = {
            "ok": m.tree_depth_h <= limit,
            "tree_depth_h": m.tree_depth_h,
            "limit": limit,
        }

    report["answer"] = _format_answer(answer)
    report["decomposition"] = {
        "width": m.width,
        "tree_depth_h": m.tree_depth_h,
        "node_count": m.node_count,
        "join_count": m.join_count,
        "leaf_count": mnd.leaf_count,
    }
    report["stats"] = {
        "leaf_evaluations": stats.leaf_evaluations,
        "peak_live_values": stats.peak_live_values,
        "wall_time": stats.wall_time,
        "table_entries": stats.table_entries,
        "max_node_table_entries": stats.max_node_table_entries,
    }
    report["checks"] = checks
    report["ok"] = all(c["ok"] for c in checks.values())
    print(json.dumps(report))
    return 0 if report["ok"] else 1


def cmd_bench(args):
    if args.n_min < 2 or args.n_max < args.n_min:
        raise CliError("need 2 <= n-min <= n-max")
    if args.dims < 1:
        raise CliError("need dims >= 1")
    problems = args.problem or ["pm"]

    fields = [
        "family", "dims", "n", "vertices", "problem", "engine", "answer",
        "width", "tree_depth_h", "leaf_evaluations", "peak_live_values",
        "table_entries", "wall_time", "path_bound_ok",
    ]
    rows = []
    failures = []
    for n in range(args.n_min, args.n_max + 1):
        spec = GridSpec((n,) * args.dims)
        g = grid_graph(spec)
        td = grid_balanced_td(spec)
        for name in problems:
            if name == "pm":
                problem, obj = perfect_matching_spec(), g
            elif name == "matchpoly":
                problem, obj = matching_polynomial_spec(g.n), g
            elif name == "domsets":
                problem, obj = set_cover_spec(), closed_neighborhood_hypergraph(g)
            else:
                raise CliError("bench supports pm, matchpoly, domsets")
            mnd = to_modified_nice(td, obj)
            m = metrics(mnd)
            answers = {}
            for engine in ("zeta", "table"):
                if engine == "zeta":
                    answer, stats = evaluate(mnd, problem, modulus=args.modulus,
                                             parallel=args.parallel)
                else:
                    answer, stats = table_dp_evaluate(mnd, problem,
                                                      modulus=args.modulus)
                answers[engine] = answer
                limit = mnd.leaf_count * 2 ** m.tree_depth_h
                rows.append({
                    "family": "grid",
                    "dims": args.dims,
                    "n": n,
                    "vertices": spec.volume,
                    "problem": name,
                    "engine": engine,
                    "answer": _answer_cell(answer),
                    "width": m.width,
                    "tree_depth_h": m.tree_depth_h,
                    "leaf_evaluations": stats.leaf_evaluations,
                    "peak_live_values": stats.peak_live_values,
                    "table_entries": stats.table_entries if stats.table_entries is not None else "",
                    "wall_time": "%.6f" % stats.wall_time,
                    "path_bound_ok": stats.leaf_evaluations <= limit,
                })
            if answers["zeta"] != answers["table"]:
                failures.append((n, name, answers["zeta"], answers["table"]))

    out = sys.stdout if args.output in (None, "-") else open(args.output, "w", newline="")
    try:
        writer = csv.DictWriter(out, fieldnames=fields)
        writer.writeheader()
        writer.writerows(rows)
    finally:
        if out is not sys.stdout:
            out.close()

    if failures:
        for n, name, a, b in failures:
            print("engine disagreement on grid n=%d problem=%s: zeta=%s table=%s"
                  % (n, name, a, b), file=sys.stderr)
        return 1
    return 0


def _answer_cell(answer):
    if isinstance(answer, list):
        return ";".join(str(c) for c in answer)
    return str(answer)


def build_parser():
    ap = argparse.ArgumentParser(prog="ztdp", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="cmd", required=True)

    g = sub.add_parser("gen", help="generate a graph file")
    gs = g.add_subparsers(dest="kind", required=True)
    gg = gs.add_parser("grid", help="axis-aligned grid graph")
    gg.add_argument("lengths", type=int, nargs="+", help="side lengths, row-major")
    gg.add_argument("-o", "--output", help="output file (default stdout)")
    gr = gs.add_parser("random", help="seeded G(n,p)")
    gr.add_argument("-n", type=int, help="vertex count")
    gr.add_argument("-p", type=float, default=0.5, help="edge probability")
    gr.add_argument("--seed", type=int, default=0)
    gr.add_argument("-o", "--output", help="output file (default stdout)")

    d = sub.add_parser("decompose", help="build and save a tree decomposition")
    d.add_argument("graph", help="graph file")
    d.add_argument("--method", choices=("balanced", "path", "single-bag"),
                   default="balanced")
    d.add_argument("-o", "--output", help="output .td file (default <graph>.td)")

    c = sub.add_parser("count", help="run one counting problem")
    c.add_argument("input", help="graph or hypergraph file")
    c.add_argument("--problem", choices=PROBLEMS, required=True)
    c.add_argument("--engine", choices=ENGINES, default="zeta")
    c.add_argument("--modulus", type=int)
    c.add_argument("--td", help="tree decomposition file (validated before use)")
    c.add_argument("--parallel", type=int, default=0,
                   help="worker threads for the zeta engine (0 = serial)")
    c.add_argument("-l", type=int, help="packing size for --problem packings")
    c.add_argument("--dom", action="store_true",
                   help="turn a graph into its closed-neighborhood hypergraph")

    b = sub.add_parser("bench", help="grid family sweep, both engines, CSV out")
    b.add_argument("--dims", type=int, default=2)
    b.add_argument("--n-min", type=int, default=2)
    b.add_argument("--n-max", type=int, default=4)
    b.add_argument("--problem", action="append", choices=("pm", "matchpoly", "domsets"),
                   help="repeatable; default pm")
    b.add_argument("--modulus", type=int)
    b.add_argument("--parallel", type=int, default=0)
    b.add_argument("-o", "--output", help="CSV file (default stdout)")

    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    handlers = {
        "gen": cmd_gen,
        "decompose": cmd_decompose,
        "count": cmd_count,
        "bench": cmd_bench,
    }
    try:
        return handlers[args.cmd](args)
    except (CliError, GraphError, DecompositionError, EngineError, BudgetError,
            TableLimitError, ValueError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
