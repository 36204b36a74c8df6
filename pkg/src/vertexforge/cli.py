"""Command-line interface: ``vertexforge {presets,compute,gv,from-fan,crosscheck,selftest}``."""
from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass

from .amplitude import (
    ClassMap,
    IntegralityViolation,
    aggregate_by_class,
    free_energy,
    gv_table,
    partition_series,
    resolve_threads,
)
from .toric import PRESETS, Fan, FanError, GraphError, GTGraph, InvalidDegree, from_fan, preset

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_INTEGRALITY = 3
MAX_CROSSCHECK_WEIGHT = 5


class CliError(Exception):
    pass


@dataclass
class RunConfig:
    graph: GTGraph
    source: str
    bound: tuple | None
    total: int | None
    class_map: ClassMap | None
    output: str
    threads: int


def _read_json(path):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise CliError(f"{path}: {exc.strerror or exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise CliError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc


def _load_graph(args) -> tuple:
    sources = [s for s in (args.preset, args.graph, args.fan) if s]
    if len(sources) != 1:
        raise CliError("give exactly one of --preset, --graph, --fan")
    if args.preset:
        try:
            return preset(args.preset), f"preset {args.preset}"
        except ValueError as exc:
            raise CliError(f"--preset {args.preset}: {exc}") from exc
    if args.graph:
        data = _read_json(args.graph)
        try:
            return GTGraph.from_dict(data, name=args.graph).check(), f"graph {args.graph}"
        except GraphError as exc:
            raise CliError(f"{args.graph}: {exc}") from exc
    data = _read_json(args.fan)
    try:
        return from_fan(Fan.from_dict(data)), f"fan {args.fan}"
    except (FanError, KeyError, TypeError) as exc:
        raise CliError(f"{args.fan}: {type(exc).__name__}: {exc}") from exc


def _class_map(spec, graph):
    if spec is None:
        return None
    n = len(graph.internal_edges)
    if spec == "sum":
        return ClassMap.sum(n)
    data = _read_json(spec)
    try:
        cm = ClassMap(data["matrix"] if isinstance(data, dict) else data)
    except (ValueError, KeyError, TypeError) as exc:
        raise CliError(f"{spec}: bad class map: {exc}") from exc
    if cm.width != n:
        raise CliError(f"{spec}: class map has {cm.width} columns, graph has {n} internal edges")
    return cm


def build_config(args) -> RunConfig:
    graph, source = _load_graph(args)
    n = len(graph.internal_edges)
    if n == 0:
        raise CliError(f"{source}: graph has no internal edges")
    bound = total = None
    if args.max_degree:
        try:
            bound = tuple(int(x) for x in args.max_degree.split(","))
        except ValueError as exc:
            raise CliError(f"--max-degree {args.max_degree}: not a comma-separated integer list") from exc
        if len(bound) != n:
            raise CliError(f"--max-degree has {len(bound)} entries, graph has {n} internal edges")
        if any(b < 0 for b in bound) or not any(bound):
            raise CliError("--max-degree entries must be nonnegative and not all zero")
    if args.max_total_degree is not None:
        if args.max_total_degree < 1:
            raise CliError("--max-total-degree must be positive")
        total = args.max_total_degree
    if bound is None and total is None:
        total = 4 if n <= 4 else 2
    threads = args.threads
    try:
        threads = resolve_threads(threads)
    except ValueError as exc:
        raise CliError(str(exc)) from exc
    return RunConfig(
        graph, source, bound, total, _class_map(args.class_map, graph), args.output, threads
    )


def _fmt_deg(d):
    return "(" + ",".join(map(str, d)) + ")"


def compute(cfg: RunConfig, gv_only=False) -> str:
    """Run the pipeline and render the report; raises IntegralityViolation."""
    g = cfg.graph
    z = partition_series(g, cfg.bound, cfg.total, cfg.threads)
    F = free_energy(g, z=z)
    gs, table = gv_table(g, F)
    agg = aggregate_by_class(table, cfg.class_map) if cfg.class_map else None
    degs = F.degrees()
    if cfg.output == "csv":
        return (agg or table).to_csv()
    if cfg.output == "json":
        doc = {
            "source": cfg.source,
            "edges": [
                {"id": e.id, "tail": e.tail, "head": e.head, "framing": e.framing}
                for e in g.internal_edges
            ],
            "bound": list(F.bound),
            "total": F.total,
            "gv": table.to_dict(),
        }
        if not gv_only:
            doc["Z"] = [{"degree": list(d), "value": str(z[d])} for d in degs]
            doc["F"] = [{"degree": list(d), "value": str(F[d])} for d in degs]
            doc["G"] = [{"degree": list(d), "value": str(gs[d])} for d in degs]
        if agg is not None:
            doc["class_map"] = [list(r) for r in cfg.class_map.matrix]
            doc["gv_by_class"] = agg.to_dict()
        return json.dumps(doc, indent=2) + "\n"
    lines = [f"source: {cfg.source}"]
    lines.append(
        "edges: " + ", ".join(f"{e.id}:{e.tail}->{e.head} n={e.framing}" for e in g.internal_edges)
    )
    window = f"d <= {_fmt_deg(F.bound)}" + (f", |d| <= {F.total}" if F.total else "")
    lines.append(f"window: {window}")
    if not gv_only:
        for label, series in (("Z", z), ("F", F), ("G", gs)):
            lines.append("")
            lines.append(f"{label}_d:")
            for d in degs:
                lines.append(f"  {_fmt_deg(d)}: {series[d]}")
    for title, tab in (("GV invariants n^g_d", table), ("GV invariants by class n^g_beta", agg)):
        if tab is None:
            continue
        lines.append("")
        lines.append(f"{title}:")
        rows = tab.rows()
        if not rows:
            lines.append("  (none)")
        for d, gg, v in rows:
            lines.append(f"  {_fmt_deg(d)}  g={gg}  n={v}")
    return "\n".join(lines) + "\n"


# --- subcommands -----------------------------------------------------------------


def cmd_presets(args):
    for name, desc in PRESETS.items():
        print(f"{name:10s} {desc}")
    return EXIT_OK


def cmd_compute(args, gv_only=False):
    cfg = build_config(args)
    try:
        out = compute(cfg, gv_only=gv_only or args.command == "gv")
    except IntegralityViolation as exc:
        print(f"integrality violation (counterexample to t*G in Z[t]): {exc}", file=sys.stderr)
        return EXIT_INTEGRALITY
    except InvalidDegree as exc:
        raise CliError(str(exc)) from exc
    sys.stdout.write(out)
    return EXIT_OK


def cmd_from_fan(args):
    path = args.path or args.fan
    if not path:
        raise CliError("from-fan needs a fan JSON path")
    data = _read_json(path)
    try:
        graph = from_fan(Fan.from_dict(data))
    except FanError as exc:
        raise CliError(f"{path}: {type(exc).__name__}: {exc}") from exc
    except (KeyError, TypeError, ValueError) as exc:
        raise CliError(f"{path}: malformed fan: {exc}") from exc
    sys.stdout.write(graph.to_json(indent=2) + "\n")
    return EXIT_OK


def cmd_crosscheck(args):
    from .selftest import triples
    from .symfun import three_point
    from .vevoracle import three_point_oracle

    w = args.weight_bound
    if not 0 <= w <= MAX_CROSSCHECK_WEIGHT:
        raise CliError(f"--weight-bound must be between 0 and {MAX_CROSSCHECK_WEIGHT}")
    t0 = time.perf_counter()
    count, bad = 0, []
    for tr in triples(w):
        count += 1
        a, b = three_point(*tr), three_point_oracle(*tr)
        if a != b:
            bad.append((tr, a, b))
    dt = time.perf_counter() - t0
    for tr, a, b in bad:
        print(f"MISMATCH {tr}: determinant route {a} != character route {b}")
    print(f"crosscheck weight <= {w}: {count} triples, {len(bad)} mismatches, {dt:.2f}s")
    return EXIT_OK if not bad else EXIT_ERROR


def cmd_selftest(args):
    from .selftest import run_all

    results = run_all()
    if args.json:
        ok = all(r.ok for r in results)
        print(json.dumps({"ok": ok, "checks": [r.to_dict() for r in results]}, indent=2))
    else:
        for r in results:
            print(f"{'PASS' if r.ok else 'FAIL'}  {r.name}  [{r.detail}]  {r.seconds:.2f}s")
            for f in r.failures[:5]:
                print(f"      {f}")
    return EXIT_OK if all(r.ok for r in results) else EXIT_ERROR


def _add_source(p):
    p.add_argument("--preset", help="NAME[:p1,p2,...], see `presets`")
    p.add_argument("--graph", help="graph JSON path")
    p.add_argument("--fan", help="fan JSON path")
    p.add_argument("--max-total-degree", type=int, help="bound on |d| (default 4)")
    p.add_argument("--max-degree", help="componentwise bound d1,d2,...")
    p.add_argument("--class-map", help="'sum' or a JSON matrix path")
    p.add_argument("--output", choices=("text", "json", "csv"), default="text")
    p.add_argument(
        "--threads", type=int, default=None, help="worker count (env VERTEXFORGE_THREADS)"
    )


def build_parser():
    ap = argparse.ArgumentParser(
        prog="vertexforge",
        description="Topological-vertex partition functions and Gopakumar-Vafa invariants.",
    )
    sub = ap.add_subparsers(dest="command", required=True)
    sub.add_parser("presets", help="list bundled graphs")
    for name, hlp in (("compute", "Z, F, G and GV tables"), ("gv", "GV table only")):
        _add_source(sub.add_parser(name, help=hlp))
    p = sub.add_parser("from-fan", help="toric graph JSON from a fan JSON")
    p.add_argument("path", nargs="?")
    p.add_argument("--fan")
    p = sub.add_parser("crosscheck", help="compare the two three-point routes")
    p.add_argument("--weight-bound", type=int, default=3)
    p = sub.add_parser("selftest", help="run the built-in verification suite")
    p.add_argument("--json", action="store_true")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handlers = {
        "presets": cmd_presets,
        "compute": cmd_compute,
        "gv": cmd_compute,
        "from-fan": cmd_from_fan,
        "crosscheck": cmd_crosscheck,
        "selftest": cmd_selftest,
    }
    try:
        return handlers[args.command](args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
