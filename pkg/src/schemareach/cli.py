"""Command line interface: validate, distances, reach, bench, convert.

Exit codes: 0 success, 1 domain failure (non-compliant graph, unreachable
target with ``--expect-reachable``), 2 usage or input errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from dataclasses import asdict
from pathlib import Path

from . import __version__
from .bench import PROFILES, measure, profile_params, generate_compliant, run_experiment, select_sources
from .compliance import check_compliance
from .distances import compute_all_distances, distances_to_target
from .estimator import NonCompliantError
from .facts import (
    FactError,
    parse_instance_facts,
    parse_schema_facts,
    serialize_instance_facts,
)
from .graph import GraphError, build_graph
from .schema import SchemaError, build_schema
from .search import baseline_reach, build_guidance, improved_reach

log = logging.getLogger("schemareach")

CSV_COLUMNS = ["source", "target", "baseline_backtracks", "improved_backtracks", "baseline_ns", "improved_ns"]


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(2, f"{self.prog}: error: {message}\n")


def _read(path):
    return Path(path).read_text(encoding="utf-8")


def _load_schema(path):
    return build_schema(parse_schema_facts(_read(path)))


def _load_graph(path):
    return build_graph(parse_instance_facts(_read(path)))


def _emit_json(obj, out):
    out.write(json.dumps(obj, indent=2) + "\n")


def cmd_validate(args, out):
    schema, graph = _load_schema(args.schema), _load_graph(args.graph)
    report = check_compliance(graph, schema)
    if args.json:
        _emit_json(report.to_dict(), out)
    else:
        out.write("compliant\n" if report.compliant else "NOT compliant\n")
        for v in report.violations:
            out.write(f"  ({v.condition}) {v.subject}: {v.message}\n")
    return 0 if report.compliant else 1


def cmd_distances(args, out):
    schema = _load_schema(args.schema)
    table = compute_all_distances(schema)
    if args.json:
        _emit_json(
            [{"from": a, "to": b, "distance": None if d == float("inf") else d} for a, b, d in table.items()],
            out,
        )
    else:
        out.write(table.to_csv())
    return 0


def _outcome(result, ns, timing):
    d = result.to_dict()
    if timing:
        d["ns"] = ns
    return d


def cmd_reach(args, out):
    schema, graph = _load_schema(args.schema), _load_graph(args.graph)
    for n in (args.source, args.target):
        if n not in graph.nodes:
            raise GraphError(f"unknown node {n}")
    timing = not args.no_timing
    result = {"source": args.source, "target": args.target}
    reached = []

    if args.mode in ("baseline", "both"):
        res, ns = measure(lambda: baseline_reach(graph, args.source, args.target))
        result["baseline"] = _outcome(res, ns, timing)
        reached.append(res.reached)

    if args.mode in ("improved", "both"):
        report = check_compliance(graph, schema)
        if not report.compliant:
            if not args.force:
                raise NonCompliantError(report)
            log.warning("graph is not compliant; guided answers may be wrong")
        table = compute_all_distances(schema)
        label = graph.labels[args.target]
        dmap = distances_to_target(table, label) if label in schema else {label: 0}
        guidance, g_ns = measure(lambda: build_guidance(graph, dmap, label))
        res, ns = measure(lambda: improved_reach(graph, guidance, args.source, args.target))
        result["improved"] = _outcome(res, ns, timing)
        if timing:
            result["improved"]["guidance_ns"] = g_ns
        reached.append(res.reached)

    if args.json:
        _emit_json(result, out)
    else:
        for mode in ("baseline", "improved"):
            if mode in result:
                r = result[mode]
                line = (f"{mode}: reached={str(r['reached']).lower()} backtracks={r['backtracks']} "
                        f"expansions={r['expansions']}")
                if timing:
                    line += f" ns={r['ns']}"
                out.write(line + "\n")
    if args.expect_reachable and not all(reached):
        return 1
    return 0


def _bench_csv(report, timing):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for q in report.per_query:
        w.writerow([
            q.source, q.target, q.baseline.backtracks, q.improved.backtracks,
            q.baseline_ns if timing else "", q.improved_ns if timing else "",
        ])
    return buf.getvalue()


def cmd_bench(args, out):
    params = profile_params(args.profile, args.seed, args.nodes)
    schema, graph, central = generate_compliant(params)
    sources = select_sources(graph, central, args.queries, args.seed)
    timing = not args.no_timing
    log.info("profile %s: %d entities, %d nodes, %d edges, %d queries",
             args.profile, len(schema) - 1, len(graph), graph.n_edges, len(sources))
    report = run_experiment(schema, graph, central, sources, timing=timing, repeats=args.repeats)

    payload = {
        "profile": args.profile,
        "params": asdict(params),
        "schema": {"entities": len(schema) - 1, "arcs": len(schema.arcs)},
        "graph": {"nodes": len(graph), "edges": graph.n_edges,
                  "arcs_facts": sum(1 for v in graph.adjacency.values() if v)},
        **report.to_dict(timing),
    }
    if args.out:
        path = Path(args.out)
        if path.suffix == ".csv":
            path.write_text(_bench_csv(report, timing), encoding="utf-8")
        else:
            path.write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")
    if args.json:
        _emit_json(payload, out)
    else:
        m = payload["metrics"]
        for key, value in m.items():
            out.write(f"{key}: {value:.1f}\n" if value is not None else f"{key}: n/a\n")
    return 0


def cmd_convert(args, out):
    text = serialize_instance_facts(parse_instance_facts(_read(args.graph)))
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        out.write(text)
    return 0


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--quiet", action="store_true", help="suppress diagnostics on stderr")
    common.add_argument("--json", action="store_true", help="machine-readable JSON on stdout")

    parser = _Parser(prog="schemareach", description="Schema-guided graph reachability.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser, metavar="COMMAND")

    p = sub.add_parser("validate", parents=[common], help="check graph compliance against a schema")
    p.add_argument("--schema", required=True)
    p.add_argument("--graph", required=True)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("distances", parents=[common], help="all-pairs schema distances")
    p.add_argument("--schema", required=True)
    p.add_argument("--csv", action="store_true", help="CSV output (default)")
    p.set_defaults(func=cmd_distances)

    p = sub.add_parser("reach", parents=[common], help="run one reachability query")
    p.add_argument("--schema", required=True)
    p.add_argument("--graph", required=True)
    p.add_argument("--source", type=int, required=True)
    p.add_argument("--target", type=int, required=True)
    p.add_argument("--mode", choices=["baseline", "improved", "both"], default="both")
    p.add_argument("--force", action="store_true", help="allow guided search on non-compliant graphs")
    p.add_argument("--expect-reachable", action="store_true", help="exit 1 if the target is not reached")
    p.add_argument("--no-timing", action="store_true", help="omit timing fields")
    p.set_defaults(func=cmd_reach)

    p = sub.add_parser("bench", parents=[common], help="synthetic baseline-vs-guided benchmark")
    p.add_argument("--profile", choices=sorted(PROFILES), default="detailed")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--nodes", type=int, default=None, help="override the profile's node count")
    p.add_argument("--queries", type=int, default=None, help="sample this many sources (default: all)")
    p.add_argument("--repeats", type=int, default=3, help="timing repetitions per query (median)")
    p.add_argument("--out", help="write the report to a .json or .csv file")
    p.add_argument("--no-timing", action="store_true", help="skip timing; output is then deterministic")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("convert", parents=[common], help="rewrite instance facts in canonical node/2 form")
    p.add_argument("--graph", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_convert)
    return parser


def main(argv=None, stdout=None):
    parser = build_parser()
    if argv is None:
        argv = sys.argv[1:]
    if not argv:
        parser.print_usage(sys.stderr)
        return 2
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2

    if args.json and getattr(args, "csv", False):
        parser.print_usage(sys.stderr)
        sys.stderr.write("schemareach: error: --json and --csv are mutually exclusive\n")
        return 2
    logging.basicConfig(level=logging.ERROR if args.quiet else logging.INFO,
                        format="%(name)s: %(message)s", stream=sys.stderr, force=True)
    out = stdout or sys.stdout
    try:
        return args.func(args, out)
    except NonCompliantError as exc:
        log.error("%s", exc)
        return 1
    except (FactError, SchemaError, GraphError, OSError, KeyError, ValueError) as exc:
        log.error("%s", exc)
        return 2


run_cli = main

if __name__ == "__main__":
    sys.exit(main())
