"""Command-line interface.

Commands: ``classify``, ``components``, ``export``, ``sweep``, ``explain``.

Machine mode (``--json``) prints one envelope per command::

    {"command": ..., "params": {...}, "result": {...}, "schema_version": "1"}

with keys sorted and no timestamps.  ``sweep --json`` first streams one JSON
record per line, then the envelope as the last line.  Record kinds:

``cell``         ``params``, ``checks`` (applied), ``status`` (ok, discrepancy
                 or skipped); only with ``--cells``
``skipped``      ``params``, ``check``, ``reason``
``discrepancy``  ``params``, ``check``, ``theorem_verdict``, ``oracle_verdict``,
                 ``witness``, ``detail``
``summary``      ``spec``, ``cells_total``, ``cells_evaluated``,
                 ``cells_skipped``, ``discrepancy_count``, ``check_counts``

``params`` is always ``{"n": int, "offsets": [int, ...]}``.  Per-check
durations appear under ``timing`` only with ``--timing``.

Exit codes: 0 success, 2 invalid arguments or parameters, 3 oracle bound
exceeded, 4 sweep found discrepancies.
"""

from __future__ import annotations

import argparse
import json
import sys
from contextlib import nullcontext
from typing import Optional, Sequence, TextIO

from . import oracle
from . import theorems as th
from . import verify
from .core import Graph, ToeplitzParams, build_graph, validate_params
from .errors import InvalidParams, OracleBoundExceeded, UnknownFormat

SCHEMA_VERSION = "1"
EXIT_INVALID = 2
EXIT_BOUND = 3
EXIT_DISCREPANCY = 4
FORMATS = ("dot", "adjlist", "json")


def envelope(command: str, params: Optional[dict], result: dict) -> dict:
    return {"schema_version": SCHEMA_VERSION, "command": command, "params": params, "result": result}


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True)


def parse_offsets(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"offsets must be comma-separated integers: {text!r}")


# -- export ------------------------------------------------------------------


def export_graph(g: Graph, fmt: str, name: str = "G") -> str:
    if fmt == "dot":
        lines = [f'graph "{name}" {{']
        lines += [f"  {v};" for v in g.vertices()]
        lines += [f"  {u} -- {v};" for u, v in g.edges()]
        lines.append("}")
        return "\n".join(lines) + "\n"
    if fmt == "adjlist":
        rows = []
        for v in g.vertices():
            nbrs = " ".join(map(str, sorted(g.neighbors(v))))
            rows.append(f"{v}: {nbrs}".rstrip())
        return "\n".join(rows) + "\n"
    if fmt == "json":
        result = {"order": g.order, "edges": [list(e) for e in g.edges()]}
        params = g.params.as_dict() if hasattr(g, "params") else None
        return dumps(envelope("export", params, result)) + "\n"
    raise UnknownFormat(f"unknown export format {fmt!r}; expected one of {FORMATS}")


# -- commands ----------------------------------------------------------------


def _line_result(p: ToeplitzParams) -> dict:
    try:
        return th.classify_line_graph(p).as_dict()
    except OracleBoundExceeded as exc:
        return {"is_line": None, "rule": th.LineRule.ORACLE.value, "undecided": str(exc)}


def cmd_classify(args, out: TextIO) -> int:
    p = validate_params(args.n, args.offsets)
    verdict = th.classify_claw_free(p, witness=args.witness)
    line = _line_result(p)
    result = {
        "claw_free": verdict.claw_free,
        "rule": verdict.rule.value,
        "certificate": verdict.certificate,
        "witness": verdict.witness.as_list() if verdict.witness else None,
        "line_graph": line["is_line"],
        "line_graph_detail": line,
    }
    if args.all:
        g = build_graph(p)
        result["chordal"] = oracle.is_chordal(g).chordal
        result["interval"] = oracle.is_interval(g, max_cliques=args.max_cliques)
        result["clique_number"] = oracle.clique_number(g)
    if args.json:
        print(dumps(envelope("classify", p.as_dict(), result)), file=out)
        return 0

    def yn(b):
        return "undecided" if b is None else ("yes" if b else "no")

    cert = " ".join(f"{k}={v}" for k, v in sorted(verdict.certificate.items()))
    print(f"{p}", file=out)
    print(f"claw-free:  {yn(verdict.claw_free)}  [{verdict.rule.value}] {cert}".rstrip(), file=out)
    if verdict.witness:
        print(f"claw:       {verdict.witness}", file=out)
    print(f"line graph: {yn(line['is_line'])}  [{line['rule']}]", file=out)
    if line.get("component_multiset"):
        kinds = ", ".join(f"{kind} x{count}" for kind, count in line["component_multiset"])
        print(f"components: {kinds}", file=out)
    if args.all:
        print(f"chordal:    {yn(result['chordal'])}", file=out)
        print(f"interval:   {yn(result['interval'])}", file=out)
        print(f"omega:      {result['clique_number']}", file=out)
    return 0


def cmd_components(args, out: TextIO) -> int:
    p = validate_params(args.n, args.offsets)
    if th.is_cocoonery(p):
        method, report = "cocoonery", th.decompose_cocoonery(p)
    else:
        method, report = "gcd", th.decompose_gcd(p)
    result = {"method": method, **report.as_dict()}
    if args.json:
        print(dumps(envelope("components", p.as_dict(), result)), file=out)
        return 0
    print(f"{p}: {report.component_count} component(s) by {method} decomposition", file=out)
    for comp in report.components:
        print(f"  {{{','.join(map(str, comp.vertices))}}} ~ {comp.target}", file=out)
    return 0


def cmd_export(args, out: TextIO) -> int:
    p = validate_params(args.n, args.offsets)
    text = export_graph(build_graph(p), args.format, name=str(p))
    with _sink(args.output, out) as sink:
        sink.write(text)
    return 0


def cmd_explain(args, out: TextIO) -> int:
    p = validate_params(args.n, args.offsets)
    trace = verify.explain(p)
    if args.json:
        print(dumps(envelope("explain", p.as_dict(), trace)), file=out)
        return EXIT_BOUND if trace.get("error") else 0
    print(f"{p}", file=out)
    for step in trace["steps"]:
        mark = "yes" if step["holds"] else "no "
        detail = f" {step['detail']}" if "detail" in step else ""
        print(f"  [{mark}] {step['rule']}: {step['premise']}{detail}", file=out)
    if trace.get("error"):
        print(f"undecided: {trace['error']}", file=out)
        return EXIT_BOUND
    v = trace["verdict"]
    print(f"verdict: claw-free={v['claw_free']} by {v['rule']}", file=out)
    if trace["oracle"] is not None:
        print(f"oracle:  claw-free={trace['oracle']['claw_free']} agrees={trace['oracle']['agrees']}", file=out)
    return 0


def _sweep_specs(args) -> list[verify.SweepSpec]:
    if args.suite:
        return verify.suite_specs(args.suite)
    checks = tuple(args.check or ["claw"])
    family = args.family or ("fibonacci" if set(checks) == {"fibonacci"} else "all")
    return [
        verify.SweepSpec(
            k_values=tuple(args.k),
            t_max=args.t_max,
            n_min=args.n_min,
            n_max=args.n_max,
            family=family,
            checks=checks,
            max_cliques=args.max_cliques,
        )
    ]


def cmd_sweep(args, out: TextIO) -> int:
    try:
        specs = _sweep_specs(args)
    except ValueError as exc:
        raise InvalidParams(str(exc)) from exc
    summaries, total = [], 0
    with _sink(args.output, out) as sink:
        for spec in specs:
            report = verify.run_sweep(spec, workers=args.workers)
            total += len(report.discrepancies)
            summaries.append(report.summary(args.timing))
            if args.json:
                for rec in report.records(include_cells=args.cells, timing=args.timing):
                    sink.write(dumps(rec) + "\n")
            else:
                s = report.summary()
                sink.write(
                    f"{spec.name}: {s['cells_total']} cells, {s['cells_evaluated']} evaluated, "
                    f"{s['cells_skipped']} skipped, {s['discrepancy_count']} discrepancies\n"
                )
                for d in report.discrepancies:
                    sink.write(f"  DISCREPANCY {dumps(d.as_record())}\n")
        result = {"suite": args.suite, "reports": summaries, "discrepancy_count": total, "ok": total == 0}
        if args.json:
            sink.write(dumps(envelope("sweep", None, result)) + "\n")
        else:
            sink.write("ok\n" if total == 0 else f"FAILED: {total} discrepancies\n")
    return 0 if total == 0 else EXIT_DISCREPANCY


def _sink(path: Optional[str], default: TextIO):
    if path:
        return open(path, "w", encoding="utf-8")
    return nullcontext(default)


# -- argument parsing --------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")

    graph = argparse.ArgumentParser(add_help=False)
    graph.add_argument("--n", type=int, required=True, help="number of vertices")
    graph.add_argument("--offsets", type=parse_offsets, required=True, help="ascending offsets, e.g. 5,10,15")

    parser = argparse.ArgumentParser(prog="toeplitz-claw", description="Claw-free Toeplitz graph toolkit.")
    parser.add_argument("--json", dest="json_global", action="store_true", help="machine-readable output")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", parents=[common, graph], help="decide claw-freeness and line-graph membership")
    p.add_argument("--witness", action="store_true", help="attach the first claw found by brute force")
    p.add_argument("--all", action="store_true", help="also report chordality, intervality and clique number")
    p.add_argument("--max-cliques", type=int, default=oracle.CLIQUE_BOUND)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("components", parents=[common, graph], help="component decomposition with bijections")
    p.set_defaults(func=cmd_components)

    p = sub.add_parser("export", parents=[common, graph], help="write the graph as dot, adjlist or json")
    p.add_argument("--format", choices=FORMATS, default="dot")
    p.add_argument("--output", help="file to write instead of stdout")
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("explain", parents=[common, graph], help="show every rule consulted")
    p.set_defaults(func=cmd_explain)

    p = sub.add_parser("sweep", parents=[common], help="cross-check classifiers against brute force")
    p.add_argument("--suite", help="named suite: acceptance, " + ", ".join(verify.ACCEPTANCE_SUITE))
    p.add_argument("--k", type=parse_offsets, default=[2], help="comma-separated k values")
    p.add_argument("--t-max", type=int, default=10)
    p.add_argument("--n-min", default="tk+1", help="lower bound on n, e.g. 'tkm1+tk+1'")
    p.add_argument("--n-max", default="30", help="upper bound on n, e.g. 'min(40, 2*(t1+tk))'")
    p.add_argument("--family", choices=verify.FAMILIES)
    p.add_argument("--check", action="append", choices=verify.CHECKS)
    p.add_argument("--max-cliques", type=int, default=64)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--cells", action="store_true", help="emit one record per cell")
    p.add_argument("--timing", action="store_true", help="include per-check durations")
    p.add_argument("--output", help="file to write instead of stdout")
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv: Optional[Sequence[str]] = None, out: Optional[TextIO] = None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    args.json = args.json or args.json_global
    try:
        return args.func(args, out)
    except InvalidParams as exc:
        print(f"error: invalid parameters: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except UnknownFormat as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OracleBoundExceeded as exc:
        print(f"error: oracle bound exceeded: {exc}", file=sys.stderr)
        return EXIT_BOUND


if __name__ == "__main__":
    sys.exit(main())
