"""Command line front end.

Exit codes: 0 success, 2 input error, 3 semantic error, 4 internal invariant
violation.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path
from typing import Sequence

from .election import elect_all
from .errors import InputError, InvariantViolation, QcpsError, SemanticError
from .model import Reading
from .partition import compute_grids
from .scenario_file import dump_scenario, load_scenario
from .sim import MODELS, run, run_pair, with_random_queries

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_SEMANTIC = 3
EXIT_INVARIANT = 4


def _load(args: argparse.Namespace):
    scenario = load_scenario(args.file)
    if getattr(args, "threshold", None) is not None:
        try:
            scenario = replace(scenario, threshold=args.threshold)
        except ValueError as exc:
            raise InputError(str(exc)) from None
    return scenario


def _format_answer(value) -> str:
    if value is None:
        return "absent"
    if isinstance(value, Reading):
        unit = f" {value.unit}" if value.unit else ""
        return f"{value.node_id}@{value.sim_time:.6f}={value.value!r}{unit}"
    if isinstance(value, dict):
        return json.dumps(value, sort_keys=True)
    return repr(value)


def cmd_partition(args: argparse.Namespace) -> int:
    scenario = _load(args)
    for grid in compute_grids(scenario.nodes, scenario.threshold):
        print(f"{grid.grid_id} {grid.sensor_type} [{','.join(grid.members)}] seed={grid.seed}")
    return EXIT_OK


def cmd_elect(args: argparse.Namespace) -> int:
    scenario = _load(args)
    grids = compute_grids(scenario.nodes, scenario.threshold)
    grids, centroids = elect_all(grids, {n.node_id: n.position for n in scenario.nodes})
    for grid, c in zip(grids, centroids):
        p = c.point
        print(f"{grid.grid_id} centroid=({p.x:.3f},{p.y:.3f},{p.z:.3f}) coordinator={grid.coordinator}")
    return EXIT_OK


def cmd_run(args: argparse.Namespace) -> int:
    scenario = _load(args)
    result = run(scenario, args.model)
    if args.trace:
        Path(args.trace).write_text(result.trace_text(), encoding="utf-8")
    else:
        sys.stdout.write(result.trace_text())
    if args.db_dump:
        result.cloud.dump(args.db_dump)
    for answer in result.answers:
        print(f"answer {answer.index} {answer.description} {_format_answer(answer.value)}")
    return EXIT_OK


def cmd_compare(args: argparse.Namespace) -> int:
    scenario = _load(args)
    if args.random_queries:
        scenario = with_random_queries(scenario, args.random_queries)
    report = run_pair(scenario).comparison
    sys.stdout.write(report.to_text())
    if args.csv == "-":
        sys.stdout.write(report.to_csv())
    elif args.csv:
        Path(args.csv).write_text(report.to_csv(), encoding="utf-8")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qcps", description="QCPS sensor-grid simulator")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("file", help="scenario file (JSON)")
    common.add_argument("--echo", action="store_true", help="print the parsed scenario back and exit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("partition", parents=[common], help="list grids")
    p.add_argument("--threshold", type=float, help="override the scenario threshold (m)")
    p.set_defaults(func=cmd_partition)

    p = sub.add_parser("elect", parents=[common], help="list centroids and coordinators")
    p.add_argument("--threshold", type=float, help="override the scenario threshold (m)")
    p.set_defaults(func=cmd_elect)

    p = sub.add_parser("run", parents=[common], help="run the workload and emit a message trace")
    p.add_argument("--model", choices=MODELS, default=None, help="routing model (default: scenario's)")
    p.add_argument("--trace", help="write the trace here instead of stdout")
    p.add_argument("--db-dump", help="directory for per-type CSV database dumps")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("compare", parents=[common], help="compare QCPS against direct communication")
    p.add_argument("--random-queries", type=int, default=0, metavar="N",
                   help="append N seeded random cross-grid queries")
    p.add_argument("--csv", help="write the per-node CSV here ('-' for stdout)")
    p.set_defaults(func=cmd_compare)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.echo:
            sys.stdout.write(dump_scenario(load_scenario(args.file)))
            return EXIT_OK
        if getattr(args, "random_queries", 0) < 0:
            raise InputError("--random-queries must be non-negative")
        return args.func(args)
    except InputError as exc:
        print(f"qcps: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except SemanticError as exc:
        print(f"qcps: error: {exc}", file=sys.stderr)
        return EXIT_SEMANTIC
    except InvariantViolation as exc:
        print(f"qcps: internal invariant violated: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except QcpsError as exc:
        print(f"qcps: error: {exc}", file=sys.stderr)
        return EXIT_SEMANTIC


if __name__ == "__main__":
    sys.exit(main())
