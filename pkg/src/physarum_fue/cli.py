"""Command-line entry point: ``physarum-fue <subcommand> ...``.

Exit codes: 0 success, 2 input error, 3 solver error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from pathlib import Path as FsPath

import numpy as np

from . import reference
from .baseline import fw_solve
from .errors import (
    NoConvergence,
    ParameterOutOfRange,
    ParseError,
    PhysarumError,
    UnknownFixture,
    ValidationError,
)
from .fue import SolverConfig, fue_run
from .io import format_table, load_fixture, load_network, report_dict, write_trace
from .shortest_path import sp_run

EXIT_OK, EXIT_INPUT, EXIT_SOLVER = 0, 2, 3
INPUT_ERRORS = (ParseError, ValidationError, UnknownFixture, ParameterOutOfRange, FileNotFoundError)


def _add_source(p: argparse.ArgumentParser):
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--network", metavar="PATH", help="network JSON file")
    src.add_argument("--fixture", metavar="NAME", help="bundled fixture (ramazani4, ghatee13)")


def _add_solver_flags(p: argparse.ArgumentParser):
    p.add_argument("--alpha-l", type=float, default=0.2)
    p.add_argument("--alpha-r", type=float, default=0.2)
    p.add_argument("--dt", type=float, default=1.0)
    p.add_argument("--iterations", type=int, default=100)
    p.add_argument("--eps", type=float, default=1e-4)
    p.add_argument("--d0", type=float, default=1.0, help="initial conductivity")
    p.add_argument("--bpr-alpha", type=float, default=0.15)
    p.add_argument("--bpr-beta", type=float, default=4.0)
    p.add_argument("--scaling", choices=("componentwise", "fuzzy-division"), default="componentwise")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="physarum-fue",
        description="Fuzzy user-equilibrium assignment with Physarum network dynamics.",
        epilog="exit codes: 0 success, 2 input error, 3 solver error",
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fuzzy-assign", help="fuzzy user-equilibrium assignment")
    _add_source(p)
    _add_solver_flags(p)
    p.add_argument("--out", metavar="DIR", help="write report.json, report.txt (and trace.csv)")
    p.add_argument("--trace", action="store_true",
                   help="emit the per-iteration trace CSV (to DIR/trace.csv, or stdout without --out)")

    p = sub.add_parser("crisp-assign", help="Frank-Wolfe crisp user equilibrium")
    _add_source(p)
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--max-iters", type=int, default=10_000)
    p.add_argument("--bpr-alpha", type=float, default=0.15)
    p.add_argument("--bpr-beta", type=float, default=4.0)
    p.add_argument("--out", metavar="DIR")

    p = sub.add_parser("shortest-path", help="Physarum shortest path on free-flow costs")
    _add_source(p)
    p.add_argument("--source", type=int, required=True)
    p.add_argument("--sink", type=int, required=True)
    p.add_argument("--i0", type=float, default=1.0)
    p.add_argument("--dt", type=float, default=0.01)
    p.add_argument("--eps", type=float, default=1e-6)
    p.add_argument("--max-iters", type=int, default=100_000)

    p = sub.add_parser("compare", help="computed flows against published reference rows")
    p.add_argument("--fixture", metavar="NAME", required=True)
    _add_solver_flags(p)
    return parser


def _network(args):
    if getattr(args, "network", None):
        return load_network(args.network)
    return load_fixture(args.fixture)


def _config(args) -> SolverConfig:
    return SolverConfig(
        alpha_l=args.alpha_l, alpha_r=args.alpha_r, dt=args.dt, max_iters=args.iterations,
        eps=args.eps, D0=args.d0, bpr_alpha=args.bpr_alpha, bpr_beta=args.bpr_beta,
        scaling=args.scaling,
    )


def _flow_table(network, columns: dict) -> str:
    order = network.sorted_link_order()
    rows = [[f"({network.links[k].i},{network.links[k].j})"] + [float(col[k]) for col in columns.values()]
            for k in order]
    return format_table(["link", *columns], rows)


def _path_table(result) -> str:
    rows = []
    for pc in result.path_costs:
        if pc.flow <= 0.005 * result.network.demand(*pc.od).q:
            continue
        t = pc.triplet
        rows.append([f"({pc.od[0]},{pc.od[1]})", str(pc.path),
                     f"({t.a1:.4f}, {t.a2:.4f}, {t.a3:.4f})", pc.centroid, pc.flow])
    return format_table(["od", "path", "fuzzy cost", "centroid", "flow"], rows)


def cmd_fuzzy_assign(args) -> int:
    network = _network(args)
    config = _config(args)
    start = time.perf_counter()
    result = fue_run(network, config)
    wall = time.perf_counter() - start
    text = "\n\n".join([
        _flow_table(network, {"flow": result.flows, "dynamic": result.dynamic_flows,
                              "conductivity": result.conductivity}),
        _path_table(result),
        f"wardrop gap {result.wardrop_gap:.6f}  iterations {result.iterations}  "
        f"converged {result.converged}  wall {wall:.3f}s",
    ])
    if args.out:
        out = FsPath(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "report.json").write_text(json.dumps(report_dict(result, wall), indent=2) + "\n")
        (out / "report.txt").write_text(text + "\n")
        if args.trace:
            with open(out / "trace.csv", "w", newline="") as fh:
                write_trace(result, fh)
        print(text)
    elif args.trace:
        write_trace(result, sys.stdout)
    else:
        print(text)
    return EXIT_OK


def cmd_crisp_assign(args) -> int:
    network = _network(args)
    state = fw_solve(network, args.tol, args.max_iters, args.bpr_alpha, args.bpr_beta)
    print(_flow_table(network, {"flow": state.x}))
    print(f"\nobjective {state.objective:.6f}  relative gap {state.gap:.3e}  iterations {state.iteration}")
    if args.out:
        out = FsPath(args.out)
        out.mkdir(parents=True, exist_ok=True)
        payload = {
            "flows": [{"i": l.i, "j": l.j, "flow": float(v)} for l, v in zip(network.links, state.x)],
            "objective": state.objective,
            "relative_gap": state.gap,
            "iterations": state.iteration,
        }
        (out / "crisp.json").write_text(json.dumps(payload, indent=2) + "\n")
    return EXIT_OK


def cmd_shortest_path(args) -> int:
    network = _network(args)
    lengths = [link.c0 for link in network.links]
    result = sp_run(network, lengths, args.source, args.sink, args.i0, args.dt, args.max_iters, args.eps)
    if result.path is None:
        print(f"no single path emerged; links above threshold: {result.selected}")
    else:
        print(f"{result.path}  length {result.length(network, lengths):g}  "
              f"iterations {result.state.iteration}")
    return EXIT_OK


def cmd_compare(args) -> int:
    network = load_fixture(args.fixture)
    result = fue_run(network, _config(args))
    flows = dict(zip((l.key for l in network.links), result.flows))
    if args.fixture == "ramazani4":
        keys = reference.RAMAZANI_LINKS
        rows = [["PA (computed)"] + [float(flows[k]) for k in keys]]
        rows += [[f"{name} (recorded)"] + [float(v[k]) for k in keys]
                 for name, v in reference.RAMAZANI_FLOWS.items()]
        print(format_table(["row"] + [f"({i},{j})" for i, j in keys], rows))
        rows = []
        for method, table in reference.RAMAZANI_PATH_VALUES.items():
            for name, values in table.items():
                rows.append([f"{method} {name} (recorded)"] + [values[p] for p in ((1, 2, 4), (1, 4), (1, 3, 4))])
        cent = {pc.path.nodes: pc.centroid for pc in result.path_costs}
        rows.append(["centroid PA (computed)"] + [cent[p] for p in ((1, 2, 4), (1, 4), (1, 3, 4))])
        print()
        print(format_table(["path values", "1→2→4", "1→4", "1→3→4"], rows))
    else:
        recorded = np.array([reference.GHATEE_FLOWS[l.key] for l in network.links])
        print(_flow_table(network, {"computed": result.flows, "recorded": recorded,
                                    "difference": result.flows - recorded}))
        rows = []
        computed = {(pc.od, pc.path.nodes): pc for pc in result.path_costs}
        for key, (triplet, deng) in reference.GHATEE_PATH_COSTS.items():
            pc = computed[key]
            rows.append([f"({key[0][0]},{key[0][1]})", "→".join(map(str, key[1])),
                         "({:.4f}, {:.4f}, {:.4f})".format(*triplet),
                         "({:.4f}, {:.4f}, {:.4f})".format(*pc.triplet.astuple())])
        print()
        print(format_table(["od", "path", "recorded", "computed"], rows))
    print(f"\nwardrop gap {result.wardrop_gap:.6f}  iterations {result.iterations}")
    return EXIT_OK


COMMANDS = {
    "fuzzy-assign": cmd_fuzzy_assign,
    "crisp-assign": cmd_crisp_assign,
    "shortest-path": cmd_shortest_path,
    "compare": cmd_compare,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except INPUT_ERRORS as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (NoConvergence, PhysarumError, np.linalg.LinAlgError) as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return EXIT_SOLVER


if __name__ == "__main__":
    sys.exit(main())
