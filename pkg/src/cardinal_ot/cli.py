"""Command-line front end.

    cardinal-ot cost --cost 1:1 mu.csv nu.csv
    cardinal-ot pivot --cost 1:1 mu.csv nu.csv -o pivot.csv
    cardinal-ot validate --cost 2:2 mu.csv nu.csv flow.csv

Exit codes: 0 success, 1 unreadable input or bad arguments, 2 solver error,
3 validation failure.
"""

from __future__ import annotations

import argparse
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import io as cio
from .cardinal import flow_to_plan, validate_flow
from .closedform import LineSpec, line_flow, line_flow_general
from .costs import SeparableCost
from .errors import CardinalOTError, EmptyMeasure, LengthMismatch, UnbalancedMass
from .instances import random_pair
from .mcf import optimal_cardinal_flow
from .oracle import brute_force_wc

COMMANDS = ("cost", "plan", "flow", "pivot", "oracle", "line", "bench", "validate")
THREADS_ENV = "CARDINAL_OT_THREADS"

EXIT_OK, EXIT_PARSE, EXIT_SOLVER, EXIT_INVALID = 0, 1, 2, 3


class _ParseError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _ParseError(message)


@dataclass
class RunConfig:
    command: str
    cost: str = "2:2"
    mu: Optional[str] = None
    nu: Optional[str] = None
    flow: Optional[str] = None
    output: Optional[str] = None
    format: str = "csv"
    line: Optional[str] = None
    seed: int = 0
    instances: int = 200
    max_atoms: int = 8
    dump_network: Optional[str] = None

    def separable_cost(self) -> SeparableCost:
        return SeparableCost.parse(self.cost)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="cardinal-ot", description="Separable-cost optimal transport via cardinal flows.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, inputs=True):
        p.add_argument("--cost", default="2:2", help="component exponents p1:p2 (default 2:2)")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("-o", "--output", help="write the result here instead of standard output")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--dump-network", help="write the flow network in DOT format")
        if inputs:
            p.add_argument("mu", help="source measure (x1,x2,weight CSV or JSON)")
            p.add_argument("nu", help="target measure")

    helps = {
        "cost": "print the Wasserstein cost",
        "plan": "write an optimal transport plan",
        "flow": "write an optimal cardinal flow",
        "pivot": "write the pivot measure",
        "oracle": "print the cost from the brute-force solver",
        "line": "closed-form solution for a source measure on a line",
        "bench": "random-instance equivalence check against the brute-force solver",
        "validate": "check a cardinal-flow file against mu and nu",
    }
    for name in COMMANDS:
        p = sub.add_parser(name, help=helps[name])
        common(p, inputs=name != "bench")
        if name == "line":
            p.add_argument("--line", default="0,1,0", help="a,b,q for the line a*x1 + b*x2 = q")
        if name == "validate":
            p.add_argument("flow", help="cardinal flow file")
        if name == "bench":
            p.add_argument("--instances", type=int, default=200)
            p.add_argument("--max-atoms", type=int, default=8)
    return parser


def _emit(text: str, config: RunConfig) -> None:
    if config.output:
        with open(config.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def format_cost(value: float) -> str:
    return f"{value:#.12g}"


def _bench(config: RunConfig) -> int:
    rng = np.random.default_rng(config.seed)
    cases = []
    for k in range(config.instances):
        mu, nu = random_pair(rng, config.max_atoms)
        cases.append((mu, nu, SeparableCost.power(1 + k % 2)))

    def one(case):
        mu, nu, c = case
        t0 = time.perf_counter()
        got = optimal_cardinal_flow(mu, nu, c).cost
        t1 = time.perf_counter()
        ref = brute_force_wc(mu, nu, c)[1]
        t2 = time.perf_counter()
        return abs(got - ref) / (1.0 + abs(ref)), t1 - t0, t2 - t1

    threads = max(1, int(os.environ.get(THREADS_ENV, "1") or 1))
    with ThreadPoolExecutor(max_workers=threads) as pool:
        results = list(pool.map(one, cases))
    gaps = [r[0] for r in results]
    worst = max(gaps, default=0.0)
    out = [
        f"instances: {len(cases)}  seed: {config.seed}  max atoms: {config.max_atoms}  threads: {threads}",
        f"max relative deviation (mcf vs oracle): {worst:.3e}",
        f"{'solver':<8}{'total [s]':>12}{'mean [ms]':>12}{'max [ms]':>12}",
    ]
    for name, col in (("mcf", 1), ("oracle", 2)):
        ts = [r[col] for r in results]
        out.append(f"{name:<8}{sum(ts):>12.4f}{1e3 * np.mean(ts):>12.3f}{1e3 * max(ts):>12.3f}")
    _emit("\n".join(out) + "\n", config)
    return EXIT_OK if worst <= 1e-9 else EXIT_INVALID


def run(config: RunConfig) -> int:
    """Execute one command and return its exit code."""
    if config.command not in COMMANDS:
        raise _ParseError(f"unknown command {config.command!r}")
    c = config.separable_cost()
    if config.command == "bench":
        return _bench(config)

    mu = cio.read_measure_2d(config.mu)
    nu = cio.read_measure_2d(config.nu)
    fmt = config.format

    if config.command == "oracle":
        _emit(format_cost(brute_force_wc(mu, nu, c)[1]) + "\n", config)
        return EXIT_OK
    if config.command == "validate":
        report = validate_flow(cio.read_flow(config.flow), mu, nu)
        _emit("\n".join(report.lines()) + "\n", config)
        return EXIT_OK if report.ok else EXIT_INVALID
    if config.command == "line":
        line = LineSpec.parse(config.line)
        if c == SeparableCost.power(2, 2):
            plan, cost = line_flow_general(mu, line, nu)
        elif (line.a, line.b, line.q) == (0.0, 1.0, 0.0):
            flow, cost = line_flow(mu, nu, c)
            plan = flow_to_plan(flow)
        else:
            raise _ParseError("lines other than x2 = 0 need the squared Euclidean cost 2:2")
        print(format_cost(cost))
        if config.output:
            _emit(cio.format_plan(plan, fmt), config)
        return EXIT_OK

    flow, pivot, cost = optimal_cardinal_flow(mu, nu, c, dump_network=config.dump_network)
    if config.command == "cost":
        _emit(format_cost(cost) + "\n", config)
    elif config.command == "flow":
        _emit(cio.format_flow(flow, fmt), config)
    elif config.command == "pivot":
        _emit(cio.format_pivot(pivot, fmt), config)
    elif config.command == "plan":
        _emit(cio.format_plan(flow_to_plan(flow), fmt), config)
    return EXIT_OK


def main(argv: Optional[list[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        config = RunConfig(**{k: v for k, v in vars(args).items() if k in RunConfig.__dataclass_fields__})
        return run(config)
    except (_ParseError, cio.FormatError, EmptyMeasure, UnbalancedMass, LengthMismatch, OSError) as exc:
        print(f"cardinal-ot: error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except CardinalOTError as exc:
        print(f"cardinal-ot: solver error: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except ValueError as exc:
        print(f"cardinal-ot: error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    raise SystemExit(main())
