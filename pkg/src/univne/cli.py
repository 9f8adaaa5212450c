"""Command-line front end: classify, solve, verify, oracle, generate, bench.

Exit status: 0 when an answer was produced (an infeasible verdict is an
answer), 1 for bad input, 2 when a size guard or search budget stops the
run, 3 when a solver breaks one of its own invariants.
"""
from __future__ import annotations

import argparse
import csv
import json
import random
import sys
import time
from pathlib import Path
from typing import Callable, Sequence

from . import cycle_embed, generators, oracle, tree_embed
from .core import (
    InternalInvariantError,
    UniVNEError,
    check_feasible,
    classify_topology,
    mapping_cost,
)
from .dispatch import SizeGuardError, solve_instance
from .instance_io import (
    InstanceDocument,
    mapping_to_dict,
    parse_instance,
    parse_mapping,
    serialize_instance,
    serialize_mapping,
)
from .reductions import TRANSFORMERS

EXIT_OK, EXIT_INPUT, EXIT_GUARD, EXIT_INTERNAL = 0, 1, 2, 3


def _read(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def _load(path: str) -> InstanceDocument:
    return parse_instance(_read(path))


def cmd_classify(args: argparse.Namespace) -> int:
    doc = _load(args.instance)
    print(f"virtual: {classify_topology(doc.virtual.graph)}")
    print(f"substrate: {classify_topology(doc.substrate.graph)}")
    return EXIT_OK


def _print_outcome(doc: InstanceDocument, report, as_json: bool) -> None:
    outcome, choice = report.outcome, report.choice
    if as_json:
        out = {
            "status": outcome.status.value,
            "solver": outcome.solver_id,
            "cell": choice.cell,
            "complexity": choice.status,
            "fallback": choice.fallback,
            "cost": outcome.total_cost,
        }
        if report.budget is not None:
            out["budget"] = report.budget
            out["within_budget"] = report.within_budget
        if outcome.mapping is not None:
            out["mapping"] = mapping_to_dict(doc.virtual, outcome.mapping)
        print(json.dumps(out, indent=2))
        return
    print(f"solver: {outcome.solver_id} ({choice.rationale})")
    print(f"status: {outcome.status.value}")
    if outcome.feasible:
        print(f"cost: {outcome.total_cost}")
        print(f"placement: {list(outcome.mapping.placement)}")
        for (a, b), path in zip(doc.virtual.edges, outcome.mapping.routing):
            print(f"route ({a}, {b}): {list(path)}")
    if report.budget is not None:
        verdict = "within" if report.within_budget else "over"
        print(f"budget: {report.budget} ({verdict} budget)")


def cmd_solve(args: argparse.Namespace) -> int:
    doc = _load(args.instance)
    budget = args.budget if args.budget is not None else doc.budget
    report = solve_instance(doc.virtual, doc.substrate, doc.variant, budget, args.force_oracle)
    _print_outcome(doc, report, args.json)
    return EXIT_OK


def cmd_oracle(args: argparse.Namespace) -> int:
    doc = _load(args.instance)
    limits = oracle.OracleLimits(max_placements=args.max_placements)
    outcome = oracle.brute_force_solve(doc.virtual, doc.substrate, limits)
    print(f"status: {outcome.status.value}")
    if outcome.feasible:
        print(f"cost: {outcome.total_cost}")
        print(serialize_mapping(doc.virtual, outcome.mapping, outcome.total_cost), end="")
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    doc = _load(args.instance)
    mapping, declared = parse_mapping(_read(args.mapping), doc.virtual)
    report = check_feasible(doc.virtual, doc.substrate, mapping)
    cost = mapping_cost(doc.virtual, doc.substrate, mapping)
    print(report.describe(doc.substrate))
    print(f"cost: {cost}")
    if declared is not None and declared != cost:
        print(f"error: mapping declares cost {declared}, recomputed {cost}", file=sys.stderr)
        return EXIT_INPUT
    return EXIT_OK


def cmd_generate(args: argparse.Namespace) -> int:
    parse_source, transform = TRANSFORMERS[args.kind]
    try:
        source = parse_source(json.loads(_read(args.source)))
    except (KeyError, TypeError, json.JSONDecodeError) as exc:
        raise ValueError(f"cannot read {args.kind} source: {exc}") from None
    gi = transform(source)
    doc = InstanceDocument(gi.virtual, gi.substrate, gi.variant, gi.budget, gi.provenance)
    text = serialize_instance(doc)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK


# bench suites: name -> (solver, virtual shape, substrate family, grid of (n_r, n_s))
def _tree(rng, n):
    return generators.random_tree_substrate(rng, n)


def _cycle(rng, n):
    return generators.random_cycle_substrate(rng, n)


BENCH_SUITES: dict[str, tuple[Callable, str, Callable, list[tuple[int, int]]]] = {
    "tree-cycle": (tree_embed.solve_cycle_on_tree, "cycle", _tree, [(8, 16), (16, 16), (32, 16), (16, 32), (16, 64)]),
    "tree-path": (tree_embed.solve_path_on_tree, "path", _tree, [(8, 16), (16, 16), (32, 16), (16, 32), (16, 64)]),
    "tree-wheel": (tree_embed.solve_wheel_on_tree, "wheel", _tree, [(8, 16), (16, 16), (16, 32)]),
    "tree-clique": (tree_embed.solve_clique_on_tree, "clique", _tree, [(8, 16), (16, 16), (16, 32)]),
    "cycle-path": (cycle_embed.solve_path_on_cycle, "path", _cycle, [(8, 16), (16, 16), (16, 32)]),
    "cycle-cycle": (cycle_embed.solve_cycle_on_cycle, "cycle", _cycle, [(8, 16), (16, 16), (16, 32)]),
    "cycle-wheel": (cycle_embed.solve_wheel_on_cycle, "wheel", _cycle, [(5, 8), (6, 8), (6, 12)]),
    "cycle-clique": (cycle_embed.solve_clique_on_cycle, "clique", _cycle, [(4, 10), (6, 10), (8, 10), (8, 50)]),
}


def bench_rows(suite: str, seed: int, repeats: int) -> list[tuple[int, int, str, int]]:
    solver, shape, family, grid = BENCH_SUITES[suite]
    rows = []
    for n_r, n_s in sorted(grid):
        rng = random.Random(f"{seed}:{suite}:{n_r}:{n_s}")
        v = generators.random_virtual(rng, shape, n_r)
        s = family(rng, n_s)
        best = None
        for _ in range(repeats):
            start = time.perf_counter_ns()
            outcome = solver(v, s)
            elapsed = time.perf_counter_ns() - start
            best = elapsed if best is None else min(best, elapsed)
        rows.append((n_r, n_s, outcome.solver_id, best))
    return rows


def cmd_bench(args: argparse.Namespace) -> int:
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(["n_r", "n_s", "solver", "nanoseconds"])
    for row in bench_rows(args.suite, args.seed, args.repeats):
        writer.writerow(row)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="univne", description="Exact solvers for uniform-demand virtual network embedding.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="print the topology classes of both graphs")
    p.add_argument("instance")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("solve", help="dispatch to the best exact solver")
    p.add_argument("instance")
    p.add_argument("--budget", type=int, default=None, help="cost budget (overrides the file)")
    p.add_argument("--json", action="store_true", help="print the outcome as JSON")
    p.add_argument("--force-oracle", action="store_true", help="use brute force, ignoring the size guard")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="check a mapping against an instance")
    p.add_argument("instance")
    p.add_argument("mapping")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("oracle", help="solve by exhaustive search")
    p.add_argument("instance")
    p.add_argument("--max-placements", type=int, default=oracle.OracleLimits().max_placements)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("generate", help="build a hard instance from a source problem")
    p.add_argument("kind", choices=sorted(TRANSFORMERS))
    p.add_argument("source", help="JSON file with the source instance")
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("bench", help="time a solver over a size grid, CSV on stdout")
    p.add_argument("suite", choices=sorted(BENCH_SUITES))
    p.add_argument("--seed", type=int, default=0, help="seed for the random instances")
    p.add_argument("--repeats", type=int, default=3)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (SizeGuardError, oracle.BudgetExceededError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except InternalInvariantError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except (UniVNEError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
