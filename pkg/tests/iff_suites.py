"""Source-problem answer vs oracle answer on generated instances.

Each suite yields (source instance, expected answer, generated instance).
`run_suite` counts checks and collects mismatches.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import combinations, product

from source_solvers import (
    bins_fit,
    connected_simple_graphs,
    disjoint_paths_exist,
    has_hamiltonian_cycle,
    min_cut_width,
    shortest_hamiltonian_path,
    shortest_tour,
)
from univne.core import InvalidGraphError, Variant
from univne.oracle import OracleLimits, brute_force_decide_existence, brute_force_solve
from univne.reductions import (
    BppInstance,
    EdppInstance,
    HgpInstance,
    MclaInstance,
    TspInstance,
    bpp_to_tree_on_star,
    bpp_to_tree_on_tree,
    edpp_to_clique,
    edpp_to_clique_on_clique,
    hgp_to_cycle,
    hgp_to_wheel,
    mcla_to_general_on_path,
    tsp_to_cycle,
    tsp_to_path,
    tsp_to_wheel,
)

LIMITS = OracleLimits(max_placements=10**40, max_paths_per_edge=10**6)


def generated_answer(gi) -> bool:
    if gi.variant is Variant.EXISTENCE:
        return brute_force_decide_existence(gi.virtual, gi.substrate, LIMITS)
    outcome = brute_force_solve(gi.virtual, gi.substrate, LIMITS)
    return outcome.feasible and outcome.total_cost <= gi.budget


@dataclass
class SuiteResult:
    checks: int = 0
    yes: int = 0
    mismatches: list = field(default_factory=list)


def run_suite(cases) -> SuiteResult:
    result = SuiteResult()
    for source, expected, gi in cases:
        result.checks += 1
        result.yes += expected
        if generated_answer(gi) != expected:
            result.mismatches.append((source, expected))
    return result


def _bounded_degree_graphs(n: int):
    for g in connected_simple_graphs(n):
        if max(g.degree(u) for u in range(n)) <= 3:
            yield g


def hgp_cycle_cases(sizes=(3, 4, 5)):
    for n in sizes:
        for g in _bounded_degree_graphs(n):
            h = HgpInstance(g)
            yield h, has_hamiltonian_cycle(h), hgp_to_cycle(h)


def hgp_wheel_cases(sizes=(4, 5), sample: int | None = None, seed: int = 0):
    rng = random.Random(seed)
    for n in sizes:
        graphs = list(_bounded_degree_graphs(n))
        if sample is not None and len(graphs) > sample:
            graphs = rng.sample(graphs, sample)
        for g in graphs:
            h = HgpInstance(g)
            yield h, has_hamiltonian_cycle(h), hgp_to_wheel(h)


def _random_tsp(rng: random.Random, n: int) -> TspInstance:
    d = [[0] * n for _ in range(n)]
    for i, j in combinations(range(n), 2):
        d[i][j] = d[j][i] = rng.randint(1, 5)
    return TspInstance(d, rng.randint(0, 3 * n))


def tsp_cases(count: int, seed: int = 1, max_n: int = 5, wheel_max_n: int = 4):
    rng = random.Random(seed)
    for _ in range(count):
        t = _random_tsp(rng, rng.randint(3, max_n))
        tour = shortest_tour(t) <= t.bound
        yield t, tour, tsp_to_cycle(t)
        yield t, shortest_hamiltonian_path(t) <= t.bound, tsp_to_path(t)
        if t.node_count <= wheel_max_n:
            yield t, tour, tsp_to_wheel(t)


def bpp_star_cases(sizes=(1, 2), max_items: int = 4):
    for size in sizes:
        for n in range(1, max_items + 1):
            for items in product(range(1, size + 2), repeat=n):
                if list(items) != sorted(items, reverse=True):
                    continue
                b = BppInstance(items, 3, size)
                yield b, bins_fit(b), bpp_to_tree_on_star(b)


def bpp_tree_cases(size: int = 1, max_items: int = 4, extra: tuple = ()):
    """All sorted item lists for one bin size, plus explicitly listed instances."""
    chosen = []
    for n in range(1, max_items + 1):
        for items in product(range(1, size + 2), repeat=n):
            if list(items) == sorted(items, reverse=True):
                chosen.append(BppInstance(items, 3, size))
    chosen.extend(extra)
    for b in chosen:
        yield b, bins_fit(b), bpp_to_tree_on_tree(b)


def _random_edpp(rng: random.Random, n: int, k: int) -> EdppInstance:
    edges = [p for p in combinations(range(n), 2) if rng.random() < 0.45]
    nodes = rng.sample(range(n), 2 * k)
    return EdppInstance(n, edges, [(nodes[2 * i], nodes[2 * i + 1]) for i in range(k)])


def edpp_clique_cases(count: int, seed: int = 2, max_n: int = 6):
    rng = random.Random(seed)
    made = 0
    while made < count:
        n = rng.randint(2, max_n)
        e = _random_edpp(rng, n, rng.randint(1, min(2, n // 2)))
        try:
            gi = edpp_to_clique(e)
        except InvalidGraphError:
            continue
        made += 1
        yield e, disjoint_paths_exist(e), gi


def edpp_clique_on_clique_cases(count: int, seed: int = 3, max_n: int = 4):
    rng = random.Random(seed)
    for _ in range(count):
        e = _random_edpp(rng, rng.randint(2, max_n), 1)
        yield e, disjoint_paths_exist(e), edpp_to_clique_on_clique(e)


def mcla_cases(sizes=(2, 3, 4, 5), per_size: int = 60, bounds=(1, 2, 3), seed: int = 4):
    rng = random.Random(seed)
    for n in sizes:
        graphs = list(connected_simple_graphs(n))
        rng.shuffle(graphs)
        for g in graphs[:per_size]:
            for bound in bounds:
                m = MclaInstance(g, bound)
                yield m, min_cut_width(m) <= bound, mcla_to_general_on_path(m)
