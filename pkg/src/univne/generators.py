"""Seeded random instances for tests and benchmarks."""
from __future__ import annotations

import random
from dataclasses import dataclass

from .core import SubstrateNetwork, VirtualNetwork


@dataclass(frozen=True)
class Ranges:
    capacity: tuple[int, int] = (1, 3)
    cost: tuple[int, int] = (0, 5)


def path_edges(n: int) -> list[tuple[int, int]]:
    return [(i, i + 1) for i in range(n - 1)]


def cycle_edges(n: int) -> list[tuple[int, int]]:
    return [(i, (i + 1) % n) for i in range(n)]


def wheel_edges(n: int) -> list[tuple[int, int]]:
    """n nodes in total: rim 0..n-2, hub n-1."""
    rim = n - 1
    return [(i, (i + 1) % rim) for i in range(rim)] + [(i, rim) for i in range(rim)]


def clique_edges(n: int) -> list[tuple[int, int]]:
    return [(i, j) for i in range(n) for j in range(i + 1, n)]


def star_edges(n: int) -> list[tuple[int, int]]:
    return [(0, i) for i in range(1, n)]


SHAPES = {
    "path": (path_edges, 1),
    "cycle": (cycle_edges, 3),
    "wheel": (wheel_edges, 4),
    "clique": (clique_edges, 2),
    "star": (star_edges, 2),
}


def relabel(rng: random.Random, n: int, edges: list[tuple[int, int]]) -> list[tuple[int, int]]:
    """Random node ids, edge order and edge orientation."""
    perm = list(range(n))
    rng.shuffle(perm)
    out = [(perm[a], perm[b]) if rng.random() < 0.5 else (perm[b], perm[a]) for a, b in edges]
    rng.shuffle(out)
    return out


def random_virtual(rng: random.Random, shape: str, n: int, shuffle: bool = True) -> VirtualNetwork:
    edges = SHAPES[shape][0](n)
    return VirtualNetwork.build(n, relabel(rng, n, edges) if shuffle else edges)


def _substrate(rng: random.Random, n: int, edges: list[tuple[int, int]], r: Ranges) -> SubstrateNetwork:
    m = len(edges)

    def draw(bounds, k):
        return [rng.randint(*bounds) for _ in range(k)]

    return SubstrateNetwork.build(n, edges, draw(r.capacity, n), draw(r.cost, n), draw(r.capacity, m), draw(r.cost, m))


def random_tree_substrate(rng: random.Random, n: int, r: Ranges = Ranges()) -> SubstrateNetwork:
    edges = [(rng.randrange(i), i) for i in range(1, n)]
    return _substrate(rng, n, relabel(rng, n, edges), r)


def random_cycle_substrate(rng: random.Random, n: int, r: Ranges = Ranges()) -> SubstrateNetwork:
    return _substrate(rng, n, relabel(rng, n, cycle_edges(n)), r)


def random_general_substrate(rng: random.Random, n: int, extra: int, r: Ranges = Ranges()) -> SubstrateNetwork:
    """Random spanning tree plus up to `extra` chords."""
    edges = {(rng.randrange(i), i) for i in range(1, n)}
    chords = [(i, j) for i in range(n) for j in range(i + 1, n) if (i, j) not in edges]
    rng.shuffle(chords)
    edges |= set(chords[:extra])
    return _substrate(rng, n, relabel(rng, n, sorted(edges)), r)


def random_hamiltonian_substrate(rng: random.Random, n: int, extra: int, r: Ranges = Ranges()) -> SubstrateNetwork:
    """Hidden Hamiltonian cycle plus chords."""
    edges = set(cycle_edges(n)) if n >= 3 else set(path_edges(n))
    edges = {(min(a, b), max(a, b)) for a, b in edges}
    chords = [(i, j) for i in range(n) for j in range(i + 1, n) if (i, j) not in edges]
    rng.shuffle(chords)
    edges |= set(chords[:extra])
    return _substrate(rng, n, relabel(rng, n, sorted(edges)), r)
