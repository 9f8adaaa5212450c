"""Exhaustive solver used as ground truth for small instances.

Deliberately simple: enumerate placements node by node, and after placing a
virtual node enumerate the simple paths for the edges it closes. Pruning is
limited to capacity overflow and a cost bound that still respects the
tie-breaking order (cost, placement, routing).
"""
from __future__ import annotations

from dataclasses import dataclass

from .core import (
    Mapping,
    SolveOutcome,
    SubstrateNetwork,
    UniVNEError,
    VirtualNetwork,
    certify,
)

SOLVER_ID = "oracle"


class BudgetExceededError(UniVNEError):
    pass


@dataclass(frozen=True)
class OracleLimits:
    max_placements: int = 10**7
    max_paths_per_edge: int = 10**4


def enumerate_simple_paths(
    s: SubstrateNetwork, a: int, b: int, limits: OracleLimits = OracleLimits()
) -> list[tuple[int, ...]]:
    """All loop-free a-b paths as node sequences, in lexicographic order."""
    if a == b:
        return [(a,)]
    adj = s.graph.adjacency
    found: list[tuple[int, ...]] = []
    stack = [a]
    on_path = {a}

    def dfs(x: int) -> None:
        for y in adj[x]:
            if y in on_path:
                continue
            if y == b:
                found.append(tuple(stack) + (b,))
                if len(found) > limits.max_paths_per_edge:
                    raise BudgetExceededError(
                        f"more than {limits.max_paths_per_edge} simple paths between {a} and {b}"
                    )
                continue
            stack.append(y)
            on_path.add(y)
            dfs(y)
            stack.pop()
            on_path.discard(y)

    dfs(a)
    return found


class _Search:
    def __init__(self, v: VirtualNetwork, s: SubstrateNetwork, limits: OracleLimits, use_costs: bool):
        n_r, n_s = v.node_count, s.node_count
        if n_s**n_r > limits.max_placements:
            raise BudgetExceededError(
                f"{n_s}^{n_r} placements exceed the oracle budget of {limits.max_placements}"
            )
        self.v, self.s, self.limits = v, s, limits
        self.use_costs = use_costs
        # edges closed when their later endpoint is placed
        self.closing: list[list[int]] = [[] for _ in range(n_r)]
        for i, (a, b) in enumerate(v.edges):
            self.closing[max(a, b)].append(i)
        self.paths: dict[tuple[int, int], list[tuple[tuple[int, ...], tuple[int, ...], int]]] = {}
        self.node_left = list(s.node_capacity)
        self.edge_left = list(s.edge_capacity)
        self.placement = [0] * n_r
        self.route_choice = [0] * v.graph.edge_count
        self.best: tuple[int, tuple[int, ...], tuple[int, ...]] | None = None
        self.stop_at_first = False

    def _paths(self, a: int, b: int):
        key = (a, b)
        if key not in self.paths:
            g, s = self.s.graph, self.s
            entries = []
            for p in enumerate_simple_paths(s, a, b, self.limits):
                idx = tuple(g.edge_index(p[i], p[i + 1]) for i in range(len(p) - 1))
                cost = sum(s.edge_cost[e] for e in idx) if self.use_costs else 0
                entries.append((p, idx, cost))
            self.paths[key] = entries
        return self.paths[key]

    def _pruned(self, cost: int, depth: int) -> bool:
        if self.best is None:
            return False
        best_cost, best_place, _ = self.best
        if cost != best_cost:
            return cost > best_cost
        return tuple(self.placement[:depth]) > best_place[:depth]

    def run(self) -> None:
        self._place(0, 0)

    def _place(self, j: int, cost: int) -> bool:
        if j == self.v.node_count:
            key = (cost, tuple(self.placement), tuple(self.route_choice))
            if self.best is None or key < self.best:
                self.best = key
            return self.stop_at_first
        s = self.s
        for host in range(s.node_count):
            if self.node_left[host] == 0:
                continue
            self.placement[j] = host
            self.node_left[host] -= 1
            c = cost + (s.node_cost[host] if self.use_costs else 0)
            if not self._pruned(c, j + 1) and self._route(j, 0, c):
                self.node_left[host] += 1
                return True
            self.node_left[host] += 1
        return False

    def _route(self, j: int, t: int, cost: int) -> bool:
        edges = self.closing[j]
        if t == len(edges):
            return self._place(j + 1, cost)
        e = edges[t]
        a, b = self.v.edges[e]
        left = self.edge_left
        for choice, (_, idx, pcost) in enumerate(self._paths(self.placement[a], self.placement[b])):
            if any(left[x] == 0 for x in idx):
                continue
            c = cost + pcost
            if self._pruned(c, j + 1):
                continue
            for x in idx:
                left[x] -= 1
            self.route_choice[e] = choice
            done = self._route(j, t + 1, c)
            for x in idx:
                left[x] += 1
            if done:
                return True
        return False

    def mapping(self) -> Mapping:
        _, placement, choice = self.best
        routing = []
        for e, (a, b) in enumerate(self.v.edges):
            routing.append(self._paths(placement[a], placement[b])[choice[e]][0])
        return Mapping(placement, tuple(routing))


def brute_force_solve(
    v: VirtualNetwork, s: SubstrateNetwork, limits: OracleLimits = OracleLimits()
) -> SolveOutcome:
    """Minimum-cost feasible mapping by exhaustive search, or Infeasible.

    Ties are broken by the lexicographically smallest placement, then by the
    smallest routing (paths compared in lexicographic node order).
    """
    search = _Search(v, s, limits, use_costs=True)
    search.run()
    if search.best is None:
        return SolveOutcome.infeasible(SOLVER_ID)
    return certify(v, s, search.mapping(), SOLVER_ID, search.best[0])


def brute_force_decide_existence(
    v: VirtualNetwork, s: SubstrateNetwork, limits: OracleLimits = OracleLimits()
) -> bool:
    search = _Search(v, s, limits, use_costs=False)
    search.stop_at_first = True
    search.run()
    return search.best is not None


def brute_force_find_feasible(
    v: VirtualNetwork, s: SubstrateNetwork, limits: OracleLimits = OracleLimits()
) -> SolveOutcome:
    """First feasible mapping in search order, with its cost; costs ignored while searching."""
    search = _Search(v, s, limits, use_costs=False)
    search.stop_at_first = True
    search.run()
    if search.best is None:
        return SolveOutcome.infeasible(SOLVER_ID)
    return certify(v, s, search.mapping(), SOLVER_ID)
