"""Minimum-cost integer flow and the star solver built on top of it."""
from __future__ import annotations

import heapq
from dataclasses import dataclass, field

from .core import (
    Mapping,
    SolveOutcome,
    SubstrateNetwork,
    TopologyError,
    VirtualNetwork,
    certify,
)

STAR_SOLVER_ID = "star-flow"


@dataclass(frozen=True)
class Arc:
    u: int
    v: int
    capacity: int
    cost: int
    directed: bool = False


@dataclass(frozen=True)
class FlowNetwork:
    """Flow instance. Undirected arcs share one capacity pool across both directions."""

    node_count: int
    arcs: tuple[Arc, ...]
    source: int
    sink: int
    demand: int
    budget: int | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "arcs", tuple(self.arcs))
        for a in self.arcs:
            if a.capacity < 0 or a.cost < 0:
                raise ValueError(f"arc {a} has a negative capacity or cost")
        if self.demand < 0:
            raise ValueError("demand must be non-negative")


@dataclass
class FlowAssignment:
    paths: list[tuple[tuple[int, ...], int]] = field(default_factory=list)
    cost: int = 0

    @property
    def units(self) -> int:
        return sum(u for _, u in self.paths)


class _Residual:
    def __init__(self, n: int):
        self.n = n
        self.head: list[int] = []
        self.cap: list[int] = []
        self.cost: list[int] = []
        self.out: list[list[int]] = [[] for _ in range(n)]

    def add(self, u: int, v: int, cap: int, cost: int) -> int:
        # arc i and its reverse i ^ 1
        i = len(self.head)
        for x, y, c, w in ((u, v, cap, cost), (v, u, 0, -cost)):
            self.head.append(y)
            self.cap.append(c)
            self.cost.append(w)
            self.out[x].append(len(self.head) - 1)
        return i


def min_cost_integer_flow(net: FlowNetwork) -> FlowAssignment | None:
    """Cheapest integral flow of net.demand units, decomposed into paths.

    Successive shortest paths with Dijkstra on reduced costs. Returns None
    when the maximum flow is below the demand, or when a budget is set and
    the minimum cost exceeds it. Paths are ordered by first-hop node.
    """
    n, src, dst = net.node_count, net.source, net.sink
    if net.demand == 0:
        return FlowAssignment([], 0)
    if src == dst:
        return None
    res = _Residual(n)
    forward: list[tuple[int, int, int]] = []  # (arc id, tail, head) of every original direction
    for a in net.arcs:
        if a.capacity == 0:
            continue
        i = res.add(a.u, a.v, a.capacity, a.cost)
        forward.append((i, a.u, a.v))
        if not a.directed:
            j = res.add(a.v, a.u, a.capacity, a.cost)
            forward.append((j, a.v, a.u))
    potential = [0] * n
    sent = 0
    inf = float("inf")
    while sent < net.demand:
        dist = [inf] * n
        prev = [-1] * n
        dist[src] = 0
        heap = [(0, src)]
        while heap:
            d, x = heapq.heappop(heap)
            if d > dist[x]:
                continue
            for arc in res.out[x]:
                if res.cap[arc] <= 0:
                    continue
                y = res.head[arc]
                nd = d + res.cost[arc] + potential[x] - potential[y]
                if nd < dist[y]:
                    dist[y] = nd
                    prev[y] = arc
                    heapq.heappush(heap, (nd, y))
        if dist[dst] == inf:
            return None
        for x in range(n):
            if dist[x] < inf:
                potential[x] += dist[x]
        push = net.demand - sent
        y = dst
        while y != src:
            arc = prev[y]
            push = min(push, res.cap[arc])
            y = res.head[arc ^ 1]
        y = dst
        while y != src:
            arc = prev[y]
            res.cap[arc] -= push
            res.cap[arc ^ 1] += push
            y = res.head[arc ^ 1]
        sent += push

    # Net flow per original arc; the two directions of an undirected arc cancel.
    flow: dict[tuple[int, int], int] = {}
    total = 0
    k = 0
    for a in net.arcs:
        if a.capacity == 0:
            continue
        f = res.cap[forward[k][0] ^ 1]
        k += 1
        if not a.directed:
            f -= res.cap[forward[k][0] ^ 1]
            k += 1
        if f == 0:
            continue
        key = (a.u, a.v) if f > 0 else (a.v, a.u)
        flow[key] = flow.get(key, 0) + abs(f)
        total += abs(f) * a.cost
    paths = _decompose(n, src, dst, flow)
    if net.budget is not None and total > net.budget:
        return None
    paths.sort(key=lambda item: (item[0][1] if len(item[0]) > 1 else -1, item[0]))
    return FlowAssignment(paths, total)


def _decompose(n: int, src: int, dst: int, flow: dict[tuple[int, int], int]) -> list[tuple[tuple[int, ...], int]]:
    out: list[list[int]] = [[] for _ in range(n)]
    for u, v in sorted(flow):
        out[u].append(v)
    paths: list[tuple[tuple[int, ...], int]] = []
    while True:
        walk = [src]
        seen = {src: 0}
        while walk[-1] != dst:
            x = walk[-1]
            nxt = next((y for y in out[x] if flow.get((x, y), 0) > 0), None)
            if nxt is None:
                break
            if nxt in seen:
                # zero-cost cycle left by cancellation order: remove it
                cyc = walk[seen[nxt]:] + [nxt]
                units = min(flow[(cyc[i], cyc[i + 1])] for i in range(len(cyc) - 1))
                for i in range(len(cyc) - 1):
                    flow[(cyc[i], cyc[i + 1])] -= units
                for z in walk[seen[nxt] + 1:]:
                    del seen[z]
                walk = walk[: seen[nxt] + 1]
                continue
            seen[nxt] = len(walk)
            walk.append(nxt)
        if walk[-1] != dst:
            return paths
        units = min(flow[(walk[i], walk[i + 1])] for i in range(len(walk) - 1))
        for i in range(len(walk) - 1):
            flow[(walk[i], walk[i + 1])] -= units
        paths.append((tuple(walk), units))


def star_center_of(v: VirtualNetwork) -> int:
    """Center of a star-shaped virtual graph (K2 counts, center = node 0)."""
    n = v.node_count
    if n < 2 or v.graph.edge_count != n - 1:
        raise TopologyError("star solver needs a star virtual network with at least one leaf")
    for u in range(n):
        if v.graph.degree(u) == n - 1:
            return u
    raise TopologyError("star solver needs a star virtual network with at least one leaf")


def solve_star_on_general(v: VirtualNetwork, s: SubstrateNetwork) -> SolveOutcome:
    """One min-cost flow per candidate center host; leaves are flow units."""
    center = star_center_of(v)
    leaves = [u for u in range(v.node_count) if u != center]
    n_s = s.node_count
    src = n_s
    edge_arcs = [
        Arc(a, b, s.edge_capacity[i], s.edge_cost[i]) for i, (a, b) in enumerate(s.graph.edges)
    ]
    best: tuple[int, int, FlowAssignment] | None = None
    for host in range(n_s):
        if s.node_capacity[host] < 1:
            continue
        arcs = list(edge_arcs)
        for x in range(n_s):
            cap = s.node_capacity[x] - (1 if x == host else 0)
            if cap > 0:
                arcs.append(Arc(src, x, cap, s.node_cost[x], directed=True))
        result = min_cost_integer_flow(FlowNetwork(n_s + 1, tuple(arcs), src, host, len(leaves)))
        if result is None:
            continue
        total = s.node_cost[host] + result.cost
        if best is None or total < best[0]:
            best = (total, host, result)
    if best is None:
        return SolveOutcome.infeasible(STAR_SOLVER_ID)
    total, host, result = best
    placement = [0] * v.node_count
    placement[center] = host
    leaf_route: dict[int, tuple[int, ...]] = {}
    units = [p[1:] for p, k in result.paths for _ in range(k)]
    for leaf, route in zip(leaves, units):
        placement[leaf] = route[0]
        leaf_route[leaf] = route
    routing = []
    for a, b in v.edges:
        leaf = b if a == center else a
        route = leaf_route[leaf]
        routing.append(route if a == leaf else route[::-1])
    return certify(v, s, Mapping(tuple(placement), tuple(routing)), STAR_SOLVER_ID, total)
