"""Data model for virtual/substrate networks, mappings and topology classes.

Every object here is immutable after construction. Node ids are dense
0-based integers. Edges are kept in the order they were given; an edge's
position in that order is its identity (routing entries, capacities and
costs are aligned with it).
"""
from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

U64_MAX = 2**64 - 1


class UniVNEError(Exception):
    """Base class for all errors raised by this package."""


class InvalidGraphError(UniVNEError, ValueError):
    pass


class MappingStructureError(UniVNEError, ValueError):
    """A mapping whose paths do not connect the placed endpoints or loop."""


class CostOverflowError(UniVNEError, ArithmeticError):
    pass


class TopologyError(UniVNEError, ValueError):
    """A solver was called on a graph outside its topology class."""


class InternalInvariantError(UniVNEError, RuntimeError):
    """A solver produced a result that failed its own self-check."""


def _check_int(value: object, what: str, minimum: int = 0) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise InvalidGraphError(f"{what} must be an integer, got {value!r}")
    if value < minimum or value > U64_MAX:
        raise InvalidGraphError(f"{what} must lie in [{minimum}, 2^64-1], got {value}")
    return value


def edge_key(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class UndirectedGraph:
    """Simple connected undirected graph on nodes 0..node_count-1."""

    node_count: int
    edges: tuple[tuple[int, int], ...]
    adjacency: tuple[tuple[int, ...], ...] = field(init=False, repr=False, compare=False)
    _index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        n = self.node_count
        if isinstance(n, bool) or not isinstance(n, int) or n < 1:
            raise InvalidGraphError(f"node count must be a positive integer, got {n!r}")
        edges = tuple((int(u), int(v)) for u, v in self.edges)
        index: dict[tuple[int, int], int] = {}
        adj: list[list[int]] = [[] for _ in range(n)]
        for i, (u, v) in enumerate(edges):
            for x in (u, v):
                if not 0 <= x < n:
                    raise InvalidGraphError(f"edge {i} ({u}, {v}) references node {x} outside 0..{n - 1}")
            if u == v:
                raise InvalidGraphError(f"edge {i} ({u}, {v}) is a self-loop")
            key = edge_key(u, v)
            if key in index:
                raise InvalidGraphError(f"edge {i} ({u}, {v}) duplicates edge {index[key]}")
            index[key] = i
            adj[u].append(v)
            adj[v].append(u)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "adjacency", tuple(tuple(sorted(a)) for a in adj))
        object.__setattr__(self, "_index", index)
        if not self._connected():
            raise InvalidGraphError("graph is not connected")

    def _connected(self) -> bool:
        seen = {0}
        queue = deque([0])
        while queue:
            x = queue.popleft()
            for y in self.adjacency[x]:
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
        return len(seen) == self.node_count

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def degree(self, u: int) -> int:
        return len(self.adjacency[u])

    def has_edge(self, u: int, v: int) -> bool:
        return edge_key(u, v) in self._index

    def edge_index(self, u: int, v: int) -> int:
        try:
            return self._index[edge_key(u, v)]
        except KeyError:
            raise InvalidGraphError(f"({u}, {v}) is not an edge") from None


@dataclass(frozen=True)
class SubstrateNetwork:
    """Substrate graph with per-node and per-edge capacities and unit costs.

    Node capacities may be 0 (some hardness constructions need it); edge
    capacities must be at least 1.
    """

    graph: UndirectedGraph
    node_capacity: tuple[int, ...]
    node_cost: tuple[int, ...]
    edge_capacity: tuple[int, ...]
    edge_cost: tuple[int, ...]

    def __post_init__(self) -> None:
        n, m = self.graph.node_count, self.graph.edge_count
        for name, size in (("node_capacity", n), ("node_cost", n), ("edge_capacity", m), ("edge_cost", m)):
            values = tuple(getattr(self, name))
            if len(values) != size:
                raise InvalidGraphError(f"{name} has {len(values)} entries, expected {size}")
            minimum = 1 if name == "edge_capacity" else 0
            for i, value in enumerate(values):
                _check_int(value, f"{name}[{i}]", minimum)
            object.__setattr__(self, name, values)

    @classmethod
    def build(
        cls,
        node_count: int,
        edges: Iterable[tuple[int, int]],
        node_capacity: int | Sequence[int] = 1,
        node_cost: int | Sequence[int] = 0,
        edge_capacity: int | Sequence[int] = 1,
        edge_cost: int | Sequence[int] = 0,
    ) -> "SubstrateNetwork":
        """Convenience constructor; scalar arguments are broadcast."""
        graph = UndirectedGraph(node_count, tuple(edges))
        m = graph.edge_count

        def spread(x, size):
            return (x,) * size if isinstance(x, int) else tuple(x)

        return cls(
            graph,
            spread(node_capacity, node_count),
            spread(node_cost, node_count),
            spread(edge_capacity, m),
            spread(edge_cost, m),
        )

    @property
    def node_count(self) -> int:
        return self.graph.node_count

    def with_costs(self, node_cost: Sequence[int], edge_cost: Sequence[int]) -> "SubstrateNetwork":
        return SubstrateNetwork(self.graph, self.node_capacity, tuple(node_cost), self.edge_capacity, tuple(edge_cost))

    def with_capacities(self, node_capacity: Sequence[int], edge_capacity: Sequence[int]) -> "SubstrateNetwork":
        return SubstrateNetwork(self.graph, tuple(node_capacity), self.node_cost, tuple(edge_capacity), self.edge_cost)


@dataclass(frozen=True)
class VirtualNetwork:
    """Virtual graph; every node demands one unit and every edge one unit per hop."""

    graph: UndirectedGraph

    @classmethod
    def build(cls, node_count: int, edges: Iterable[tuple[int, int]]) -> "VirtualNetwork":
        return cls(UndirectedGraph(node_count, tuple(edges)))

    @property
    def node_count(self) -> int:
        return self.graph.node_count

    @property
    def edges(self) -> tuple[tuple[int, int], ...]:
        return self.graph.edges


# A substrate path is stored as its node sequence. A single node denotes the
# empty path at a co-location; this keeps the anchor node explicit.
SubstratePath = tuple[int, ...]


def path_edges(path: Sequence[int]) -> list[tuple[int, int]]:
    return [(path[i], path[i + 1]) for i in range(len(path) - 1)]


@dataclass(frozen=True)
class Mapping:
    """Node placement plus one substrate path per virtual edge.

    routing[i] is the node sequence for virtual edge i = (u, v), running from
    placement[u] to placement[v].
    """

    placement: tuple[int, ...]
    routing: tuple[SubstratePath, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "placement", tuple(self.placement))
        object.__setattr__(self, "routing", tuple(tuple(p) for p in self.routing))


def orient_route(v: VirtualNetwork, placement: Sequence[int], edge: int, path: Sequence[int]) -> tuple[int, ...]:
    """Return path oriented from placement[u] to placement[v] for edge (u, v)."""
    a, b = v.edges[edge]
    path = tuple(path)
    if path and path[0] == placement[a] and path[-1] == placement[b]:
        return path
    if path and path[0] == placement[b] and path[-1] == placement[a]:
        return path[::-1]
    return path


@dataclass
class FeasibilityReport:
    node_load: list[int]
    node_capacity: list[int]
    edge_load: list[int]
    edge_capacity: list[int]
    node_violations: list[int]
    edge_violations: list[int]

    @property
    def feasible(self) -> bool:
        return not self.node_violations and not self.edge_violations

    def describe(self, s: SubstrateNetwork | None = None) -> str:
        lines = ["feasible" if self.feasible else "infeasible"]
        for u, (load, cap) in enumerate(zip(self.node_load, self.node_capacity)):
            flag = "  VIOLATION" if u in self.node_violations else ""
            lines.append(f"node {u}: {load}/{cap}{flag}")
        for e, (load, cap) in enumerate(zip(self.edge_load, self.edge_capacity)):
            ends = f" {s.graph.edges[e]}" if s is not None else ""
            flag = "  VIOLATION" if e in self.edge_violations else ""
            lines.append(f"edge {e}{ends}: {load}/{cap}{flag}")
        return "\n".join(lines)


def _validate_structure(v: VirtualNetwork, s: SubstrateNetwork, m: Mapping) -> None:
    n_s = s.node_count
    if len(m.placement) != v.node_count:
        raise MappingStructureError(f"placement has {len(m.placement)} entries, expected {v.node_count}")
    for i, host in enumerate(m.placement):
        if isinstance(host, bool) or not isinstance(host, int) or not 0 <= host < n_s:
            raise MappingStructureError(f"virtual node {i} placed on invalid substrate node {host!r}")
    if len(m.routing) != v.graph.edge_count:
        raise MappingStructureError(f"routing has {len(m.routing)} entries, expected {v.graph.edge_count}")
    for i, ((a, b), path) in enumerate(zip(v.edges, m.routing)):
        if not path:
            raise MappingStructureError(f"virtual edge {i} ({a}, {b}) has no anchor node")
        if path[0] != m.placement[a] or path[-1] != m.placement[b]:
            raise MappingStructureError(
                f"path of virtual edge {i} ({a}, {b}) runs {path[0]}..{path[-1]}, "
                f"expected {m.placement[a]}..{m.placement[b]}"
            )
        if len(set(path)) != len(path):
            raise MappingStructureError(f"path of virtual edge {i} ({a}, {b}) repeats a node")
        for x, y in path_edges(path):
            if not (0 <= x < n_s and 0 <= y < n_s and s.graph.has_edge(x, y)):
                raise MappingStructureError(f"path of virtual edge {i} uses non-edge ({x}, {y})")


def check_feasible(v: VirtualNetwork, s: SubstrateNetwork, m: Mapping) -> FeasibilityReport:
    """Count node and edge loads against capacities.

    Raises MappingStructureError when a path is disconnected from its
    endpoints, uses a non-edge or revisits a node.
    """
    _validate_structure(v, s, m)
    node_load = [0] * s.node_count
    for host in m.placement:
        node_load[host] += 1
    edge_load = [0] * s.graph.edge_count
    for path in m.routing:
        for x, y in path_edges(path):
            edge_load[s.graph.edge_index(x, y)] += 1
    return FeasibilityReport(
        node_load=node_load,
        node_capacity=list(s.node_capacity),
        edge_load=edge_load,
        edge_capacity=list(s.edge_capacity),
        node_violations=[u for u, load in enumerate(node_load) if load > s.node_capacity[u]],
        edge_violations=[e for e, load in enumerate(edge_load) if load > s.edge_capacity[e]],
    )


def mapping_cost(v: VirtualNetwork, s: SubstrateNetwork, m: Mapping) -> int:
    """Placement cost plus per-hop routing cost. Raises on 64-bit overflow."""
    _validate_structure(v, s, m)
    total = sum(s.node_cost[host] for host in m.placement)
    for path in m.routing:
        total += sum(s.edge_cost[s.graph.edge_index(x, y)] for x, y in path_edges(path))
    if total > U64_MAX:
        raise CostOverflowError(f"mapping cost {total} exceeds the 64-bit range")
    return total


class Topology(str, enum.Enum):
    PATH = "Path"
    CYCLE = "Cycle"
    STAR = "Star"
    WHEEL = "Wheel"
    TREE = "Tree"
    CLIQUE = "Clique"
    GENERAL = "General"


@dataclass(frozen=True)
class TopologySet:
    """Topology flags plus the canonical node orders the solvers rely on.

    path_order / cycle_order list node ids by position; wheel_order lists the
    outer cycle by position followed by the hub.
    """

    flags: frozenset[Topology]
    path_order: tuple[int, ...] | None = None
    cycle_order: tuple[int, ...] | None = None
    wheel_order: tuple[int, ...] | None = None
    star_center: int | None = None

    def __contains__(self, item: Topology) -> bool:
        return item in self.flags

    def names(self) -> list[str]:
        return [t.value for t in Topology if t in self.flags]

    def __str__(self) -> str:
        return "{" + ", ".join(self.names()) + "}"


def _walk(g: UndirectedGraph, start: int, nxt: int, avoid: set[int] | None = None) -> list[int]:
    """Follow a chain of degree-2 nodes from start through nxt."""
    order = [start, nxt]
    while True:
        prev, cur = order[-2], order[-1]
        options = [y for y in g.adjacency[cur] if y != prev and (avoid is None or y not in avoid)]
        if not options or options[0] == order[0]:
            return order
        order.append(options[0])


def _cycle_order(g: UndirectedGraph, nodes: list[int], removed: set[int]) -> tuple[int, ...] | None:
    """Canonical order if the subgraph induced by nodes is a single cycle."""
    if len(nodes) < 3:
        return None
    inside = set(nodes)
    nbrs = {u: [y for y in g.adjacency[u] if y in inside] for u in nodes}
    if any(len(a) != 2 for a in nbrs.values()):
        return None
    start = min(nodes)
    order = _walk(g, start, min(nbrs[start]), removed)
    if len(order) != len(nodes):
        return None
    return tuple(order)


def classify_topology(g: UndirectedGraph) -> TopologySet:
    n, m = g.node_count, g.edge_count
    deg = [g.degree(u) for u in range(n)]
    flags: set[Topology] = set()
    path_order = cycle_order = wheel_order = None
    star_center = None

    if m == n - 1:
        flags.add(Topology.TREE)
    if n == 1:
        flags.add(Topology.PATH)
        path_order = (0,)
    elif m == n - 1 and all(d <= 2 for d in deg):
        flags.add(Topology.PATH)
        start = min(u for u in range(n) if deg[u] == 1)
        path_order = tuple(_walk(g, start, g.adjacency[start][0])) if n > 1 else (start,)
    if n >= 3 and m == n and all(d == 2 for d in deg):
        flags.add(Topology.CYCLE)
        cycle_order = _cycle_order(g, list(range(n)), set())
    if n >= 3 and m == n - 1:
        centers = [u for u in range(n) if deg[u] == n - 1]
        if centers:
            flags.add(Topology.STAR)
            star_center = centers[0]
    if n >= 4 and m == 2 * (n - 1):
        for hub in range(n):
            if deg[hub] != n - 1:
                continue
            outer = [u for u in range(n) if u != hub]
            order = _cycle_order(g, outer, {hub})
            if order is not None:
                flags.add(Topology.WHEEL)
                wheel_order = order + (hub,)
                break
    if n >= 2 and m == n * (n - 1) // 2:
        flags.add(Topology.CLIQUE)
    if not flags:
        flags.add(Topology.GENERAL)
    return TopologySet(frozenset(flags), path_order, cycle_order, wheel_order, star_center)


def shift_virtual_indices(v: VirtualNetwork, m: Mapping, offset: int) -> Mapping:
    """Rotate a cycle embedding: canonical node i takes the host of node i - offset."""
    topo = classify_topology(v.graph)
    if Topology.CYCLE not in topo:
        raise TopologyError("shift_virtual_indices needs a cycle virtual network")
    order = topo.cycle_order
    n = len(order)
    pos = {node: i for i, node in enumerate(order)}
    placement = [0] * n
    for i, node in enumerate(order):
        placement[order[(i + offset) % n]] = m.placement[node]
    routing = []
    for a, b in v.edges:
        src_a = order[(pos[a] - offset) % n]
        src_b = order[(pos[b] - offset) % n]
        idx = v.graph.edge_index(src_a, src_b)
        path = m.routing[idx]
        routing.append(path if v.edges[idx] == (src_a, src_b) else path[::-1])
    return Mapping(tuple(placement), tuple(routing))


class Variant(str, enum.Enum):
    """Existence asks for any feasible mapping; cost asks for one within a budget."""

    EXISTENCE = "existence"
    COST = "cost"


class Status(str, enum.Enum):
    FEASIBLE = "feasible"
    INFEASIBLE = "infeasible"


@dataclass(frozen=True)
class SolveOutcome:
    status: Status
    solver_id: str
    mapping: Mapping | None = None
    total_cost: int | None = None

    @property
    def feasible(self) -> bool:
        return self.status is Status.FEASIBLE

    @classmethod
    def infeasible(cls, solver_id: str) -> "SolveOutcome":
        return cls(Status.INFEASIBLE, solver_id)


def certify(v: VirtualNetwork, s: SubstrateNetwork, m: Mapping, solver_id: str, expected: int | None = None) -> SolveOutcome:
    """Wrap a solver witness after re-checking feasibility and cost."""
    report = check_feasible(v, s, m)
    if not report.feasible:
        raise InternalInvariantError(f"{solver_id} produced an infeasible mapping")
    cost = mapping_cost(v, s, m)
    if expected is not None and cost != expected:
        raise InternalInvariantError(f"{solver_id} witness costs {cost}, optimum claimed {expected}")
    return SolveOutcome(Status.FEASIBLE, solver_id, m, cost)
