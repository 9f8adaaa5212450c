"""Hardness constructions as instance transformers.

Each transformer turns an instance of a classic NP-hard decision problem
into a uniVNE instance whose answer is the same. They are used to generate
certified hard inputs and to cross-check the oracle at small sizes.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Any, Sequence

from .core import (
    InvalidGraphError,
    SubstrateNetwork,
    UndirectedGraph,
    Variant,
    VirtualNetwork,
    edge_key,
)


def _simple_edges(n: int, edges: Sequence[Sequence[int]]) -> tuple[tuple[int, int], ...]:
    """Validate a simple graph that is allowed to be disconnected."""
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise InvalidGraphError(f"node count must be a positive integer, got {n!r}")
    seen: set[tuple[int, int]] = set()
    out = []
    for i, (u, v) in enumerate(edges):
        for x in (u, v):
            if isinstance(x, bool) or not isinstance(x, int) or not 0 <= x < n:
                raise InvalidGraphError(f"edge {i} ({u}, {v}) references node {x} outside 0..{n - 1}")
        if u == v:
            raise InvalidGraphError(f"edge {i} ({u}, {v}) is a self-loop")
        if edge_key(u, v) in seen:
            raise InvalidGraphError(f"edge {i} ({u}, {v}) is a duplicate")
        seen.add(edge_key(u, v))
        out.append((u, v))
    return tuple(out)


def _positive(value: object, what: str, minimum: int = 1) -> int:
    if isinstance(value, bool) or not isinstance(value, int) or value < minimum:
        raise InvalidGraphError(f"{what} must be an integer >= {minimum}, got {value!r}")
    return value


@dataclass(frozen=True)
class HgpInstance:
    """Does the graph contain a Hamiltonian cycle?"""

    graph: UndirectedGraph

    @classmethod
    def from_dict(cls, data: dict) -> "HgpInstance":
        return cls(UndirectedGraph(data["nodes"], tuple(tuple(e) for e in data["edges"])))

    def to_dict(self) -> dict:
        return {"nodes": self.graph.node_count, "edges": [list(e) for e in self.graph.edges]}


@dataclass(frozen=True)
class TspInstance:
    """Complete graph with positive symmetric distances and a length bound."""

    distance: tuple[tuple[int, ...], ...]
    bound: int

    def __post_init__(self) -> None:
        d = tuple(tuple(row) for row in self.distance)
        n = len(d)
        if n < 1 or any(len(row) != n for row in d):
            raise InvalidGraphError("distance matrix must be square and non-empty")
        for i in range(n):
            for j in range(n):
                if i != j:
                    _positive(d[i][j], f"distance[{i}][{j}]")
                    if d[i][j] != d[j][i]:
                        raise InvalidGraphError(f"distance[{i}][{j}] != distance[{j}][{i}]")
        _positive(self.bound, "bound", 0)
        object.__setattr__(self, "distance", d)

    @property
    def node_count(self) -> int:
        return len(self.distance)

    @classmethod
    def from_dict(cls, data: dict) -> "TspInstance":
        return cls(tuple(tuple(row) for row in data["distances"]), data["bound"])

    def to_dict(self) -> dict:
        return {"distances": [list(r) for r in self.distance], "bound": self.bound}


@dataclass(frozen=True)
class BppInstance:
    """Can the items be split into `bins` groups each summing to at most `size`?"""

    items: tuple[int, ...]
    bins: int
    size: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "items", tuple(self.items))
        for i, a in enumerate(self.items):
            _positive(a, f"item {i}")
        _positive(self.bins, "bins")
        _positive(self.size, "size")

    @classmethod
    def from_dict(cls, data: dict) -> "BppInstance":
        return cls(tuple(data["items"]), data["bins"], data["size"])

    def to_dict(self) -> dict:
        return {"items": list(self.items), "bins": self.bins, "size": self.size}


@dataclass(frozen=True)
class EdppInstance:
    """Are there edge-disjoint paths joining every terminal pair?"""

    node_count: int
    edges: tuple[tuple[int, int], ...]
    pairs: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "edges", _simple_edges(self.node_count, self.edges))
        pairs = tuple((int(s), int(t)) for s, t in self.pairs)
        for i, (s, t) in enumerate(pairs):
            for x in (s, t):
                if not 0 <= x < self.node_count:
                    raise InvalidGraphError(f"pair {i} references node {x} outside 0..{self.node_count - 1}")
            if s == t:
                raise InvalidGraphError(f"pair {i} joins node {s} to itself")
        object.__setattr__(self, "pairs", pairs)

    @classmethod
    def from_dict(cls, data: dict) -> "EdppInstance":
        return cls(data["nodes"], tuple(tuple(e) for e in data["edges"]), tuple(tuple(p) for p in data["pairs"]))

    def to_dict(self) -> dict:
        return {
            "nodes": self.node_count,
            "edges": [list(e) for e in self.edges],
            "pairs": [list(p) for p in self.pairs],
        }


@dataclass(frozen=True)
class MclaInstance:
    """Is there a linear ordering in which every gap is crossed by at most `bound` edges?"""

    graph: UndirectedGraph
    bound: int

    def __post_init__(self) -> None:
        _positive(self.bound, "bound")

    @classmethod
    def from_dict(cls, data: dict) -> "MclaInstance":
        return cls(UndirectedGraph(data["nodes"], tuple(tuple(e) for e in data["edges"])), data["bound"])

    def to_dict(self) -> dict:
        return {"nodes": self.graph.node_count, "edges": [list(e) for e in self.graph.edges], "bound": self.bound}


@dataclass(frozen=True)
class GeneratedInstance:
    virtual: VirtualNetwork
    substrate: SubstrateNetwork
    variant: Variant
    budget: int | None = None
    provenance: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if (self.variant is Variant.COST) != (self.budget is not None):
            raise ValueError("a budget is required for the cost variant and only there")


def _cycle_edges(n: int) -> list[tuple[int, int]]:
    return [(i, (i + 1) % n) for i in range(n)]


def _path_edges(n: int) -> list[tuple[int, int]]:
    return [(i, i + 1) for i in range(n - 1)]


def _wheel_edges(n: int) -> list[tuple[int, int]]:
    """Outer cycle on 0..n-1, hub n."""
    return _cycle_edges(n) + [(i, n) for i in range(n)]


def _clique_edges(n: int) -> list[tuple[int, int]]:
    return list(combinations(range(n), 2))


def _provenance(source: str, construction: str, instance: Any, **extra: Any) -> dict[str, Any]:
    out = {"source": source, "construction": construction, "instance": instance.to_dict()}
    out.update(extra)
    return out


def _check_max_degree(g: UndirectedGraph, limit: int) -> None:
    for u in range(g.node_count):
        if g.degree(u) > limit:
            raise InvalidGraphError(f"node {u} has degree {g.degree(u)}; the construction needs degree <= {limit}")


def hgp_to_cycle(h: HgpInstance) -> GeneratedInstance:
    """Virtual cycle over the graph itself with unit capacities."""
    g = h.graph
    if g.node_count < 3:
        raise InvalidGraphError("the construction needs at least 3 nodes")
    _check_max_degree(g, 3)
    return GeneratedInstance(
        VirtualNetwork.build(g.node_count, _cycle_edges(g.node_count)),
        SubstrateNetwork.build(g.node_count, g.edges),
        Variant.EXISTENCE,
        provenance=_provenance("hamiltonian-cycle", "virtual cycle on the graph", h),
    )


def hgp_to_wheel(h: HgpInstance) -> GeneratedInstance:
    """Virtual wheel over the graph plus a universal hub node."""
    g = h.graph
    n = g.node_count
    if n < 4:
        raise InvalidGraphError("the construction needs at least 4 nodes")
    _check_max_degree(g, 3)
    edges = list(g.edges) + [(u, n) for u in range(n)]
    return GeneratedInstance(
        VirtualNetwork.build(n + 1, _wheel_edges(n)),
        SubstrateNetwork.build(n + 1, edges),
        Variant.EXISTENCE,
        provenance=_provenance("hamiltonian-cycle", "virtual wheel on the graph plus a universal hub", h),
    )


def _terminals(e: EdppInstance) -> list[int]:
    if not e.pairs:
        raise InvalidGraphError("at least one terminal pair is required")
    terminals = [x for pair in e.pairs for x in pair]
    if len(set(terminals)) != len(terminals):
        raise InvalidGraphError("terminals must be pairwise distinct across all pairs")
    return terminals


def _cross_pair(e: EdppInstance) -> set[tuple[int, int]]:
    """Node pairs joining terminals of two different pairs."""
    out = set()
    for i, j in combinations(range(len(e.pairs)), 2):
        for x in e.pairs[i]:
            for y in e.pairs[j]:
                out.add(edge_key(x, y))
    return out


def edpp_to_clique(e: EdppInstance) -> GeneratedInstance:
    """Virtual clique on the terminals; only terminals can host."""
    terminals = _terminals(e)
    cross = _cross_pair(e)
    original = {edge_key(u, v) for u, v in e.edges}
    edges = list(e.edges) + sorted(cross - original)
    caps = [1 + (1 if edge_key(u, v) in original and edge_key(u, v) in cross else 0) for u, v in edges]
    node_cap = [1 if u in set(terminals) else 0 for u in range(e.node_count)]
    try:
        substrate = SubstrateNetwork.build(e.node_count, edges, node_capacity=node_cap, edge_capacity=caps)
    except InvalidGraphError:
        raise InvalidGraphError(
            "the substrate built from this graph is disconnected; drop nodes no terminal can reach"
        ) from None
    return GeneratedInstance(
        VirtualNetwork.build(len(terminals), _clique_edges(len(terminals))),
        substrate,
        Variant.EXISTENCE,
        provenance=_provenance("edge-disjoint-paths", "virtual clique on the terminals", e),
    )


def edpp_to_clique_on_clique(e: EdppInstance) -> GeneratedInstance:
    """Virtual clique of one node per graph node plus one per terminal, on a substrate clique.

    A pair x, y gets one unit of edge capacity per pair of virtual nodes
    that sit on x and y in the intended mapping, minus the direct link of a
    terminal pair (that one is routed along its disjoint path), plus one
    unit if xy is an original edge (room for the disjoint paths).
    """
    terminals = set(_terminals(e))
    pair_of = {frozenset(p) for p in e.pairs}
    n = e.node_count
    if n < 2:
        raise InvalidGraphError("the construction needs at least 2 nodes")
    original = {edge_key(u, v) for u, v in e.edges}
    mult = [2 if u in terminals else 1 for u in range(n)]
    edges = _clique_edges(n)
    caps = [
        mult[u] * mult[v] + (1 if (u, v) in original else 0) - (1 if frozenset((u, v)) in pair_of else 0)
        for u, v in edges
    ]
    k = len(e.pairs)
    return GeneratedInstance(
        VirtualNetwork.build(n + 2 * k, _clique_edges(n + 2 * k)),
        SubstrateNetwork.build(n, edges, node_capacity=mult, edge_capacity=caps),
        Variant.EXISTENCE,
        provenance=_provenance("edge-disjoint-paths", "virtual clique on a substrate clique", e),
    )


def _tsp_substrate(t: TspInstance, hub: bool) -> SubstrateNetwork:
    n, lam = t.node_count, t.bound
    edges = _clique_edges(n)
    costs = [lam + t.distance[u][v] for u, v in edges]
    if hub:
        edges += [(u, n) for u in range(n)]
        costs += [0] * n
    return SubstrateNetwork.build(n + (1 if hub else 0), edges, edge_cost=costs)


def _check_tsp_size(t: TspInstance, minimum: int) -> None:
    if t.node_count < minimum:
        raise InvalidGraphError(f"the construction needs at least {minimum} cities")


def tsp_to_cycle(t: TspInstance) -> GeneratedInstance:
    """Virtual cycle on a clique with edge cost bound + distance; budget (n + 1) * bound."""
    _check_tsp_size(t, 3)
    n = t.node_count
    return GeneratedInstance(
        VirtualNetwork.build(n, _cycle_edges(n)),
        _tsp_substrate(t, hub=False),
        Variant.COST,
        (n + 1) * t.bound,
        _provenance("tsp-tour", "virtual cycle on a priced clique", t),
    )


def tsp_to_path(t: TspInstance) -> GeneratedInstance:
    """Virtual path on the same clique; budget n * bound.

    The matching source question asks for a Hamiltonian path (not a closed
    tour) of length at most the bound.
    """
    _check_tsp_size(t, 2)
    n = t.node_count
    return GeneratedInstance(
        VirtualNetwork.build(n, _path_edges(n)),
        _tsp_substrate(t, hub=False),
        Variant.COST,
        n * t.bound,
        _provenance("tsp-path", "virtual path on a priced clique", t),
    )


def tsp_to_wheel(t: TspInstance) -> GeneratedInstance:
    """Virtual wheel on the clique plus a hub reached by free spokes; budget (n + 1) * bound."""
    _check_tsp_size(t, 3)
    n = t.node_count
    return GeneratedInstance(
        VirtualNetwork.build(n + 1, _wheel_edges(n)),
        _tsp_substrate(t, hub=True),
        Variant.COST,
        (n + 1) * t.bound,
        _provenance("tsp-tour", "virtual wheel on a priced clique plus a free hub", t),
    )


def normalize_bins(b: BppInstance) -> tuple[int, ...]:
    """Pad with unit items so the items fill the bins exactly, when they fit at all."""
    total = sum(b.items)
    room = b.bins * b.size
    return b.items + (1,) * max(0, room - total)


def _bpp_virtual_tree(b: BppInstance) -> tuple[VirtualNetwork, int]:
    """Root 0, then its children (item centers, then singletons), then item leaves.

    Breadth-first numbering lets the oracle prune on the root's edges early.
    """
    items = normalize_bins(b)
    singles = max(0, b.bins * b.size - len(items))
    edges = []
    nxt = 1
    centers = []
    for _ in items:
        edges.append((0, nxt))
        centers.append(nxt)
        nxt += 1
    for _ in range(singles):
        edges.append((0, nxt))
        nxt += 1
    for c, a in zip(centers, items):
        for _ in range(a):
            edges.append((c, nxt))
            nxt += 1
    return VirtualNetwork.build(nxt, edges), singles


def _check_bins(b: BppInstance) -> None:
    if b.bins < 3:
        raise InvalidGraphError("the construction needs at least 3 bins")


def bpp_to_tree_on_star(b: BppInstance) -> GeneratedInstance:
    """Root with one star per item plus singletons, on a star with one leaf per bin."""
    _check_bins(b)
    v, singles = _bpp_virtual_tree(b)
    k, size = b.bins, b.size
    s = SubstrateNetwork.build(
        k + 1,
        [(0, i) for i in range(1, k + 1)],
        node_capacity=[1] + [2 * size] * k,
        edge_capacity=size,
    )
    return GeneratedInstance(
        v,
        s,
        Variant.EXISTENCE,
        provenance=_provenance(
            "bin-packing", "item stars under a root, on a star substrate", b, padded_items=list(normalize_bins(b))
        ),
    )


def bpp_to_tree_on_tree(b: BppInstance) -> GeneratedInstance:
    """Same virtual tree on a root joined to one star of 2*size nodes per bin, unit node capacity."""
    _check_bins(b)
    v, _ = _bpp_virtual_tree(b)
    k, size = b.bins, b.size
    edges = [(0, i) for i in range(1, k + 1)]
    nxt = k + 1
    for center in range(1, k + 1):
        for _ in range(2 * size - 1):
            edges.append((center, nxt))
            nxt += 1
    s = SubstrateNetwork.build(nxt, edges, node_capacity=1, edge_capacity=size)
    return GeneratedInstance(
        v,
        s,
        Variant.EXISTENCE,
        provenance=_provenance(
            "bin-packing", "item stars under a root, on a tree of bin stars", b, padded_items=list(normalize_bins(b))
        ),
    )


def mcla_to_general_on_path(m: MclaInstance) -> GeneratedInstance:
    """The graph itself on a path with one slot per node and edge capacity equal to the cut bound."""
    n = m.graph.node_count
    if n < 2:
        raise InvalidGraphError("the construction needs at least 2 nodes")
    return GeneratedInstance(
        VirtualNetwork(m.graph),
        SubstrateNetwork.build(n, _path_edges(n), edge_capacity=m.bound),
        Variant.EXISTENCE,
        provenance=_provenance("min-cut-linear-arrangement", "graph on a path", m),
    )


# generate-command registry: kind -> (source parser, transformer)
TRANSFORMERS = {
    "hgp-cycle": (HgpInstance.from_dict, hgp_to_cycle),
    "hgp-wheel": (HgpInstance.from_dict, hgp_to_wheel),
    "edpp-clique": (EdppInstance.from_dict, edpp_to_clique),
    "edpp-clique-on-clique": (EdppInstance.from_dict, edpp_to_clique_on_clique),
    "tsp-cycle": (TspInstance.from_dict, tsp_to_cycle),
    "tsp-path": (TspInstance.from_dict, tsp_to_path),
    "tsp-wheel": (TspInstance.from_dict, tsp_to_wheel),
    "bpp-star": (BppInstance.from_dict, bpp_to_tree_on_star),
    "bpp-tree": (BppInstance.from_dict, bpp_to_tree_on_tree),
    "mcla-path": (MclaInstance.from_dict, mcla_to_general_on_path),
}
