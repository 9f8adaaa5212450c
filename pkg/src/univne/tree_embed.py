"""Dynamic programs for cycle, path, wheel and clique virtual networks on substrate trees.

The substrate tree is first rooted and made binary, with all capacity on
leaves. W[u][state] is the cheapest way to host a partial embedding in the
subtree of u, where the state records how many virtual nodes sit below u
(plus an extra topology-specific flag). Any subtree hosts a cyclically
consecutive arc of the virtual cycle, so the number of virtual edges crossing
the edge above u is a function of the state alone.

A path is handled as a cycle with one free "gap" edge between its last and
first node. Its extra flag counts the path ends inside the arc: 1 means the
gap sits on the arc's boundary, 2 with a partial arc means the arc wraps
around the gap (a prefix plus a suffix of the path).
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

from .core import (
    Mapping,
    SolveOutcome,
    SubstrateNetwork,
    Topology,
    TopologyError,
    VirtualNetwork,
    certify,
    classify_topology,
)


class Shape(str, enum.Enum):
    CYCLE = "cycle"
    PATH = "path"
    WHEEL = "wheel"
    CLIQUE = "clique"


@dataclass(frozen=True)
class RootedBinaryTree:
    """Binary tree with capacity only on leaves.

    origin[x] is the original node whose capacity/cost node x carries (for
    leaves) or which it expands (for internal and chain nodes). up_edge[x] is
    the original edge index linking x to its parent, or None for dummy edges.
    """

    root: int
    parent: tuple[int, ...]
    children: tuple[tuple[int, ...], ...]
    capacity: tuple[int, ...]
    cost: tuple[int, ...]
    up_capacity: tuple[int, ...]
    up_cost: tuple[int, ...]
    origin: tuple[int, ...]
    up_edge: tuple[int | None, ...]
    dummy: tuple[bool, ...]

    @property
    def size(self) -> int:
        return len(self.parent)

    def postorder(self) -> list[int]:
        order, stack = [], [self.root]
        while stack:
            x = stack.pop()
            order.append(x)
            stack.extend(self.children[x])
        return order[::-1]


def _rooted_children(s: SubstrateNetwork, root: int) -> tuple[list[list[int]], list[int]]:
    n = s.node_count
    parent = [-1] * n
    children: list[list[int]] = [[] for _ in range(n)]
    order = [root]
    seen = {root}
    for x in order:
        for y in s.graph.adjacency[x]:
            if y not in seen:
                seen.add(y)
                parent[y] = x
                children[x].append(y)
                order.append(y)
    return children, parent


def binarize(s: SubstrateNetwork, root: int = 0, dummy_capacity: int = 1) -> RootedBinaryTree:
    """Root the tree at root and rewrite it so that every node has at most two
    children and only leaves carry capacity.

    Internal nodes with capacity get a dummy leaf holding it; nodes with more
    than two children are expanded into a balanced binary chain. Dummy edges
    get capacity dummy_capacity (callers pass twice the virtual edge count)
    and cost 0, so they never constrain or change an optimum.
    """
    if s.graph.edge_count != s.node_count - 1:
        raise TopologyError("binarize needs a tree substrate")
    if not 0 <= root < s.node_count:
        raise TopologyError(f"root {root} is not a substrate node")
    kids, _ = _rooted_children(s, root)
    parent: list[int] = []
    children: list[list[int]] = []
    capacity: list[int] = []
    cost: list[int] = []
    up_cap: list[int] = []
    up_cost: list[int] = []
    origin: list[int] = []
    up_edge: list[int | None] = []
    dummy: list[bool] = []

    def new(orig: int, cap: int, w: int, is_dummy: bool) -> int:
        parent.append(-1)
        children.append([])
        capacity.append(cap)
        cost.append(w)
        up_cap.append(dummy_capacity)
        up_cost.append(0)
        origin.append(orig)
        up_edge.append(None)
        dummy.append(is_dummy)
        return len(parent) - 1

    def link(child: int, par: int) -> None:
        parent[child] = par
        children[par].append(child)

    def attach(par: int, items: list[int]) -> None:
        if len(items) <= 2:
            for it in items:
                link(it, par)
            return
        half = (len(items) + 1) // 2
        for group in (items[:half], items[half:]):
            if len(group) == 1:
                link(group[0], par)
            else:
                chain = new(origin[par], 0, 0, True)
                link(chain, par)
                attach(chain, group)

    node_of = [0] * s.node_count
    order = [root]
    for x in order:
        order.extend(kids[x])
    for x in order:
        internal = bool(kids[x])
        node_of[x] = new(x, 0 if internal else s.node_capacity[x], s.node_cost[x], False)
    for x in order:
        for y in kids[x]:
            by = node_of[y]
            e = s.graph.edge_index(x, y)
            up_cap[by] = s.edge_capacity[e]
            up_cost[by] = s.edge_cost[e]
            up_edge[by] = e
    for x in reversed(order):
        if not kids[x]:
            continue
        items = [node_of[y] for y in kids[x]]
        if s.node_capacity[x] > 0:
            items.insert(0, new(x, s.node_capacity[x], s.node_cost[x], True))
        attach(node_of[x], items)
    return RootedBinaryTree(
        root=node_of[root],
        parent=tuple(parent),
        children=tuple(tuple(c) for c in children),
        capacity=tuple(capacity),
        cost=tuple(cost),
        up_capacity=tuple(up_cap),
        up_cost=tuple(up_cost),
        origin=tuple(origin),
        up_edge=tuple(up_edge),
        dummy=tuple(dummy),
    )


def crossing_count(shape: Shape | str, n_r: int, k: int, extra: int = 0) -> int:
    """Virtual edges crossing a tree edge whose lower side hosts k nodes.

    extra is the number of path extremities below (path) or whether the hub
    is below (wheel; n_r then counts outer nodes). Cycle and clique ignore it.
    """
    shape = Shape(shape)
    if not 0 <= k <= n_r:
        raise ValueError(f"k={k} outside 0..{n_r}")
    if shape is Shape.CYCLE:
        return 0 if k in (0, n_r) else 2
    if shape is Shape.CLIQUE:
        return k * (n_r - k)
    if shape is Shape.PATH:
        if not _path_state_ok(n_r, k, extra):
            raise ValueError(f"path state (k={k}, e={extra}) is inconsistent for n_r={n_r}")
        if k in (0, n_r):
            return 0
        return 1 if extra == 1 else 2
    if extra not in (0, 1):
        raise ValueError(f"wheel hub flag must be 0 or 1, got {extra}")
    if k == 0:
        return n_r if extra else 0
    if k == n_r:
        return 0 if extra else n_r
    return 2 + (n_r - k) if extra else 2 + k


def _path_state_ok(n_r: int, k: int, e: int) -> bool:
    if k == n_r:
        return e == 2
    if k == 0:
        return e == 0
    if e == 0:
        return k <= n_r - 2  # an interior arc misses both ends
    if e == 2:
        return k >= 2
    return e == 1


class _Dp:
    """Shared DP machinery; states are (k, extra) pairs."""

    def __init__(self, shape: Shape, n: int, tree: RootedBinaryTree):
        self.shape, self.n, self.tree = shape, n, tree
        self.extras = {Shape.PATH: (0, 1, 2), Shape.WHEEL: (0, 1)}.get(shape, (0,))

    def valid(self, k: int, x: int) -> bool:
        if k < 0 or k > self.n:
            return False
        if self.shape is Shape.PATH:
            return _path_state_ok(self.n, k, x)
        return x in self.extras

    def leaf_table(self, cap: int, w: int) -> dict[tuple[int, int], int]:
        table = {}
        if self.shape is Shape.WHEEL:
            for h in (0, 1):
                for k in range(0, min(cap - h, self.n) + 1):
                    table[(k, h)] = (k + h) * w
            return table
        for k in range(0, min(cap, self.n) + 1):
            for x in self.extras:
                if self.valid(k, x):
                    table[(k, x)] = k * w
        return table

    def lift(self, x: int, table: dict) -> dict:
        """Add the cost of the edge above x, dropping states it cannot carry."""
        if self.tree.up_edge[x] is None:
            # dummy edge: free and never saturated
            return dict(table)
        cap, w = self.tree.up_capacity[x], self.tree.up_cost[x]
        out = {}
        for (k, e), val in table.items():
            t = crossing_count(self.shape, self.n, k, e)
            if t <= cap:
                out[(k, e)] = val + t * w
        return out

    def run(self) -> tuple[list[dict], list[dict]]:
        tree = self.tree
        tables: list[dict] = [None] * tree.size
        back: list[dict] = [None] * tree.size
        for x in tree.postorder():
            kids = tree.children[x]
            if not kids:
                tables[x] = self.leaf_table(tree.capacity[x], tree.cost[x])
                continue
            lifted = [self.lift(c, tables[c]) for c in kids]
            if len(kids) == 1:
                tables[x] = lifted[0]
                back[x] = {st: (st,) for st in lifted[0]}
                continue
            left, right = lifted
            table: dict = {}
            bp: dict = {}
            # iterate l_a ascending so ties go to the smaller left share
            for sa in sorted(left):
                va = left[sa]
                for sb in sorted(right):
                    st = (sa[0] + sb[0], sa[1] + sb[1])
                    if not self.valid(*st):
                        continue
                    val = va + right[sb]
                    if st not in table or val < table[st]:
                        table[st] = val
                        bp[st] = (sa, sb)
            tables[x], back[x] = table, bp
        return tables, back

    def final_state(self) -> tuple[int, int]:
        return {Shape.PATH: (self.n, 2), Shape.WHEEL: (self.n, 1)}.get(self.shape, (self.n, 0))


def _tree_route(s: SubstrateNetwork, parent: list[int], depth: list[int], a: int, b: int) -> tuple[int, ...]:
    left, right = [a], [b]
    x, y = a, b
    while depth[x] > depth[y]:
        x = parent[x]
        left.append(x)
    while depth[y] > depth[x]:
        y = parent[y]
        right.append(y)
    while x != y:
        x, y = parent[x], parent[y]
        left.append(x)
        right.append(y)
    return tuple(left + right[-2::-1])


def _solve(shape: Shape, v: VirtualNetwork, s: SubstrateNetwork, root: int | None, solver_id: str) -> SolveOutcome:
    topo_s = classify_topology(s.graph)
    if Topology.TREE not in topo_s:
        raise TopologyError(f"{solver_id} needs a tree substrate")
    topo_v = classify_topology(v.graph)
    if shape is Shape.CYCLE:
        if Topology.CYCLE not in topo_v:
            raise TopologyError(f"{solver_id} needs a cycle virtual network")
        order = topo_v.cycle_order
    elif shape is Shape.PATH:
        if Topology.PATH not in topo_v:
            raise TopologyError(f"{solver_id} needs a path virtual network")
        order = topo_v.path_order
    elif shape is Shape.WHEEL:
        if Topology.WHEEL not in topo_v:
            raise TopologyError(f"{solver_id} needs a wheel virtual network")
        order = topo_v.wheel_order
    else:
        if Topology.CLIQUE not in topo_v:
            raise TopologyError(f"{solver_id} needs a clique virtual network")
        order = tuple(range(v.node_count))
    n = len(order) - 1 if shape is Shape.WHEEL else len(order)

    root = 0 if root is None else root
    tree = binarize(s, root, max(1, 2 * v.graph.edge_count))
    dp = _Dp(shape, n, tree)
    tables, back = dp.run()
    goal = dp.final_state()
    if goal not in tables[tree.root]:
        return SolveOutcome.infeasible(solver_id)
    optimum = tables[tree.root][goal]

    # Reconstruction: build each subtree's arc of hosts bottom-up, then cut
    # the final cyclic sequence at the gap (paths) or anywhere (cycles).
    arcs = _Arcs(tree, back, shape)
    hosts, gap, hub = arcs.build(tree.root, goal)
    host_of_position = hosts[gap:] + hosts[:gap] if gap is not None else hosts
    if shape is Shape.WHEEL:
        host_of_position = host_of_position + [hub]

    placement = [0] * v.node_count
    for pos, node in enumerate(order):
        placement[node] = host_of_position[pos]
    _, par = _rooted_children(s, root)
    depth = [0] * s.node_count
    for x in _bfs(s, root):
        if par[x] >= 0:
            depth[x] = depth[par[x]] + 1
    routing = tuple(_tree_route(s, par, depth, placement[a], placement[b]) for a, b in v.edges)
    return certify(v, s, Mapping(tuple(placement), routing), solver_id, optimum)


def _bfs(s: SubstrateNetwork, root: int) -> list[int]:
    order, seen = [root], {root}
    for x in order:
        for y in s.graph.adjacency[x]:
            if y not in seen:
                seen.add(y)
                order.append(y)
    return order


class _Arcs:
    """Turn DP back-pointers into a cyclic host sequence.

    A subtree yields (hosts, gap, hub): its arc of hosts, the index before
    which the path gap falls (None when no path end is inside; 0 or len for
    an arc holding one end) and, for wheels, the host of the hub if below.
    Reversing an arc keeps every sub-arc an arc, so children may be flipped.
    """

    def __init__(self, tree: RootedBinaryTree, back: list[dict], shape: Shape):
        self.tree, self.back, self.shape = tree, back, shape

    def build(self, x: int, state: tuple[int, int]):
        tree = self.tree
        k, extra = state
        if not tree.children[x]:
            hosts = [tree.origin[x]] * k
            hub = tree.origin[x] if self.shape is Shape.WHEEL and extra else None
            gap = None
            if self.shape is Shape.PATH and extra:
                gap = k if extra == 1 else 1
            return hosts, gap, hub
        parts = [self.build(c, st) for c, st in zip(tree.children[x], self.back[x][state])]
        hub = next((p[2] for p in parts if p[2] is not None), None)
        if self.shape is not Shape.PATH:
            return [h for p in parts for h in p[0]], None, hub
        whole = [p for p in parts if p[1] is not None and 0 < p[1] < len(p[0])]
        ends = [p for p in parts if p[1] is not None and p not in whole]
        middle = [h for p in parts if p[1] is None for h in p[0]]
        if whole:
            hosts, gap, _ = whole[0]
            return hosts + middle, gap, hub
        # orient end arcs so that the gap faces outward (one end) or inward (two)
        faced = [p[0] if p[1] == len(p[0]) else p[0][::-1] for p in ends]
        if len(faced) == 2:
            return middle + faced[0] + faced[1][::-1], len(middle) + len(faced[0]), hub
        if len(faced) == 1:
            seq = middle + faced[0]
            return seq, len(seq), hub
        return middle, None, hub


def solve_cycle_on_tree(v: VirtualNetwork, s: SubstrateNetwork, root: int | None = None) -> SolveOutcome:
    return _solve(Shape.CYCLE, v, s, root, "tree-cycle-dp")


def solve_path_on_tree(v: VirtualNetwork, s: SubstrateNetwork, root: int | None = None) -> SolveOutcome:
    return _solve(Shape.PATH, v, s, root, "tree-path-dp")


def solve_wheel_on_tree(v: VirtualNetwork, s: SubstrateNetwork, root: int | None = None) -> SolveOutcome:
    return _solve(Shape.WHEEL, v, s, root, "tree-wheel-dp")


def solve_clique_on_tree(v: VirtualNetwork, s: SubstrateNetwork, root: int | None = None) -> SolveOutcome:
    return _solve(Shape.CLIQUE, v, s, root, "tree-clique-dp")
