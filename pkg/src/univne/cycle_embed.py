"""Solvers for substrate cycles, plus the Hamiltonian filling construction.

Substrate positions follow the canonical cycle order: position i is joined to
position i+1 (mod n_s) by "arc edge" i. Clockwise means increasing position.
"""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass

import numpy as np

from .core import (
    CostOverflowError,
    InternalInvariantError,
    Mapping,
    SolveOutcome,
    SubstrateNetwork,
    Topology,
    TopologyError,
    VirtualNetwork,
    certify,
    classify_topology,
)
from .flow import Arc, FlowNetwork, min_cost_integer_flow


class Direction(str, enum.Enum):
    CLOCKWISE = "cw"
    COUNTERCLOCKWISE = "ccw"


@dataclass(frozen=True)
class ArcSpec:
    start: int
    end: int
    direction: Direction = Direction.CLOCKWISE


class _Ring:
    """A cycle substrate seen through its canonical positions."""

    def __init__(self, s: SubstrateNetwork):
        topo = classify_topology(s.graph)
        if Topology.CYCLE not in topo:
            raise TopologyError("expected a cycle substrate")
        self.s = s
        self.order = topo.cycle_order
        self.n = len(self.order)
        self.pos = {node: i for i, node in enumerate(self.order)}
        g = s.graph
        self.edge = [g.edge_index(self.order[i], self.order[(i + 1) % self.n]) for i in range(self.n)]
        self.ecap = [s.edge_capacity[e] for e in self.edge]
        self.ecost = [s.edge_cost[e] for e in self.edge]
        self.ncap = [s.node_capacity[x] for x in self.order]
        self.ncost = [s.node_cost[x] for x in self.order]

    def arc_edges(self, i: int, j: int, clockwise: bool) -> list[int]:
        """Arc-edge positions traversed from position i to position j."""
        n = self.n
        if clockwise:
            return [(i + t) % n for t in range((j - i) % n)]
        return [(j + t) % n for t in range((i - j) % n)]

    def arc_nodes(self, i: int, j: int, clockwise: bool) -> tuple[int, ...]:
        n = self.n
        step = 1 if clockwise else -1
        count = ((j - i) if clockwise else (i - j)) % n
        return tuple(self.order[(i + step * t) % n] for t in range(count + 1))


def directed_arc(s: SubstrateNetwork, spec: ArcSpec) -> tuple[int, ...]:
    """Node sequence of the clockwise or counterclockwise arc from start to end."""
    ring = _Ring(s)
    cw = Direction(spec.direction) is Direction.CLOCKWISE
    return ring.arc_nodes(ring.pos[spec.start], ring.pos[spec.end], cw)


# ---------------------------------------------------------------- Hamiltonian

HAMILTONIAN_ID = "hamiltonian-fill"


def embed_via_hamiltonian(v: VirtualNetwork, s: SubstrateNetwork, ham: list[int] | tuple[int, ...]) -> SolveOutcome:
    """Fill hosts along a Hamiltonian cycle, saturating each before moving on.

    Consecutive virtual nodes are joined along the cycle; a virtual cycle is
    closed along the unused remainder of the Hamiltonian cycle. Costs are
    reported, not optimized.
    """
    ham = list(ham)
    n_s = s.node_count
    if sorted(ham) != list(range(n_s)) or n_s < 3:
        raise TopologyError("witness is not a Hamiltonian cycle of the substrate")
    for i in range(n_s):
        if not s.graph.has_edge(ham[i], ham[(i + 1) % n_s]):
            raise TopologyError(f"witness step {ham[i]} -> {ham[(i + 1) % n_s]} is not a substrate edge")
    topo = classify_topology(v.graph)
    if Topology.PATH in topo:
        order = topo.path_order
    elif Topology.CYCLE in topo:
        order = topo.cycle_order
    else:
        raise TopologyError("Hamiltonian filling needs a path or cycle virtual network")
    n_r = len(order)
    if sum(s.node_capacity) < n_r:
        return SolveOutcome.infeasible(HAMILTONIAN_ID)
    # start the fill on a node with spare capacity so the closure stays simple
    first = next(i for i in range(n_s) if s.node_capacity[ham[i]] > 0)
    ham = ham[first:] + ham[:first]
    slot = []
    for i, x in enumerate(ham):
        slot.extend([i] * s.node_capacity[x])
    slot = slot[:n_r]
    placement = [0] * v.node_count
    for p, node in enumerate(order):
        placement[node] = ham[slot[p]]
    pos_of = {node: p for p, node in enumerate(order)}
    routing = []
    for a, b in v.edges:
        pa, pb = pos_of[a], pos_of[b]
        ia, ib = slot[pa], slot[pb]
        if abs(pa - pb) == 1:
            lo, hi = min(ia, ib), max(ia, ib)
            seq = tuple(ham[lo:hi + 1])
            first_is_a = ia <= ib
        else:
            # closing edge: from the last used host forward around to ham[0]
            last, head = (ia, ib) if pa > pb else (ib, ia)
            seq = tuple(ham[last:]) + (ham[0],) if last != head else (ham[last],)
            first_is_a = pa > pb
        routing.append(seq if first_is_a else seq[::-1])
    m = Mapping(tuple(placement), tuple(routing))
    return certify(v, s, m, HAMILTONIAN_ID)


# ---------------------------------------------------------------- paths/cycles

ELEMENTARY_ID = "cycle-elementary-path"
PATH_ID = "cycle-path-greedy"
CYCLE_ID = "cycle-cycle-greedy"


def _greedy_counts(ring: _Ring, i: int, j: int, n_r: int, ncap: list[int] | None = None):
    """Cheapest host counts along the clockwise arc i..j for an n_r-node path.

    Both endpoints host at least one node; the rest go to the cheapest arc
    nodes with spare capacity (ties by arc position). Returns (cost, counts)
    with counts aligned to the arc, or None.
    """
    caps = ncap if ncap is not None else ring.ncap
    n = ring.n
    arc = [(i + t) % n for t in range((j - i) % n + 1)]
    if i == j:
        if caps[i] < n_r:
            return None
        return n_r * ring.ncost[i], [n_r]
    if n_r < 2 or caps[i] < 1 or caps[j] < 1:
        return None
    counts = [0] * len(arc)
    counts[0] = counts[-1] = 1
    rest = n_r - 2
    cost = ring.ncost[i] + ring.ncost[j]
    for t in sorted(range(len(arc)), key=lambda t: (ring.ncost[arc[t]], t)):
        if rest == 0:
            break
        take = min(rest, caps[arc[t]] - counts[t])
        counts[t] += take
        rest -= take
        cost += take * ring.ncost[arc[t]]
    if rest:
        return None
    return cost, counts


def _path_hosts(ring: _Ring, i: int, counts: list[int]) -> list[int]:
    hosts = []
    for t, c in enumerate(counts):
        hosts.extend([(i + t) % ring.n] * c)
    return hosts


def _elementary(ring: _Ring, i: int, j: int, n_r: int, edge_load: int = 1):
    """Cost and host positions of the best clockwise elementary path i..j."""
    got = _greedy_counts(ring, i, j, n_r)
    if got is None:
        return None
    cost, counts = got
    for e in ring.arc_edges(i, j, True):
        if ring.ecap[e] < edge_load:
            return None
        cost += ring.ecost[e]
    return cost, _path_hosts(ring, i, counts)


def _path_mapping(ring: _Ring, v: VirtualNetwork, order, hosts: list[int], closed: bool) -> Mapping:
    placement = [0] * v.node_count
    for p, node in enumerate(order):
        placement[node] = ring.order[hosts[p]]
    pos_of = {node: p for p, node in enumerate(order)}
    n_r = len(order)
    routing = []
    for a, b in v.edges:
        pa, pb = pos_of[a], pos_of[b]
        if closed and {pa, pb} == {0, n_r - 1} and n_r > 2:
            # closing edge: filled in by the caller
            routing.append(None)
            continue
        lo, hi = min(pa, pb), max(pa, pb)
        seq = ring.arc_nodes(hosts[lo], hosts[hi], True)
        routing.append(seq if pa == lo else seq[::-1])
    return placement, routing


def _virtual_order(v: VirtualNetwork, shape: Topology):
    topo = classify_topology(v.graph)
    if shape not in topo:
        raise TopologyError(f"expected a {shape.value.lower()} virtual network")
    return {Topology.PATH: topo.path_order, Topology.CYCLE: topo.cycle_order}[shape]


def elementary_path_embed(v: VirtualNetwork, s: SubstrateNetwork, u_s: int, u_t: int) -> SolveOutcome:
    """Best mapping of a virtual path whose routing walks clockwise from u_s to u_t."""
    ring = _Ring(s)
    order = _virtual_order(v, Topology.PATH)
    got = _elementary(ring, ring.pos[u_s], ring.pos[u_t], len(order))
    if got is None:
        return SolveOutcome.infeasible(ELEMENTARY_ID)
    cost, hosts = got
    placement, routing = _path_mapping(ring, v, order, hosts, False)
    return certify(v, s, Mapping(tuple(placement), tuple(routing)), ELEMENTARY_ID, cost)


def solve_path_on_cycle(v: VirtualNetwork, s: SubstrateNetwork) -> SolveOutcome:
    ring = _Ring(s)
    order = _virtual_order(v, Topology.PATH)
    n_r = len(order)
    best = None
    for i in range(ring.n):
        for j in range(ring.n):
            got = _elementary(ring, i, j, n_r)
            if got is not None and (best is None or got[0] < best[0]):
                best = got
    if best is None:
        return SolveOutcome.infeasible(PATH_ID)
    cost, hosts = best
    placement, routing = _path_mapping(ring, v, order, hosts, False)
    return certify(v, s, Mapping(tuple(placement), tuple(routing)), PATH_ID, cost)


def solve_cycle_on_cycle(v: VirtualNetwork, s: SubstrateNetwork) -> SolveOutcome:
    """Elementary clockwise path for positions 1..n_r plus the cheaper feasible closure.

    The closing edge either completes the tour clockwise over the rest of the
    ring or runs back counterclockwise over the path's own arc.
    """
    ring = _Ring(s)
    order = _virtual_order(v, Topology.CYCLE)
    n_r = len(order)
    best = None
    for i in range(ring.n):
        for j in range(ring.n):
            got = _greedy_counts(ring, i, j, n_r)
            if got is None:
                continue
            node_cost, counts = got
            arc = ring.arc_edges(i, j, True)
            rest = ring.arc_edges(j, i, True) if i != j else []
            closures = [True] if i == j else [True, False]
            for cw in closures:
                need = 1 if cw else 2
                if any(ring.ecap[e] < need for e in arc):
                    continue
                if cw and any(ring.ecap[e] < 1 for e in rest):
                    continue
                cost = node_cost + need * sum(ring.ecost[e] for e in arc)
                if cw:
                    cost += sum(ring.ecost[e] for e in rest)
                if best is None or cost < best[0]:
                    best = (cost, i, j, counts, cw)
    if best is None:
        return SolveOutcome.infeasible(CYCLE_ID)
    cost, i, j, counts, cw = best
    hosts = _path_hosts(ring, i, counts)
    placement, routing = _path_mapping(ring, v, order, hosts, True)
    last = order[-1]
    for e, (a, b) in enumerate(v.edges):
        if routing[e] is None:
            # route from host of position n_r-1 back to host of position 0
            seq = ring.arc_nodes(hosts[-1], hosts[0], cw)
            routing[e] = seq if a == last else seq[::-1]
    return certify(v, s, Mapping(tuple(placement), tuple(routing)), CYCLE_ID, cost)


# ---------------------------------------------------------------- wheels

WHEEL_ID = "cycle-wheel-flow"


def solve_wheel_on_cycle(v: VirtualNetwork, s: SubstrateNetwork) -> SolveOutcome:
    """Fix hosts of the first/last outer node and the hub, then route the
    remaining spokes as a min-cost flow from an auxiliary source.

    The outer path is clockwise elementary from u_s to u_t; the closing outer
    edge and the two spokes of the end nodes take one of two directions each.
    Flow unit k (ranked by the position of its first host along the arc)
    places outer node k+1 and routes its spoke.
    """
    ring = _Ring(s)
    topo = classify_topology(v.graph)
    if Topology.WHEEL not in topo:
        raise TopologyError("expected a wheel virtual network")
    outer, hub = topo.wheel_order[:-1], topo.wheel_order[-1]
    n_out = len(outer)
    n = ring.n
    units = n_out - 2
    best = None
    for i, j, c in itertools.product(range(n), repeat=3):
        node_left = list(ring.ncap)
        for x in (i, j, c):
            node_left[x] -= 1
        if min(node_left[i], node_left[j], node_left[c]) < 0:
            continue
        arc = ring.arc_edges(i, j, True)
        arc_pos = {(i + t) % n: t for t in range(len(arc) + 1)}
        base_load = [0] * n
        for e in arc:
            base_load[e] += 1
        base_cost = ring.ncost[i] + ring.ncost[j] + ring.ncost[c] + sum(ring.ecost[e] for e in arc)
        seen_routes = set()
        for dirs in itertools.product((True, False), repeat=3):
            fixed = (
                ring.arc_edges(j, i, dirs[0]),
                ring.arc_edges(i, c, dirs[1]),
                ring.arc_edges(j, c, dirs[2]),
            )
            key = tuple(tuple(f) for f in fixed)
            if key in seen_routes:
                continue
            seen_routes.add(key)
            load = list(base_load)
            for f in fixed:
                for e in f:
                    load[e] += 1
            if any(load[e] > ring.ecap[e] for e in range(n)):
                continue
            fixed_cost = base_cost + sum(ring.ecost[e] for f in fixed for e in f)
            if best is not None and fixed_cost > best[0]:
                continue
            if units == 0:
                # cannot happen for wheels (outer size >= 3), kept for clarity
                flow = None
                flow_cost = 0
            else:
                src = n
                arcs = [Arc(e, (e + 1) % n, ring.ecap[e] - load[e], ring.ecost[e]) for e in range(n)]
                for x in arc_pos:
                    if node_left[x] > 0:
                        arcs.append(Arc(src, x, node_left[x], ring.ncost[x], directed=True))
                flow = min_cost_integer_flow(FlowNetwork(n + 1, tuple(arcs), src, c, units))
                if flow is None:
                    continue
                flow_cost = flow.cost
            total = fixed_cost + flow_cost
            if best is None or total < best[0]:
                best = (total, i, j, c, dirs, flow, arc_pos)
    if best is None:
        return SolveOutcome.infeasible(WHEEL_ID)
    total, i, j, c, dirs, flow, arc_pos = best
    unit_paths = [p[1:] for p, k in flow.paths for _ in range(k)]
    unit_paths.sort(key=lambda p: (arc_pos[p[0]], p))
    hosts = [i] + [p[0] for p in unit_paths] + [j]
    spoke = {outer[0]: ring.arc_nodes(i, c, dirs[1]), outer[-1]: ring.arc_nodes(j, c, dirs[2])}
    for k, p in enumerate(unit_paths):
        spoke[outer[k + 1]] = tuple(ring.order[x] for x in p)
    placement = [0] * v.node_count
    for p, node in enumerate(outer):
        placement[node] = ring.order[hosts[p]]
    placement[hub] = ring.order[c]
    pos_of = {node: p for p, node in enumerate(outer)}
    routing = []
    for a, b in v.edges:
        if hub in (a, b):
            leaf = b if a == hub else a
            seq = spoke[leaf]
            routing.append(seq if a == leaf else seq[::-1])
            continue
        pa, pb = pos_of[a], pos_of[b]
        if {pa, pb} == {0, n_out - 1}:
            seq = ring.arc_nodes(j, i, dirs[0])
            routing.append(seq if pa == n_out - 1 else seq[::-1])
            continue
        lo, hi = min(pa, pb), max(pa, pb)
        seq = ring.arc_nodes(hosts[lo], hosts[hi], True)
        routing.append(seq if pa == lo else seq[::-1])
    return certify(v, s, Mapping(tuple(placement), tuple(routing)), WHEEL_ID, total)


# ---------------------------------------------------------------- cliques

CLIQUE_ID = "cycle-clique-dp"
_INF = np.int64(2**62)
_COST_CEILING = 2**60


@dataclass(frozen=True)
class CliqueDpState:
    """After positions 0..i: k nodes placed, and a/b/c internal/cut/external
    virtual edges routed across arc edge i."""

    i: int
    k: int
    a: int
    b: int
    c: int


@dataclass(frozen=True)
class CliqueTransition:
    """l nodes land on position i+1; gamma of the l*k new internal edges were
    routed clockwise over arc edge i; delta of the new cut edges leave the
    new nodes counterclockwise over arc edge i."""

    l: int
    gamma: int
    delta: int


def _pairs(x: int) -> int:
    return x * (x - 1) // 2


def _state_ok(n: int, k: int, a: int, b: int, c: int) -> bool:
    return 0 <= k <= n and 0 <= a <= _pairs(k) and 0 <= b <= k * (n - k) and 0 <= c <= _pairs(n - k)


def _step_ok(n: int, k: int, b: int, c: int, l: int, gamma: int, delta: int) -> bool:
    rest = n - k - l
    return (
        0 <= gamma <= min(k * l, b)
        and 0 <= delta <= min(rest * l, c)
        # cut edges still running clockwise must end beyond position i+1,
        # and external edges still wrapping must join two later nodes
        and b - gamma <= k * rest
        and c - delta <= _pairs(rest)
    )


def clique_dp_transitions(state: CliqueDpState, n_r: int) -> list[tuple[CliqueTransition, CliqueDpState]]:
    """All successor states of the clique-on-cycle recurrence, ignoring capacities."""
    i, k, a, b, c = state.i, state.k, state.a, state.b, state.c
    if not _state_ok(n_r, k, a, b, c):
        raise ValueError(f"invalid clique DP state {state}")
    out = []
    for l in range(0, n_r - k + 1):
        rest = n_r - k - l
        for gamma in range(0, min(k * l, b) + 1):
            for delta in range(0, min(rest * l, c) + 1):
                if not _step_ok(n_r, k, b, c, l, gamma, delta):
                    continue
                nxt = CliqueDpState(i + 1, k + l, a + k * l - gamma, b - gamma + l * rest - delta, c - delta)
                if _state_ok(n_r, nxt.k, nxt.a, nxt.b, nxt.c):
                    out.append((CliqueTransition(l, gamma, delta), nxt))
    return out


class _CountDp:
    """The recurrence over aggregate counts (k, a, b, c) alone.

    It only knows how many edges of each kind cross an arc edge, not which
    virtual node owns them, so it can combine counts that no edge set
    realizes. Its optimum is therefore a lower bound on the true one.
    """

    def __init__(self, ring: _Ring, n: int):
        self.ring, self.n = ring, n
        self.shape = [(_pairs(k) + 1, k * (n - k) + 1, _pairs(n - k) + 1) for k in range(n + 1)]
        self.load = [
            np.arange(A)[:, None, None] + np.arange(B)[None, :, None] + np.arange(C)[None, None, :]
            for A, B, C in self.shape
        ]

    def run(self) -> np.ndarray:
        ring, n = self.ring, self.n
        table = [np.full(sh, _INF, dtype=np.int64) for sh in self.shape]
        for k in range(0, min(ring.ncap[0], n) + 1):
            table[k][0, :, :] = k * ring.ncost[0]
        for i in range(ring.n - 1):
            table = self._advance(_lift(table, self.load, ring, i), i + 1)
        last = _lift(table, self.load, ring, ring.n - 1)[n]
        return last[:, 0, 0]

    def _advance(self, lifted: list, pos: int) -> list:
        ring, n = self.ring, self.n
        nxt = [np.full(sh, _INF, dtype=np.int64) for sh in self.shape]
        cap, w = ring.ncap[pos], ring.ncost[pos]
        for k in range(n + 1):
            src = lifted[k]
            if not (src < _INF).any():
                continue
            A, B, C = self.shape[k]
            for l in range(0, min(cap, n - k) + 1):
                rest = n - k - l
                dst = nxt[k + l]
                for gamma in range(0, k * l + 1):
                    b_lo, b_hi = gamma, min(B - 1, gamma + k * rest)
                    if b_lo > b_hi:
                        continue
                    a_shift = k * l - gamma
                    for delta in range(0, rest * l + 1):
                        c_lo, c_hi = delta, min(C - 1, delta + _pairs(rest))
                        if c_lo > c_hi:
                            continue
                        b_shift = l * rest - gamma - delta
                        view = dst[
                            a_shift:a_shift + A,
                            b_lo + b_shift:b_hi + 1 + b_shift,
                            c_lo - delta:c_hi + 1 - delta,
                        ]
                        np.minimum(view, src[:, b_lo:b_hi + 1, c_lo:c_hi + 1] + l * w, out=view)
        for arr in nxt:
            arr[arr >= _INF] = _INF
        return nxt


def _lift(table: list, load: list, ring: _Ring, e: int) -> list:
    """Charge arc edge e for the edges each state routes over it."""
    cap, w = ring.ecap[e], ring.ecost[e]
    out = []
    for arr, ld in zip(table, load):
        out.append(np.where((arr < _INF) & (ld <= cap), arr + w * ld, _INF))
    return out


def clique_count_bound(v: VirtualNetwork, s: SubstrateNetwork) -> int | None:
    """Optimum of the aggregate-count recurrence: a lower bound on the true
    clique-on-cycle optimum (None when even the relaxation is infeasible)."""
    if Topology.CLIQUE not in classify_topology(v.graph):
        raise TopologyError("expected a clique virtual network")
    ring = _Ring(s)
    final = _CountDp(ring, v.node_count).run()
    finite = final[final < _INF]
    return int(finite.min()) if finite.size else None


class _CliqueDp:
    """Exact clique-on-cycle DP.

    Virtual nodes are placed in position order. An edge between two groups is
    routed either clockwise from the earlier group ("direct") or the other way
    round over the closing arc edge ("around"). Swapping an around partner
    for a later node only shrinks loads, so each node's around partners can be
    taken to be the last d of all nodes. After position i the state is
    (k, R, a, c): R is the multiset of around edges each placed node still owes
    to unplaced nodes, a counts around edges already closed and c the around
    edges promised among unplaced nodes. The arc edge after position i then
    carries k(n-k) - sum(R) direct edges plus a + c around edges.
    """

    def __init__(self, ring: _Ring, n: int):
        self.ring, self.n = ring, n
        self.multisets = []
        self.index = []
        self.shape = []
        self.load = []
        for k in range(n + 1):
            ms = list(itertools.combinations_with_replacement(range(n - k, -1, -1), k))
            self.multisets.append(ms)
            self.index.append({r: i for i, r in enumerate(ms)})
            A, C = _pairs(k) + 1, _pairs(n - k) + 1
            self.shape.append((len(ms), A, C))
            direct = np.array([k * (n - k) - sum(r) for r in ms], dtype=np.int64)
            self.load.append(direct[:, None, None] + np.arange(A)[None, :, None] + np.arange(C)[None, None, :])
        # moves[k] lists (src idx, l, new multiset, dst idx, alpha, sigma)
        self.moves = []
        self.incoming = {}
        for k in range(n + 1):
            mv = []
            for idx, r in enumerate(self.multisets[k]):
                for l in range(0, n - k + 1):
                    cut = n - k - l
                    kept = tuple(min(x, cut) for x in r)
                    alpha = sum(r) - sum(kept)
                    for new in itertools.combinations_with_replacement(range(cut, -1, -1), l):
                        merged = tuple(sorted(kept + new, reverse=True))
                        dst = self.index[k + l][merged]
                        move = (idx, l, new, dst, alpha, sum(new))
                        mv.append(move)
                        self.incoming.setdefault((k + l, dst), []).append((k,) + move)
            self.moves.append(mv)

    def empty(self) -> list[np.ndarray]:
        return [np.full(sh, _INF, dtype=np.int64) for sh in self.shape]

    def run(self) -> None:
        ring, n = self.ring, self.n
        first = self.empty()
        for k in range(0, min(ring.ncap[0], n) + 1):
            first[k][:, 0, :] = k * ring.ncost[0]
        self.lifted = [_lift(first, self.load, ring, 0)]
        for i in range(1, ring.n):
            table = self._advance(self.lifted[-1], i)
            self.lifted.append(_lift(table, self.load, ring, i))

    def _advance(self, lifted: list, pos: int) -> list:
        n = self.n
        nxt = self.empty()
        cap, w = self.ring.ncap[pos], self.ring.ncost[pos]
        for k in range(n + 1):
            src = lifted[k]
            live = (src < _INF).any(axis=(1, 2))
            if not live.any():
                continue
            _, A, C = self.shape[k]
            for idx, l, _new, dst_idx, alpha, sigma in self.moves[k]:
                if l > cap or not live[idx]:
                    continue
                C2 = self.shape[k + l][2]
                hi = min(C, sigma + C2)
                if sigma >= hi:
                    continue
                view = nxt[k + l][dst_idx, alpha:alpha + A, 0:hi - sigma]
                np.minimum(view, src[idx, :, sigma:hi] + l * w, out=view)
        for arr in nxt:
            arr[arr >= _INF] = _INF
        return nxt

    def witness(self, a_final: int):
        """Walk back from the terminal state; returns per-position groups
        (size, owed-edge values) and the aggregate (k, a, b, c) chain."""
        ring, n = self.ring, self.n
        k, idx, a, c = n, 0, a_final, 0
        value = int(self.lifted[-1][n][0, a, 0])
        groups = []
        chain = []
        for stage in range(ring.n - 1, 0, -1):
            chain.append(CliqueDpState(stage, k, a, k * (n - k) - sum(self.multisets[k][idx]), c))
            base = value - ring.ecost[stage] * int(self.load[k][idx, a, c])
            prev_lifted = self.lifted[stage - 1]
            cap, w = ring.ncap[stage], ring.ncost[stage]
            for pk, pidx, l, new, _dst, alpha, sigma in self.incoming[(k, idx)]:
                pa, pc = a - alpha, c + sigma
                if l > cap or pa < 0 or pa >= self.shape[pk][1] or pc >= self.shape[pk][2]:
                    continue
                got = int(prev_lifted[pk][pidx, pa, pc])
                if got < _INF and got + l * w == base:
                    groups.append((l, new))
                    k, idx, a, c, value = pk, pidx, pa, pc, got
                    break
            else:
                raise InternalInvariantError("clique DP backtrack found no predecessor")
        chain.append(CliqueDpState(0, k, a, k * (n - k) - sum(self.multisets[k][idx]), c))
        base = value - ring.ecost[0] * int(self.load[k][idx, a, c])
        if a != 0 or base != k * ring.ncost[0]:
            raise InternalInvariantError("clique DP backtrack ended in a non-initial state")
        groups.append((k, self.multisets[k][idx]))
        return groups[::-1], chain[::-1]


def solve_clique_on_cycle(v: VirtualNetwork, s: SubstrateNetwork) -> SolveOutcome:
    return solve_clique_on_cycle_traced(v, s)[0]


def solve_clique_on_cycle_traced(v: VirtualNetwork, s: SubstrateNetwork):
    """Solve and also return the aggregate (k, a, b, c) state after each position."""
    if Topology.CLIQUE not in classify_topology(v.graph):
        raise TopologyError("expected a clique virtual network")
    ring = _Ring(s)
    n = v.node_count
    ceiling = n * max(ring.ncost) + ring.n * _pairs(n) * max(ring.ecost)
    if ceiling >= _COST_CEILING:
        raise CostOverflowError("costs too large for the clique DP's 60-bit working range")
    dp = _CliqueDp(ring, n)
    dp.run()
    final = dp.lifted[-1][n][0, :, 0]
    if not (final < _INF).any():
        return SolveOutcome.infeasible(CLIQUE_ID), []
    a_best = int(np.argmin(final))
    optimum = int(final[a_best])
    groups, chain = dp.witness(a_best)

    # virtual node t is the t-th node in position order
    group_of, owed = [], []
    for pos, (size, values) in enumerate(groups):
        group_of.extend([pos] * size)
        owed.extend(values)
    placement = [ring.order[g] for g in group_of]
    routing = []
    for a, b in v.edges:
        u, w = min(a, b), max(a, b)
        clockwise = w < n - owed[u]
        seq = ring.arc_nodes(group_of[u], group_of[w], clockwise)
        routing.append(seq if u == a else seq[::-1])
    outcome = certify(v, s, Mapping(tuple(placement), tuple(routing)), CLIQUE_ID, optimum)
    return outcome, chain
