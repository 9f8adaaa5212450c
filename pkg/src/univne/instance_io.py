"""Strict JSON format for instances and mappings.

Parsing rejects unknown or missing fields, duplicate keys, booleans posing
as integers and dangling node ids. Every error carries the line and column
of the offending value. Serialization is canonical (fixed key order,
two-space indent, trailing newline), so parse followed by serialize
reproduces a canonical file byte for byte. Lists and objects holding only
plain values are written on one line.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any

from .core import (
    InvalidGraphError,
    Mapping,
    SubstrateNetwork,
    UndirectedGraph,
    UniVNEError,
    Variant,
    VirtualNetwork,
    edge_key,
)

Path = tuple[Any, ...]


class InstanceFormatError(UniVNEError, ValueError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line, self.column = line, column
        where = f"line {line}, column {column}: " if line is not None else ""
        super().__init__(where + message)


@dataclass(frozen=True)
class InstanceDocument:
    virtual: VirtualNetwork
    substrate: SubstrateNetwork
    variant: Variant = Variant.COST
    budget: int | None = None
    provenance: dict[str, Any] | None = None


def _no_duplicates(pairs: list[tuple[str, Any]]) -> dict[str, Any]:
    out: dict[str, Any] = {}
    for k, v in pairs:
        if k in out:
            raise ValueError(f"duplicate key {k!r}")
        out[k] = v
    return out


def _skip_ws(text: str, i: int) -> int:
    while i < len(text) and text[i] in " \t\r\n":
        i += 1
    return i


def _offset_of(text: str, path: Path) -> int:
    """Character offset of the value at path (object keys and list indices)."""
    dec = json.JSONDecoder()
    i = _skip_ws(text, 0)
    for step in path:
        if i >= len(text):
            break
        if text[i] == "{":
            i = _skip_ws(text, i + 1)
            while i < len(text) and text[i] != "}":
                key, i = dec.raw_decode(text, i)
                i = _skip_ws(text, _skip_ws(text, i) + 1)
                if key == step:
                    break
                _, i = dec.raw_decode(text, i)
                i = _skip_ws(text, i)
                if text[i] == ",":
                    i = _skip_ws(text, i + 1)
            else:
                return i
        elif text[i] == "[" and isinstance(step, int):
            i = _skip_ws(text, i + 1)
            for _ in range(step):
                _, i = dec.raw_decode(text, i)
                i = _skip_ws(text, i)
                if text[i] != ",":
                    return i
                i = _skip_ws(text, i + 1)
        else:
            break
    return i


class _Reader:
    def __init__(self, text: str):
        self.text = text

    def fail(self, path: Path, message: str) -> InstanceFormatError:
        where = ".".join(str(p) for p in path) or "document"
        offset = _offset_of(self.text, path)
        line = self.text.count("\n", 0, offset) + 1
        column = offset - (self.text.rfind("\n", 0, offset) + 1) + 1
        return InstanceFormatError(f"{where}: {message}", line, column)

    def load(self) -> Any:
        try:
            return json.loads(self.text, object_pairs_hook=_no_duplicates)
        except json.JSONDecodeError as exc:
            raise InstanceFormatError(exc.msg, exc.lineno, exc.colno) from None
        except ValueError as exc:
            raise InstanceFormatError(str(exc)) from None

    def obj(self, value: Any, path: Path, required: tuple[str, ...], optional: tuple[str, ...] = ()) -> dict:
        if not isinstance(value, dict):
            raise self.fail(path, "expected an object")
        for key in value:
            if key not in required and key not in optional:
                raise self.fail(path + (key,), f"unknown field {key!r}")
        for key in required:
            if key not in value:
                raise self.fail(path, f"missing field {key!r}")
        return value

    def int(self, value: Any, path: Path, minimum: int | None = None) -> int:
        if isinstance(value, bool) or not isinstance(value, int):
            raise self.fail(path, f"expected an integer, got {json.dumps(value)}")
        if minimum is not None and value < minimum:
            raise self.fail(path, f"must be >= {minimum}, got {value}")
        return value

    def list(self, value: Any, path: Path) -> list:
        if not isinstance(value, list):
            raise self.fail(path, "expected an array")
        return value

    def edge_list(self, value: Any, path: Path, node_count: int, as_pairs: bool) -> list[tuple[int, int]]:
        edges: list[tuple[int, int]] = []
        seen: dict[tuple[int, int], int] = {}
        for i, item in enumerate(self.list(value, path)):
            at = path + (i,)
            if as_pairs:
                pair = self.list(item, at)
                if len(pair) != 2:
                    raise self.fail(at, "an edge is a pair [u, v]")
                u, v = (self.int(pair[j], at + (j,), 0) for j in range(2))
            else:
                self.obj(item, at, ("u", "v", "capacity", "cost"))
                u, v = self.int(item["u"], at + ("u",), 0), self.int(item["v"], at + ("v",), 0)
            for x in (u, v):
                if x >= node_count:
                    raise self.fail(at, f"edge {i} ({u}, {v}) references node {x}, only {node_count} nodes exist")
            if u == v:
                raise self.fail(at, f"edge {i} ({u}, {v}) is a self-loop")
            if edge_key(u, v) in seen:
                raise self.fail(at, f"edge {i} ({u}, {v}) duplicates edge {seen[edge_key(u, v)]}")
            seen[edge_key(u, v)] = i
            edges.append((u, v))
        return edges

    def graph(self, n: int, edges: list[tuple[int, int]], path: Path) -> UndirectedGraph:
        try:
            return UndirectedGraph(n, tuple(edges))
        except InvalidGraphError as exc:
            raise self.fail(path, str(exc)) from None


def parse_instance(text: str) -> InstanceDocument:
    r = _Reader(text)
    doc = r.obj(r.load(), (), ("virtual", "substrate", "variant"), ("budget", "provenance"))

    vd = r.obj(doc["virtual"], ("virtual",), ("nodes", "edges"))
    n_r = r.int(vd["nodes"], ("virtual", "nodes"), 1)
    v_edges = r.edge_list(vd["edges"], ("virtual", "edges"), n_r, as_pairs=True)
    virtual = VirtualNetwork(r.graph(n_r, v_edges, ("virtual",)))

    sd = r.obj(doc["substrate"], ("substrate",), ("nodes", "edges"))
    nodes = r.list(sd["nodes"], ("substrate", "nodes"))
    if not nodes:
        raise r.fail(("substrate", "nodes"), "at least one substrate node is required")
    ncap, ncost = [], []
    for i, node in enumerate(nodes):
        at = ("substrate", "nodes", i)
        r.obj(node, at, ("capacity", "cost"))
        ncap.append(r.int(node["capacity"], at + ("capacity",), 0))
        ncost.append(r.int(node["cost"], at + ("cost",), 0))
    raw_edges = sd["edges"]
    s_edges = r.edge_list(raw_edges, ("substrate", "edges"), len(nodes), as_pairs=False)
    ecap = [r.int(e["capacity"], ("substrate", "edges", i, "capacity"), 1) for i, e in enumerate(raw_edges)]
    ecost = [r.int(e["cost"], ("substrate", "edges", i, "cost"), 0) for i, e in enumerate(raw_edges)]
    graph = r.graph(len(nodes), s_edges, ("substrate",))
    try:
        substrate = SubstrateNetwork(graph, tuple(ncap), tuple(ncost), tuple(ecap), tuple(ecost))
    except InvalidGraphError as exc:
        raise r.fail(("substrate",), str(exc)) from None

    try:
        variant = Variant(doc["variant"])
    except ValueError:
        raise r.fail(("variant",), 'expected "existence" or "cost"') from None
    budget = None
    if "budget" in doc:
        budget = r.int(doc["budget"], ("budget",), 0)
    provenance = None
    if "provenance" in doc:
        provenance = doc["provenance"]
        if not isinstance(provenance, dict):
            raise r.fail(("provenance",), "expected an object")
    return InstanceDocument(virtual, substrate, variant, budget, provenance)


def _format(obj: Any, depth: int = 0) -> str:
    """Two-space indented JSON; containers of scalars stay on one line."""
    pad, inner = "  " * depth, "  " * (depth + 1)
    if isinstance(obj, dict):
        if all(not isinstance(x, (dict, list)) for x in obj.values()):
            return json.dumps(obj)
        body = ",\n".join(f"{inner}{json.dumps(k)}: {_format(v, depth + 1)}" for k, v in obj.items())
        return "{\n" + body + "\n" + pad + "}"
    if isinstance(obj, list):
        if all(not isinstance(x, (dict, list)) for x in obj):
            return json.dumps(obj)
        body = ",\n".join(inner + _format(x, depth + 1) for x in obj)
        return "[\n" + body + "\n" + pad + "]"
    return json.dumps(obj)


def _dump(obj: Any) -> str:
    return _format(obj) + "\n"


def instance_to_dict(doc: InstanceDocument) -> dict[str, Any]:
    s = doc.substrate
    out: dict[str, Any] = {
        "virtual": {"nodes": doc.virtual.node_count, "edges": [list(e) for e in doc.virtual.edges]},
        "substrate": {
            "nodes": [{"capacity": c, "cost": w} for c, w in zip(s.node_capacity, s.node_cost)],
            "edges": [
                {"u": u, "v": v, "capacity": c, "cost": w}
                for (u, v), c, w in zip(s.graph.edges, s.edge_capacity, s.edge_cost)
            ],
        },
        "variant": doc.variant.value,
    }
    if doc.budget is not None:
        out["budget"] = doc.budget
    if doc.provenance is not None:
        out["provenance"] = doc.provenance
    return out


def serialize_instance(doc: InstanceDocument) -> str:
    return _dump(instance_to_dict(doc))


def mapping_to_dict(v: VirtualNetwork, m: Mapping, cost: int | None = None) -> dict[str, Any]:
    out: dict[str, Any] = {
        "placement": list(m.placement),
        "routing": [{"edge": list(e), "path": list(p)} for e, p in zip(v.edges, m.routing)],
    }
    if cost is not None:
        out["cost"] = cost
    return out


def serialize_mapping(v: VirtualNetwork, m: Mapping, cost: int | None = None) -> str:
    return _dump(mapping_to_dict(v, m, cost))


def parse_mapping(text: str, v: VirtualNetwork) -> tuple[Mapping, int | None]:
    """Mapping plus its declared cost (None when absent).

    Routing entries may come in any order and name an edge in either
    direction; a reversed entry has its path reversed to match.
    """
    r = _Reader(text)
    doc = r.obj(r.load(), (), ("placement", "routing"), ("cost",))
    placement = tuple(
        r.int(x, ("placement", i), 0) for i, x in enumerate(r.list(doc["placement"], ("placement",)))
    )
    routes: dict[int, tuple[int, ...]] = {}
    for i, entry in enumerate(r.list(doc["routing"], ("routing",))):
        at = ("routing", i)
        r.obj(entry, at, ("edge", "path"))
        pair = r.list(entry["edge"], at + ("edge",))
        if len(pair) != 2:
            raise r.fail(at + ("edge",), "an edge is a pair [u, v]")
        a, b = (r.int(pair[j], at + ("edge", j), 0) for j in range(2))
        if not (a < v.node_count and b < v.node_count and v.graph.has_edge(a, b)):
            raise r.fail(at + ("edge",), f"({a}, {b}) is not a virtual edge")
        idx = v.graph.edge_index(a, b)
        if idx in routes:
            raise r.fail(at, f"virtual edge ({a}, {b}) is routed twice")
        path = r.list(entry["path"], at + ("path",))
        if not path:
            raise r.fail(at + ("path",), "a path lists at least its anchor node")
        nodes = tuple(r.int(x, at + ("path", j), 0) for j, x in enumerate(path))
        routes[idx] = nodes if v.edges[idx] == (a, b) else nodes[::-1]
    missing = [v.edges[i] for i in range(v.graph.edge_count) if i not in routes]
    if missing:
        raise r.fail(("routing",), f"no route for virtual edge {missing[0]}")
    cost = r.int(doc["cost"], ("cost",), 0) if "cost" in doc else None
    return Mapping(placement, tuple(routes[i] for i in range(v.graph.edge_count))), cost
