from __future__ import annotations

import pytest

from cases import clique, cycle, fig1, path, scaled, star
from univne.core import (
    CostOverflowError,
    InvalidGraphError,
    Mapping,
    MappingStructureError,
    SubstrateNetwork,
    Topology,
    TopologyError,
    UndirectedGraph,
    VirtualNetwork,
    check_feasible,
    classify_topology,
    mapping_cost,
    shift_virtual_indices,
)
from univne.tree_embed import solve_cycle_on_tree


def test_fig1_mapping_is_feasible_with_capacity_two():
    doc, m, _ = fig1()
    report = check_feasible(doc.virtual, doc.substrate, m)
    assert report.feasible
    assert report.node_load == [1, 0, 0, 2, 1]


def test_fig1_mapping_costs_eleven_under_unit_costs():
    doc, m, declared = fig1()
    assert mapping_cost(doc.virtual, doc.substrate, m) == 11 == declared


def test_fig1_cost_is_linear_in_costs():
    doc, m, _ = fig1()
    assert mapping_cost(doc.virtual, scaled(doc.substrate, 2), m) == 22
    assert mapping_cost(doc.virtual, scaled(doc.substrate, 0), m) == 0


def test_fig1_violation_when_one_edge_has_capacity_one():
    doc, m, _ = fig1()
    s = doc.substrate
    tight = s.graph.edge_index(0, 2)
    caps = list(s.edge_capacity)
    caps[tight] = 1
    report = check_feasible(doc.virtual, s.with_capacities(s.node_capacity, caps), m)
    assert not report.feasible
    assert report.edge_violations == [tight]
    assert report.edge_load[tight] == 2
    assert "VIOLATION" in report.describe(s)


def test_single_node_on_single_node():
    v = VirtualNetwork.build(1, [])
    s = SubstrateNetwork.build(1, [], node_cost=4)
    m = Mapping((0,), ())
    assert check_feasible(v, s, m).feasible
    assert mapping_cost(v, s, m) == 4


@pytest.mark.parametrize(
    "n, edges, message",
    [
        (2, [(0, 0)], "self-loop"),
        (2, [(0, 1), (1, 0)], "duplicates"),
        (3, [(0, 1)], "not connected"),
        (2, [(0, 2)], "outside"),
        (0, [], "positive"),
    ],
)
def test_graph_validation(n, edges, message):
    with pytest.raises(InvalidGraphError, match=message):
        UndirectedGraph(n, tuple(edges))


def test_substrate_validation():
    with pytest.raises(InvalidGraphError, match="edge_capacity"):
        SubstrateNetwork.build(2, [(0, 1)], edge_capacity=0)
    with pytest.raises(InvalidGraphError, match="node_cost"):
        SubstrateNetwork.build(2, [(0, 1)], node_cost=-1)
    with pytest.raises(InvalidGraphError, match="entries"):
        SubstrateNetwork.build(2, [(0, 1)], node_capacity=[1])
    with pytest.raises(InvalidGraphError):
        SubstrateNetwork.build(2, [(0, 1)], node_capacity=True)
    # zero node capacity is allowed
    assert SubstrateNetwork.build(2, [(0, 1)], node_capacity=0).node_capacity == (0, 0)


def test_structural_errors():
    v = path(2)
    s = SubstrateNetwork.build(3, [(0, 1), (1, 2)], node_capacity=2)
    with pytest.raises(MappingStructureError, match="runs"):
        check_feasible(v, s, Mapping((0, 2), ((0, 1),)))
    with pytest.raises(MappingStructureError, match="non-edge"):
        check_feasible(v, s, Mapping((0, 2), ((0, 2),)))
    with pytest.raises(MappingStructureError, match="repeats"):
        check_feasible(v, s, Mapping((0, 0), ((0, 1, 0),)))
    with pytest.raises(MappingStructureError, match="anchor"):
        check_feasible(v, s, Mapping((0, 0), ((),)))
    with pytest.raises(MappingStructureError, match="invalid substrate node"):
        check_feasible(v, s, Mapping((0, 5), ((0,),)))


def test_cost_overflow_is_reported():
    big = 2**64 - 1
    v = path(2)
    s = SubstrateNetwork.build(2, [(0, 1)], node_cost=big, edge_cost=big)
    with pytest.raises(CostOverflowError):
        mapping_cost(v, s, Mapping((0, 1), ((0, 1),)))


def _flags(g: UndirectedGraph) -> set[Topology]:
    return set(classify_topology(g).flags)


def test_classify_triangle():
    assert _flags(cycle(3).graph) == {Topology.CYCLE, Topology.CLIQUE}


def test_classify_star():
    assert _flags(star(3).graph) == {Topology.STAR, Topology.TREE}


def test_classify_k4_is_clique_and_wheel():
    assert _flags(clique(4).graph) == {Topology.CLIQUE, Topology.WHEEL}


def test_classify_k2_and_single_node():
    assert _flags(clique(2).graph) == {Topology.CLIQUE, Topology.TREE, Topology.PATH}
    assert _flags(UndirectedGraph(1, ())) == {Topology.PATH, Topology.TREE}


def test_classify_general():
    g = UndirectedGraph(4, ((0, 1), (1, 2), (2, 0), (2, 3)))
    assert _flags(g) == {Topology.GENERAL}


def test_canonical_orders():
    topo = classify_topology(UndirectedGraph(4, ((2, 0), (0, 3), (3, 1))))
    assert topo.path_order in ((1, 3, 0, 2), (2, 0, 3, 1))
    topo = classify_topology(UndirectedGraph(5, ((0, 4), (1, 4), (2, 4), (3, 4), (0, 1), (1, 2), (2, 3), (3, 0))))
    assert topo.wheel_order[-1] == 4
    assert str(classify_topology(cycle(3).graph)) == "{Cycle, Clique}"


def _cycle_embedding():
    v = cycle(4)
    s = SubstrateNetwork.build(3, [(0, 1), (1, 2)], [2, 1, 2], [1, 3, 2], 2, [1, 2])
    outcome = solve_cycle_on_tree(v, s)
    assert outcome.feasible
    return v, s, outcome.mapping


def test_shift_by_zero_and_by_n_is_identity():
    v, _, m = _cycle_embedding()
    assert shift_virtual_indices(v, m, 0) == m
    assert shift_virtual_indices(v, m, 4) == m


def test_shift_by_two_keeps_feasibility_and_cost():
    v, s, m = _cycle_embedding()
    shifted = shift_virtual_indices(v, m, 2)
    assert shifted != m
    assert check_feasible(v, s, shifted).feasible
    assert mapping_cost(v, s, shifted) == mapping_cost(v, s, m)


def test_shift_rejects_non_cycles():
    v = path(3)
    with pytest.raises(TopologyError):
        shift_virtual_indices(v, Mapping((0, 0, 0), ((0,), (0,))), 1)
