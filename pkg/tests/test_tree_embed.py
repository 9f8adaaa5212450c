from __future__ import annotations

import random

import pytest

from cases import clique, cycle, hosted_blocks_are_consecutive, path, wheel
from univne.core import SubstrateNetwork, TopologyError, VirtualNetwork
from univne.generators import random_tree_substrate, random_virtual
from univne.oracle import brute_force_solve
from univne.tree_embed import (
    Shape,
    binarize,
    crossing_count,
    solve_clique_on_tree,
    solve_cycle_on_tree,
    solve_path_on_tree,
    solve_wheel_on_tree,
)

STAR = SubstrateNetwork.build(3, [(0, 1), (0, 2)], [1, 2, 2], [100, 1, 5], 2, 1)
SOLVERS = {
    "cycle": solve_cycle_on_tree,
    "path": solve_path_on_tree,
    "wheel": solve_wheel_on_tree,
    "clique": solve_clique_on_tree,
}


def test_binarize_two_node_tree_only_moves_the_root_capacity():
    s = SubstrateNetwork.build(2, [(0, 1)], [2, 3])
    tree = binarize(s)
    # the root is internal once rooted, so its capacity moves to one dummy leaf
    assert tree.size == 3
    assert tree.capacity[tree.root] == 0
    assert [tree.dummy[c] for c in tree.children[tree.root]].count(True) == 1
    assert sorted(tree.capacity) == [0, 2, 3]
    assert tree.up_edge.count(0) == 1


def test_binarize_star_with_capacitated_center():
    s = SubstrateNetwork.build(4, [(0, 1), (0, 2), (0, 3)], [3, 1, 1, 1], [7, 1, 1, 1])
    tree = binarize(s, 0, 6)
    assert tree.capacity[tree.root] == 0
    holders = [x for x in range(tree.size) if tree.dummy[x] and tree.capacity[x] == 3]
    assert len(holders) == 1 and tree.cost[holders[0]] == 7 and tree.origin[holders[0]] == 0
    assert all(len(c) <= 2 for c in tree.children)
    assert any(tree.dummy[x] and tree.children[x] for x in range(tree.size))  # chain node
    leaves = [x for x in range(tree.size) if not tree.children[x]]
    assert sum(tree.capacity[x] for x in leaves) == sum(s.node_capacity)
    assert all(tree.capacity[x] == 0 for x in range(tree.size) if tree.children[x])


def test_binarize_rejects_non_trees():
    with pytest.raises(TopologyError):
        binarize(SubstrateNetwork.build(3, [(0, 1), (1, 2), (2, 0)]))


def test_binarized_optimum_matches_original_tree():
    rng = random.Random(20)
    for _ in range(20):
        s = random_tree_substrate(rng, rng.randint(1, 6))
        v = random_virtual(rng, "cycle", rng.randint(3, 5))
        assert solve_cycle_on_tree(v, s).total_cost == brute_force_solve(v, s).total_cost


def test_crossing_counts():
    assert crossing_count(Shape.CYCLE, 7, 3) == 2
    assert crossing_count(Shape.CYCLE, 7, 0) == 0
    assert crossing_count(Shape.CLIQUE, 4, 2) == 4
    assert crossing_count(Shape.WHEEL, 3, 0, 1) == 3
    assert crossing_count(Shape.WHEEL, 3, 3, 0) == 3
    assert crossing_count(Shape.WHEEL, 5, 2, 1) == 5
    assert crossing_count(Shape.WHEEL, 5, 2, 0) == 4
    assert crossing_count(Shape.PATH, 5, 2, 1) == 1
    assert crossing_count(Shape.PATH, 5, 2, 0) == 2
    assert crossing_count(Shape.PATH, 5, 5, 2) == 0


@pytest.mark.parametrize("k, e", [(1, 2), (5, 1), (0, 1), (4, 0), (6, 0)])
def test_inconsistent_path_states_are_rejected(k, e):
    with pytest.raises(ValueError):
        crossing_count(Shape.PATH, 5, k, e)


def test_cycle_on_single_node():
    s = SubstrateNetwork.build(1, [], 3, 1)
    got = solve_cycle_on_tree(cycle(3), s)
    assert got.total_cost == 3
    assert all(len(p) == 1 for p in got.mapping.routing)


def test_cycle_on_star_fixture():
    assert solve_cycle_on_tree(cycle(4), STAR).total_cost == 16


def test_cycle_without_room():
    s = SubstrateNetwork.build(3, [(0, 1), (0, 2)], 1, 1, 2, 1)
    assert not solve_cycle_on_tree(cycle(4), s).feasible


def test_path_on_two_nodes():
    s = SubstrateNetwork.build(2, [(0, 1)], 1, [1, 2], 1, 5)
    assert solve_path_on_tree(path(2), s).total_cost == 8


def test_single_node_path_takes_the_cheapest_host():
    s = SubstrateNetwork.build(3, [(0, 1), (1, 2)], 1, [4, 2, 3], 1, 1)
    got = solve_path_on_tree(path(1), s)
    assert got.total_cost == 2 and got.mapping.placement == (1,)


def test_path_of_three_shares_the_cheap_host():
    s = SubstrateNetwork.build(2, [(0, 1)], 2, [1, 3], 1, 1)
    got = solve_path_on_tree(path(3), s)
    assert got.total_cost == 6
    assert sorted(got.mapping.placement) == [0, 0, 1]


def test_path_optimum_does_not_depend_on_root():
    # a case where one end of the path must sit between two arcs of the other
    v = VirtualNetwork.build(4, [(3, 1), (3, 0), (0, 2)])
    s = SubstrateNetwork.build(4, [(2, 3), (0, 2), (1, 2)], [3, 1, 2, 1], 1, 1, 1)
    expected = brute_force_solve(v, s).total_cost
    assert [solve_path_on_tree(v, s, root).total_cost for root in range(4)] == [expected] * 4


def test_wheel_on_single_node():
    s = SubstrateNetwork.build(1, [], 4, 3)
    got = solve_wheel_on_tree(wheel(3), s)
    assert got.total_cost == 12


def test_wheel_on_two_nodes():
    s = SubstrateNetwork.build(2, [(0, 1)], 2, 1, 4, 1)
    assert solve_wheel_on_tree(wheel(3), s).total_cost == 8
    tight = SubstrateNetwork.build(2, [(0, 1)], 1, 1, 5, 1)
    assert not solve_wheel_on_tree(wheel(3), tight).feasible


def test_clique_examples():
    assert solve_clique_on_tree(clique(2), SubstrateNetwork.build(2, [(0, 1)], 1, 1, 1, 1)).total_cost == 3
    assert solve_clique_on_tree(clique(3), SubstrateNetwork.build(2, [(0, 1)], [2, 1], 1, 2, 1)).total_cost == 5
    assert not solve_clique_on_tree(clique(3), SubstrateNetwork.build(2, [(0, 1)], [2, 1], 1, 1, 1)).feasible
    assert not solve_clique_on_tree(clique(4), STAR).feasible


@pytest.mark.parametrize("shape", ["cycle", "path", "wheel", "clique"])
def test_solvers_match_oracle_and_are_root_invariant(shape):
    rng = random.Random(shape)
    lo = {"cycle": 3, "path": 1, "wheel": 4, "clique": 2}[shape]
    for _ in range(30):
        s = random_tree_substrate(rng, rng.randint(1, 6))
        v = random_virtual(rng, shape, rng.randint(lo, 5))
        expected = brute_force_solve(v, s).total_cost
        for root in range(s.node_count):
            got = SOLVERS[shape](v, s, root)
            assert got.total_cost == expected
            if got.feasible and shape != "clique":
                assert hosted_blocks_are_consecutive(v, s, got.mapping, shape, root)


def test_wrong_topologies_are_rejected():
    with pytest.raises(TopologyError):
        solve_cycle_on_tree(cycle(3), SubstrateNetwork.build(3, [(0, 1), (1, 2), (2, 0)]))
    with pytest.raises(TopologyError):
        solve_cycle_on_tree(path(3), STAR)
    with pytest.raises(TopologyError):
        solve_wheel_on_tree(cycle(4), STAR)
