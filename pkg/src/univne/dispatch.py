"""Pick the cheapest exact solver for an instance from its topology classes.

Priority: substrate tree, substrate cycle, virtual star, Hamiltonian filling
for existence questions, and finally the brute-force oracle behind a size
guard. A graph in several classes (K3 is both a cycle and a clique) takes
the first applicable rule.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from . import cycle_embed, flow, oracle, tree_embed
from .core import (
    SolveOutcome,
    SubstrateNetwork,
    Topology,
    TopologySet,
    UniVNEError,
    Variant,
    VirtualNetwork,
    classify_topology,
)

ORACLE_LIMIT = 10**7

_LETTER = {
    Topology.PATH: "P",
    Topology.STAR: "S",
    Topology.CYCLE: "C",
    Topology.WHEEL: "W",
    Topology.CLIQUE: "K",
    Topology.TREE: "T",
    Topology.GENERAL: "G",
}
_VIRTUAL_ORDER = (Topology.PATH, Topology.STAR, Topology.CYCLE, Topology.CLIQUE, Topology.WHEEL, Topology.TREE)
_SUBSTRATE_ORDER = (Topology.PATH, Topology.STAR, Topology.TREE, Topology.CYCLE, Topology.CLIQUE)

# Cells without a known polynomial algorithm whose complexity is still open;
# every other oracle cell is NP-hard. Keys: (virtual, substrate, variant or None for both).
_OPEN_CELLS = {
    ("T", "P", None),
    ("T", "C", None),
    ("T", "K", Variant.EXISTENCE),
    ("W", "K", Variant.EXISTENCE),
    ("G", "C", None),
}


class SizeGuardError(UniVNEError):
    pass


@dataclass(frozen=True)
class SolverChoice:
    solver_id: str
    rationale: str
    fallback: bool
    cell: str
    status: str  # "polynomial", "np-hard" or "open"


def _letter(topo: TopologySet, order: tuple[Topology, ...]) -> str:
    for t in order:
        if t in topo:
            return _LETTER[t]
    return "G"


def cell_name(v_topo: TopologySet, s_topo: TopologySet, variant: Variant) -> str:
    prefix = "E" if variant is Variant.EXISTENCE else "C"
    return f"{prefix}-<{_letter(v_topo, _VIRTUAL_ORDER)}_r->{_letter(s_topo, _SUBSTRATE_ORDER)}_s>"


def _hard_status(v_letter: str, s_letter: str, variant: Variant) -> str:
    if (v_letter, s_letter, None) in _OPEN_CELLS or (v_letter, s_letter, variant) in _OPEN_CELLS:
        return "open"
    return "np-hard"


_TREE_SOLVERS = (
    (Topology.PATH, tree_embed.solve_path_on_tree, "tree-path-dp"),
    (Topology.CYCLE, tree_embed.solve_cycle_on_tree, "tree-cycle-dp"),
    (Topology.WHEEL, tree_embed.solve_wheel_on_tree, "tree-wheel-dp"),
    (Topology.CLIQUE, tree_embed.solve_clique_on_tree, "tree-clique-dp"),
)
_CYCLE_SOLVERS = (
    (Topology.PATH, cycle_embed.solve_path_on_cycle, cycle_embed.PATH_ID),
    (Topology.CYCLE, cycle_embed.solve_cycle_on_cycle, cycle_embed.CYCLE_ID),
    (Topology.WHEEL, cycle_embed.solve_wheel_on_cycle, cycle_embed.WHEEL_ID),
    (Topology.CLIQUE, cycle_embed.solve_clique_on_cycle, cycle_embed.CLIQUE_ID),
)


def _is_star(v_topo: TopologySet, n_r: int) -> bool:
    # a single edge is a star with one leaf
    return Topology.STAR in v_topo or (n_r == 2 and Topology.TREE in v_topo)


def dispatch(
    v_topo: TopologySet,
    s_topo: TopologySet,
    variant: Variant,
    n_r: int,
    n_s: int,
    force_oracle: bool = False,
) -> SolverChoice:
    """Resolve the solver for an instance; raises SizeGuardError for oversized hard cells."""
    cell = cell_name(v_topo, s_topo, variant)
    if not force_oracle:
        if Topology.TREE in s_topo:
            for topo, _, sid in _TREE_SOLVERS:
                if topo in v_topo:
                    return SolverChoice(sid, f"{cell}: {topo.value.lower()} on a substrate tree", False, cell, "polynomial")
        if Topology.CYCLE in s_topo:
            for topo, _, sid in _CYCLE_SOLVERS:
                if topo in v_topo:
                    return SolverChoice(sid, f"{cell}: {topo.value.lower()} on a substrate cycle", False, cell, "polynomial")
        if _is_star(v_topo, n_r):
            return SolverChoice(flow.STAR_SOLVER_ID, f"{cell}: virtual star, one min-cost flow per center host", False, cell, "polynomial")
        if (
            variant is Variant.EXISTENCE
            and (Topology.PATH in v_topo or Topology.CYCLE in v_topo)
            and (Topology.CLIQUE in s_topo or Topology.WHEEL in s_topo)
            and n_s >= 3
        ):
            return SolverChoice(
                cycle_embed.HAMILTONIAN_ID,
                f"{cell}: existence on a Hamiltonian substrate, filled along a Hamiltonian cycle",
                False,
                cell,
                "polynomial",
            )
    status = _hard_status(_letter(v_topo, _VIRTUAL_ORDER), _letter(s_topo, _SUBSTRATE_ORDER), variant)
    label = "open problem" if status == "open" else "NP-hard"
    if not force_oracle and n_s**n_r > ORACLE_LIMIT:
        raise SizeGuardError(
            f"{cell} {label}: oracle limit exceeded ({n_s}^{n_r} placements > {ORACLE_LIMIT})"
        )
    reason = "forced" if force_oracle else f"no polynomial solver, {label}"
    return SolverChoice(oracle.SOLVER_ID, f"{cell}: {reason}", True, cell, status)


def hamiltonian_witness(s: SubstrateNetwork, s_topo: TopologySet) -> tuple[int, ...]:
    """Hamiltonian cycle read off a clique, cycle or wheel substrate."""
    if Topology.CYCLE in s_topo:
        return s_topo.cycle_order
    if Topology.CLIQUE in s_topo:
        return tuple(range(s.node_count))
    if Topology.WHEEL in s_topo:
        # outer rim in order, then the hub between the last and first rim nodes
        return s_topo.wheel_order
    raise UniVNEError("substrate class has no built-in Hamiltonian witness")


def _runner(choice: SolverChoice, s_topo: TopologySet, force_oracle: bool) -> Callable[[VirtualNetwork, SubstrateNetwork], SolveOutcome]:
    for _, fn, sid in _TREE_SOLVERS + _CYCLE_SOLVERS:
        if sid == choice.solver_id:
            return fn
    if choice.solver_id == flow.STAR_SOLVER_ID:
        return flow.solve_star_on_general
    if choice.solver_id == cycle_embed.HAMILTONIAN_ID:
        return lambda v, s: cycle_embed.embed_via_hamiltonian(v, s, hamiltonian_witness(s, s_topo))
    limits = oracle.OracleLimits(max_placements=10**30 if force_oracle else ORACLE_LIMIT)
    return lambda v, s: oracle.brute_force_solve(v, s, limits)


@dataclass(frozen=True)
class SolveReport:
    choice: SolverChoice
    outcome: SolveOutcome
    budget: int | None

    @property
    def within_budget(self) -> bool | None:
        if self.budget is None:
            return None
        return self.outcome.feasible and self.outcome.total_cost <= self.budget

    @property
    def answer(self) -> bool:
        """Yes/no answer to the instance's decision question."""
        if self.budget is None:
            return self.outcome.feasible
        return bool(self.within_budget)


def solve_instance(
    v: VirtualNetwork,
    s: SubstrateNetwork,
    variant: Variant = Variant.COST,
    budget: int | None = None,
    force_oracle: bool = False,
) -> SolveReport:
    v_topo, s_topo = classify_topology(v.graph), classify_topology(s.graph)
    choice = dispatch(v_topo, s_topo, variant, v.node_count, s.node_count, force_oracle)
    outcome = _runner(choice, s_topo, force_oracle)(v, s)
    return SolveReport(choice, outcome, budget if variant is Variant.COST else None)
