"""Elimination among k >= 2 candidate unitaries.

Each stage runs the pairwise scheme for the first two live candidates (a, b)
and measures {P, I - P} with P the projector onto the output for U_a. Since
the two outputs are orthogonal, outcome P rules out b and outcome I - P rules
out a; a third candidate survives either way. k - 1 stages leave one.
"""
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from ..errors import DomainError, LoccError, PlannerFailure
from ..matrixcore import PartitionedOperator
from .dispatch import difference, plan_discrimination
from .scheme import DiscriminationScheme, output_state


@dataclass(frozen=True, eq=False)
class EliminationTree:
    units: tuple
    schemes: dict  # (a, b) with a < b -> DiscriminationScheme
    kind: str = "elimination_tree"
    diagnostics: dict = field(default_factory=dict)

    @property
    def k(self) -> int:
        return len(self.units)

    def stage_pair(self, live: Sequence[int]) -> tuple:
        return tuple(sorted(live)[:2])

    def worst_case_uses(self) -> int:
        def walk(live):
            if len(live) == 1:
                return 0
            a, b = self.stage_pair(live)
            u = self.schemes[a, b].uses
            return u + max(walk(tuple(x for x in live if x != b)), walk(tuple(x for x in live if x != a)))
        return walk(tuple(range(self.k)))


def plan_multi(units: Sequence[PartitionedOperator], seed=0, **kwargs) -> EliminationTree:
    """Pairwise schemes for every pair the elimination can reach (all pairs)."""
    units = tuple(units)
    if len(units) < 2:
        raise DomainError("need at least two candidates")
    for a in range(len(units)):
        for b in range(a + 1, len(units)):
            difference(units[a], units[b])  # shape, unitarity and distinctness checks
    schemes = {}
    for a in range(len(units)):
        for b in range(a + 1, len(units)):
            try:
                schemes[a, b] = plan_discrimination(units[a], units[b], seed=seed, **kwargs)
            except LoccError as exc:
                raise PlannerFailure(f"pair({a},{b})", str(exc), {"pair": (a, b)}) from exc
    tree = EliminationTree(units, schemes)
    tree.diagnostics["worst_case_uses"] = tree.worst_case_uses()
    return tree


class EliminationOutcome(NamedTuple):
    truth: int
    survivor_probabilities: dict  # final survivor -> probability
    error_probability: float  # total weight of branches that eliminate the truth
    stages: int  # stages along every branch
    uses: int  # worst-case uses of the unknown unitary on any branch


def simulate_elimination(tree: EliminationTree, truth: int) -> EliminationOutcome:
    """Exact branch-by-branch simulation with U_truth as the unknown unitary."""
    U = tree.units[truth].matrix
    result = {}
    err = 0.0
    depth = set()
    uses = 0

    def walk(live, prob, stage, used):
        nonlocal err, uses
        if len(live) == 1:
            result[live[0]] = result.get(live[0], 0.0) + prob
            depth.add(stage)
            uses = max(uses, used)
            return
        a, b = tree.stage_pair(live)
        sch: DiscriminationScheme = tree.schemes[a, b]
        phi_a = output_state(tree.units[a].matrix, sch)
        phi = output_state(U, sch)
        p_keep_a = float(min(1.0, abs(np.vdot(phi_a, phi)) ** 2))
        for p, gone in ((p_keep_a, b), (1.0 - p_keep_a, a)):
            if gone == truth:
                err += prob * p
                continue
            walk(tuple(x for x in live if x != gone), prob * p, stage + 1, used + sch.uses)

    walk(tuple(range(tree.k)), 1.0, 0, 0)
    if len(depth) != 1:
        raise AssertionError(f"branches ended at different depths: {depth}")
    return EliminationOutcome(truth, result, err, depth.pop(), uses)
