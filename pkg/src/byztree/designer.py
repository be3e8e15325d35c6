"""Robust tree design: pick (depth, branching) minimizing the attacker's
best-response coverage under deployment constraints.

``design_topology`` is the fast greedy procedure (smallest depth, largest
affordable branching); ``brute_force_design`` enumerates the whole grid
and doubles as the reference oracle and the data source for surface
plots.  Candidate evaluations are independent, so the grid could be
mapped in parallel; selection is a deterministic reduction.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .knapsack import AttackBudgetProblem, optimal_attack
from .topology import CostOrderingWarning, CostSchedule, TreeShape, deployment_cost, _require_int


@dataclass(frozen=True)
class DesignScenario:
    """Designer-side problem data: costs, budgets and structural bounds."""

    costs: CostSchedule
    network_budget: int
    attacker_budget: int
    a_min: int
    a_max: int
    k_min: int
    n_min: int

    def __post_init__(self) -> None:
        _require_int(self.network_budget, "network_budget")
        _require_int(self.attacker_budget, "attacker_budget")
        for name in ("a_min", "a_max", "k_min", "n_min"):
            _require_int(getattr(self, name), name)
        if self.network_budget < 0 or self.attacker_budget < 0:
            raise ValueError("budgets must be non-negative")
        if self.a_min < 2:
            raise ValueError(f"a_min must be at least 2, got {self.a_min}")
        if self.k_min < 2:
            raise ValueError(f"k_min must be at least 2, got {self.k_min}")
        if self.a_min > self.a_max:
            raise ValueError(f"a_min={self.a_min} exceeds a_max={self.a_max}")
        if self.n_min < 1:
            raise ValueError(f"n_min must be positive, got {self.n_min}")


@dataclass(frozen=True)
class DesignOutcome:
    """Either a chosen tree shape or infeasibility (shape is None)."""

    shape: Optional[TreeShape]

    @property
    def feasible(self) -> bool:
        return self.shape is not None


@dataclass(frozen=True)
class CandidateEvaluation:
    """One (depth, branching) cell: constraints and attacker best response."""

    shape: TreeShape
    feasible: bool
    cost: int
    coverage: Fraction
    blind: bool


@dataclass(frozen=True)
class BiLevelResult:
    outcome: DesignOutcome
    table: tuple


def _warn_if_unordered(costs: CostSchedule) -> None:
    if not costs.strictly_decreasing:
        warnings.warn(
            "cost schedule is not strictly decreasing toward the leaves; "
            "the greedy design procedure assumes it is",
            CostOrderingWarning,
            stacklevel=3,
        )


def design_topology(scenario: DesignScenario) -> DesignOutcome:
    """Greedy robust design: smallest depth with the largest branching the
    deployment budget affords, growing depth until the node minimum holds.

    Returns an infeasible outcome when the affordable branching drops
    below a_min.  Raises when the cost schedule runs out before the
    procedure terminates (supply more levels).
    """
    _warn_if_unordered(scenario.costs)
    depth = scenario.k_min
    a = scenario.a_max
    while True:
        if depth > len(scenario.costs):
            raise ValueError(
                f"cost schedule exhausted at depth {depth}; supply at least "
                f"{depth} levels"
            )
        if deployment_cost(TreeShape(depth, a), scenario.costs) > scenario.network_budget:
            while a >= scenario.a_min and (
                deployment_cost(TreeShape(depth, a), scenario.costs)
                > scenario.network_budget
            ):
                a -= 1
            if a < scenario.a_min:
                return DesignOutcome(None)
        if TreeShape(depth, a).total_nodes >= scenario.n_min:
            return DesignOutcome(TreeShape(depth, a))
        depth += 1


def brute_force_design(
    scenario: DesignScenario, k_max: Optional[int] = None
) -> BiLevelResult:
    """Enumerate the (depth, branching) grid, solving the attacker's
    capture problem at every cell.

    The outcome is the feasible cell minimizing best-response coverage,
    ties broken by smaller depth then larger branching.  The full table
    (feasible or not) is retained for surface emission.
    """
    if k_max is None:
        k_max = len(scenario.costs)
    _require_int(k_max, "k_max")
    if k_max > len(scenario.costs):
        raise ValueError(
            f"k_max={k_max} exceeds schedule length {len(scenario.costs)}"
        )
    if k_max < scenario.k_min:
        raise ValueError(f"k_max={k_max} below k_min={scenario.k_min}")

    table = []
    best_key = None
    best_shape = None
    for depth in range(scenario.k_min, k_max + 1):
        for a in range(scenario.a_min, scenario.a_max + 1):
            shape = TreeShape(depth, a)
            cost = deployment_cost(shape, scenario.costs)
            feasible = (
                cost <= scenario.network_budget and shape.total_nodes >= scenario.n_min
            )
            response = optimal_attack(
                AttackBudgetProblem(shape, scenario.costs, scenario.attacker_budget)
            )
            table.append(
                CandidateEvaluation(shape, feasible, cost, response.coverage, response.blind)
            )
            if feasible:
                key = (response.coverage, depth, -a)
                if best_key is None or key < best_key:
                    best_key = key
                    best_shape = shape
    return BiLevelResult(DesignOutcome(best_shape), tuple(table))


def min_safe_branching(
    depth: int, costs: CostSchedule, attacker_budget: int, a_max: int
) -> Optional[int]:
    """Smallest branching in [2, a_max] at which the budgeted attacker's
    best response stays below half coverage; None when every branching up
    to a_max can be blinded."""
    _require_int(depth, "depth")
    if depth < 2:
        raise ValueError(f"depth must be at least 2, got {depth}")
    for a in range(2, a_max + 1):
        shape = TreeShape(depth, a)
        response = optimal_attack(AttackBudgetProblem(shape, costs, attacker_budget))
        if not response.blind:
            return a
    return None


def coverage_share_inequalities(a: int, depth: int, k: int):
    """Exact integer checks behind branching monotonicity: a single
    level-k capture's share of covered nodes shrinks when the branching
    factor grows from a to a+1.

    Returns (strict, nonstrict):
      strict:    a*((a+1)^m - 1) - (a+1)*(a^m - 1) > 0
      nonstrict: (a+1)^(depth+1)*(a^m - 1) - a^(depth+1)*((a+1)^m - 1) >= 0
    with m = depth - k + 1.  Their sum being positive is exactly the
    share comparison with denominators cleared.
    """
    _require_int(a, "a")
    _require_int(depth, "depth")
    _require_int(k, "k")
    if a < 2:
        raise ValueError(f"a must be at least 2, got {a}")
    if not 1 <= k <= depth:
        raise ValueError(f"level {k} out of range 1..{depth}")
    m = depth - k + 1
    strict = a * ((a + 1) ** m - 1) - (a + 1) * (a**m - 1) > 0
    nonstrict = (a + 1) ** (depth + 1) * (a**m - 1) - a ** (depth + 1) * (
        (a + 1) ** m - 1
    ) >= 0
    return strict, nonstrict
