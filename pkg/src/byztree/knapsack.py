"""Attacker's budgeted capture problem: a bounded knapsack over levels.

The objective is maximized as the integer covered-node count
sum(profit_k * B_k); the node total is constant per tree, so the covered
fraction is maximal iff the count is.  The dynamic program and the
exhaustive solver both break ties toward the lexicographically smallest
allocation (B_1, ..., B_K), so outputs are reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from math import prod

from .attack import BLINDING_THRESHOLD, AttackAllocation, coverage_fraction
from .topology import CostSchedule, TreeShape, _require_int

#: Refuse exhaustive enumeration beyond this many candidate allocations.
BRUTE_FORCE_GUARD = 10_000_000


@dataclass(frozen=True)
class AttackBudgetProblem:
    """Capture-budget instance: tree, per-level costs, attacker budget."""

    shape: TreeShape
    costs: CostSchedule
    budget: int

    def __post_init__(self) -> None:
        _require_int(self.budget, "budget")
        if self.budget < 0:
            raise ValueError(f"budget must be non-negative, got {self.budget}")
        if len(self.costs) < self.shape.depth:
            raise ValueError(
                f"schedule of length {len(self.costs)} too short for depth "
                f"{self.shape.depth}"
            )


@dataclass(frozen=True)
class AttackSolution:
    """Optimal allocation with its exact covered fraction and spend."""

    allocation: AttackAllocation
    coverage: Fraction
    spent: int
    blind: bool


def _level_items(problem: AttackBudgetProblem):
    """Per-level (profit, cost, cap) with caps tightened by affordability."""
    shape = problem.shape
    out = []
    for k in shape.levels:
        cost = problem.costs.cost(k)
        cap = min(shape.level_population(k), problem.budget // cost)
        out.append((shape.profit(k), cost, cap))
    return out


def _solution(problem: AttackBudgetProblem, counts) -> AttackSolution:
    alloc = AttackAllocation(tuple(counts))
    cover = coverage_fraction(problem.shape, alloc)
    spent = sum(problem.costs.cost(k) * alloc.counts[k - 1] for k in problem.shape.levels)
    return AttackSolution(alloc, cover, spent, cover >= BLINDING_THRESHOLD)


def _binary_chunks(cap: int):
    """Split a multiplicity cap into powers of two covering 0..cap."""
    chunk = 1
    while cap > 0:
        take = min(chunk, cap)
        yield take
        cap -= take
        chunk <<= 1


def optimal_attack(problem: AttackBudgetProblem) -> AttackSolution:
    """Exact bounded-knapsack optimum by dynamic programming over budget.

    Multiplicities are binary-split, making each level O(log cap) 0/1
    items; arithmetic is plain Python ints so values never overflow.
    """
    items = _level_items(problem)
    budget = problem.budget
    depth = problem.shape.depth

    # suffix[k] = best covered count using levels k..depth at each budget
    suffix = [None] * (depth + 2)
    suffix[depth + 1] = [0] * (budget + 1)
    for k in range(depth, 0, -1):
        row = suffix[k + 1][:]
        profit, cost, cap = items[k - 1]
        for take in _binary_chunks(cap):
            w = take * cost
            v = take * profit
            for b in range(budget, w - 1, -1):
                cand = row[b - w] + v
                if cand > row[b]:
                    row[b] = cand
        suffix[k] = row

    # lexicographically smallest allocation attaining suffix[1][budget]
    counts = []
    remaining = budget
    target = suffix[1][budget]
    for k in range(1, depth + 1):
        profit, cost, cap = items[k - 1]
        nxt = suffix[k + 1]
        for b_k in range(cap + 1):
            spend = b_k * cost
            if spend > remaining:
                break
            if b_k * profit + nxt[remaining - spend] == target:
                counts.append(b_k)
                remaining -= spend
                target -= b_k * profit
                break
        else:  # pragma: no cover - the DP guarantees a completion exists
            raise RuntimeError("allocation reconstruction failed")
    return _solution(problem, counts)


def brute_force_attack(problem: AttackBudgetProblem) -> AttackSolution:
    """Exhaustive reference solver; same contract as optimal_attack.

    Refuses when the (budget-capped) enumeration space exceeds
    BRUTE_FORCE_GUARD candidates.
    """
    items = _level_items(problem)
    space = prod(cap + 1 for _, _, cap in items)
    if space > BRUTE_FORCE_GUARD:
        raise ValueError(
            f"enumeration space {space} exceeds guard {BRUTE_FORCE_GUARD}"
        )

    depth = problem.shape.depth
    best_value = -1
    best_counts = None
    counts = [0] * depth

    def sweep(k: int, remaining: int, value: int) -> None:
        nonlocal best_value, best_counts
        if k > depth:
            if value > best_value:
                best_value = value
                best_counts = tuple(counts)
            return
        profit, cost, cap = items[k - 1]
        hi = min(cap, remaining // cost)
        for b_k in range(hi + 1):
            counts[k - 1] = b_k
            sweep(k + 1, remaining - b_k * cost, value + b_k * profit)
        counts[k - 1] = 0

    sweep(1, problem.budget, 0)
    return _solution(problem, best_counts)


class PlacementClass(Enum):
    """Whether an allocation admits an innocuous arrangement or already
    forces blinding."""

    DISJOINT_PLACEABLE = "disjoint_placeable"
    IMPLIES_BLIND = "implies_blind"


def classify_allocation(shape: TreeShape, alloc: AttackAllocation) -> PlacementClass:
    """Classify an in-cap allocation by its leaf load sum(B_k * a^(K-k)).

    Strictly below the leaf count a^K, the Byzantines can be arranged
    with at most one per root-leaf path.  At or above it the allocation
    saturates a level or overlaps, and either way provably covers at
    least half the network, so it blinds regardless of arrangement.
    """
    alloc.validate_for(shape)
    a = shape.branching
    leaf_load = sum(
        alloc.counts[k - 1] * a ** (shape.depth - k) for k in shape.levels
    )
    if leaf_load >= a**shape.depth:
        return PlacementClass.IMPLIES_BLIND
    return PlacementClass.DISJOINT_PLACEABLE
