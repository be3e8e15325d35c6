"""Exact combinatorics of perfect a-ary detection trees.

Everything here is integer or rational arithmetic on Python ints, so
results are exact at any depth/branching: there is no overflow to wrap
around silently.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union


class CostOrderingWarning(UserWarning):
    """Attack-cost schedule is not strictly decreasing toward the leaves."""


def _require_int(value, name: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ValueError(f"{name} must be an integer, got {value!r}")
    return value


@dataclass(frozen=True)
class TreeShape:
    """Perfect a-ary tree rooted at the fusion center.

    ``depth`` counts transceiver levels 1..depth below the fusion center
    (the fusion center itself is not a level); ``branching`` is the
    number of children of every internal node.  Level k holds
    branching**k nodes.
    """

    depth: int
    branching: int

    def __post_init__(self) -> None:
        _require_int(self.depth, "depth")
        _require_int(self.branching, "branching")
        if self.depth < 2:
            raise ValueError(f"depth must be at least 2, got {self.depth}")
        if self.branching < 2:
            raise ValueError(f"branching must be at least 2, got {self.branching}")

    @property
    def levels(self) -> range:
        """1-based level indices, top (nearest the fusion center) first."""
        return range(1, self.depth + 1)

    def _require_level(self, k: int) -> int:
        _require_int(k, "level")
        if not 1 <= k <= self.depth:
            raise ValueError(f"level {k} out of range 1..{self.depth}")
        return k

    def level_population(self, k: int) -> int:
        """Number of nodes at level k."""
        self._require_level(k)
        return self.branching**k

    @property
    def total_nodes(self) -> int:
        """Total transceiver count a(a^K - 1)/(a - 1)."""
        a = self.branching
        return a * (a**self.depth - 1) // (a - 1)

    def level_weight(self, k: int) -> Fraction:
        """Probability that a bit received at the fusion center originates
        at level k, i.e. the level's share of all nodes."""
        self._require_level(k)
        return Fraction(self.branching**k, self.total_nodes)

    def profit(self, k: int) -> int:
        """Nodes covered by capturing one level-k node: its whole subtree,
        itself included.  Also the knapsack value of a level-k item.

        Satisfies profit(depth) == 1 and profit(k) == branching *
        profit(k + 1) + 1.
        """
        self._require_level(k)
        a = self.branching
        return (a ** (self.depth - k + 1) - 1) // (a - 1)


@dataclass(frozen=True)
class CostSchedule:
    """Per-level cost of capturing one node, 1-indexed from the top.

    Entries must be strictly positive integers.  Strict decrease toward
    the leaves is the usual assumption but deliberately not an
    invariant: it is queryable via ``strictly_decreasing`` so that
    non-monotone schedules can still be evaluated.
    """

    costs: tuple

    def __post_init__(self) -> None:
        entries = tuple(self.costs)
        object.__setattr__(self, "costs", entries)
        if not entries:
            raise ValueError("cost schedule must not be empty")
        for i, c in enumerate(entries, start=1):
            _require_int(c, f"cost c_{i}")
            if c <= 0:
                raise ValueError(f"cost c_{i} must be positive, got {c}")

    def __len__(self) -> int:
        return len(self.costs)

    def cost(self, k: int) -> int:
        """Cost of capturing one node at level k (1-based)."""
        _require_int(k, "level")
        if not 1 <= k <= len(self.costs):
            raise ValueError(f"level {k} outside schedule of length {len(self.costs)}")
        return self.costs[k - 1]

    @property
    def strictly_decreasing(self) -> bool:
        """True when every level is costlier than the one below it."""
        return all(a > b for a, b in zip(self.costs, self.costs[1:]))


def deployment_cost(shape: TreeShape, costs: Union[CostSchedule, Sequence[int]]) -> int:
    """Total cost of deploying the tree: sum over levels of c_k * a^k.

    Accepts a CostSchedule or any integer sequence of length >= depth.
    """
    entries = costs.costs if isinstance(costs, CostSchedule) else tuple(costs)
    if len(entries) < shape.depth:
        raise ValueError(
            f"schedule of length {len(entries)} too short for depth {shape.depth}"
        )
    for i, c in enumerate(entries[: shape.depth], start=1):
        _require_int(c, f"cost c_{i}")
    return sum(entries[k - 1] * shape.branching**k for k in shape.levels)
