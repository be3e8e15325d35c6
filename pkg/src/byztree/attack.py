"""Byzantine placement accounting: coverage, blinding, and flip strategies.

Coverage and blinding checks are exact (Fraction arithmetic); the
blinding-strategy solver preserves rational inputs so the boundary cases
compare exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from .topology import TreeShape, _require_int

#: Coverage threshold at and above which the fusion center can be blinded.
BLINDING_THRESHOLD = Fraction(1, 2)


def _require_probability(value, name: str):
    if not 0 <= value <= 1:
        raise ValueError(f"{name} must lie in [0, 1], got {value!r}")
    return value


@dataclass(frozen=True)
class SensorProfile:
    """Detection/false-alarm probabilities of honest and Byzantine sensors.

    Sensors must be informative: detection strictly above false alarm,
    for both populations.
    """

    pd_h: float
    pfa_h: float
    pd_b: float
    pfa_b: float

    def __post_init__(self) -> None:
        for name in ("pd_h", "pfa_h", "pd_b", "pfa_b"):
            _require_probability(getattr(self, name), name)
        if not self.pd_h > self.pfa_h:
            raise ValueError("honest detection probability must exceed false alarm")
        if not self.pd_b > self.pfa_b:
            raise ValueError("Byzantine detection probability must exceed false alarm")

    @classmethod
    def identical(cls, pd, pfa) -> "SensorProfile":
        """Profile where Byzantine sensing equals honest sensing."""
        return cls(pd, pfa, pd, pfa)

    @property
    def is_identical(self) -> bool:
        return self.pd_h == self.pd_b and self.pfa_h == self.pfa_b


@dataclass(frozen=True)
class FlipStrategy:
    """Transition probabilities applied by a Byzantine to every bit it
    originates or forwards: p10 = P(send 1 | bit 0), p01 = P(send 0 | bit 1).

    (0, 0) is honest behaviour; (1, 1) flips everything.
    """

    p10: float
    p01: float

    def __post_init__(self) -> None:
        _require_probability(self.p10, "p10")
        _require_probability(self.p01, "p01")


HONEST = FlipStrategy(0, 0)
FULL_FLIP = FlipStrategy(1, 1)


@dataclass(frozen=True)
class AttackAllocation:
    """Per-level Byzantine counts, 1-indexed from the top level."""

    counts: tuple

    def __post_init__(self) -> None:
        entries = tuple(self.counts)
        object.__setattr__(self, "counts", entries)
        for i, b in enumerate(entries, start=1):
            _require_int(b, f"count B_{i}")
            if b < 0:
                raise ValueError(f"count B_{i} must be non-negative, got {b}")

    def validate_for(self, shape: TreeShape) -> None:
        """Check length and per-level caps against the given tree."""
        if len(self.counts) != shape.depth:
            raise ValueError(
                f"allocation has {len(self.counts)} levels, tree has {shape.depth}"
            )
        for k in shape.levels:
            cap = shape.level_population(k)
            if self.counts[k - 1] > cap:
                raise ValueError(
                    f"count B_{k}={self.counts[k - 1]} exceeds level population {cap}"
                )

    @property
    def total(self) -> int:
        return sum(self.counts)


def coverage_fraction(shape: TreeShape, alloc: AttackAllocation) -> Fraction:
    """Fraction of nodes whose bits pass through (or originate at) a
    Byzantine: sum of profit(k) * B_k over the node total.

    Exceeds 1 for overlapping allocations; never clamped here.
    """
    alloc.validate_for(shape)
    covered = sum(shape.profit(k) * alloc.counts[k - 1] for k in shape.levels)
    return Fraction(covered, shape.total_nodes)


def is_blinding(shape: TreeShape, alloc: AttackAllocation) -> bool:
    """True iff the allocation covers at least half the network, the exact
    condition under which a zero-divergence flip strategy exists.

    The boundary (coverage exactly 1/2) does blind.
    """
    return coverage_fraction(shape, alloc) >= BLINDING_THRESHOLD


class BlindingKind(Enum):
    IMPOSSIBLE = "impossible"
    UNIQUE = "unique"
    FAMILY = "family"


@dataclass(frozen=True)
class BlindingSolution:
    """Outcome of solving for flip strategies that zero the divergence.

    ``ratio`` is the required flip-mass gap r = p10 + p01 - 1.  When a
    family exists, members are all (p10, 1 + r - p10) with r <= p10 <= 1
    and ``strategy`` is the canonical maximal-zero-flip member (p10 = 1).
    """

    kind: BlindingKind
    ratio: object = None
    strategy: FlipStrategy = None

    @property
    def possible(self) -> bool:
        return self.kind is not BlindingKind.IMPOSSIBLE

    def member(self, p10) -> FlipStrategy:
        """Family member with the requested p10 (UNIQUE admits only p10=1)."""
        if not self.possible:
            raise ValueError("no blinding strategy exists for this coverage")
        if not self.ratio <= p10 <= 1:
            raise ValueError(f"p10 must lie in [{self.ratio}, 1], got {p10!r}")
        return FlipStrategy(p10, 1 + self.ratio - p10)


def blinding_strategy(t, profile: SensorProfile) -> BlindingSolution:
    """Solve for flip strategies making the fusion center's received-bit
    distributions identical under both hypotheses at coverage t.

    Returns IMPOSSIBLE when the required gap r = ((1-t)/t) *
    (pd_h - pfa_h)/(pd_b - pfa_b) exceeds 1, the UNIQUE all-flip strategy
    at r = 1, and a one-parameter FAMILY for r < 1.  Rational inputs are
    propagated exactly, so the r = 1 boundary is detected without
    floating-point slack.
    """
    if t < 0 or t > 1:
        raise ValueError(f"coverage must lie in [0, 1], got {t!r}")
    if t == 0:
        return BlindingSolution(BlindingKind.IMPOSSIBLE)
    ratio = (1 - t) / t * (profile.pd_h - profile.pfa_h) / (profile.pd_b - profile.pfa_b)
    if ratio > 1:
        return BlindingSolution(BlindingKind.IMPOSSIBLE, ratio=ratio)
    if ratio == 1:
        return BlindingSolution(BlindingKind.UNIQUE, ratio=ratio, strategy=FULL_FLIP)
    return BlindingSolution(
        BlindingKind.FAMILY, ratio=ratio, strategy=FlipStrategy(1, ratio)
    )
