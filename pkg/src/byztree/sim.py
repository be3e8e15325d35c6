"""Monte Carlo checks of the fusion center's received-bit distributions.

Sampling uses numpy's PCG64 generator; the algorithm identifier is
exported as RNG_ALGORITHM so emitted results can record seed + algorithm
for reproducibility.  Identical seeds give bit-identical reruns.
Partitioned runs should use disjoint seeds and merge tallies.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

import numpy as np

from .attack import FlipStrategy, SensorProfile
from .topology import TreeShape, _require_int

RNG_ALGORITHM = "numpy-pcg64"

#: Upper bound on cells drawn per vectorized block.
_BLOCK_CELLS = 4_000_000


class SimMode(Enum):
    FC_VIEW = "fc_view"
    TREE = "tree"


@dataclass(frozen=True)
class SimConfig:
    samples: int
    seed: int
    mode: SimMode = SimMode.FC_VIEW

    def __post_init__(self) -> None:
        _require_int(self.samples, "samples")
        if self.samples < 1:
            raise ValueError(f"samples must be at least 1, got {self.samples}")
        _require_int(self.seed, "seed")


@dataclass(frozen=True)
class EmpiricalPair:
    """Empirical frequencies of received ones under H1 and H0, with the
    larger of the two binomial standard errors."""

    pi11_hat: float
    pi10_hat: float
    std_err: float


def _std_err(p_hats, n: int) -> float:
    return max(math.sqrt(p * (1 - p) / n) for p in p_hats)


def _apply_flip(y: np.ndarray, u: np.ndarray, strat: FlipStrategy) -> np.ndarray:
    p10 = float(strat.p10)
    p01 = float(strat.p01)
    return np.where(y, u < 1.0 - p01, u < p10)


def simulate_fc_view(
    t, profile: SensorProfile, strat: FlipStrategy, cfg: SimConfig
) -> EmpiricalPair:
    """Sample the fusion center's per-bit view directly.

    Each sample: mark the bit covered with probability t, draw the local
    decision with the covered population's sensing profile, and flip it
    per the strategy when covered.  H1 is drawn first, then H0.
    """
    tf = float(t)
    if not 0.0 <= tf <= 1.0:
        raise ValueError(f"coverage must lie in [0, 1], got {t!r}")
    rng = np.random.default_rng(cfg.seed)
    n = cfg.samples
    hats = []
    for p_b, p_h in (
        (float(profile.pd_b), float(profile.pd_h)),
        (float(profile.pfa_b), float(profile.pfa_h)),
    ):
        covered = rng.random(n) < tf
        y = rng.random(n) < np.where(covered, p_b, p_h)
        z = np.where(covered, _apply_flip(y, rng.random(n), strat), y)
        hats.append(float(z.mean()))
    return EmpiricalPair(hats[0], hats[1], _std_err(hats, n))


def _normalized_placement(shape: TreeShape, placement):
    nodes = []
    for entry in placement:
        level, index = entry
        _require_int(level, "placement level")
        _require_int(index, "placement index")
        if not 1 <= level <= shape.depth:
            raise ValueError(f"placement level {level} out of range 1..{shape.depth}")
        if not 0 <= index < shape.level_population(level):
            raise ValueError(
                f"placement index {index} out of range at level {level}"
            )
        nodes.append((level, index))
    if len(set(nodes)) != len(nodes):
        raise ValueError("placement lists the same node twice")
    byz = set(nodes)
    for level, index in nodes:
        k, i = level - 1, index // shape.branching
        while k >= 1:
            if (k, i) in byz:
                raise ValueError(
                    f"node ({level}, {index}) has Byzantine ancestor ({k}, {i}); "
                    "overlapping placements imply blinding (coverage >= 1/2)"
                )
            k, i = k - 1, i // shape.branching
    return byz


def simulate_tree(
    shape: TreeShape, placement, profile: SensorProfile, strat: FlipStrategy, cfg: SimConfig
):
    """Materialize the tree and propagate every node's bit to the fusion
    center, Byzantines flipping all transiting bits.

    ``placement`` is an explicit set of (level, index) nodes and must put
    at most one Byzantine on any root-leaf path.  Each round contributes
    one bit per node.  Returns (EmpiricalPair, measured coverage); the
    coverage is the exact structural count of covered nodes, not sampled.
    """
    byz = _normalized_placement(shape, placement)

    covered_levels = []
    parent = np.zeros(1, dtype=bool)  # the fusion center is never Byzantine
    for k in shape.levels:
        pop = shape.level_population(k)
        mask = np.zeros(pop, dtype=bool)
        for level, index in byz:
            if level == k:
                mask[index] = True
        covered = parent[np.arange(pop) // shape.branching] | mask
        covered_levels.append(covered)
        parent = covered
    covered_flat = np.concatenate(covered_levels)
    total = shape.total_nodes
    coverage = Fraction(int(covered_flat.sum()), total)

    # covered bits are modeled with the Byzantine sensing profile, exactly
    # as in the fusion center's probabilistic per-bit view
    rng = np.random.default_rng(cfg.seed)
    rounds = cfg.samples
    block = max(1, _BLOCK_CELLS // total)
    hats = []
    for p_b, p_h in (
        (float(profile.pd_b), float(profile.pd_h)),
        (float(profile.pfa_b), float(profile.pfa_h)),
    ):
        p_local = np.where(covered_flat, p_b, p_h)
        ones = 0
        done = 0
        while done < rounds:
            take = min(block, rounds - done)
            y = rng.random((take, total)) < p_local
            z = np.where(covered_flat, _apply_flip(y, rng.random((take, total)), strat), y)
            ones += int(z.sum())
            done += take
        hats.append(ones / (rounds * total))
    return EmpiricalPair(hats[0], hats[1], _std_err(hats, rounds * total)), coverage
