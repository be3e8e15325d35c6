"""Kullback-Leibler divergence of the fusion center's received bits.

Natural logarithm throughout.  Distribution mixing preserves rational
inputs (used by exact blinding checks); divergences themselves are
64-bit floats.  All functions are pure, so grid sweeps may be evaluated
in parallel and reduced in grid order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from .attack import (
    FULL_FLIP,
    FlipStrategy,
    SensorProfile,
    blinding_strategy,
)


@dataclass(frozen=True)
class BitDistributionPair:
    """P(z=1 | H1) and P(z=1 | H0) for a bit received at the fusion center."""

    pi11: float
    pi10: float

    def __post_init__(self) -> None:
        for name in ("pi11", "pi10"):
            if not 0 <= getattr(self, name) <= 1:
                raise ValueError(f"{name} must lie in [0, 1], got {getattr(self, name)!r}")


def received_distributions(
    t, profile: SensorProfile, strat: FlipStrategy
) -> BitDistributionPair:
    """Distributions of a received bit when a fraction t of nodes is covered.

    A covered bit is sensed with the Byzantine profile and flipped per the
    strategy; an uncovered bit is the honest local decision passed through.
    """
    if t < 0 or t > 1:
        raise ValueError(f"coverage must lie in [0, 1], got {t!r}")

    def mix(p_b, p_h):
        flipped = strat.p10 * (1 - p_b) + (1 - strat.p01) * p_b
        return t * flipped + (1 - t) * p_h

    return BitDistributionPair(
        pi11=mix(profile.pd_b, profile.pd_h),
        pi10=mix(profile.pfa_b, profile.pfa_h),
    )


def _kld_term(p: float, q: float) -> float:
    if p == 0:
        return 0.0
    if q == 0:
        return math.inf
    return p * math.log(p / q)


def kld(dist: BitDistributionPair) -> float:
    """KL divergence D(pi_. | H1 || pi_. | H0) in nats.

    Conventions: 0*log(0/q) = 0 and p*log(p/0) = +inf (math.inf).
    Zero iff the two distributions coincide.
    """
    pi11 = float(dist.pi11)
    pi10 = float(dist.pi10)
    total = _kld_term(pi11, pi10) + _kld_term(1 - pi11, 1 - pi10)
    # rounding can leave a tiny negative residue for nearly equal inputs
    return total if total > 0.0 else 0.0


def kld_of_attack(t, profile: SensorProfile, strat: FlipStrategy) -> float:
    """Divergence seen by the fusion center under the given attack."""
    return kld(received_distributions(t, profile, strat))


class DeviationAxis(Enum):
    """Which flip probability is lowered by eps away from the symmetric
    point (p, p): P10 means (p10, p01) = (p - eps, p), P01 the reverse."""

    P10 = "p10"
    P01 = "p01"


def _require_identical(profile: SensorProfile) -> None:
    if not profile.is_identical:
        raise ValueError(
            "this analysis assumes Byzantine sensing identical to honest sensing"
        )


def _directional_derivative(pair: BitDistributionPair, d11: float, d10: float) -> float:
    # d/ds of pi11*log(pi11/pi10) + (1-pi11)*log((1-pi11)/(1-pi10))
    # where d11 = pi11', d10 = pi10' along the parameter s.
    pi11 = float(pair.pi11)
    pi10 = float(pair.pi10)
    log_odds = math.log(pi11 / pi10) - math.log((1 - pi11) / (1 - pi10))
    return d11 * log_odds + d10 * ((1 - pi11) / (1 - pi10) - pi11 / pi10)


def dkld_deps(t, profile: SensorProfile, p, eps, axis: DeviationAxis) -> float:
    """Analytic d(KLD)/d(eps) for the asymmetric strategy where one flip
    probability sits eps below the common level p.

    Requires identical honest/Byzantine sensing and 0 <= eps <= p <= 1.
    Strictly positive whenever t < 1/2 and eps in (0, p]; no sign
    guarantee for t >= 1/2.
    """
    _require_identical(profile)
    if not 0 <= eps <= p <= 1:
        raise ValueError(f"need 0 <= eps <= p <= 1, got eps={eps!r}, p={p!r}")
    tf = float(t)
    pd = float(profile.pd_h)
    pfa = float(profile.pfa_h)
    if axis is DeviationAxis.P01:
        strat = FlipStrategy(p, p - eps)
        d11, d10 = tf * pd, tf * pfa
    elif axis is DeviationAxis.P10:
        strat = FlipStrategy(p - eps, p)
        d11, d10 = -tf * (1 - pd), -tf * (1 - pfa)
    else:
        raise ValueError(f"unknown deviation axis {axis!r}")
    return _directional_derivative(received_distributions(t, profile, strat), d11, d10)


def dkld_dp(t, profile: SensorProfile, p) -> float:
    """Analytic d(KLD)/dp along the symmetric strategy line p10 = p01 = p.

    Requires identical sensing.  Negative for t < 1/2 and p in (0, 1):
    more symmetric flipping always hurts the fusion center.
    """
    _require_identical(profile)
    if not 0 <= p <= 1:
        raise ValueError(f"p must lie in [0, 1], got {p!r}")
    tf = float(t)
    pd = float(profile.pd_h)
    pfa = float(profile.pfa_h)
    pair = received_distributions(t, profile, FlipStrategy(p, p))
    return _directional_derivative(pair, tf * (1 - 2 * pd), tf * (1 - 2 * pfa))


def min_kld(t, profile: SensorProfile):
    """Attacker's optimum at coverage t: (strategy, divergence).

    Below half coverage the unique optimum is the all-flip strategy
    (1, 1); at or above it a blinding strategy achieves exactly 0.
    Coverage above 1 (overlapping allocations) is treated as full.
    """
    _require_identical(profile)
    if t < 0:
        raise ValueError(f"coverage must be non-negative, got {t!r}")
    if t >= Fraction(1, 2):
        solution = blinding_strategy(min(t, 1), profile)
        return solution.strategy, 0.0
    return FULL_FLIP, kld_of_attack(t, profile, FULL_FLIP)


def min_kld_curve(profile: SensorProfile, t_grid):
    """Minimum achievable divergence at each coverage value of an
    ascending grid within [0, 1/2].

    The resulting curve is continuous, strictly decreasing and convex in
    exact arithmetic; discrete convexity holds to float precision.
    """
    grid = list(t_grid)
    for lo, hi in zip(grid, grid[1:]):
        if not lo < hi:
            raise ValueError("coverage grid must be strictly ascending")
    for t in grid:
        if t < 0 or t > Fraction(1, 2):
            raise ValueError(f"grid value {t!r} outside [0, 1/2]")
    return [(t, min_kld(t, profile)[1]) for t in grid]
