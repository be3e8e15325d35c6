"""Coverage accounting, the blinding threshold, and blinding strategies."""

import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from byztree import (
    AttackAllocation,
    BlindingKind,
    FlipStrategy,
    SensorProfile,
    TreeShape,
    blinding_strategy,
    coverage_fraction,
    is_blinding,
    received_distributions,
)


def _coverage_by_level_weights(shape, alloc):
    """Independent route: sum over levels of beta_k * (alpha_1 + .. + alpha_k)."""
    alphas = [
        Fraction(alloc.counts[k - 1], shape.level_population(k)) for k in shape.levels
    ]
    return sum(
        shape.level_weight(k) * sum(alphas[:k], Fraction(0)) for k in shape.levels
    )


class TestCoverageFraction:
    def test_single_top_capture_covers_half(self):
        shape = TreeShape(3, 2)
        assert coverage_fraction(shape, AttackAllocation((1, 0, 0))) == Fraction(1, 2)

    def test_mid_level_capture(self):
        shape = TreeShape(3, 2)
        assert coverage_fraction(shape, AttackAllocation((0, 1, 0))) == Fraction(3, 14)

    def test_empty_allocation(self):
        assert coverage_fraction(TreeShape(3, 2), AttackAllocation((0, 0, 0))) == 0

    def test_overlapping_allocation_exceeds_one_unclamped(self):
        shape = TreeShape(2, 2)
        full = AttackAllocation((2, 4))
        assert coverage_fraction(shape, full) == Fraction(10, 6)

    def test_length_mismatch_rejected(self):
        with pytest.raises(ValueError):
            coverage_fraction(TreeShape(3, 2), AttackAllocation((1, 0)))

    def test_cap_violation_rejected(self):
        with pytest.raises(ValueError):
            coverage_fraction(TreeShape(3, 2), AttackAllocation((3, 0, 0)))

    def test_agrees_with_level_weight_form(self):
        rng = random.Random(20240817)
        for a in range(2, 5):
            for depth in range(2, 7):
                shape = TreeShape(depth, a)
                for _ in range(200):
                    counts = tuple(
                        rng.randint(0, shape.level_population(k)) for k in shape.levels
                    )
                    alloc = AttackAllocation(counts)
                    assert coverage_fraction(shape, alloc) == _coverage_by_level_weights(
                        shape, alloc
                    )


class TestIsBlinding:
    def test_boundary_is_blinding(self):
        shape = TreeShape(3, 2)
        assert is_blinding(shape, AttackAllocation((1, 0, 0)))

    def test_below_threshold(self):
        shape = TreeShape(3, 2)
        assert not is_blinding(shape, AttackAllocation((0, 0, 3)))

    def test_no_byzantines(self):
        assert not is_blinding(TreeShape(3, 2), AttackAllocation((0, 0, 0)))

    def test_matches_strategy_existence_exhaustively(self):
        profile = SensorProfile.identical(Fraction(4, 5), Fraction(1, 5))
        for depth, a in [(2, 2), (2, 3), (3, 2), (3, 3)]:
            shape = TreeShape(depth, a)
            pops = [shape.level_population(k) for k in shape.levels]
            for counts in itertools.product(*[range(p + 1) for p in pops]):
                alloc = AttackAllocation(counts)
                t = coverage_fraction(shape, alloc)
                solution = blinding_strategy(min(t, 1), profile)
                assert is_blinding(shape, alloc) == solution.possible


class TestBlindingStrategy:
    PROFILE = SensorProfile.identical(0.8, 0.2)

    def test_impossible_below_half(self):
        solution = blinding_strategy(0.4, self.PROFILE)
        assert solution.kind is BlindingKind.IMPOSSIBLE
        assert not solution.possible
        assert solution.ratio == pytest.approx(1.5)

    def test_unique_at_half(self):
        solution = blinding_strategy(Fraction(1, 2), self.PROFILE)
        assert solution.kind is BlindingKind.UNIQUE
        assert solution.strategy == FlipStrategy(1, 1)
        assert solution.ratio == 1

    def test_family_above_half(self):
        profile = SensorProfile.identical(Fraction(4, 5), Fraction(1, 5))
        solution = blinding_strategy(Fraction(3, 5), profile)
        assert solution.kind is BlindingKind.FAMILY
        assert solution.ratio == Fraction(2, 3)
        assert solution.strategy == FlipStrategy(1, Fraction(2, 3))

    def test_family_members_zero_the_divergence(self):
        profile = SensorProfile.identical(Fraction(4, 5), Fraction(1, 5))
        solution = blinding_strategy(Fraction(3, 5), profile)
        r = solution.ratio
        for p10 in (r, (1 + r) / 2, Fraction(1)):
            member = solution.member(p10)
            pair = received_distributions(Fraction(3, 5), profile, member)
            assert pair.pi11 == pair.pi10

    def test_member_outside_family_rejected(self):
        profile = SensorProfile.identical(Fraction(4, 5), Fraction(1, 5))
        solution = blinding_strategy(Fraction(3, 5), profile)
        with pytest.raises(ValueError):
            solution.member(Fraction(1, 2))  # below the ratio 2/3

    def test_degenerate_and_out_of_range(self):
        assert not blinding_strategy(0, self.PROFILE).possible
        for bad in (-0.1, 1.5):
            with pytest.raises(ValueError):
                blinding_strategy(bad, self.PROFILE)

    def test_distinct_profiles_shift_the_ratio(self):
        # weaker Byzantine sensors need a larger gap to cancel the honest mass
        profile = SensorProfile(
            Fraction(4, 5), Fraction(1, 5), Fraction(7, 10), Fraction(3, 10)
        )
        solution = blinding_strategy(Fraction(3, 5), profile)
        assert solution.ratio == Fraction(2, 3) * Fraction(6, 10) / Fraction(4, 10)
        pair = received_distributions(Fraction(3, 5), profile, solution.strategy)
        assert pair.pi11 == pair.pi10

    @settings(max_examples=150, deadline=None)
    @given(
        num=st.integers(1, 200),
        den=st.integers(2, 400),
        pd=st.fractions(Fraction(1, 2), Fraction(99, 100)),
        gap=st.fractions(Fraction(1, 100), Fraction(2, 5)),
    )
    def test_returned_strategies_always_blind(self, num, den, pd, gap):
        t = Fraction(num, den)
        if t > 1:
            t = 1 / t
        profile = SensorProfile.identical(pd, pd - gap)
        solution = blinding_strategy(t, profile)
        if solution.possible:
            pair = received_distributions(t, profile, solution.strategy)
            assert pair.pi11 == pair.pi10
        else:
            # no strategy exists only below half coverage (identical profiles)
            assert t < Fraction(1, 2)


class TestProfileAndAllocationInvariants:
    def test_uninformative_profile_rejected(self):
        with pytest.raises(ValueError):
            SensorProfile.identical(0.5, 0.5)
        with pytest.raises(ValueError):
            SensorProfile(0.8, 0.2, 0.3, 0.4)

    def test_probability_bounds(self):
        with pytest.raises(ValueError):
            SensorProfile.identical(1.2, 0.2)
        with pytest.raises(ValueError):
            FlipStrategy(-0.1, 0.5)

    def test_identity_flag(self):
        assert SensorProfile.identical(0.8, 0.2).is_identical
        assert not SensorProfile(0.8, 0.2, 0.9, 0.1).is_identical

    def test_negative_counts_rejected(self):
        with pytest.raises(ValueError):
            AttackAllocation((1, -1))
