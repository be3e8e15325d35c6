"""Robust topology choice: greedy procedure, exhaustive oracle, bounds."""

import warnings
from fractions import Fraction

import pytest

from byztree import (
    AttackBudgetProblem,
    CostOrderingWarning,
    CostSchedule,
    DesignScenario,
    TreeShape,
    brute_force_design,
    coverage_share_inequalities,
    design_topology,
    min_safe_branching,
    optimal_attack,
)
from conftest import FIG45_COSTS, fig6_scenario, random_design_scenarios


def _best_coverage(depth, branching, costs, budget) -> Fraction:
    problem = AttackBudgetProblem(TreeShape(depth, branching), costs, budget)
    return optimal_attack(problem).coverage


class TestDesignTopology:
    def test_reference_scenario(self):
        assert design_topology(fig6_scenario()).shape == TreeShape(3, 11)

    def test_first_candidate_feasible(self):
        scenario = DesignScenario(
            costs=CostSchedule((5, 4, 3)),
            network_budget=10**6,
            attacker_budget=0,
            a_min=2,
            a_max=2,
            k_min=2,
            n_min=1,
        )
        assert design_topology(scenario).shape == TreeShape(2, 2)

    def test_zero_budget_infeasible(self):
        scenario = DesignScenario(
            costs=CostSchedule((5, 4, 3)),
            network_budget=0,
            attacker_budget=0,
            a_min=2,
            a_max=8,
            k_min=2,
            n_min=1,
        )
        outcome = design_topology(scenario)
        assert not outcome.feasible
        assert outcome.shape is None

    def test_exhausted_schedule_raises(self):
        scenario = DesignScenario(
            costs=CostSchedule((5, 4)),
            network_budget=10**9,
            attacker_budget=0,
            a_min=2,
            a_max=3,
            k_min=2,
            n_min=10**6,
        )
        with pytest.raises(ValueError, match="schedule"):
            design_topology(scenario)

    def test_unordered_costs_warn_but_run(self):
        scenario = DesignScenario(
            costs=CostSchedule(FIG45_COSTS),
            network_budget=10**6,
            attacker_budget=50,
            a_min=2,
            a_max=3,
            k_min=2,
            n_min=1,
        )
        with pytest.warns(CostOrderingWarning):
            assert design_topology(scenario).feasible

    def test_ordered_costs_do_not_warn(self):
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            design_topology(fig6_scenario())

    def test_scenario_validation(self):
        good = dict(
            costs=CostSchedule((5, 4)),
            network_budget=10,
            attacker_budget=0,
            a_min=2,
            a_max=4,
            k_min=2,
            n_min=1,
        )
        for bad in (
            {"a_min": 1},
            {"k_min": 1},
            {"a_min": 5},
            {"n_min": 0},
            {"network_budget": -1},
        ):
            with pytest.raises(ValueError):
                DesignScenario(**{**good, **bad})


class TestCoverageMonotonicity:
    def test_nondecreasing_in_depth(self):
        costs = CostSchedule(FIG45_COSTS)
        expected = [
            Fraction(1, 6),
            Fraction(3, 14),
            Fraction(7, 30),
            Fraction(15, 62),
            Fraction(31, 126),
            Fraction(63, 254),
            Fraction(127, 510),
            Fraction(255, 1022),
        ]
        coverages = [_best_coverage(depth, 2, costs, 50) for depth in range(2, 10)]
        assert coverages == expected
        assert all(a <= b for a, b in zip(coverages, coverages[1:]))

    def test_decreasing_in_branching(self):
        costs = CostSchedule(FIG45_COSTS)
        coverages = [_best_coverage(6, a, costs, 50) for a in range(3, 12)]
        assert coverages[:3] == [
            Fraction(121, 1092),
            Fraction(341, 5460),
            Fraction(781, 19530),
        ]
        assert all(c < Fraction(1, 2) for c in coverages)
        assert all(a > b for a, b in zip(coverages, coverages[1:]))


class TestBruteForceDesign:
    def test_agrees_on_reference_scenario(self):
        result = brute_force_design(fig6_scenario(), k_max=10)
        assert result.outcome.shape == TreeShape(3, 11)
        assert len(result.table) == 9 * 9
        by_shape = {cell.shape: cell for cell in result.table}
        assert not by_shape[TreeShape(2, 11)].feasible  # 132 nodes < 1400
        assert by_shape[TreeShape(3, 11)].feasible
        assert by_shape[TreeShape(3, 11)].coverage == Fraction(16105, 1948716)

    def test_no_feasible_cell(self):
        scenario = DesignScenario(
            costs=CostSchedule((5, 4, 3)),
            network_budget=10,
            attacker_budget=0,
            a_min=2,
            a_max=4,
            k_min=2,
            n_min=10**6,
        )
        assert not brute_force_design(scenario).outcome.feasible

    def test_single_feasible_candidate(self):
        scenario = DesignScenario(
            costs=CostSchedule((5, 4)),
            network_budget=5 * 2 + 4 * 4,  # exactly T(2, 2)
            attacker_budget=0,
            a_min=2,
            a_max=6,
            k_min=2,
            n_min=1,
        )
        assert brute_force_design(scenario).outcome.shape == TreeShape(2, 2)

    def test_k_max_validation(self):
        with pytest.raises(ValueError):
            brute_force_design(fig6_scenario(), k_max=11)

    def test_greedy_matches_oracle_on_random_scenarios(self):
        for scenario in random_design_scenarios(30, seed=5150):
            oracle = brute_force_design(scenario).outcome
            try:
                with warnings.catch_warnings():
                    warnings.simplefilter("ignore", CostOrderingWarning)
                    greedy = design_topology(scenario)
            except ValueError:
                # horizon exhausted without an answer: the oracle must have
                # found nothing within the same horizon
                assert not oracle.feasible
                continue
            if greedy.feasible or oracle.feasible:
                assert greedy.shape == oracle.shape
            else:
                assert not greedy.feasible and not oracle.feasible


class TestMinSafeBranching:
    def test_reference_depth_six(self):
        costs = CostSchedule(FIG45_COSTS)
        value = min_safe_branching(6, costs, 50, 11)
        assert value == 2
        assert value <= 3

    def test_zero_budget_cannot_blind(self):
        assert min_safe_branching(6, CostSchedule(FIG45_COSTS), 0, 11) == 2

    def test_rich_attacker_blinds_everything(self):
        # budget covers capturing the whole top level at any branching
        costs = CostSchedule((52, 48))
        assert min_safe_branching(2, costs, 52 * 4, 4) is None


class TestCoverageShareInequalities:
    @pytest.mark.parametrize(
        "a,depth,k", [(2, 3, 1), (3, 8, 8), (2, 1, 1), (2, 10, 5), (9, 4, 2)]
    )
    def test_spot_checks(self, a, depth, k):
        assert coverage_share_inequalities(a, depth, k) == (True, True)

    def test_full_sweep(self):
        for a in range(2, 11):
            for depth in range(1, 11):
                for k in range(1, depth + 1):
                    assert coverage_share_inequalities(a, depth, k) == (True, True)

    def test_input_validation(self):
        with pytest.raises(ValueError):
            coverage_share_inequalities(1, 3, 1)
        with pytest.raises(ValueError):
            coverage_share_inequalities(2, 3, 4)
