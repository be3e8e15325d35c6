"""Shared test data: figure cost schedules and a randomized design-scenario
generator used by both the designer tests and the acceptance suite."""

import dataclasses
import random

from byztree import CostSchedule, DesignScenario, brute_force_design

# cost schedules used by the preset experiment grids
FIG45_COSTS = (52, 48, 24, 16, 12, 8, 10, 6, 4)
FIG6_COSTS = (52, 50, 25, 24, 16, 10, 8, 6, 5, 4)


def fig6_scenario() -> DesignScenario:
    return DesignScenario(
        costs=CostSchedule(FIG6_COSTS),
        network_budget=400000,
        attacker_budget=50,
        a_min=3,
        a_max=11,
        k_min=2,
        n_min=1400,
    )


def random_design_scenarios(count: int, seed: int):
    """Random descending-then-perturbed schedules with random budgets.

    a_min is raised past any blindable feasible candidate: the greedy
    design's optimality argument assumes the designer's branching bound
    excludes trees the budgeted attacker can blind, so scenarios honor
    that (blinded designs are all equally worthless to compare).
    """
    rng = random.Random(seed)
    scenarios = []
    attempts = 0
    while len(scenarios) < count:
        attempts += 1
        if attempts > count * 100:
            raise RuntimeError("scenario generation stalled")
        length = rng.randint(4, 7)
        costs = []
        c = rng.randint(20, 60)
        for _ in range(length):
            costs.append(c)
            c = max(1, c - rng.randint(1, 9))
        if rng.random() < 0.4:
            # occasional upward bump: non-monotone schedules must still work
            costs[rng.randrange(1, length)] += rng.randint(1, 6)
        a_max = rng.randint(3, 7)
        scenario = DesignScenario(
            costs=CostSchedule(tuple(costs)),
            network_budget=rng.randint(50, 40000),
            attacker_budget=rng.randint(0, 80),
            a_min=2,
            a_max=a_max,
            k_min=2,
            n_min=rng.randint(1, 1500),
        )
        blindable = [
            cell.shape.branching
            for cell in brute_force_design(scenario).table
            if cell.feasible and cell.blind
        ]
        if blindable:
            a_min = max(blindable) + 1
            if a_min > a_max:
                continue
            scenario = dataclasses.replace(scenario, a_min=a_min)
        scenarios.append(scenario)
    return scenarios
