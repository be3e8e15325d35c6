"""Byzantine data-falsification attacks on perfect a-ary detection trees
and the defender's robust topology design.

The library computes, in exact arithmetic where it matters: per-level
structure of perfect trees, Byzantine coverage and the half-coverage
blinding threshold, divergence-minimizing flip strategies, the
attacker's budgeted capture problem (a bounded knapsack), and the
designer's depth/branching choice that is most robust to that attacker.
A Monte Carlo module and a CLI experiment harness round out the package.
"""

__version__ = "0.1.0"

from .attack import (
    BLINDING_THRESHOLD,
    FULL_FLIP,
    HONEST,
    AttackAllocation,
    BlindingKind,
    BlindingSolution,
    FlipStrategy,
    SensorProfile,
    blinding_strategy,
    coverage_fraction,
    is_blinding,
)
from .designer import (
    BiLevelResult,
    CandidateEvaluation,
    DesignOutcome,
    DesignScenario,
    brute_force_design,
    coverage_share_inequalities,
    design_topology,
    min_safe_branching,
)
from .divergence import (
    BitDistributionPair,
    DeviationAxis,
    dkld_deps,
    dkld_dp,
    kld,
    kld_of_attack,
    min_kld,
    min_kld_curve,
    received_distributions,
)
from .knapsack import (
    AttackBudgetProblem,
    AttackSolution,
    PlacementClass,
    brute_force_attack,
    classify_allocation,
    optimal_attack,
)
from .sim import (
    RNG_ALGORITHM,
    EmpiricalPair,
    SimConfig,
    SimMode,
    simulate_fc_view,
    simulate_tree,
)
from .topology import (
    CostOrderingWarning,
    CostSchedule,
    TreeShape,
    deployment_cost,
)

__all__ = [
    "BLINDING_THRESHOLD",
    "FULL_FLIP",
    "HONEST",
    "RNG_ALGORITHM",
    "AttackAllocation",
    "AttackBudgetProblem",
    "AttackSolution",
    "BiLevelResult",
    "BitDistributionPair",
    "BlindingKind",
    "BlindingSolution",
    "CandidateEvaluation",
    "CostOrderingWarning",
    "CostSchedule",
    "DesignOutcome",
    "DesignScenario",
    "DeviationAxis",
    "EmpiricalPair",
    "FlipStrategy",
    "PlacementClass",
    "SensorProfile",
    "SimConfig",
    "SimMode",
    "TreeShape",
    "blinding_strategy",
    "brute_force_attack",
    "brute_force_design",
    "classify_allocation",
    "coverage_fraction",
    "coverage_share_inequalities",
    "deployment_cost",
    "design_topology",
    "dkld_deps",
    "dkld_dp",
    "is_blinding",
    "kld",
    "kld_of_attack",
    "min_kld",
    "min_kld_curve",
    "min_safe_branching",
    "optimal_attack",
    "received_distributions",
    "simulate_fc_view",
    "simulate_tree",
]
