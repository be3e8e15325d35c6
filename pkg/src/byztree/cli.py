"""Experiment harness: preset figure grids, scenario files, tabular output.

Tables are emitted as comma-separated values beneath a ``#``-prefixed
metadata header, every numeric cell printed with 9 significant digits.
Cells are canonicalized through that printed precision at construction,
so an emitted table re-parses to identical cells.
"""

from __future__ import annotations

import numbers
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import click
import yaml

from . import __version__
from .attack import (
    AttackAllocation,
    FlipStrategy,
    SensorProfile,
    coverage_fraction,
    is_blinding,
)
from .designer import DesignScenario, brute_force_design, design_topology
from .divergence import kld, kld_of_attack, min_kld, min_kld_curve, received_distributions
from .knapsack import AttackBudgetProblem, optimal_attack
from .sim import RNG_ALGORITHM, SimConfig, SimMode, simulate_fc_view, simulate_tree
from .topology import CostSchedule, TreeShape


class OverrideError(ValueError):
    """A figure override referenced an unknown key or had the wrong type."""


# ---------------------------------------------------------------------------
# result tables


def _canonical_cell(value):
    if isinstance(value, bool):
        return int(value)
    if isinstance(value, numbers.Integral):
        return int(value)
    if isinstance(value, Fraction):
        value = float(value)
    if isinstance(value, numbers.Real):
        return float(f"{float(value):.9g}")
    raise TypeError(f"table cells must be numeric, got {value!r}")


def _format_cell(value) -> str:
    if isinstance(value, int):
        return str(value)
    return f"{value:.9g}"


@dataclass(frozen=True)
class ResultTable:
    """Rectangular numeric table plus string metadata."""

    columns: tuple
    rows: tuple
    metadata: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        columns = tuple(str(c) for c in self.columns)
        object.__setattr__(self, "columns", columns)
        canon = []
        for row in self.rows:
            cells = tuple(_canonical_cell(c) for c in row)
            if len(cells) != len(columns):
                raise ValueError(
                    f"row of width {len(cells)} in table of width {len(columns)}"
                )
            canon.append(cells)
        object.__setattr__(self, "rows", tuple(canon))
        object.__setattr__(
            self, "metadata", {str(k): str(v) for k, v in self.metadata.items()}
        )

    def to_text(self) -> str:
        lines = [f"# {k}: {v}" for k, v in sorted(self.metadata.items())]
        lines.append(",".join(self.columns))
        for row in self.rows:
            lines.append(",".join(_format_cell(c) for c in row))
        return "\n".join(lines) + "\n"

    @classmethod
    def parse(cls, text: str) -> "ResultTable":
        metadata = {}
        columns = None
        rows = []
        for line in text.splitlines():
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                key, sep, value = line[1:].strip().partition(": ")
                if not sep:
                    raise ValueError(f"malformed metadata line: {line!r}")
                metadata[key.strip()] = value
                continue
            if columns is None:
                columns = tuple(line.split(","))
                continue
            cells = []
            for token in line.split(","):
                try:
                    cells.append(int(token))
                except ValueError:
                    cells.append(float(token))
            rows.append(tuple(cells))
        if columns is None:
            raise ValueError("table text has no header row")
        return cls(columns, tuple(rows), metadata)

    def column(self, name: str) -> list:
        idx = self.columns.index(name)
        return [row[idx] for row in self.rows]


# ---------------------------------------------------------------------------
# figure presets

FIGURE_DEFAULTS = {
    # divergence over the flip-probability square at fixed coverage
    "f2": {"t": 0.4, "pd": 0.8, "pfa": 0.2, "points": 101},
    # minimum divergence as coverage sweeps 0..1/2
    "f3": {"pd": 0.8, "pfa": 0.2, "points": 50},
    # attacker best response as depth grows at fixed branching
    "f4": {
        "branching": 2,
        "depth_lo": 2,
        "depth_hi": 9,
        "costs": (52, 48, 24, 16, 12, 8, 10, 6, 4),
        "budget": 50,
    },
    # attacker best response as branching grows at fixed depth
    "f5": {
        "depth": 6,
        "branching_lo": 3,
        "branching_hi": 11,
        "costs": (52, 48, 24, 16, 12, 8, 10, 6, 4),
        "budget": 50,
    },
    # design surface: best-response divergence over the (depth, branching)
    # grid with feasibility flags and the greedy design's pick
    "f6": {
        "depth_lo": 2,
        "depth_hi": 10,
        "branching_lo": 3,
        "branching_hi": 11,
        "a_min": 3,
        "costs": (52, 50, 25, 24, 16, 10, 8, 6, 5, 4),
        "network_budget": 400000,
        "attacker_budget": 50,
        "n_min": 1400,
        "pd": 0.8,
        "pfa": 0.2,
    },
}


def _coerce_override(key: str, value, default):
    if isinstance(default, tuple):
        if isinstance(value, str):
            parts = value.split(",")
        elif isinstance(value, (list, tuple)):
            parts = list(value)
        else:
            raise OverrideError(f"override '{key}' must be a comma-separated list")
        try:
            return tuple(int(p) for p in parts)
        except (TypeError, ValueError) as exc:
            raise OverrideError(f"override '{key}' must list integers") from exc
    try:
        num = float(value)
    except (TypeError, ValueError) as exc:
        raise OverrideError(f"override '{key}' must be numeric") from exc
    if isinstance(default, int):
        if num != int(num):
            raise OverrideError(f"override '{key}' must be an integer")
        return int(num)
    return num


def _figure_params(figure_id: str, overrides) -> dict:
    if figure_id not in FIGURE_DEFAULTS:
        raise OverrideError(f"unknown figure id '{figure_id}'")
    params = dict(FIGURE_DEFAULTS[figure_id])
    for key, value in (overrides or {}).items():
        if key not in params:
            raise OverrideError(f"unknown override key '{key}' for figure {figure_id}")
        params[key] = _coerce_override(key, value, params[key])
    return params


def _best_response(depth: int, branching: int, costs: CostSchedule, budget: int):
    shape = TreeShape(depth, branching)
    return optimal_attack(AttackBudgetProblem(shape, costs, budget))


def _figure_f2(params):
    profile = SensorProfile.identical(params["pd"], params["pfa"])
    n = params["points"]
    rows = []
    for i in range(n):
        p10 = i / (n - 1)
        for j in range(n):
            p01 = j / (n - 1)
            rows.append(
                (p10, p01, kld_of_attack(params["t"], profile, FlipStrategy(p10, p01)))
            )
    return ("p10", "p01", "kld"), rows


def _figure_f3(params):
    profile = SensorProfile.identical(params["pd"], params["pfa"])
    n = params["points"]
    grid = [0.5 * i / (n - 1) for i in range(n)]
    rows = [(t, d) for t, d in min_kld_curve(profile, grid)]
    return ("t", "min_kld"), rows


def _figure_f4(params):
    costs = CostSchedule(params["costs"])
    rows = []
    for depth in range(params["depth_lo"], params["depth_hi"] + 1):
        sol = _best_response(depth, params["branching"], costs, params["budget"])
        rows.append((depth, float(sol.coverage), sol.blind))
    return ("depth", "coverage", "blind"), rows


def _figure_f5(params):
    costs = CostSchedule(params["costs"])
    rows = []
    for branching in range(params["branching_lo"], params["branching_hi"] + 1):
        sol = _best_response(params["depth"], branching, costs, params["budget"])
        rows.append((branching, float(sol.coverage), sol.blind))
    return ("branching", "coverage", "blind"), rows


def _figure_f6(params):
    scenario = DesignScenario(
        costs=CostSchedule(params["costs"]),
        network_budget=params["network_budget"],
        attacker_budget=params["attacker_budget"],
        a_min=params["a_min"],
        a_max=params["branching_hi"],
        k_min=params["depth_lo"],
        n_min=params["n_min"],
    )
    result = brute_force_design(scenario, k_max=params["depth_hi"])
    pick = design_topology(scenario)
    if pick.shape != result.outcome.shape:
        raise RuntimeError(
            f"design procedures disagree: greedy {pick.shape}, "
            f"exhaustive {result.outcome.shape}"
        )
    profile = SensorProfile.identical(params["pd"], params["pfa"])
    rows = []
    for cell in result.table:
        if cell.shape.branching < params["branching_lo"]:
            continue
        rows.append(
            (
                cell.shape.depth,
                cell.shape.branching,
                cell.feasible,
                cell.cost,
                float(cell.coverage),
                min_kld(cell.coverage, profile)[1],
                pick.feasible and cell.shape == pick.shape,
            )
        )
    return ("depth", "branching", "feasible", "cost", "coverage", "min_kld", "chosen"), rows


_FIGURES = {
    "f2": _figure_f2,
    "f3": _figure_f3,
    "f4": _figure_f4,
    "f5": _figure_f5,
    "f6": _figure_f6,
}


def run_figure(figure_id: str, overrides=None) -> ResultTable:
    """Compute the grid behind a preset figure, with optional parameter
    overrides validated against that figure's defaults."""
    params = _figure_params(figure_id, overrides)
    columns, rows = _FIGURES[figure_id](params)
    metadata = {"command": f"figure {figure_id}", "version": __version__}
    for key in sorted(params):
        value = params[key]
        if isinstance(value, tuple):
            metadata[f"param.{key}"] = ",".join(str(v) for v in value)
        else:
            metadata[f"param.{key}"] = str(value)
    return ResultTable(columns, tuple(rows), metadata)


# ---------------------------------------------------------------------------
# scenario files

_SECTION_KEYS = {
    "shape": {"depth", "branching"},
    "profile": {"pd_h", "pfa_h", "pd_b", "pfa_b"},
    "strategy": {"p10", "p01"},
    "costs": {"values"},
    "budgets": {"attacker", "network"},
    "design": {"a_min", "a_max", "k_min", "n_min"},
    "sim": {"samples", "seed", "mode"},
    "allocation": {"counts"},
    "coverage": {"t"},
    "placement": {"nodes"},
}

_TASK_SECTIONS = {
    "kld": {"profile", "strategy", "coverage", "shape", "allocation"},
    "blind": {"shape", "allocation"},
    "attack": {"shape", "costs", "budgets"},
    "design": {"costs", "budgets", "design"},
    "simulate": {"sim", "profile", "strategy", "coverage", "shape", "placement"},
}


def load_scenario(path) -> dict:
    """Parse a YAML scenario document, rejecting unknown keys."""
    text = Path(path).read_text()
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        if mark is not None:
            raise ValueError(
                f"scenario parse error at line {mark.line + 1}, "
                f"column {mark.column + 1}: {getattr(exc, 'problem', exc)}"
            ) from exc
        raise ValueError(f"scenario parse error: {exc}") from exc
    if not isinstance(doc, dict):
        raise ValueError("empty or non-mapping scenario: expected a 'task' key")
    return doc


def _validate_sections(doc: dict, task: str) -> None:
    allowed = _TASK_SECTIONS[task] | {"task"}
    unknown = set(doc) - allowed
    if unknown:
        raise ValueError(
            f"unknown key(s) for task '{task}': {', '.join(sorted(map(str, unknown)))}"
        )
    for name in set(doc) - {"task"}:
        section = doc[name]
        if not isinstance(section, dict):
            raise ValueError(f"section '{name}' must be a mapping")
        extra = set(section) - _SECTION_KEYS[name]
        if extra:
            raise ValueError(
                f"unknown key(s) in section '{name}': "
                f"{', '.join(sorted(map(str, extra)))}"
            )
        missing = _SECTION_KEYS[name] - set(section)
        if missing:
            raise ValueError(
                f"section '{name}' missing key(s): "
                f"{', '.join(sorted(map(str, missing)))}"
            )


def _need(doc: dict, name: str) -> dict:
    if name not in doc:
        raise ValueError(f"task '{doc.get('task')}' requires section '{name}'")
    return doc[name]


def _shape_of(doc) -> TreeShape:
    sec = _need(doc, "shape")
    return TreeShape(sec["depth"], sec["branching"])


def _profile_of(doc) -> SensorProfile:
    sec = _need(doc, "profile")
    return SensorProfile(sec["pd_h"], sec["pfa_h"], sec["pd_b"], sec["pfa_b"])


def _strategy_of(doc) -> FlipStrategy:
    sec = _need(doc, "strategy")
    return FlipStrategy(sec["p10"], sec["p01"])


def _costs_of(doc) -> CostSchedule:
    sec = _need(doc, "costs")
    return CostSchedule(tuple(sec["values"]))


def _allocation_of(doc) -> AttackAllocation:
    sec = _need(doc, "allocation")
    return AttackAllocation(tuple(sec["counts"]))


def _coverage_of(doc):
    if "coverage" in doc:
        return doc["coverage"]["t"]
    shape = _shape_of(doc)
    return coverage_fraction(shape, _allocation_of(doc))


def _task_kld(doc, meta, overrides):
    profile = _profile_of(doc)
    strat = _strategy_of(doc)
    t = _coverage_of(doc)
    pair = received_distributions(t, profile, strat)
    rows = [(float(t), float(pair.pi11), float(pair.pi10), kld(pair))]
    return ResultTable(("t", "pi11", "pi10", "kld"), rows, meta)


def _task_blind(doc, meta, overrides):
    shape = _shape_of(doc)
    alloc = _allocation_of(doc)
    t = coverage_fraction(shape, alloc)
    rows = [(float(t), is_blinding(shape, alloc))]
    return ResultTable(("t", "blind"), rows, meta)


def _attack_table(shape: TreeShape, costs: CostSchedule, budget: int, meta) -> ResultTable:
    sol = optimal_attack(AttackBudgetProblem(shape, costs, budget))
    columns = tuple(f"b{k}" for k in shape.levels) + ("spent", "coverage", "blind")
    row = tuple(sol.allocation.counts) + (sol.spent, float(sol.coverage), sol.blind)
    return ResultTable(columns, (row,), meta)


def _task_attack(doc, meta, overrides):
    budgets = _need(doc, "budgets")
    return _attack_table(_shape_of(doc), _costs_of(doc), budgets["attacker"], meta)


def _design_table(scenario: DesignScenario, meta) -> ResultTable:
    outcome = design_topology(scenario)
    if outcome.feasible:
        sol = optimal_attack(
            AttackBudgetProblem(outcome.shape, scenario.costs, scenario.attacker_budget)
        )
        row = (
            1,
            outcome.shape.depth,
            outcome.shape.branching,
            float(sol.coverage),
            sol.blind,
        )
    else:
        row = (0, 0, 0, 0.0, 0)
    return ResultTable(("feasible", "depth", "branching", "coverage", "blind"), (row,), meta)


def _task_design(doc, meta, overrides):
    budgets = _need(doc, "budgets")
    bounds = _need(doc, "design")
    scenario = DesignScenario(
        costs=_costs_of(doc),
        network_budget=budgets["network"],
        attacker_budget=budgets["attacker"],
        a_min=bounds["a_min"],
        a_max=bounds["a_max"],
        k_min=bounds["k_min"],
        n_min=bounds["n_min"],
    )
    return _design_table(scenario, meta)


def _sim_config(doc, overrides) -> SimConfig:
    sec = _need(doc, "sim")
    samples = overrides.get("samples") or sec["samples"]
    seed = sec["seed"] if overrides.get("seed") is None else overrides["seed"]
    return SimConfig(samples=samples, seed=seed, mode=SimMode(sec["mode"]))


def _task_simulate(doc, meta, overrides):
    profile = _profile_of(doc)
    strat = _strategy_of(doc)
    cfg = _sim_config(doc, overrides)
    meta = dict(meta)
    meta.update(rng=RNG_ALGORITHM, seed=cfg.seed, samples=cfg.samples)
    if cfg.mode is SimMode.TREE:
        shape = _shape_of(doc)
        nodes = _need(doc, "placement")["nodes"]
        pair, coverage = simulate_tree(shape, nodes, profile, strat, cfg)
        t = coverage
    else:
        t = _need(doc, "coverage")["t"]
        pair = simulate_fc_view(t, profile, strat, cfg)
    analytic = received_distributions(min(t, 1), profile, strat)
    rows = [
        (
            float(t),
            float(analytic.pi11),
            float(analytic.pi10),
            pair.pi11_hat,
            pair.pi10_hat,
            pair.std_err,
        )
    ]
    columns = ("t", "pi11", "pi10", "pi11_hat", "pi10_hat", "std_err")
    return ResultTable(columns, rows, meta)


_TASKS = {
    "kld": _task_kld,
    "blind": _task_blind,
    "attack": _task_attack,
    "design": _task_design,
    "simulate": _task_simulate,
}


def run_scenario(path, seed=None, samples=None) -> ResultTable:
    """Load a scenario file and dispatch on its ``task`` field."""
    doc = load_scenario(path)
    task = doc.get("task")
    if task not in _TASKS:
        raise ValueError(
            f"unknown task {task!r}; expected one of {', '.join(sorted(_TASKS))}"
        )
    _validate_sections(doc, task)
    meta = {
        "command": f"scenario {Path(path).name}",
        "task": task,
        "version": __version__,
    }
    return _TASKS[task](doc, meta, {"seed": seed, "samples": samples})


# ---------------------------------------------------------------------------
# command line

def _emit(table: ResultTable, out) -> None:
    text = table.to_text()
    if out is None:
        click.echo(text, nl=False)
    else:
        Path(out).write_text(text)


def _parse_costs(text: str) -> tuple:
    try:
        return tuple(int(p) for p in text.split(","))
    except ValueError as exc:
        raise click.UsageError(f"--costs must be comma-separated integers: {text!r}") from exc


_OUT_OPTION = click.option(
    "--out", type=click.Path(dir_okay=False, path_type=Path), default=None,
    help="Write the table to a file instead of standard output.",
)


@click.group()
@click.version_option(__version__, prog_name="byztree")
def main():
    """Byzantine capture attacks on a-ary detection trees, and the
    designer's robust topology choice."""


@main.command()
@click.argument("figure_id", type=click.Choice(sorted(FIGURE_DEFAULTS)))
@click.option(
    "--set", "overrides", multiple=True, metavar="KEY=VALUE",
    help="Override a figure parameter (repeatable).",
)
@_OUT_OPTION
def figure(figure_id, overrides, out):
    """Emit the grid behind one of the preset experiment figures."""
    pairs = {}
    for item in overrides:
        key, sep, value = item.partition("=")
        if not sep:
            raise click.UsageError(f"override {item!r} must have the form KEY=VALUE")
        pairs[key.strip()] = value
    try:
        table = run_figure(figure_id, pairs)
    except OverrideError as exc:
        raise click.UsageError(str(exc)) from exc
    except ValueError as exc:
        raise click.ClickException(str(exc)) from exc
    _emit(table, out)


@main.command()
@click.argument("path", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--seed", type=int, default=None, help="Override the scenario's seed.")
@click.option("--samples", type=int, default=None, help="Override the sample count.")
@_OUT_OPTION
def scenario(path, seed, samples, out):
    """Run a YAML scenario file (task: kld | blind | attack | design | simulate)."""
    try:
        table = run_scenario(path, seed=seed, samples=samples)
    except (ValueError, KeyError, TypeError) as exc:
        raise click.ClickException(str(exc)) from exc
    _emit(table, out)


@main.command()
@click.option("--depth", type=int, required=True)
@click.option("--branching", type=int, required=True)
@click.option("--costs", required=True, metavar="C1,C2,...")
@click.option("--budget", type=int, required=True)
@_OUT_OPTION
def attack(depth, branching, costs, budget, out):
    """Solve the attacker's budgeted capture problem on one tree."""
    try:
        shape = TreeShape(depth, branching)
        table = _attack_table(
            shape,
            CostSchedule(_parse_costs(costs)),
            budget,
            {"command": f"attack T({depth},{branching})", "version": __version__},
        )
    except ValueError as exc:
        raise click.ClickException(str(exc)) from exc
    _emit(table, out)


@main.command()
@click.option("--costs", required=True, metavar="C1,C2,...")
@click.option("--network-budget", type=int, required=True)
@click.option("--attacker-budget", type=int, required=True)
@click.option("--a-min", type=int, default=2, show_default=True)
@click.option("--a-max", type=int, required=True)
@click.option("--k-min", type=int, default=2, show_default=True)
@click.option("--n-min", type=int, default=1, show_default=True)
@_OUT_OPTION
def design(costs, network_budget, attacker_budget, a_min, a_max, k_min, n_min, out):
    """Choose the robust (depth, branching) under the deployment budget."""
    try:
        scenario_obj = DesignScenario(
            costs=CostSchedule(_parse_costs(costs)),
            network_budget=network_budget,
            attacker_budget=attacker_budget,
            a_min=a_min,
            a_max=a_max,
            k_min=k_min,
            n_min=n_min,
        )
        table = _design_table(
            scenario_obj, {"command": "design", "version": __version__}
        )
    except ValueError as exc:
        raise click.ClickException(str(exc)) from exc
    _emit(table, out)


@main.command()
@click.option("--coverage", "-t", type=float, required=True)
@click.option("--pd", type=float, required=True)
@click.option("--pfa", type=float, required=True)
@click.option("--pd-byz", type=float, default=None, help="Defaults to --pd.")
@click.option("--pfa-byz", type=float, default=None, help="Defaults to --pfa.")
@click.option("--p10", type=float, required=True)
@click.option("--p01", type=float, required=True)
@click.option("--samples", type=int, default=100_000, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@_OUT_OPTION
def simulate(coverage, pd, pfa, pd_byz, pfa_byz, p10, p01, samples, seed, out):
    """Monte Carlo estimate of the fusion center's bit distributions."""
    try:
        profile = SensorProfile(
            pd, pfa, pd if pd_byz is None else pd_byz, pfa if pfa_byz is None else pfa_byz
        )
        strat = FlipStrategy(p10, p01)
        cfg = SimConfig(samples=samples, seed=seed)
        pair = simulate_fc_view(coverage, profile, strat, cfg)
        analytic = received_distributions(coverage, profile, strat)
        table = ResultTable(
            ("t", "pi11", "pi10", "pi11_hat", "pi10_hat", "std_err"),
            (
                (
                    coverage,
                    float(analytic.pi11),
                    float(analytic.pi10),
                    pair.pi11_hat,
                    pair.pi10_hat,
                    pair.std_err,
                ),
            ),
            {
                "command": "simulate",
                "version": __version__,
                "rng": RNG_ALGORITHM,
                "seed": seed,
                "samples": samples,
            },
        )
    except ValueError as exc:
        raise click.ClickException(str(exc)) from exc
    _emit(table, out)


if __name__ == "__main__":
    main()
