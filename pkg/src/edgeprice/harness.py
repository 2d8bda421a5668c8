"""Parameter sweeps, optimizer comparisons, and flat-file outputs.

The harness adds no arithmetic of its own: every sweep row is a straight
copy of model-module results, so rows are reproducible bit-exactly from
the scenario and allocation that produced them.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Sequence

import numpy as np

from .offload import Allocation
from .pricing import dynamic_price, dynamic_utility_objective, server_utility, user_utility
from .scenario import Scenario, validate
from .optimizers import (
    RunResult,
    SwarmConfig,
    TrialStats,
    baseline_de,
    baseline_ga,
    baseline_pso,
    disc_pso,
    stats_from_runs,
    trial_seeds,
)
from . import svgplot

SWEEPABLE_PARAMETERS = ("f_server", "b", "q", "f_local")

#: Algorithms in the order they are compared and reported.
ALGORITHMS = {
    "disc-pso": disc_pso,
    "pso": baseline_pso,
    "ga": baseline_ga,
    "de": baseline_de,
}

SWEEP_CSV_HEADER = ("param", "value", "price", "u_user", "u_server", "t_offload", "t_save", "e_save")
COMPARISON_CSV_HEADER = ("algorithm", "trial", "seed", "u_user_final", "iterations", "f_server_hz", "b_bps")


@dataclass(frozen=True)
class SweepSpec:
    """One swept parameter over a grid, everything else pinned."""

    parameter: str                # one of SWEEPABLE_PARAMETERS
    grid: tuple[float, ...]       # canonical units, strictly increasing
    scenario: Scenario
    allocation: Allocation


@dataclass(frozen=True)
class SweepRow:
    parameter: str
    value: float
    price: float
    u_user: float
    u_server: float
    t_offload: float
    t_save: float
    e_save: float


@dataclass(frozen=True)
class SurfaceGrid:
    """Dense evaluation of the model over the purchase box."""

    f_values: tuple[float, ...]
    b_values: tuple[float, ...]
    u_user: np.ndarray    # shape (len(f_values), len(b_values))
    price: np.ndarray
    u_server: np.ndarray

    def argmax_u_user(self) -> Allocation:
        i, j = np.unravel_index(int(np.argmax(self.u_user)), self.u_user.shape)
        return Allocation(self.f_values[i], self.b_values[j])


@dataclass(frozen=True)
class ComparisonReport:
    """Everything needed to regenerate the algorithm-comparison table and plots."""

    scenario: Scenario
    n_trials: int
    randomized: bool
    u_max: float                       # gap reference of the base scenario
    u_max_list: tuple[float, ...]      # per-trial gap references actually used
    stats: dict[str, TrialStats]


def corner_allocation(s: Scenario) -> Allocation:
    """The (f_max, b_max) corner, where the dynamic-mode utility peaks."""
    return Allocation(s.f_range[1], s.b_range[1])


def box_maximum_utility(s: Scenario) -> float:
    """Dynamic-mode utility at the box corner (the search's gap reference)."""
    return dynamic_utility_objective(s)(corner_allocation(s))


def _check_sweep_spec(spec: SweepSpec) -> None:
    if spec.parameter not in SWEEPABLE_PARAMETERS:
        raise ValueError(
            f"unknown sweep parameter {spec.parameter!r}; expected one of {SWEEPABLE_PARAMETERS}"
        )
    report = validate(spec.scenario)
    if report:
        raise ValueError("invalid scenario: " + "; ".join(report))
    if spec.allocation.f_server <= 0 or spec.allocation.b <= 0:
        raise ValueError(f"allocation must be strictly positive, got {spec.allocation}")
    grid = tuple(spec.grid)
    if not grid:
        raise ValueError("sweep grid must be non-empty")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError(f"sweep grid must be strictly increasing, got {grid}")
    if spec.parameter == "f_server":
        lo, hi = spec.scenario.f_range
    elif spec.parameter == "b":
        lo, hi = spec.scenario.b_range
    else:
        lo, hi = 0.0, float("inf")
    if grid[0] < lo or grid[-1] > hi or grid[0] <= 0:
        raise ValueError(
            f"sweep grid {grid[0]!r}..{grid[-1]!r} outside the valid {spec.parameter} "
            f"range [{lo!r}, {hi!r}]"
        )


def run_sweep(spec: SweepSpec) -> list[SweepRow]:
    """One row per grid value, dynamic pricing throughout."""
    _check_sweep_spec(spec)
    rows = []
    for value in spec.grid:
        scenario = spec.scenario
        alloc = spec.allocation
        if spec.parameter == "f_server":
            alloc = replace(alloc, f_server=value)
        elif spec.parameter == "b":
            alloc = replace(alloc, b=value)
        elif spec.parameter == "q":
            scenario = replace(scenario, q=value)
        else:
            scenario = replace(scenario, f_local=value)
        summary = user_utility(scenario, alloc)
        rows.append(
            SweepRow(
                parameter=spec.parameter,
                value=value,
                price=summary.price,
                u_user=summary.u_user,
                u_server=summary.u_server,
                t_offload=summary.time.t_offload,
                t_save=summary.time.t_save,
                e_save=summary.energy.e_save,
            )
        )
    return rows


def surface_grid(s: Scenario, f_steps: int, b_steps: int) -> SurfaceGrid:
    """Dense (f_server, b) grid over the search box, endpoints included."""
    if f_steps < 2 or b_steps < 2:
        raise ValueError(f"need at least 2 steps per axis, got ({f_steps}, {b_steps})")
    f_values = np.linspace(s.f_range[0], s.f_range[1], f_steps)
    b_values = np.linspace(s.b_range[0], s.b_range[1], b_steps)
    objective = dynamic_utility_objective(s)
    u_user = np.empty((f_steps, b_steps))
    price = np.empty_like(u_user)
    u_server = np.empty_like(u_user)
    for i, f in enumerate(f_values):
        for j, b in enumerate(b_values):
            alloc = Allocation(f, b)
            u_user[i, j] = objective(alloc)
            price[i, j] = dynamic_price(s, alloc)
            u_server[i, j] = server_utility(s, alloc)
    return SurfaceGrid(
        f_values=tuple(float(f) for f in f_values),
        b_values=tuple(float(b) for b in b_values),
        u_user=u_user,
        price=price,
        u_server=u_server,
    )


def _draw_trial_scenarios(s: Scenario, seed: int, n_trials: int) -> list[Scenario]:
    """Qualitative randomized mode: q uniform in [100, 500] KB, f_local from 0.1..1 GHz."""
    rng = np.random.default_rng([seed, 0x5CE1])
    scenarios = []
    for _ in range(n_trials):
        q_kb = rng.uniform(100.0, 500.0)
        f_local_ghz = 0.1 * rng.integers(1, 11)
        scenarios.append(replace(s, q=q_kb * 8192.0, f_local=f_local_ghz * 1e9))
    return scenarios


def compare_optimizers(
    s: Scenario, cfg: SwarmConfig, n_trials: int, *, randomize: bool = False
) -> ComparisonReport:
    """Run all four algorithms over paired per-trial seeds.

    In the default deterministic mode every trial sees the same scenario;
    the randomized mode redraws (q, f_local) per trial, with all four
    algorithms still seeing the same scenario and seed in a given trial.
    """
    seeds = trial_seeds(cfg.seed, n_trials)
    if randomize:
        scenarios = _draw_trial_scenarios(s, cfg.seed, n_trials)
    else:
        scenarios = [s] * n_trials
    objectives = [dynamic_utility_objective(sc) for sc in scenarios]
    u_max_list = tuple(
        obj(corner_allocation(sc)) for sc, obj in zip(scenarios, objectives)
    )

    stats: dict[str, TrialStats] = {}
    for name, algorithm in ALGORITHMS.items():
        runs: list[RunResult] = []
        for trial in range(n_trials):
            runs.append(
                algorithm(
                    scenarios[trial],
                    objectives[trial],
                    u_max_list[trial],
                    replace(cfg, seed=seeds[trial]),
                )
            )
        stats[name] = stats_from_runs(runs)
    return ComparisonReport(
        scenario=s,
        n_trials=n_trials,
        randomized=randomize,
        u_max=box_maximum_utility(s),
        u_max_list=u_max_list,
        stats=stats,
    )


def _format_number(x: float) -> str:
    return f"{x:.9g}"


def emit_csv(rows: Sequence[SweepRow], path: str | Path) -> None:
    """Sweep rows as CSV: header always present, numbers at 9 significant digits."""
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(SWEEP_CSV_HEADER)
        for row in rows:
            writer.writerow(
                [row.parameter]
                + [
                    _format_number(v)
                    for v in (
                        row.value,
                        row.price,
                        row.u_user,
                        row.u_server,
                        row.t_offload,
                        row.t_save,
                        row.e_save,
                    )
                ]
            )


def emit_comparison_csv(report: ComparisonReport, path: str | Path) -> None:
    """Per-trial comparison records, one row per (algorithm, trial)."""
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(COMPARISON_CSV_HEADER)
        for name, stats in report.stats.items():
            for trial in range(len(stats.value_list)):
                position = stats.position_list[trial]
                writer.writerow(
                    [
                        name,
                        trial,
                        stats.seed_list[trial],
                        _format_number(stats.value_list[trial]),
                        stats.iteration_list[trial],
                        _format_number(position.f_server),
                        _format_number(position.b),
                    ]
                )


def emit_plot(
    data: Sequence[SweepRow] | Sequence[Allocation] | SurfaceGrid,
    kind: str,
    path: str | Path,
    *,
    series: str = "u_user",
) -> None:
    """Render sweep rows (line), best positions (scatter), or a grid (heatmap) as SVG.

    Scatter input is collapsed to distinct positions before plotting, so
    the circle count in the file equals the number of unique points.
    """
    if kind == "line":
        rows = list(data)  # type: ignore[arg-type]
        if not rows:
            raise ValueError("line plot needs at least one sweep row")
        points = [(row.value, getattr(row, series)) for row in rows]
        text = svgplot.line_plot(
            points, x_label=rows[0].parameter, y_label=series, title=f"{series} sweep"
        )
    elif kind == "scatter":
        positions = list(data)  # type: ignore[arg-type]
        if not positions:
            raise ValueError("scatter plot needs at least one position")
        pairs = [
            (p.f_server, p.b) if isinstance(p, Allocation) else (float(p[0]), float(p[1]))
            for p in positions
        ]
        unique = list(dict.fromkeys(pairs))
        text = svgplot.scatter_plot(
            unique, x_label="f_server [Hz]", y_label="b [bit/s]", title="best positions"
        )
    elif kind == "heatmap":
        if not isinstance(data, SurfaceGrid):
            raise ValueError("heatmap plotting expects a SurfaceGrid")
        cells = getattr(data, series)
        text = svgplot.heatmap(
            data.f_values,
            data.b_values,
            cells.tolist(),
            x_label="f_server [Hz]",
            y_label="b [bit/s]",
            title=f"{series} surface",
        )
    else:
        raise ValueError(f"unknown plot kind {kind!r}; expected line, scatter, or heatmap")
    Path(path).write_text(text, encoding="utf-8")
