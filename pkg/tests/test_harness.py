import csv
import dataclasses
import xml.etree.ElementTree as ET

import numpy as np
import pytest

from edgeprice.harness import (
    SweepSpec,
    box_maximum_utility,
    compare_optimizers,
    corner_allocation,
    emit_comparison_csv,
    emit_csv,
    emit_plot,
    run_sweep,
    surface_grid,
)
from edgeprice.offload import Allocation
from edgeprice.optimizers import SwarmConfig
from edgeprice.pricing import user_utility
from edgeprice.scenario import default_scenario

GHZ = 1e9
MBPS = 1e6

USER_DELTAS = (5.40672, 1.80224, 0.90112, 0.540672, 0.360448)
SERVER_DELTAS = (2.70336, 0.90112, 0.45056, 0.270336, 0.180224)


@pytest.fixture
def defaults():
    return default_scenario()


@pytest.fixture
def f_sweep_spec(defaults):
    return SweepSpec(
        parameter="f_server",
        grid=tuple(f * GHZ for f in (1, 2, 3, 4, 5, 6)),
        scenario=defaults,
        allocation=Allocation(6 * GHZ, 0.1 * MBPS),
    )


def test_f_sweep_matches_reference_deltas(f_sweep_spec):
    rows = run_sweep(f_sweep_spec)
    assert len(rows) == 6
    for (a, b), expected in zip(zip(rows, rows[1:]), USER_DELTAS):
        assert b.u_user - a.u_user == pytest.approx(expected, abs=1e-6)
    for (a, b), expected in zip(zip(rows, rows[1:]), SERVER_DELTAS):
        assert b.u_server - a.u_server == pytest.approx(expected, abs=1e-6)


def test_sweep_rows_reproducible_from_model(f_sweep_spec):
    rows = run_sweep(f_sweep_spec)
    for row in rows:
        summary = user_utility(
            f_sweep_spec.scenario, Allocation(row.value, f_sweep_spec.allocation.b)
        )
        assert row.price == summary.price
        assert row.u_user == summary.u_user
        assert row.u_server == summary.u_server
        assert row.t_offload == summary.time.t_offload
        assert row.t_save == summary.time.t_save
        assert row.e_save == summary.energy.e_save


def test_single_point_grid_equals_direct_evaluation(defaults):
    spec = SweepSpec(
        parameter="q",
        grid=(819_200.0,),
        scenario=defaults,
        allocation=Allocation(6 * GHZ, 1 * MBPS),
    )
    (row,) = run_sweep(spec)
    summary = user_utility(
        dataclasses.replace(defaults, q=819_200.0), Allocation(6 * GHZ, 1 * MBPS)
    )
    assert row.u_user == summary.u_user and row.price == summary.price


def test_q_and_f_local_sweeps_vary_scenario(defaults):
    alloc = Allocation(6 * GHZ, 1 * MBPS)
    rows = run_sweep(
        SweepSpec("q", tuple(q * 8192.0 for q in (100, 300, 500)), defaults, alloc)
    )
    assert all(b.u_user > a.u_user for a, b in zip(rows, rows[1:]))
    rows = run_sweep(
        SweepSpec("f_local", (1e8, 5e8, 1e9), defaults, alloc)
    )
    assert rows[0].u_user > rows[1].u_user  # faster local CPU, less to gain


@pytest.mark.parametrize(
    "grid, message",
    [
        ((), "non-empty"),
        ((2e9, 2e9), "strictly increasing"),
        ((3e9, 2e9), "strictly increasing"),
        ((1e8, 2e9), "outside"),
        ((1e9, 9e9), "outside"),
    ],
)
def test_sweep_grid_validation(defaults, grid, message):
    spec = SweepSpec("f_server", grid, defaults, Allocation(6 * GHZ, 1 * MBPS))
    with pytest.raises(ValueError, match=message):
        run_sweep(spec)


def test_sweep_rejects_invalid_scenario(defaults):
    bad = dataclasses.replace(defaults, mu=2.0)
    spec = SweepSpec("f_server", (1e9, 2e9), bad, Allocation(6 * GHZ, 1 * MBPS))
    with pytest.raises(ValueError, match="mu"):
        run_sweep(spec)


def test_sweep_rejects_unknown_parameter(defaults):
    spec = SweepSpec("power", (1.0, 2.0), defaults, Allocation(6 * GHZ, 1 * MBPS))
    with pytest.raises(ValueError, match="unknown sweep parameter"):
        run_sweep(spec)


# ---------------------------------------------------------------- surface

def test_surface_two_by_two_equals_direct(defaults):
    grid = surface_grid(defaults, 2, 2)
    assert grid.f_values == (1e9, 6e9)
    assert grid.b_values == (1e5, 1e6)
    for i, f in enumerate(grid.f_values):
        for j, b in enumerate(grid.b_values):
            summary = user_utility(defaults, Allocation(f, b))
            assert grid.u_user[i, j] == pytest.approx(summary.u_user, rel=1e-12)
            assert grid.price[i, j] == pytest.approx(summary.price, rel=1e-12)
            assert grid.u_server[i, j] == pytest.approx(summary.u_server, rel=1e-12)


def test_surface_argmax_at_corner(defaults):
    grid = surface_grid(defaults, 100, 100)
    assert grid.argmax_u_user() == corner_allocation(defaults)


def test_surface_price_monotone(defaults):
    grid = surface_grid(defaults, 20, 20)
    assert (np.diff(grid.price, axis=0) < 0).all()
    assert (np.diff(grid.price, axis=1) < 0).all()


def test_surface_rejects_single_step(defaults):
    with pytest.raises(ValueError, match="steps"):
        surface_grid(defaults, 1, 10)


# ---------------------------------------------------------------- compare

def test_compare_single_trial_has_four_rows(defaults):
    report = compare_optimizers(defaults, SwarmConfig(seed=3), 1)
    assert set(report.stats) == {"disc-pso", "pso", "ga", "de"}
    assert all(len(st.value_list) == 1 for st in report.stats.values())


def test_compare_seeds_are_paired(defaults):
    report = compare_optimizers(defaults, SwarmConfig(seed=3), 4)
    seed_lists = {st.seed_list for st in report.stats.values()}
    assert len(seed_lists) == 1


def test_compare_u_max_reference(defaults):
    report = compare_optimizers(defaults, SwarmConfig(seed=3), 2)
    assert report.u_max == box_maximum_utility(defaults)
    assert report.u_max_list == (report.u_max, report.u_max)


def test_compare_randomized_mode(defaults):
    report = compare_optimizers(defaults, SwarmConfig(seed=5), 3, randomize=True)
    assert report.randomized
    assert len(set(report.u_max_list)) > 1  # scenarios differ per trial
    for stats in report.stats.values():
        assert len(stats.value_list) == 3


# ---------------------------------------------------------------- csv

def _rows(defaults):
    spec = SweepSpec(
        "f_server",
        tuple(f * GHZ for f in (1, 2, 3, 4, 5, 6)),
        defaults,
        Allocation(6 * GHZ, 0.1 * MBPS),
    )
    return run_sweep(spec)


def test_csv_schema_and_round_trip(defaults, tmp_path):
    rows = _rows(defaults)
    path = tmp_path / "sweep.csv"
    emit_csv(rows, path)
    with open(path, newline="") as handle:
        parsed = list(csv.reader(handle))
    assert parsed[0] == ["param", "value", "price", "u_user", "u_server", "t_offload", "t_save", "e_save"]
    assert len(parsed) == 7
    for line, row in zip(parsed[1:], rows):
        assert line[0] == row.parameter
        for text, value in zip(line[1:], (row.value, row.price, row.u_user, row.u_server,
                                          row.t_offload, row.t_save, row.e_save)):
            assert float(text) == pytest.approx(value, rel=1e-8)  # 9 significant digits


def test_csv_empty_rows_header_only(tmp_path):
    path = tmp_path / "empty.csv"
    emit_csv([], path)
    content = path.read_text()
    assert content.strip() == "param,value,price,u_user,u_server,t_offload,t_save,e_save"


def test_csv_reemission_byte_identical(defaults, tmp_path):
    rows = _rows(defaults)
    path_a, path_b = tmp_path / "a.csv", tmp_path / "b.csv"
    emit_csv(rows, path_a)
    emit_csv(rows, path_b)
    assert path_a.read_bytes() == path_b.read_bytes()


def test_comparison_csv_deterministic(defaults, tmp_path):
    cfg = SwarmConfig(seed=9)
    path_a, path_b = tmp_path / "a.csv", tmp_path / "b.csv"
    emit_comparison_csv(compare_optimizers(defaults, cfg, 3), path_a)
    emit_comparison_csv(compare_optimizers(defaults, cfg, 3), path_b)
    assert path_a.read_bytes() == path_b.read_bytes()
    with open(path_a, newline="") as handle:
        parsed = list(csv.reader(handle))
    assert parsed[0] == ["algorithm", "trial", "seed", "u_user_final", "iterations", "f_server_hz", "b_bps"]
    assert len(parsed) == 1 + 4 * 3


# ---------------------------------------------------------------- plots

def test_line_plot_has_one_marker_per_point(defaults, tmp_path):
    rows = _rows(defaults)
    path = tmp_path / "sweep.svg"
    emit_plot(rows, "line", path)
    tree = ET.parse(path)  # well-formed XML
    circles = tree.getroot().iter("{http://www.w3.org/2000/svg}circle")
    assert len(list(circles)) == 6


def test_scatter_collapses_duplicates(tmp_path):
    positions = [Allocation(6e9, 1e6), Allocation(6e9, 1e6), Allocation(3e9, 5e5)]
    path = tmp_path / "scatter.svg"
    emit_plot(positions, "scatter", path)
    tree = ET.parse(path)
    circles = list(tree.getroot().iter("{http://www.w3.org/2000/svg}circle"))
    assert len(circles) == 2


def test_heatmap_cell_count(defaults, tmp_path):
    grid = surface_grid(defaults, 100, 100)
    path = tmp_path / "heat.svg"
    emit_plot(grid, "heatmap", path)
    tree = ET.parse(path)
    rects = [
        r
        for r in tree.getroot().iter("{http://www.w3.org/2000/svg}rect")
        if r.get("fill", "").startswith("#") and r.get("fill") not in ("#333",)
    ]
    # background + frame are white/none; the colored cells are the data
    colored = [r for r in rects if r.get("fill") != "white"]
    assert len(colored) == 10_000


def test_plot_rejects_empty_and_unknown(tmp_path):
    with pytest.raises(ValueError, match="at least one"):
        emit_plot([], "line", tmp_path / "x.svg")
    with pytest.raises(ValueError, match="unknown plot kind"):
        emit_plot([Allocation(1e9, 1e5)], "pie", tmp_path / "x.svg")
