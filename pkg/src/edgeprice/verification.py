"""Built-in anchor suite: the falsifiable numeric contract of this package.

Every anchor pins an expected value (or a structural property) together
with its tolerance and a basis tag:

  reference   -- a published figure this model must reproduce,
  derived     -- a value computed independently by hand/high precision,
  closed-form -- an identity between two computation paths,
  statistical -- an ordering/convergence contract over seeded trials.

``edgeprice validate`` prints one line per anchor and fails if any check
fails. Absolute server-utility levels are deliberately NOT anchored: they
depend on the unit chosen for the data-revenue term, so only deltas,
trends, and the two-path consistency of the server utility are checked.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .offload import Allocation
from .pricing import (
    coupling_ratio,
    curvature_report,
    derive_coefficients,
    diagnostics,
    dynamic_price,
    dynamic_user_utility_value,
    quadratic_gap,
    server_utility,
    user_utility,
    user_utility_gradient,
)
from .scenario import ChannelSpec, Scenario, default_scenario
from .harness import SweepSpec, compare_optimizers, run_sweep, surface_grid
from .optimizers import SwarmConfig

KB = 8192.0  # bits
GHZ = 1e9
MBPS = 1e6

# Reference anchors for the default configuration (raw SNR mode unless noted).
PRICE_AT_100KB = 0.315874        # at (6 GHz, 1 Mbps)
PRICE_AT_500KB = 1.57937
USER_UTILITY_AT_CORNER = 50.9625  # q=500 KB, f_local=0.1 GHz, (6 GHz, 1 Mbps)
USER_DELTAS = (5.4067, 1.8032, 0.9011, 0.5407, 0.3604)      # f_server 1..6 GHz steps
USER_DELTA_2_3_CLOSED_FORM = 1.80224                        # the printed 1.8032 is off
SERVER_DELTAS = (2.70336, 0.90112, 0.45056, 0.27034, 0.18022)
B_PART_RAW = -0.102451
B_PART_DB = -0.0676              # db-to-linear SNR interpretation
P_PART_RANGE = (3.227e-7, 2.347e-6)


@dataclass(frozen=True)
class AnchorCheck:
    name: str
    basis: str
    passed: bool
    detail: str


def _check(name: str, basis: str, passed: bool, detail: str) -> AnchorCheck:
    return AnchorCheck(name=name, basis=basis, passed=bool(passed), detail=detail)


def _close(actual: float, expected: float, tol: float) -> bool:
    return abs(actual - expected) <= tol


def _random_scenario(rng: np.random.Generator) -> Scenario:
    mode = "raw" if rng.random() < 0.5 else "db-to-linear"
    return Scenario(
        q=rng.uniform(100.0, 500.0) * KB,
        c=rng.uniform(100.0, 5000.0),
        f_local=rng.uniform(0.1, 1.0) * GHZ,
        k=10.0 ** rng.uniform(-28.0, -26.0),
        p_u=rng.uniform(0.01, 1.0),
        p_d=rng.uniform(0.1, 2.0),
        alpha=rng.uniform(0.0, 1.0),
        w1=rng.uniform(0.05, 0.95),
        w2=rng.uniform(0.05, 0.95),
        mu=rng.uniform(0.05, 0.95),
        channel=ChannelSpec(rng.uniform(1.0, 40.0), rng.uniform(1.0, 40.0), mode),
        f_range=(1.0 * GHZ, 6.0 * GHZ),
        b_range=(0.1 * MBPS, 1.0 * MBPS),
    )


def _price_anchors() -> list[AnchorCheck]:
    corner = Allocation(6.0 * GHZ, 1.0 * MBPS)
    checks = []
    for q_kb, expected in ((100.0, PRICE_AT_100KB), (500.0, PRICE_AT_500KB)):
        s = default_scenario(q=q_kb * KB)
        actual = dynamic_price(s, corner)
        checks.append(
            _check(
                f"dynamic price at q={q_kb:g} KB, (6 GHz, 1 Mbps)",
                "reference",
                _close(actual, expected, 1e-5),
                f"expected {expected} +/- 1e-5, got {actual:.9g}",
            )
        )
    return checks


def _sweep_delta_anchors() -> list[AnchorCheck]:
    s = default_scenario()
    spec = SweepSpec(
        parameter="f_server",
        grid=tuple(f * GHZ for f in (1.0, 2.0, 3.0, 4.0, 5.0, 6.0)),
        scenario=s,
        allocation=Allocation(6.0 * GHZ, 0.1 * MBPS),
    )
    rows = run_sweep(spec)
    user_deltas = [b.u_user - a.u_user for a, b in zip(rows, rows[1:])]
    server_deltas = [b.u_server - a.u_server for a, b in zip(rows, rows[1:])]

    checks = []
    tolerances = (1e-3, 1e-2, 1e-3, 1e-3, 1e-3)  # looser on the known-off 2->3 entry
    user_ok = all(
        _close(actual, expected, tol)
        for actual, expected, tol in zip(user_deltas, USER_DELTAS, tolerances)
    )
    checks.append(
        _check(
            "user-utility deltas on the 1..6 GHz sweep",
            "reference",
            user_ok,
            f"expected {USER_DELTAS}, got {tuple(round(d, 5) for d in user_deltas)}",
        )
    )
    checks.append(
        _check(
            "user-utility 2->3 GHz delta, closed form",
            "derived",
            _close(user_deltas[1], USER_DELTA_2_3_CLOSED_FORM, 1e-4),
            f"expected {USER_DELTA_2_3_CLOSED_FORM} +/- 1e-4, got {user_deltas[1]:.9g}",
        )
    )
    server_ok = all(
        _close(actual, expected, 1e-4)
        for actual, expected in zip(server_deltas, SERVER_DELTAS)
    )
    checks.append(
        _check(
            "server-utility deltas on the 1..6 GHz sweep",
            "reference",
            server_ok,
            f"expected {SERVER_DELTAS}, got {tuple(round(d, 6) for d in server_deltas)}",
        )
    )
    return checks


def _utility_anchor() -> AnchorCheck:
    s = default_scenario()
    actual = dynamic_user_utility_value(s, Allocation(6.0 * GHZ, 1.0 * MBPS))
    return _check(
        "user utility at the corner, q=500 KB",
        "derived",
        _close(actual, USER_UTILITY_AT_CORNER, 1e-3),
        f"expected {USER_UTILITY_AT_CORNER} +/- 1e-3, got {actual:.9g}",
    )


def _diagnostic_anchors() -> list[AnchorCheck]:
    corner = Allocation(6.0 * GHZ, 1.0 * MBPS)
    raw = diagnostics(default_scenario(), corner)
    db = diagnostics(
        default_scenario(channel=ChannelSpec(20.0, 30.0, "db-to-linear")), corner
    )
    checks = [
        _check(
            "bandwidth-related server factor, raw SNR",
            "derived",
            _close(raw.b_part, B_PART_RAW, 1e-5),
            f"expected {B_PART_RAW} +/- 1e-5, got {raw.b_part:.9g}",
        ),
        _check(
            "bandwidth-related server factor, db-to-linear SNR",
            "reference",
            _close(db.b_part, B_PART_DB, 5e-4),
            f"expected {B_PART_DB} +/- 5e-4, got {db.b_part:.9g}",
        ),
        _check(
            "per-bit price slope inside the documented interval",
            "reference",
            P_PART_RANGE[0] <= raw.p_part <= P_PART_RANGE[1],
            f"expected within {P_PART_RANGE}, got {raw.p_part:.9g}",
        ),
    ]
    return checks


def _coupling_anchor() -> AnchorCheck:
    s = default_scenario()
    ratio = coupling_ratio(s)
    spec = SweepSpec(
        parameter="f_server",
        grid=tuple(f * GHZ for f in (1.0, 2.0, 3.0, 4.0, 5.0, 6.0)),
        scenario=s,
        allocation=Allocation(6.0 * GHZ, 0.1 * MBPS),
    )
    rows = run_sweep(spec)
    measured = [
        (b.u_user - a.u_user) / (b.u_server - a.u_server) for a, b in zip(rows, rows[1:])
    ]
    ok = ratio == 2.0 and all(abs(m - ratio) / ratio <= 1e-9 for m in measured)
    return _check(
        "user/server utility-change coupling on f_server sweeps",
        "closed-form",
        ok,
        f"expected ratio 2 at w2=0.5, measured {tuple(round(m, 12) for m in measured)}",
    )


def _corner_maximality_anchor() -> AnchorCheck:
    s = default_scenario()
    grid = surface_grid(s, 100, 100)
    argmax = grid.argmax_u_user()
    corner = Allocation(s.f_range[1], s.b_range[1])
    return _check(
        "100x100 grid argmax of the user utility at the box corner",
        "reference",
        argmax == corner,
        f"expected {corner}, got {argmax}",
    )


def _path_consistency_anchor() -> AnchorCheck:
    # Relative gaps are measured against the scale of the terms being
    # combined; a bare |a-b|/|a| would explode at utility zero crossings.
    rng = np.random.default_rng(20260809)
    worst_user = 0.0
    worst_server = 0.0
    for _ in range(1000):
        s = _random_scenario(rng)
        alloc = Allocation(rng.uniform(*s.f_range), rng.uniform(*s.b_range))
        summary = user_utility(s, alloc)
        direct = (
            s.w1 * summary.energy.e_save + s.w2 * summary.time.t_save - summary.price
        )
        user_scale = max(
            abs(summary.u_user),
            s.w1 * abs(summary.energy.e_save)
            + s.w2 * abs(summary.time.t_save)
            + summary.price,
        )
        worst_user = max(worst_user, abs(direct - summary.u_user) / user_scale)
        closed = server_utility(s, alloc)
        composed = summary.price - summary.time.t_offload + summary.w_revenue
        server_scale = max(
            abs(closed),
            summary.price + summary.time.t_offload + summary.w_revenue,
        )
        worst_server = max(worst_server, abs(closed - composed) / server_scale)
    ok = worst_user <= 1e-9 and worst_server <= 1e-9
    return _check(
        "utility path consistency on 1000 random inputs "
        "(absolute server levels documented as not anchored)",
        "closed-form",
        ok,
        f"worst relative deviations: user {worst_user:.3g}, server {worst_server:.3g}",
    )


def _curvature_anchor() -> AnchorCheck:
    rng = np.random.default_rng(20260810)
    all_definite = True
    worst_grad = 0.0
    for _ in range(1000):
        s = _random_scenario(rng)
        target = Allocation(rng.uniform(*s.f_range), rng.uniform(*s.b_range))
        pc = derive_coefficients(s, target.f_server, target.b)
        report = curvature_report(s, pc, target)
        all_definite &= report.negative_definite and report.lambda1 < 0 and report.lambda2 < 0
        grad = user_utility_gradient(s, pc, Allocation(report.critical_f, report.critical_b))
        worst_grad = max(worst_grad, abs(grad[0]), abs(grad[1]))
    ok = all_definite and worst_grad < 1e-9
    return _check(
        "Hessian negative-definite and critical point stationary on 1000 random draws",
        "closed-form",
        ok,
        f"all definite: {all_definite}, worst |gradient| at critical point: {worst_grad:.3g}",
    )


def _quadratic_gap_anchor() -> AnchorCheck:
    s = default_scenario()
    pc = derive_coefficients(s, 6.0 * GHZ, 1.0 * MBPS)
    u_max = USER_UTILITY_AT_CORNER
    worst = 0.0
    non_negative = True
    for frac_f in (-0.1, -0.05, 0.0, 0.05, 0.1):
        for frac_b in (-0.1, -0.05, 0.0, 0.05, 0.1):
            estimate = quadratic_gap(s, pc, (frac_f * 6.0 * GHZ, frac_b * 1.0 * MBPS))
            worst = max(worst, abs(estimate.actual_drop - estimate.predicted_drop) / u_max)
            non_negative &= estimate.actual_drop >= 0.0
    ok = worst <= 1e-2 and non_negative
    return _check(
        "second-order drop prediction within 1e-2 of actual for <=10% displacements",
        "derived",
        ok,
        f"worst normalized gap {worst:.3g}, drops non-negative: {non_negative}",
    )


def _optimizer_anchors(seed: int, n_trials: int) -> list[AnchorCheck]:
    s = default_scenario()
    cfg = SwarmConfig(seed=seed)
    report = compare_optimizers(s, cfg, n_trials)
    disc = report.stats["disc-pso"]
    means = {name: st.mean_iterations for name, st in report.stats.items()}
    stds = {name: st.std_value for name, st in report.stats.items()}

    checks = [
        _check(
            "search-gap reference value at the comparison setting",
            "derived",
            _close(report.u_max, USER_UTILITY_AT_CORNER, 1e-3),
            f"expected {USER_UTILITY_AT_CORNER} +/- 1e-3, got {report.u_max:.9g}",
        ),
        _check(
            f"disc-pso converged in all {n_trials} trials with mean iterations <= 5",
            "statistical",
            all(disc.converged_list) and disc.mean_iterations <= 5.0,
            f"converged {sum(disc.converged_list)}/{n_trials}, "
            f"mean iterations {disc.mean_iterations:.3g}",
        ),
        _check(
            "mean-iteration ordering disc-pso < pso < de < ga",
            "statistical",
            means["disc-pso"] < means["pso"] < means["de"] < means["ga"],
            f"means {{{', '.join(f'{k}: {v:.3g}' for k, v in means.items())}}}",
        ),
        _check(
            "disc-pso final-value spread is the smallest of the four",
            "statistical",
            stds["disc-pso"] == min(stds.values()),
            f"stds {{{', '.join(f'{k}: {v:.3g}' for k, v in stds.items())}}}",
        ),
    ]
    gap_ok = True
    detail_parts = []
    for name, stats in report.stats.items():
        for value, converged in zip(stats.value_list, stats.converged_list):
            if converged:
                gap_ok &= (report.u_max - value) / value < cfg.epsilon
        detail_parts.append(f"{name}: {sum(stats.converged_list)}/{n_trials} converged")
    checks.append(
        _check(
            "every converged trial satisfies the relative-gap inequality",
            "closed-form",
            gap_ok,
            "; ".join(detail_parts),
        )
    )
    return checks


def run_anchor_suite(*, seed: int = 0, n_trials: int = 50) -> list[AnchorCheck]:
    """Run every anchor; the optimizer block uses seeded paired trials."""
    checks: list[AnchorCheck] = []
    checks.extend(_price_anchors())
    checks.extend(_sweep_delta_anchors())
    checks.append(_utility_anchor())
    checks.extend(_diagnostic_anchors())
    checks.append(_coupling_anchor())
    checks.append(_corner_maximality_anchor())
    checks.append(_path_consistency_anchor())
    checks.append(_curvature_anchor())
    checks.append(_quadratic_gap_anchor())
    checks.extend(_optimizer_anchors(seed, n_trials))
    return checks
