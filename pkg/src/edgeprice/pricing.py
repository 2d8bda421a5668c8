"""Pricing models, user/server utilities, and their calculus.

Two pricing modes exist. Linear pricing charges a*f_server + b_coef*b and
is the setting in which the utility has an interior critical point (the
gradient/Hessian operations below). Dynamic pricing substitutes the
critical-point relation back into the price, making the price a decreasing
function of the purchased resources; it is the default objective for
sweeps and optimization.

The per-bit factors:

  chi     -- value of avoiding one bit of local execution (discounted
             energy plus discounted time),
  upsilon -- transfer burden per bit per unit of inverse bandwidth
             (discounted transfer time and energy, both link directions).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable, Sequence

from .offload import Allocation, EnergyBreakdown, TimeBreakdown, energy_breakdown, time_breakdown
from .scenario import Scenario


@dataclass(frozen=True)
class PriceCoefficients:
    """Linear price-plane slopes: a per Hz, b_coef per bit/s."""

    a: float
    b_coef: float


@dataclass(frozen=True)
class UtilitySummary:
    """Priced outcome of one allocation under one pricing mode."""

    price: float
    u_user: float
    u_server: float
    w_revenue: float
    chi: float
    upsilon: float
    time: TimeBreakdown
    energy: EnergyBreakdown


@dataclass(frozen=True)
class CurvatureReport:
    """Gradient, Hessian, eigenvalues, and critical point of the linear-priced utility."""

    grad_f: float
    grad_b: float
    h_ff: float
    h_bb: float
    h_fb: float
    h_bf: float
    lambda1: float
    lambda2: float
    negative_definite: bool
    critical_f: float
    critical_b: float


@dataclass(frozen=True)
class QuadraticGapEstimate:
    """Second-order prediction of the utility drop away from the maximum."""

    c1: float
    c2: float
    predicted_drop: float
    actual_drop: float


@dataclass(frozen=True)
class Diagnostics:
    """Small-magnitude factors explaining why price and server utility flatten."""

    b_part: float
    p_part: float
    q_grid: tuple[float, ...]
    u_affect: tuple[float, ...]


def chi(s: Scenario) -> float:
    """Per-bit value of avoided local execution: w1*k*c*f_local^2 + w2*c/f_local."""
    return s.w1 * s.k * s.c * s.f_local**2 + s.w2 * s.c / s.f_local


def upsilon(s: Scenario) -> float:
    """Per-bit transfer burden factor (multiplied by q/b in the utility)."""
    snr_up, snr_down = s.channel.effective_snrs()
    up = (s.w1 * s.p_u + s.w2) / math.log2(1.0 + snr_up)
    down = (s.w1 * s.p_d * s.alpha + s.w2 * s.alpha) / math.log2(1.0 + snr_down)
    return up + down


def linear_price(pc: PriceCoefficients, alloc: Allocation) -> float:
    return pc.a * alloc.f_server + pc.b_coef * alloc.b


def dynamic_price(s: Scenario, alloc: Allocation) -> float:
    """Price under dynamic pricing: w2*c*q/f_server + q*upsilon/b."""
    return s.w2 * s.c * s.q / alloc.f_server + s.q * upsilon(s) / alloc.b


def data_revenue(s: Scenario) -> float:
    """Reward the server draws from the offloaded data: mu*log2(1+q), q in bits."""
    return s.mu * math.log2(1.0 + s.q)


def linear_user_utility_value(s: Scenario, pc: PriceCoefficients, alloc: Allocation) -> float:
    """User utility under linear pricing (closed form)."""
    return (
        s.q * chi(s)
        - (s.q / alloc.f_server) * s.w2 * s.c
        - (s.q / alloc.b) * upsilon(s)
        - pc.a * alloc.f_server
        - pc.b_coef * alloc.b
    )


def dynamic_user_utility_value(s: Scenario, alloc: Allocation) -> float:
    """User utility under dynamic pricing (price substituted into the closed form)."""
    return (
        s.q * chi(s)
        - 2.0 * (s.q / alloc.f_server) * s.w2 * s.c
        - 2.0 * (s.q / alloc.b) * upsilon(s)
    )


def dynamic_utility_objective(s: Scenario) -> Callable[[Allocation], float]:
    """The dynamic-mode user utility as an allocation -> value objective.

    Precomputes the scenario factors so optimizers can evaluate it cheaply.
    """
    q_chi = s.q * chi(s)
    q_w2c = 2.0 * s.q * s.w2 * s.c
    q_ups = 2.0 * s.q * upsilon(s)

    def objective(alloc: Allocation) -> float:
        return q_chi - q_w2c / alloc.f_server - q_ups / alloc.b

    return objective


def user_utility(
    s: Scenario,
    alloc: Allocation,
    coefficients: PriceCoefficients | None = None,
) -> UtilitySummary:
    """Full priced outcome of an allocation.

    ``coefficients=None`` selects dynamic pricing (the default objective);
    passing PriceCoefficients selects linear pricing. The server utility is
    always price - t_offload + data revenue.
    """
    times = time_breakdown(s, alloc)
    energy = energy_breakdown(s, alloc)
    if coefficients is None:
        price = dynamic_price(s, alloc)
        u_user = dynamic_user_utility_value(s, alloc)
    else:
        price = linear_price(coefficients, alloc)
        u_user = linear_user_utility_value(s, coefficients, alloc)
    revenue = data_revenue(s)
    return UtilitySummary(
        price=price,
        u_user=u_user,
        u_server=price - times.t_offload + revenue,
        w_revenue=revenue,
        chi=chi(s),
        upsilon=upsilon(s),
        time=times,
        energy=energy,
    )


def user_utility_gradient(
    s: Scenario, pc: PriceCoefficients, alloc: Allocation
) -> tuple[float, float]:
    """First partials of the linear-priced user utility w.r.t. (f_server, b)."""
    grad_f = s.w2 * s.c * s.q / alloc.f_server**2 - pc.a
    grad_b = s.q * upsilon(s) / alloc.b**2 - pc.b_coef
    return grad_f, grad_b


def critical_point(s: Scenario, pc: PriceCoefficients) -> Allocation:
    """Stationary point of the linear-priced utility: (sqrt(w2*c*q/a), sqrt(q*upsilon/b_coef))."""
    return Allocation(
        f_server=math.sqrt(s.w2 * s.c * s.q / pc.a),
        b=math.sqrt(s.q * upsilon(s) / pc.b_coef),
    )


def curvature_report(s: Scenario, pc: PriceCoefficients, alloc: Allocation) -> CurvatureReport:
    """Gradient at ``alloc`` plus the (diagonal) Hessian and critical point.

    The mixed partials vanish identically, so the eigenvalues are the
    diagonal entries and negative definiteness reduces to both being
    negative, which holds for every valid input.
    """
    grad_f, grad_b = user_utility_gradient(s, pc, alloc)
    h_ff = -2.0 * s.w2 * s.c * s.q / alloc.f_server**3
    h_bb = -2.0 * s.q * upsilon(s) / alloc.b**3
    crit = critical_point(s, pc)
    return CurvatureReport(
        grad_f=grad_f,
        grad_b=grad_b,
        h_ff=h_ff,
        h_bb=h_bb,
        h_fb=0.0,
        h_bf=0.0,
        lambda1=h_ff,
        lambda2=h_bb,
        negative_definite=h_ff < 0.0 and h_bb < 0.0,
        critical_f=crit.f_server,
        critical_b=crit.b,
    )


def derive_coefficients(s: Scenario, f_target: float, b_target: float) -> PriceCoefficients:
    """Price coefficients whose critical point lands on the given targets."""
    return PriceCoefficients(
        a=s.w2 * s.c * s.q / f_target**2,
        b_coef=s.q * upsilon(s) / b_target**2,
    )


def quadratic_gap(
    s: Scenario, pc: PriceCoefficients, displacement: tuple[float, float]
) -> QuadraticGapEstimate:
    """Second-order Taylor drop versus the actual drop away from the maximum.

    The Hessian is diagonal, so the eigen-directions are the coordinate
    axes and the displacement coefficients (c1, c2) displace f_server and b
    directly. The displaced point must stay strictly positive.
    """
    c1, c2 = displacement
    crit = critical_point(s, pc)
    displaced = Allocation(f_server=crit.f_server + c1, b=crit.b + c2)
    if displaced.f_server <= 0.0 or displaced.b <= 0.0:
        raise ValueError(
            f"displaced point ({displaced.f_server}, {displaced.b}) leaves the positive domain"
        )
    report = curvature_report(s, pc, crit)
    predicted = 0.5 * (abs(report.lambda1) * c1**2 + abs(report.lambda2) * c2**2)
    u_max = linear_user_utility_value(s, pc, crit)
    actual = u_max - linear_user_utility_value(s, pc, displaced)
    return QuadraticGapEstimate(c1=c1, c2=c2, predicted_drop=predicted, actual_drop=actual)


def _bandwidth_server_factor(s: Scenario) -> float:
    """Numerator of the bandwidth-dependent server-utility term (small, negative)."""
    snr_up, snr_down = s.channel.effective_snrs()
    return (s.w1 * s.p_u + s.w2 - 1.0) / math.log2(1.0 + snr_up) + (
        s.w1 * s.p_d * s.alpha + s.w2 * s.alpha - s.alpha
    ) / math.log2(1.0 + snr_down)


def server_utility(s: Scenario, alloc: Allocation) -> float:
    """Server utility under dynamic pricing (closed form).

    Equals dynamic_price - t_offload + data_revenue; both paths agree to
    floating-point accuracy and the tests pin that equivalence.
    """
    return (
        s.c * s.q * (s.w2 - 1.0) / alloc.f_server
        + (s.q / alloc.b) * _bandwidth_server_factor(s)
        + data_revenue(s)
    )


def diagnostics(
    s: Scenario, alloc: Allocation, q_grid: Sequence[float] | None = None
) -> Diagnostics:
    """Factors behind the flat price/server-utility trends.

    b_part is the bandwidth-related numerator of the server utility; p_part
    the per-bit price slope at the given allocation; u_affect the
    q-dependent part of the server utility (-t_offload + data revenue),
    evaluated on ``q_grid`` (default: the scenario's own q).
    """
    b_part = _bandwidth_server_factor(s)
    p_part = s.w2 * s.c / alloc.f_server + upsilon(s) / alloc.b

    grid = tuple(q_grid) if q_grid is not None else (s.q,)
    u_affect = []
    for q in grid:
        at_q = replace(s, q=q)
        times = time_breakdown(at_q, alloc)
        u_affect.append(-times.t_offload + data_revenue(at_q))
    return Diagnostics(b_part=b_part, p_part=p_part, q_grid=grid, u_affect=tuple(u_affect))


def coupling_ratio(s: Scenario) -> float:
    """Exact ratio of user-utility to server-utility change on any f_server step.

    Under dynamic pricing at fixed q and b the ratio is 2*w2/(1-w2),
    independent of which step is taken.
    """
    if not 0.0 < s.w2 < 1.0:
        raise ValueError(f"coupling ratio needs w2 in (0, 1), got {s.w2!r}")
    return 2.0 * s.w2 / (1.0 - s.w2)
