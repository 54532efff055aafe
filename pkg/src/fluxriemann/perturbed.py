"""Riemann solver for the flux-perturbed transport system

    rho_t + (rho u - 2 eps1 u)_x = 0,    (rho u)_t + (rho u^2 - eps1 u^2)_x = 0.

The vacuum of the pressureless system is replaced by a fan of constant
density 2*eps1, and converging data still produce a delta shock whose speed
and weight depend on eps1 and tend to the pressureless values as eps1 -> 0.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .core import (
    ConstantDensityFan,
    Contact,
    ContractError,
    DeltaShock,
    FluxParams,
    RiemannSolution,
    State,
    System,
    ValidationError,
    validate,
)
from .transport import DeltaShockData, zero_pressure_delta


def delta_speed_eps1(left: State, right: State, eps1: float) -> float:
    """Delta-shock speed of the perturbed system.

    Evaluates

        sigma = ([(rho - eps1) u] + sqrt((rho_- - eps1)(rho_+ - eps1)) (u_- - u_+)) / [rho]

    after cancelling the common factor sqrt(rho_+ - eps1) - sqrt(rho_- - eps1)
    from numerator and denominator, which leaves the weighted mean
    (sqrt(b) u_+ + sqrt(a) u_-) / (sqrt(a) + sqrt(b)) with a = rho_- - eps1,
    b = rho_+ - eps1.  The mean has no cancellation for nearly equal densities
    and equals (u_- + u_+)/2 when [rho] = 0.
    """
    if not left.u > right.u:
        raise ValidationError("delta shock needs u_- > u_+")
    if eps1 < 0 or not (left.rho > 2 * eps1 and right.rho > 2 * eps1):
        raise ValidationError("delta shock needs rho_-, rho_+ > 2*eps1 >= 0")
    if left.rho == right.rho:
        sigma = 0.5 * (left.u + right.u)
    else:
        sa = math.sqrt(left.rho - eps1)
        sb = math.sqrt(right.rho - eps1)
        sigma = (sb * right.u + sa * left.u) / (sa + sb)
    if not right.u < sigma < left.u:
        raise ContractError(f"entropy condition fails: sigma={sigma} for u_-={left.u}, u_+={right.u}")
    return sigma


def delta_mass_rate_eps1(left: State, right: State, eps1: float) -> float:
    """w(t)*sqrt(1+sigma^2)/t = [eps1 u] + sqrt((rho_- - eps1)(rho_+ - eps1)) (u_- - u_+)."""
    root = math.sqrt((left.rho - eps1) * (right.rho - eps1))
    return (root - eps1) * (left.u - right.u)


def delta_data_eps1(left: State, right: State, eps1: float) -> DeltaShockData:
    sigma = delta_speed_eps1(left, right, eps1)
    w_rate = delta_mass_rate_eps1(left, right, eps1) / math.sqrt(1.0 + sigma**2)
    return DeltaShockData(sigma, w_rate, left, right)


def quadratic_residual(sigma: float, left: State, right: State, eps1: float) -> float:
    """Relative residual of the location quadratic at x = sigma*t, t = 1.

    [rho] sigma^2 / 2 - [rho u] sigma + ([2 eps1 u] sigma + [rho u^2 - eps1 u^2]) / 2
    """
    drho = right.rho - left.rho
    dmom = right.rho * right.u - left.rho * left.u
    du = right.u - left.u
    dflux = (right.rho - eps1) * right.u**2 - (left.rho - eps1) * left.u**2
    terms = (0.5 * drho * sigma**2, -dmom * sigma, eps1 * du * sigma, 0.5 * dflux)
    scale = max(1.0, max(abs(x) for x in terms))
    return sum(terms) / scale


def solve_perturbed_transport(left: State, right: State, eps1: float) -> RiemannSolution:
    params = FluxParams(eps1, 0.0, 2.0)
    validate(left, right, params, System.PERTURBED_TRANSPORT)
    if left.u < right.u:
        floor = params.rho_floor
        waves = (Contact(left.u), ConstantDensityFan(left.u, right.u, floor), Contact(right.u))
        middles = (State(floor, left.u), State(floor, right.u))
    elif left.u > right.u:
        d = delta_data_eps1(left, right, eps1)
        m = d.mass_rate
        waves = (DeltaShock(d.sigma, m, d.sigma * m),)
        middles = ()
    elif left.rho != right.rho:
        waves, middles = (Contact(left.u),), ()
    else:
        waves, middles = (), ()
    return RiemannSolution(System.PERTURBED_TRANSPORT, params, left, right, waves, middles)


@dataclass(frozen=True)
class Eps1Row:
    eps1: float
    sigma: float
    w_rate: float


def eps1_limit_table(left: State, right: State, schedule) -> list[Eps1Row]:
    """Delta-shock speed and geometric weight rate along a decreasing eps1 schedule.

    An entry of 0 gives the pressureless closed forms.
    """
    schedule = [float(e) for e in schedule]
    if not left.u > right.u:
        raise ValidationError("eps1_limit_table needs u_- > u_+")
    if any(b >= a for a, b in zip(schedule, schedule[1:])):
        raise ValidationError("schedule must be strictly decreasing")
    if schedule and (schedule[-1] < 0 or not 2 * schedule[0] < min(left.rho, right.rho)):
        raise ValidationError("schedule entries must satisfy 0 <= eps1 < min(rho_-, rho_+)/2")
    rows = []
    for e in schedule:
        d = zero_pressure_delta(left, right) if e == 0 else delta_data_eps1(left, right, e)
        rows.append(Eps1Row(e, d.sigma, d.w_rate))
    return rows
