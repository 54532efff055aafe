"""Exact Riemann solver for the pressureless transport equations.

    rho_t + (rho u)_x = 0,    (rho u)_t + (rho u^2)_x = 0

Diverging data (u_- < u_+) open a vacuum between two contacts; converging
data (u_- > u_+) concentrate mass on a delta shock x = sigma t whose weight
grows linearly in t.  The weak-form and generalized Rankine-Hugoniot
checkers are shared with the flux-perturbed transport system, where the
fluxes become rho u - 2 eps1 u and rho u^2 - eps1 u^2.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from scipy import integrate

from .core import (
    ConstantDensityFan,
    Contact,
    DeltaShock,
    FluxParams,
    NumericalError,
    RiemannSolution,
    State,
    System,
    ValidationError,
    VacuumFan,
    validate,
)
from .testfunctions import TestFunction

QUAD_TOL = 1e-10


@dataclass(frozen=True)
class DeltaShockData:
    """Speed, geometric weight rate w(t)/t and the step part of a delta shock."""

    sigma: float
    w_rate: float
    step_left: State
    step_right: State

    @property
    def mass_rate(self) -> float:
        """d/dt of w(t)*sqrt(1+sigma^2)."""
        return self.w_rate * math.sqrt(1.0 + self.sigma**2)

    def weight(self, t: float) -> float:
        return self.w_rate * t


def check_overcompressive(sigma: float, left: State, right: State) -> bool:
    return right.u < sigma < left.u


def zero_pressure_delta(left: State, right: State) -> DeltaShockData:
    """Delta-shock speed and weight rate for converging data u_- > u_+."""
    if not left.u > right.u:
        raise ValidationError("delta shock needs u_- > u_+")
    if left.rho <= 0 or right.rho <= 0:
        raise ValidationError("delta shock needs rho_-, rho_+ > 0")
    sl, sr = math.sqrt(left.rho), math.sqrt(right.rho)
    sigma = (sr * right.u + sl * left.u) / (sr + sl)
    w_rate = sl * sr * (left.u - right.u) / math.sqrt(1.0 + sigma**2)
    return DeltaShockData(sigma, w_rate, left, right)


def _delta_wave(d: DeltaShockData) -> DeltaShock:
    m = d.mass_rate
    return DeltaShock(sigma=d.sigma, weight_rate_mass=m, weight_rate_momentum=d.sigma * m)


def solve_zero_pressure(left: State, right: State) -> RiemannSolution:
    params = FluxParams(0.0, 0.0, 2.0)
    validate(left, right, params, System.ZERO_PRESSURE)
    if left.u < right.u:
        waves = (Contact(left.u), VacuumFan(left.u, right.u), Contact(right.u))
        middles = (State(0.0, left.u), State(0.0, right.u))
    elif left.u > right.u:
        d = zero_pressure_delta(left, right)
        waves, middles = (_delta_wave(d),), ()
    elif left.rho != right.rho:
        waves, middles = (Contact(left.u),), ()
    else:
        waves, middles = (), ()
    return RiemannSolution(System.ZERO_PRESSURE, params, left, right, waves, middles)


def grh_residual(d: DeltaShockData, left: State, right: State, eps1: float = 0.0):
    """Residuals of the generalized Rankine-Hugoniot relation.

    The location x(t) = sigma t and weight w(t) = w_rate t are linear, so each
    derivative is a constant and the residuals are exact.  ``eps1 > 0`` uses
    the perturbed fluxes.
    """
    sigma = d.sigma
    drho = right.rho - left.rho
    dmass_flux = (right.rho * right.u - 2 * eps1 * right.u) - (left.rho * left.u - 2 * eps1 * left.u)
    dmom = right.rho * right.u - left.rho * left.u
    dmom_flux = (right.rho - eps1) * right.u**2 - (left.rho - eps1) * left.u**2
    dx_dt = sigma  # x(t) = sigma * t
    r1 = dx_dt - sigma
    r2 = d.mass_rate - (sigma * drho - dmass_flux)
    r3 = d.mass_rate * sigma - (sigma * dmom - dmom_flux)
    return r1, r2, r3


def grh_residual_zp(d: DeltaShockData, left: State, right: State):
    return grh_residual(d, left, right, 0.0)


# -- weak form -----------------------------------------------------------------


def _pieces(sol: RiemannSolution):
    """Regular part of the solution as (xi_lo, xi_hi, state_fn) pieces plus
    the delta shocks found on the way."""
    pieces, deltas = [], []
    lo, current = -math.inf, sol.left
    for i, w in enumerate(sol.waves):
        a, b = w.edges
        pieces.append((lo, a, _const(current)))
        if isinstance(w, VacuumFan):
            pieces.append((a, b, lambda xi: (0.0, xi)))
        elif isinstance(w, ConstantDensityFan):
            pieces.append((a, b, lambda xi, r=w.rho: (r, xi)))
        elif isinstance(w, DeltaShock):
            deltas.append(w)
        elif not isinstance(w, Contact):
            raise ValidationError(f"weak-form checker does not handle {w.kind} waves")
        lo = b
        current = sol.middles[i] if i < len(sol.middles) else sol.right
    pieces.append((lo, math.inf, _const(sol.right)))
    return pieces, deltas


def _const(s: State):
    return lambda xi: (s.rho, s.u)


def _quad(f, a, b, what):
    val, err, info, *msg = integrate.quad(f, a, b, epsabs=QUAD_TOL * 1e-1, epsrel=1e-12,
                                          limit=200, full_output=1)
    if msg and err > QUAD_TOL:
        raise NumericalError(f"quadrature for {what} did not reach {QUAD_TOL}: {msg[0]}")
    return val


def weak_form_residual(sol: RiemannSolution, test: TestFunction) -> tuple[float, float]:
    """Distributional residuals <U, phi_t> + <F(U), phi_x> for a transport solution.

    The regular part is integrated piece by piece over the support box; each
    delta shock adds the line integral of m*t*(phi_t + sigma*phi_x) along
    x = sigma t, the arclength factor having cancelled against the weight.
    """
    if sol.system is System.ISENTROPIC:
        raise ValidationError("weak_form_residual covers the transport systems only")
    e1 = sol.params.eps1
    pieces, deltas = _pieces(sol)

    def integrand(t, x, fn, component):
        rho, u = fn(x / t)
        pt, px = test.grad(t, x)
        if component == 0:
            return rho * pt + (rho * u - 2 * e1 * u) * px
        return rho * u * pt + (rho - e1) * u * u * px

    def inner(t, component):
        total = 0.0
        for xi_lo, xi_hi, fn in pieces:
            a = max(test.x_lo, xi_lo * t) if xi_lo > -math.inf else test.x_lo
            b = min(test.x_hi, xi_hi * t) if xi_hi < math.inf else test.x_hi
            if b > a:
                total += _quad(lambda x: integrand(t, x, fn, component), a, b, "inner x")
        return total

    res = []
    for component in (0, 1):
        regular = _quad(lambda t: inner(t, component), test.t_lo, test.t_hi, "outer t")
        singular = 0.0
        for d in deltas:
            rate = d.weight_rate_mass if component == 0 else d.weight_rate_momentum

            def line(t, d=d, rate=rate):
                pt, px = test.grad(t, d.sigma * t)
                return rate * t * (pt + d.sigma * px)

            singular += _quad(line, test.t_lo, test.t_hi, "delta line")
        res.append(regular + singular)
    return res[0], res[1]


def weak_form_residual_zp(sol: RiemannSolution, test: TestFunction) -> tuple[float, float]:
    if sol.system is not System.ZERO_PRESSURE:
        raise ValidationError("expected a zero-pressure solution")
    return weak_form_residual(sol, test)
