"""Shared types, parameter checks and characteristic speeds.

Every solver in the package works on the same small set of immutable values:
``State`` (density, velocity), ``FluxParams`` (eps1, eps2, gamma), the wave
records and ``RiemannSolution``.  The flux of the two-parameter system is

    F(rho, u) = (rho*u - 2*eps1*u,  rho*u**2 - eps1*u**2 + eps2*rho**gamma/gamma)

which reduces to the pressureless transport flux when eps1 = eps2 = 0.
"""
from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass, field
from typing import Any, Union

REL_TOL = 1e-12


class FluxRiemannError(Exception):
    """Base class for all package errors."""


class ValidationError(FluxRiemannError, ValueError):
    """Riemann data or parameters are not admissible."""


class ParameterError(ValidationError):
    """FluxParams violate their invariants."""


class DomainError(ValidationError):
    """A function was evaluated outside its domain (e.g. rho < 2*eps1)."""


class ContractError(FluxRiemannError, ValueError):
    """A precondition of an operation does not hold for the given input."""


class NumericalError(FluxRiemannError, RuntimeError):
    """Quadrature or root finding failed to converge."""


class System(str, enum.Enum):
    ZERO_PRESSURE = "zp"
    PERTURBED_TRANSPORT = "pt"
    ISENTROPIC = "ise"


@dataclass(frozen=True)
class State:
    rho: float
    u: float

    def __post_init__(self):
        if not (math.isfinite(self.rho) and math.isfinite(self.u)):
            raise ValidationError(f"non-finite state ({self.rho}, {self.u})")
        if self.rho < 0:
            raise ValidationError(f"negative density rho={self.rho}")

    def reflected(self) -> State:
        return State(self.rho, -self.u)


@dataclass(frozen=True)
class FluxParams:
    eps1: float = 0.0
    eps2: float = 0.0
    gamma: float = 2.0

    def __post_init__(self):
        for name in ("eps1", "eps2", "gamma"):
            if not math.isfinite(getattr(self, name)):
                raise ParameterError(f"{name} must be finite")
        if self.gamma <= 1:
            raise ParameterError(f"gamma must be > 1, got {self.gamma}")
        if self.eps1 < 0:
            raise ParameterError(f"eps1 must be >= 0, got {self.eps1}")
        if self.eps2 < 0:
            raise ParameterError(f"eps2 must be >= 0, got {self.eps2}")

    @property
    def rho_floor(self) -> float:
        return 2.0 * self.eps1


# -- waves -------------------------------------------------------------------


@dataclass(frozen=True)
class Shock:
    family: int
    speed: float
    left: State
    right: State
    kind = "shock"

    @property
    def edges(self):
        return self.speed, self.speed


@dataclass(frozen=True)
class Rarefaction:
    """Centred fan.  ``xi_head``/``xi_tail`` are its left/right edges in xi;
    ``anchor`` is the outer constant state and ``inner`` the state on the
    side facing the intermediate region."""

    family: int
    xi_head: float
    xi_tail: float
    anchor: State
    inner: State
    kind = "rarefaction"

    @property
    def edges(self):
        return self.xi_head, self.xi_tail


@dataclass(frozen=True)
class Contact:
    speed: float
    kind = "contact"

    @property
    def edges(self):
        return self.speed, self.speed


@dataclass(frozen=True)
class DeltaShock:
    """Weighted delta shock on the line x = sigma*t.

    ``weight_rate_mass`` is w(t)*sqrt(1+sigma^2)/t, i.e. the mass carried by
    the line per unit time; ``weight_rate_momentum`` is the matching momentum
    rate.  The geometric weight per unit time is ``w_rate``.
    """

    sigma: float
    weight_rate_mass: float
    weight_rate_momentum: float
    kind = "delta_shock"

    @property
    def w_rate(self) -> float:
        return self.weight_rate_mass / math.sqrt(1.0 + self.sigma**2)

    @property
    def w_rate_momentum(self) -> float:
        return self.weight_rate_momentum / math.sqrt(1.0 + self.sigma**2)

    def weight(self, t: float) -> float:
        """Geometric weight w(t) of the delta measure."""
        return self.w_rate * t

    @property
    def edges(self):
        return self.sigma, self.sigma


@dataclass(frozen=True)
class VacuumFan:
    xi_left: float
    xi_right: float
    kind = "vacuum_fan"

    @property
    def edges(self):
        return self.xi_left, self.xi_right


@dataclass(frozen=True)
class ConstantDensityFan:
    xi_left: float
    xi_right: float
    rho: float
    kind = "constant_density_fan"

    @property
    def edges(self):
        return self.xi_left, self.xi_right


Wave = Union[Shock, Rarefaction, Contact, DeltaShock, VacuumFan, ConstantDensityFan]


@dataclass(frozen=True)
class RiemannSolution:
    system: System
    params: FluxParams
    left: State
    right: State
    waves: tuple = ()
    middles: tuple = ()
    diagnostics: dict[str, Any] = field(default_factory=dict, compare=False)


# -- equation of state and characteristic speeds -----------------------------


def pressure(rho: float, params: FluxParams) -> float:
    """p(rho) = rho**gamma / gamma."""
    if rho < 0:
        raise DomainError(f"pressure needs rho >= 0, got {rho}")
    return rho**params.gamma / params.gamma


def sound_speed(rho: float, params: FluxParams) -> float:
    """sqrt(eps2 * rho**(gamma-2) * (rho - 2 eps1)); zero on the density floor."""
    excess = rho - params.rho_floor
    if excess < 0:
        if excess > -REL_TOL * max(1.0, rho):
            excess = 0.0
        else:
            raise DomainError(f"rho={rho} below the floor 2*eps1={params.rho_floor}")
    if params.eps2 == 0 or excess == 0:
        return 0.0
    return math.sqrt(params.eps2 * rho ** (params.gamma - 2) * excess)


def eigenvalues(s: State, params: FluxParams) -> tuple[float, float]:
    c = sound_speed(s.rho, params)
    return s.u - c, s.u + c


def eigenvalue(family: int, s: State, params: FluxParams) -> float:
    lam1, lam2 = eigenvalues(s, params)
    return lam1 if family == 1 else lam2


def flux(s: State, params: FluxParams) -> tuple[float, float]:
    """Physical flux of the flux-approximated system."""
    e1 = params.eps1
    mass = s.rho * s.u - 2.0 * e1 * s.u
    mom = s.rho * s.u**2 - e1 * s.u**2
    if params.eps2:
        mom += params.eps2 * pressure(s.rho, params)
    return mass, mom


def rh_residual(speed: float, left: State, right: State, params: FluxParams):
    """Both Rankine-Hugoniot residuals -speed*[U] + [F(U)] across a jump."""
    fl, fr = flux(left, params), flux(right, params)
    r1 = -speed * (right.rho - left.rho) + (fr[0] - fl[0])
    r2 = -speed * (right.rho * right.u - left.rho * left.u) + (fr[1] - fl[1])
    return r1, r2


def shock_speed(left: State, right: State, params: FluxParams) -> float:
    """Shock speed from the mass component of the RH relation."""
    jump = right.rho - left.rho
    if jump == 0:
        raise DomainError("shock speed undefined for equal densities")
    fl, fr = flux(left, params), flux(right, params)
    return (fr[0] - fl[0]) / jump


def lax_satisfied(shock: Shock, params: FluxParams) -> bool:
    """Strict Lax inequalities for a backward (1) or forward (2) shock."""
    l1, l2 = eigenvalues(shock.left, params)
    r1, r2 = eigenvalues(shock.right, params)
    s = shock.speed
    if shock.family == 1:
        return s < l1 and r1 < s < r2
    return l1 < s < l2 and r2 < s


# -- validation ----------------------------------------------------------------


def validate(left: State, right: State, params: FluxParams, system: System | str,
             *, allow_eps1_zero: bool = False) -> None:
    """Check admissibility of Riemann data for ``system``; raise on violation.

    ``allow_eps1_zero`` admits eps1 = 0 for the isentropic system, which is the
    plain isentropic Euler case used by the library's analytic checks.
    """
    system = System(system)
    if params.gamma <= 1:
        raise ParameterError("gamma must be > 1")
    if params.gamma > 3:
        warnings.warn(f"gamma={params.gamma} lies outside (1, 3]; no reference checks there",
                      stacklevel=2)
    if system is System.ZERO_PRESSURE:
        if params.eps1 != 0 or params.eps2 != 0:
            raise ParameterError("zero-pressure system needs eps1 = eps2 = 0")
        return
    if system is System.PERTURBED_TRANSPORT:
        if params.eps2 != 0:
            raise ParameterError("perturbed transport system needs eps2 = 0")
        if params.eps1 <= 0:
            raise ParameterError("perturbed transport system needs eps1 > 0")
    else:
        if params.eps2 <= 0:
            raise ParameterError("isentropic system needs eps2 > 0")
        if params.eps1 <= 0 and not (allow_eps1_zero and params.eps1 == 0):
            raise ParameterError("isentropic system needs eps1 > 0")
    floor = params.rho_floor
    for side, s in (("left", left), ("right", right)):
        if not s.rho > floor:
            raise ValidationError(
                f"{side} density violates rho > 2*eps1: rho={s.rho!r}, 2*eps1={floor!r}"
            )


def check_solution(sol: RiemannSolution, rh_tol: float = 1e-9) -> None:
    """Raise ``ContractError`` if ``sol`` violates a RiemannSolution invariant."""
    waves = sol.waves
    if len(sol.middles) != max(0, len(waves) - 1):
        raise ContractError(f"{len(sol.middles)} middle states for {len(waves)} waves")
    last = -math.inf
    for w in waves:
        lo, hi = w.edges
        if lo > hi or lo < last - REL_TOL * max(1.0, abs(lo)):
            raise ContractError(f"wave edges out of order at {w}")
        last = hi
    for w in waves:
        if isinstance(w, Shock):
            r = rh_residual(w.speed, w.left, w.right, sol.params)
            scale = max(1.0, *(abs(x) for x in flux(w.left, sol.params) + flux(w.right, sol.params)),
                        abs(w.speed) * max(w.left.rho, w.right.rho))
            if max(abs(r[0]), abs(r[1])) > rh_tol * scale:
                raise ContractError(f"RH residual {r} too large for {w}")
            if not lax_satisfied(w, sol.params):
                raise ContractError(f"Lax inequalities fail for {w}")
        elif isinstance(w, DeltaShock):
            ul, ur = sol.left.u, sol.right.u
            if not ur < w.sigma < ul:
                raise ContractError(f"delta shock speed {w.sigma} not in ({ur}, {ul})")
            if not w.weight_rate_mass > 0:
                raise ContractError("delta shock weight must be positive")
        elif isinstance(w, ConstantDensityFan):
            if w.rho != sol.params.rho_floor:
                raise ContractError("constant-density fan must sit at rho = 2*eps1")
