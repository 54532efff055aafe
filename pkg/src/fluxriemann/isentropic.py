"""Exact Riemann solver for the two-parameter flux-approximated Euler system

    rho_t + (rho u - 2 eps1 u)_x = 0
    (rho u)_t + (rho u^2 - eps1 u^2 + eps2 rho^gamma / gamma)_x = 0,   rho > 2 eps1.

Both fields are genuinely nonlinear.  The backward wave curve through the
left state and the forward wave curve through the right state are monotone
in rho, so the intermediate density is the unique root of

    g(rho) = u_left_curve(rho) - u_right_curve(rho),

a strictly decreasing function.  When g is already non-positive on the
density floor rho = 2 eps1, the two rarefactions are separated by a fan of
constant density 2 eps1 instead of an intermediate constant state.
"""
from __future__ import annotations

import enum
import math
import sys
from dataclasses import dataclass

from scipy import integrate, optimize

from .core import (
    REL_TOL,
    ConstantDensityFan,
    Contact,
    ContractError,
    DeltaShock,
    DomainError,
    FluxParams,
    NumericalError,
    Rarefaction,
    RiemannSolution,
    Shock,
    State,
    System,
    VacuumFan,
    ParameterError,
    eigenvalue,
    lax_satisfied,
    validate,
)

QUAD_ABS_TOL = 1e-11
ROOT_REL_TOL = 1e-12
ROOT_MAXITER = 200
BRACKET_CAP = 2.0**60


class Region(str, enum.Enum):
    SS = "SS"
    SR = "SR"
    RS = "RS"
    RR = "RR"
    RR_CD = "RR_CD"


# -- wave curves -----------------------------------------------------------------


def rarefaction_integral(a: float, b: float, params: FluxParams) -> float:
    """Integral of sqrt(eps2 s^(gamma-2) / (s - 2 eps1)) over [a, b].

    Substituting s = 2 eps1 + tau^2 removes the inverse square root at the
    density floor; the transformed integrand 2 sqrt(eps2 (2 eps1 + tau^2)^(gamma-2))
    is smooth.
    """
    floor = params.rho_floor
    if a < floor:
        raise DomainError(f"rarefaction integral needs a >= 2*eps1, got a={a}, 2*eps1={floor}")
    if b < a:
        raise DomainError(f"rarefaction integral needs a <= b, got [{a}, {b}]")
    if a == b or params.eps2 == 0:
        return 0.0
    ta, tb = math.sqrt(a - floor), math.sqrt(b - floor)
    e2, gm2 = params.eps2, params.gamma - 2.0
    if gm2 == 0.0:
        return 2.0 * math.sqrt(e2) * (tb - ta)

    def f(tau):
        return 2.0 * math.sqrt(e2 * (floor + tau * tau) ** gm2)

    val, err, _, *msg = integrate.quad(f, ta, tb, epsabs=QUAD_ABS_TOL, epsrel=1e-13,
                                       limit=200, full_output=1)
    if msg and err > QUAD_ABS_TOL:
        raise NumericalError(f"rarefaction integral over [{a}, {b}] failed: {msg[0]}")
    return val


def _shock_jump(rho: float, rho_a: float, params: FluxParams) -> float:
    """|u - u_a| along the shock curve between densities rho_a and rho."""
    denom = params.gamma * (rho_a * rho - params.eps1 * (rho + rho_a))
    if not denom > 0:
        raise DomainError(f"shock denominator rho_l*rho_r - eps1*(rho_l+rho_r) <= 0 "
                          f"for densities {rho_a}, {rho}")
    g = params.gamma
    num = params.eps2 * (rho - rho_a) * (rho**g - rho_a**g)
    return math.sqrt(num / denom)


def _check_density(rho: float, params: FluxParams) -> None:
    if rho < params.rho_floor:
        raise DomainError(f"rho={rho} below the floor 2*eps1={params.rho_floor}")


def wave_curve_u_from_left(rho: float, left: State, params: FluxParams) -> float:
    """Velocity on the backward wave curve through ``left`` at density ``rho``."""
    _check_density(rho, params)
    if rho <= left.rho:
        return left.u + rarefaction_integral(rho, left.rho, params)
    return left.u - _shock_jump(rho, left.rho, params)


def wave_curve_u_from_right(rho: float, right: State, params: FluxParams) -> float:
    """Velocity of states that reach ``right`` through a forward wave."""
    _check_density(rho, params)
    if rho <= right.rho:
        return right.u - rarefaction_integral(rho, right.rho, params)
    return right.u + _shock_jump(rho, right.rho, params)


def forward_shock_floor_value(left: State, params: FluxParams) -> float:
    """Limit of the forward shock curve from ``left`` as rho -> 2 eps1."""
    g = params.gamma
    return left.u - math.sqrt(params.eps2 * (left.rho**g - params.rho_floor**g) / (g * params.eps1))


def constant_density_edges(left: State, right: State, params: FluxParams) -> tuple[float, float]:
    """Where the two rarefaction curves meet the density floor: (u1, u2)."""
    floor = params.rho_floor
    u1 = left.u + rarefaction_integral(floor, left.rho, params)
    u2 = right.u - rarefaction_integral(floor, right.rho, params)
    return u1, u2


# -- intermediate state -------------------------------------------------------


@dataclass(frozen=True)
class IntermediateState:
    region: Region
    rho_star: float
    u_star: float
    sigma1: float | None = None
    sigma2: float | None = None
    iterations: int = 0

    @property
    def state(self) -> State:
        return State(self.rho_star, self.u_star)


def _g(rho, left, right, params):
    return wave_curve_u_from_left(rho, left, params) - wave_curve_u_from_right(rho, right, params)


def _region_for(rho_star: float, left: State, right: State) -> Region:
    # ties at rho_star == rho_pm count as zero-strength rarefactions
    first_shock = rho_star > left.rho
    second_shock = rho_star > right.rho
    return {
        (True, True): Region.SS,
        (True, False): Region.SR,
        (False, True): Region.RS,
        (False, False): Region.RR,
    }[(first_shock, second_shock)]


def _find_root(left: State, right: State, params: FluxParams):
    """Return (region, rho_star or None, iterations)."""
    floor = params.rho_floor
    g_floor = _g(floor, left, right, params)
    if g_floor <= 0:
        return Region.RR_CD, None, 0

    lo_rho, hi_rho = sorted((left.rho, right.rho))
    a, b = floor, None
    for rho in (lo_rho, hi_rho):
        val = _g(rho, left, right, params)
        if val == 0:
            return _region_for(rho, left, right), rho, 0
        if val > 0:
            a = rho
        else:
            b = rho
            break
    if b is None:
        b = 2.0 * hi_rho
        cap = BRACKET_CAP * hi_rho
        while _g(b, left, right, params) > 0:
            a = b
            b *= 2.0
            if b > cap:
                raise NumericalError(
                    f"no sign change of g below {cap:g} (g({a:g}) > 0); data {left}, {right}, {params}"
                )
    try:
        rho_star, info = optimize.brentq(_g, a, b, args=(left, right, params), xtol=1e-300,
                                         rtol=ROOT_REL_TOL * 1e-2, maxiter=ROOT_MAXITER,
                                         full_output=True)
    except RuntimeError as exc:
        raise NumericalError(f"intermediate density root failed to converge: {exc}") from exc
    if not info.converged:
        raise NumericalError(f"intermediate density root failed: {info.flag}")
    return _region_for(rho_star, left, right), rho_star, info.iterations


def classify_region(left: State, right: State, params: FluxParams) -> Region:
    validate(left, right, params, System.ISENTROPIC, allow_eps1_zero=True)
    return _find_root(left, right, params)[0]


def _intermediate(left, right, params, region, rho_star, iterations) -> IntermediateState:
    u_star = wave_curve_u_from_left(rho_star, left, params)
    e2 = 2.0 * params.eps1
    sigma1 = sigma2 = None
    if rho_star > left.rho:
        sigma1 = u_star + (left.rho - e2) * (u_star - left.u) / (rho_star - left.rho)
    if rho_star > right.rho:
        sigma2 = u_star + (right.rho - e2) * (right.u - u_star) / (right.rho - rho_star)
    return IntermediateState(region, rho_star, u_star, sigma1, sigma2, iterations)


def solve_intermediate(left: State, right: State, params: FluxParams) -> IntermediateState:
    """Intermediate constant state between the 1-wave and the 2-wave."""
    validate(left, right, params, System.ISENTROPIC, allow_eps1_zero=True)
    region, rho_star, it = _find_root(left, right, params)
    if region is Region.RR_CD:
        raise ContractError("data lie in RR_CD: the waves are separated by a constant-density fan, "
                            "use solve_isentropic or constant_density_edges")
    return _intermediate(left, right, params, region, rho_star, it)


# -- assembly -----------------------------------------------------------------------


def solve_isentropic(left: State, right: State, params: FluxParams) -> RiemannSolution:
    validate(left, right, params, System.ISENTROPIC, allow_eps1_zero=True)
    region, rho_star, it = _find_root(left, right, params)
    diagnostics = {"region": region.value, "root_iterations": it}

    if region is Region.RR_CD:
        floor = params.rho_floor
        u1, u2 = constant_density_edges(left, right, params)
        s1, s2 = State(floor, u1), State(floor, u2)
        waves = (
            Rarefaction(1, eigenvalue(1, left, params), u1, left, s1),
            ConstantDensityFan(u1, u2, floor),
            Rarefaction(2, u2, eigenvalue(2, right, params), right, s2),
        )
        return RiemannSolution(System.ISENTROPIC, params, left, right, waves, (s1, s2),
                               diagnostics)

    mid = _intermediate(left, right, params, region, rho_star, it)
    star = mid.state
    diagnostics.update(rho_star=mid.rho_star, u_star=mid.u_star)
    if mid.sigma1 is not None:
        w1 = Shock(1, mid.sigma1, left, star)
    else:
        w1 = Rarefaction(1, eigenvalue(1, left, params), eigenvalue(1, star, params), left, star)
    if mid.sigma2 is not None:
        w2 = Shock(2, mid.sigma2, star, right)
    else:
        w2 = Rarefaction(2, eigenvalue(2, star, params), eigenvalue(2, right, params), right, star)
    for w in (w1, w2):
        if isinstance(w, Shock) and not lax_satisfied(w, params):
            raise NumericalError(f"constructed shock violates the Lax inequalities: {w}")
    return RiemannSolution(System.ISENTROPIC, params, left, right, (w1, w2), (star,), diagnostics)


# -- sampling ------------------------------------------------------------------------


@dataclass(frozen=True)
class ProfileSample:
    """State of a self-similar solution at one xi.

    ``flag`` is one of ``const``, ``fan``, ``vacuum``, ``cdfan``,
    ``boundary`` (xi sits exactly on a jump; the right limit is returned) or
    ``delta`` (xi is on a delta shock; ``state`` is None and ``delta`` carries
    the speed and weight rates).
    """

    xi: float
    state: State | None
    flag: str
    delta: DeltaShock | None = None

    @property
    def singular(self) -> bool:
        return self.flag == "delta"


def _invert_fan(w: Rarefaction, xi: float, params: FluxParams) -> State:
    """Solve xi = lambda_family(rho, u(rho)) along the fan's rarefaction curve."""
    floor = params.rho_floor
    anchor = w.anchor
    if w.family == 1:
        def u_of(rho):
            return anchor.u + rarefaction_integral(rho, anchor.rho, params)
    else:
        def u_of(rho):
            return anchor.u - rarefaction_integral(rho, anchor.rho, params)

    # tau = sqrt(rho - 2 eps1) keeps lambda smooth up to the density floor
    def rho_of(tau):
        # floor + tau^2 can round past the anchor density at the fan's outer edge
        return min(floor + tau * tau, anchor.rho)

    def resid(tau):
        rho = rho_of(tau)
        return eigenvalue(w.family, State(rho, u_of(rho)), params) - xi

    t_lo = math.sqrt(max(w.inner.rho - floor, 0.0))
    t_hi = math.sqrt(anchor.rho - floor)
    f_lo, f_hi = resid(t_lo), resid(t_hi)
    if f_lo == 0 or f_hi == 0 or (f_lo > 0) == (f_hi > 0):
        tau = t_lo if abs(f_lo) <= abs(f_hi) else t_hi
    else:
        tau = optimize.brentq(resid, t_lo, t_hi, xtol=1e-16, rtol=4 * sys.float_info.epsilon, maxiter=ROOT_MAXITER)
    rho = rho_of(tau)
    return State(rho, u_of(rho))


def sample_profile(sol: RiemannSolution, xi: float) -> ProfileSample:
    """Self-similar state at xi = x/t for any solution produced by the solvers."""
    current = sol.left
    params = sol.params
    for i, w in enumerate(sol.waves):
        lo, hi = w.edges
        if xi < lo:
            return ProfileSample(xi, current, "const")
        if isinstance(w, Rarefaction):
            if xi <= hi:
                if w.xi_head == w.xi_tail:
                    return ProfileSample(xi, w.inner if w.family == 1 else w.anchor, "boundary")
                return ProfileSample(xi, _invert_fan(w, xi, params), "fan")
        elif isinstance(w, VacuumFan):
            if xi <= hi:
                return ProfileSample(xi, State(0.0, xi), "vacuum")
        elif isinstance(w, ConstantDensityFan):
            if xi <= hi:
                return ProfileSample(xi, State(w.rho, xi), "cdfan")
        elif isinstance(w, DeltaShock):
            if xi == w.sigma:
                return ProfileSample(xi, None, "delta", w)
        elif isinstance(w, (Shock, Contact)):
            if xi == lo:
                nxt = sol.middles[i] if i < len(sol.middles) else sol.right
                return ProfileSample(xi, nxt, "boundary")
        current = sol.middles[i] if i < len(sol.middles) else sol.right
    return ProfileSample(xi, current, "const")


# -- vacuum threshold ---------------------------------------------------------------


def _fan_excess(eps: float, left: State, right: State, gamma: float) -> float:
    """(u_+ - u_-) minus both floor-reaching rarefaction integrals, eps1 = eps2 = eps."""
    p = FluxParams(eps, eps, gamma)
    return ((right.u - left.u)
            - rarefaction_integral(2 * eps, left.rho, p)
            - rarefaction_integral(2 * eps, right.rho, p))


def vacuum_threshold(left: State, right: State, gamma: float = 2.0, scan_points: int = 400) -> float:
    """Smallest eps > 0 (eps1 = eps2 = eps) at which the constant-density fan closes.

    Below the returned value the solution has two rarefactions separated by a
    constant-density fan.  Returns ``math.inf`` when the fan persists on the
    whole admissible range (0, min(rho_-, rho_+)/2).
    """
    if not left.u < right.u:
        raise ContractError("vacuum_threshold needs u_- < u_+")
    if not gamma > 1:
        raise ParameterError(f"gamma must be > 1, got {gamma}")
    if left.rho <= 0 or right.rho <= 0:
        raise ContractError("vacuum_threshold needs rho_-, rho_+ > 0")
    top = 0.5 * min(left.rho, right.rho)
    # geometric near 0 where the integrals behave like sqrt(eps), uniform above
    n = scan_points // 2
    grid = sorted({top * 10.0 ** (-12 + 12 * k / n) for k in range(n)}
                  | {top * k / n for k in range(1, n)})
    prev = 0.0
    for eps in grid:
        h = _fan_excess(eps, left, right, gamma)
        if h == 0:
            return eps
        if h < 0:
            if prev == 0.0:
                raise NumericalError("fan-excess function negative at the first scan point")
            return optimize.brentq(_fan_excess, prev, eps, args=(left, right, gamma),
                                   xtol=1e-15, rtol=1e-14, maxiter=ROOT_MAXITER)
        prev = eps
    return math.inf
