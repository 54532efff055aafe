"""Vanishing-perturbation experiments for the two-parameter system.

Two-shock data (u_- > u_+) should concentrate into the pressureless delta
shock as (eps1, eps2) -> 0: the intermediate density blows up while
eps2*rho_star^gamma, the shock speeds and rho_star*(sigma2 - sigma1) settle to
closed-form limits.  Two-rarefaction data (u_- < u_+) should open a vacuum:
the constant-density fan spreads to [u_-, u_+] and its density 2 eps1 -> 0.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate

from .core import ContractError, FluxParams, NumericalError, State, ValidationError
from .isentropic import (
    Region,
    constant_density_edges,
    sample_profile,
    solve_intermediate,
    solve_isentropic,
    vacuum_threshold,
)
from .testfunctions import TestFunction

PATHS = ("eq", "e1sq", "e2sq")
DEFAULT_SCHEDULE = tuple(10.0**-k for k in range(2, 7))


def path_schedule(values, path: str = "eq") -> list[tuple[float, float]]:
    """Map scalar eps values onto (eps1, eps2) pairs.

    ``eq``: eps1 = eps2 = e;  ``e1sq``: eps1 = e^2, eps2 = e;  ``e2sq``: eps1 = e, eps2 = e^2.
    """
    if path == "eq":
        return [(e, e) for e in values]
    if path == "e1sq":
        return [(e * e, e) for e in values]
    if path == "e2sq":
        return [(e, e * e) for e in values]
    raise ValueError(f"unknown path {path!r}; expected one of {PATHS}")


def _check_schedule(schedule) -> list[tuple[float, float]]:
    pairs = [(float(a), float(b)) for a, b in schedule]
    if not pairs:
        raise ValidationError("empty schedule")
    for prev, nxt in zip(pairs, pairs[1:]):
        if not (nxt[0] <= prev[0] and nxt[1] <= prev[1] and nxt != prev):
            raise ValidationError(f"schedule must decrease: {prev} -> {nxt}")
    return pairs


# -- two shocks ---------------------------------------------------------------------


@dataclass(frozen=True)
class SweepRecord:
    eps1: float
    eps2: float
    rho_star: float
    u_star: float
    sigma1: float
    sigma2: float
    p_scaled: float
    mass_gap: float

    FIELDS = ("eps1", "eps2", "rho_star", "u_star", "sigma1", "sigma2", "p_scaled", "mass_gap")

    def row(self) -> tuple[float, ...]:
        return tuple(getattr(self, f) for f in self.FIELDS)


@dataclass(frozen=True)
class TwoShockLimits:
    """Closed-form limits of the two-shock quantities."""

    sigma: float
    p_scaled: float
    mass_gap: float
    momentum_gap: float
    w1_rate: float
    w2_rate: float


def two_shock_limits(left: State, right: State, gamma: float) -> TwoShockLimits:
    sl, sr = math.sqrt(left.rho), math.sqrt(right.rho)
    sigma = (sl * left.u + sr * right.u) / (sl + sr)
    p = gamma * left.rho * right.rho * ((left.u - right.u) / (sl + sr)) ** 2
    drho = right.rho - left.rho
    dm = right.rho * right.u - left.rho * left.u
    de = right.rho * right.u**2 - left.rho * left.u**2
    mass = sigma * drho - dm
    mom = sigma * dm - de
    arc = math.sqrt(1.0 + sigma**2)
    return TwoShockLimits(sigma, p, mass, mom, mass / arc, mom / arc)


def sweep_two_shock(left: State, right: State, gamma: float, schedule) -> list[SweepRecord]:
    """Solve the two-shock problem for each (eps1, eps2) of ``schedule``."""
    if not left.u > right.u:
        raise ContractError("sweep_two_shock needs u_- > u_+")
    records = []
    for k, (e1, e2) in enumerate(_check_schedule(schedule)):
        mid = solve_intermediate(left, right, FluxParams(e1, e2, gamma))
        if mid.region is not Region.SS:
            raise ContractError(f"schedule entry {k} (eps1={e1:g}, eps2={e2:g}) is in region "
                                f"{mid.region.value}, not SS")
        # eps2 * rho^gamma in log space, rho_star grows like eps2^(-1/gamma)
        p_scaled = math.exp(math.log(e2) + gamma * math.log(mid.rho_star))
        records.append(SweepRecord(e1, e2, mid.rho_star, mid.u_star, mid.sigma1, mid.sigma2,
                                   p_scaled, mid.rho_star * (mid.sigma2 - mid.sigma1)))
    return records


ERROR_COLUMNS = ("sigma1", "sigma2", "u_star", "p_scaled", "mass_gap")


def two_shock_errors(records, limits: TwoShockLimits) -> dict[str, list[float]]:
    s = limits.sigma
    return {
        "sigma1": [abs(r.sigma1 - s) for r in records],
        "sigma2": [abs(r.sigma2 - s) for r in records],
        "u_star": [abs(r.u_star - s) for r in records],
        "p_scaled": [abs(r.p_scaled - limits.p_scaled) for r in records],
        "mass_gap": [abs(r.mass_gap - limits.mass_gap) for r in records],
    }


def empirical_rates(eps, errors) -> list[float]:
    """log(err_k/err_{k-1}) / log(eps_k/eps_{k-1}) between consecutive entries."""
    rates = []
    for (e0, r0), (e1, r1) in zip(zip(eps, errors), zip(eps[1:], errors[1:])):
        if r0 > 0 and r1 > 0 and e0 != e1:
            rates.append(math.log(r1 / r0) / math.log(e1 / e0))
        else:
            rates.append(math.nan)
    return rates


def check_two_shock_convergence(records, limits: TwoShockLimits) -> list[str]:
    """Monotone-convergence failures of a two-shock sweep (empty when clean)."""
    problems = []
    rhos = [r.rho_star for r in records]
    for k in range(1, len(rhos)):
        if not rhos[k] > rhos[k - 1]:
            problems.append(f"rho_star not increasing at entry {k}: {rhos[k - 1]:g} -> {rhos[k]:g}")
    for name, errs in two_shock_errors(records, limits).items():
        for k in range(1, len(errs)):
            if not errs[k] < errs[k - 1]:
                problems.append(f"|{name} error| not decreasing at entry {k}: "
                                f"{errs[k - 1]:.3e} -> {errs[k]:.3e}")
    return problems


# -- distributional pairings ----------------------------------------------------------


def _quad(f, a, b):
    val, err, _, *msg = integrate.quad(f, a, b, epsabs=1e-12, epsrel=1e-11, limit=200,
                                       full_output=1)
    if msg and err > 1e-9:
        raise NumericalError(f"quadrature failed on [{a}, {b}]: {msg[0]}")
    return val


def _wedge_integrals(test: TestFunction, speeds, absolute: bool = False) -> list[float]:
    """Integrals of phi (or |phi|) over the wedges cut out by the lines
    x = s*t, s in ``speeds``; left wedge first.

    phi is a tensor product, so the inner x integral only involves the
    x factor.
    """
    speeds = list(speeds)
    if absolute:
        def xf(x):
            return abs(test.x_part(x))

        def tf(t):
            return abs(test.t_part(t))
    else:
        xf, tf = test.x_part, test.t_part

    def cuts(t):
        pts = [test.x_lo] + [min(max(s * t, test.x_lo), test.x_hi) for s in speeds] + [test.x_hi]
        scale = tf(t)
        return np.array([scale * _quad(xf, a, b) if b > a else 0.0 for a, b in zip(pts, pts[1:])])

    val, err = integrate.quad_vec(cuts, test.t_lo, test.t_hi, epsabs=1e-12, epsrel=1e-11)
    if err > 1e-8:
        raise NumericalError(f"wedge quadrature error estimate {err:g} too large")
    return [float(v) for v in val]


def _line_moment(test: TestFunction, sigma: float, absolute: bool = False) -> float:
    """Integral of t * phi(t, sigma t) dt."""
    if absolute:
        return _quad(lambda t: t * abs(test(t, sigma * t)), test.t_lo, test.t_hi)
    return _quad(lambda t: t * test(t, sigma * t), test.t_lo, test.t_hi)


@dataclass(frozen=True)
class PairingRow:
    eps1: float
    eps2: float
    test: str
    i_rho: float
    i_mom: float
    target_rho: float
    target_mom: float
    scale_rho: float
    scale_mom: float
    w1_rate_est: float
    w2_rate_est: float

    @property
    def disc_rho(self) -> float:
        return abs(self.i_rho - self.target_rho)

    @property
    def disc_mom(self) -> float:
        return abs(self.i_mom - self.target_mom)


@dataclass
class WeakLimitReport:
    limits: TwoShockLimits
    rows: list[PairingRow] = field(default_factory=list)

    def by_test(self) -> dict[str, list[PairingRow]]:
        out: dict[str, list[PairingRow]] = {}
        for r in self.rows:
            out.setdefault(r.test, []).append(r)
        return out

    def problems(self, rel_tol: float = 1e-2) -> list[str]:
        """Non-decreasing discrepancies, final relative discrepancies above
        ``rel_tol``, and emergent weights off by more than ``rel_tol``."""
        out = []
        lim = self.limits
        for name, rows in self.by_test().items():
            for attr in ("disc_rho", "disc_mom"):
                seq = [getattr(r, attr) for r in rows]
                if seq[0] == 0 and all(v == 0 for v in seq):
                    continue
                for k in range(1, len(seq)):
                    if not seq[k] < seq[k - 1]:
                        out.append(f"{name}: {attr} not decreasing at entry {k}")
            last = rows[-1]
            if last.disc_rho > rel_tol * last.scale_rho:
                out.append(f"{name}: final mass discrepancy {last.disc_rho:.3e} "
                           f"exceeds {rel_tol:g} x {last.scale_rho:.3e}")
            if last.disc_mom > rel_tol * last.scale_mom:
                out.append(f"{name}: final momentum discrepancy {last.disc_mom:.3e} "
                           f"exceeds {rel_tol:g} x {last.scale_mom:.3e}")
            for est, ref, label in ((last.w1_rate_est, lim.w1_rate, "w1"),
                                    (last.w2_rate_est, lim.w2_rate, "w2")):
                if not math.isfinite(est):
                    continue
                if abs(est - ref) > rel_tol * abs(ref):
                    out.append(f"{name}: emergent {label} rate {est:.6f} vs {ref:.6f}")
        return out


def weak_limit_weights(left: State, right: State, gamma: float, schedule,
                       tests) -> WeakLimitReport:
    """Pair the two-shock densities and momenta with each test function and
    compare against the step-plus-delta limit.

    For each entry the pairing of rho^eps(x/t) with phi is exact per wedge
    (the solution is constant on each), so only integrals of phi itself over
    the three wedges are needed.
    """
    limits = two_shock_limits(left, right, gamma)
    records = sweep_two_shock(left, right, gamma, schedule)
    sigma = limits.sigma
    arc = math.sqrt(1.0 + sigma**2)
    m_l, m_r = left.rho * left.u, right.rho * right.u
    report = WeakLimitReport(limits)
    for test in tests:
        if test.t_lo < 0:
            raise ValidationError("test functions must be supported in t > 0")
        h_left, h_right = _wedge_integrals(test, [sigma])
        line = _line_moment(test, sigma)
        line_abs = _line_moment(test, sigma, absolute=True)
        step_rho = left.rho * h_left + right.rho * h_right
        step_mom = m_l * h_left + m_r * h_right
        target_rho = step_rho + limits.mass_gap * line
        target_mom = step_mom + limits.momentum_gap * line
        abs_wedges = _wedge_integrals(test, [sigma], absolute=True)
        scale_rho = (left.rho * abs_wedges[0] + right.rho * abs_wedges[1]
                     + abs(limits.mass_gap) * line_abs)
        scale_mom = (abs(m_l) * abs_wedges[0] + abs(m_r) * abs_wedges[1]
                     + abs(limits.momentum_gap) * line_abs)
        for rec in records:
            a, b, c = _wedge_integrals(test, [rec.sigma1, rec.sigma2])
            i_rho = left.rho * a + rec.rho_star * b + right.rho * c
            i_mom = m_l * a + rec.rho_star * rec.u_star * b + m_r * c
            if line != 0:
                w1 = (i_rho - step_rho) / line / arc
                w2 = (i_mom - step_mom) / line / arc
            else:
                w1 = w2 = math.nan
            report.rows.append(PairingRow(rec.eps1, rec.eps2, test.name, i_rho, i_mom,
                                          target_rho, target_mom, scale_rho, scale_mom, w1, w2))
    return report


# -- two rarefactions -------------------------------------------------------------------


@dataclass(frozen=True)
class RarefactionRecord:
    eps1: float
    eps2: float
    u1: float
    u2: float
    rho_mid: float
    samples: tuple[tuple[float, float, float], ...]  # (xi, rho, u)

    FIELDS = ("eps1", "eps2", "u1", "u2", "rho_mid")


@dataclass
class TwoRarefactionReport:
    left: State
    right: State
    threshold: float
    records: list[RarefactionRecord]

    def errors(self) -> dict[str, list[float]]:
        out = {
            "u1": [abs(r.u1 - self.left.u) for r in self.records],
            "u2": [abs(r.u2 - self.right.u) for r in self.records],
            "rho_mid": [r.rho_mid for r in self.records],
        }
        if self.records and self.records[0].samples:
            for j, (xi, _, _) in enumerate(self.records[0].samples):
                out[f"u(xi={xi:g})"] = [abs(r.samples[j][2] - r.samples[j][0]) for r in self.records]
        return out

    def problems(self) -> list[str]:
        out = []
        for name, errs in self.errors().items():
            for k in range(1, len(errs)):
                if errs[k] > errs[k - 1]:
                    out.append(f"|{name} error| increased at entry {k}: "
                               f"{errs[k - 1]:.3e} -> {errs[k]:.3e}")
        return out


def sweep_two_rarefaction(left: State, right: State, gamma: float, schedule,
                          xis=None) -> TwoRarefactionReport:
    """Fan edges, fan density and interior velocity samples along ``schedule``.

    Every entry must produce a constant-density fan; entries with eps1 = eps2
    must lie strictly below the vacuum threshold.
    """
    if not left.u < right.u:
        raise ContractError("sweep_two_rarefaction needs u_- < u_+")
    pairs = _check_schedule(schedule)
    threshold = vacuum_threshold(left, right, gamma)
    if xis is None:
        xis = [left.u + (right.u - left.u) * k / 4 for k in (1, 2, 3)]
    records = []
    for k, (e1, e2) in enumerate(pairs):
        if e1 == e2 and not e1 < threshold:
            raise ContractError(f"schedule entry {k} (eps={e1:g}) is not below the vacuum "
                                f"threshold {threshold:.9g}")
        params = FluxParams(e1, e2, gamma)
        sol = solve_isentropic(left, right, params)
        if sol.diagnostics["region"] != Region.RR_CD.value:
            raise ContractError(f"schedule entry {k} (eps1={e1:g}, eps2={e2:g}) has no "
                                f"constant-density fan (region {sol.diagnostics['region']})")
        u1, u2 = constant_density_edges(left, right, params)
        samples = []
        for xi in xis:
            s = sample_profile(sol, xi).state
            samples.append((xi, s.rho, s.u))
        records.append(RarefactionRecord(e1, e2, u1, u2, params.rho_floor, tuple(samples)))
    return TwoRarefactionReport(left, right, threshold, records)
