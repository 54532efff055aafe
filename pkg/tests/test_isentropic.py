import math
import random

import mpmath
import pytest
from hypothesis import assume, given, settings, strategies as st

from fluxriemann.core import (
    ConstantDensityFan,
    ContractError,
    DomainError,
    FluxParams,
    NumericalError,
    Rarefaction,
    Shock,
    State,
    check_solution,
    eigenvalue,
    lax_satisfied,
)
from fluxriemann.isentropic import (
    Region,
    classify_region,
    constant_density_edges,
    forward_shock_floor_value,
    rarefaction_integral,
    sample_profile,
    solve_intermediate,
    solve_isentropic,
    vacuum_threshold,
    wave_curve_u_from_left,
    wave_curve_u_from_right,
)

T1 = (State(1.0, 2.0), State(4.0, 0.0))


def _mp_integral(a, b, p):
    mpmath.mp.dps = 30
    f = lambda s: mpmath.sqrt(p.eps2 * s ** (p.gamma - 2) / (s - 2 * p.eps1))
    return float(mpmath.quad(f, [a, b]))


def _bisect(f, a, b, n=200):
    fa = f(a)
    for _ in range(n):
        m = 0.5 * (a + b)
        fm = f(m)
        if (fm > 0) == (fa > 0):
            a, fa = m, fm
        else:
            b = m
    return 0.5 * (a + b)


# -- wave curves -----------------------------------------------------------------


def test_rarefaction_integral_gamma2_closed_form():
    p = FluxParams(0.1, 0.5, 2.0)
    for a, b in [(0.2, 1.0), (0.2, 0.2), (0.5, 7.0), (0.2 + 1e-14, 3.0)]:
        exact = 2 * math.sqrt(p.eps2) * (math.sqrt(b - 0.2) - math.sqrt(a - 0.2))
        assert rarefaction_integral(a, b, p) == pytest.approx(exact, abs=1e-12)


@pytest.mark.parametrize("gamma", [1.4, 5 / 3, 3.0])
@pytest.mark.parametrize("a,b", [(0.2, 1.0), (0.3, 5.0), (0.2, 0.21)])
def test_rarefaction_integral_vs_mpmath(gamma, a, b):
    p = FluxParams(0.1, 0.7, gamma)
    assert rarefaction_integral(a, b, p) == pytest.approx(_mp_integral(a, b, p), abs=1e-10)


def test_rarefaction_integral_plain_euler():
    p = FluxParams(0.0, 1.0, 1.4)
    # eps1 = 0: integral of s^((gamma-3)/2) in closed form
    k = (p.gamma - 1) / 2
    exact = (2.0**k - 1.0) / k
    assert rarefaction_integral(1.0, 2.0, p) == pytest.approx(exact, abs=1e-10)


def test_rarefaction_integral_domain():
    p = FluxParams(0.1, 0.5)
    with pytest.raises(DomainError):
        rarefaction_integral(0.1, 1.0, p)
    with pytest.raises(DomainError):
        rarefaction_integral(1.0, 0.5, p)


def test_shock_curve_point():
    p = FluxParams(0.1, 0.5, 2.0)
    u = wave_curve_u_from_left(4.0, T1[0], p)
    oracle = 2 - math.sqrt(0.5 * 3 * 15 / (2 * (4 - 0.1 * 5)))
    assert u == pytest.approx(oracle, abs=1e-14)
    assert u == pytest.approx(0.207157, abs=1e-5)


def test_right_curve_rarefaction_branch():
    p = FluxParams(0.1, 0.5, 2.0)
    u = wave_curve_u_from_right(1.0, T1[1], p)
    assert u == pytest.approx(-2 * (math.sqrt(1.9) - math.sqrt(0.4)), abs=1e-12)


def test_forward_shock_floor_value_is_limit():
    p = FluxParams(0.1, 0.5, 2.0)
    left = State(1.0, 2.0)
    # forward shock curve: u = u_- - shock_jump; at rho -> 2 eps1 the jump tends to the floor value
    from fluxriemann.isentropic import _shock_jump

    near = left.u - _shock_jump(0.2 + 1e-12, left.rho, p)
    assert near == pytest.approx(forward_shock_floor_value(left, p), abs=1e-5)


@given(st.floats(0.25, 10), st.floats(-3, 3), st.floats(0.21, 30), st.floats(0.21, 30),
       st.sampled_from([1.4, 2.0, 3.0]))
@settings(max_examples=150, deadline=None)
def test_wave_curve_monotonicity(rho0, u0, r1, r2, gamma):
    assume(abs(r1 - r2) > 1e-6)
    p = FluxParams(0.1, 0.4, gamma)
    s = State(rho0, u0)
    lo, hi = sorted((r1, r2))
    assert wave_curve_u_from_left(lo, s, p) > wave_curve_u_from_left(hi, s, p)
    assert wave_curve_u_from_right(lo, s, p) < wave_curve_u_from_right(hi, s, p)


# -- intermediate state --------------------------------------------------------


def test_symmetric_two_shock_vs_cubic():
    p = FluxParams(0.0, 1.0, 2.0)
    mid = solve_intermediate(State(1.0, 1.0), State(1.0, -1.0), p)
    # gamma = 2, eps1 = 0: 4 = (rho-1)(rho^2-1)/rho  <=>  rho^3 - rho^2 - 3 rho + 1 = 0
    oracle = _bisect(lambda r: r**3 - r**2 - 3 * r + 1, 1.0, 4.0)
    assert mid.region is Region.SS
    assert abs(mid.u_star) < 1e-12
    assert mid.rho_star == pytest.approx(oracle, abs=1e-6)
    assert mid.sigma1 == pytest.approx(-mid.sigma2, abs=1e-12)


def test_t1_small_eps_p_scaled():
    e = 1e-4
    mid = solve_intermediate(*T1, FluxParams(e, e, 2.0))
    assert mid.region is Region.SS
    assert e * mid.rho_star**2 == pytest.approx(32 / 9, rel=0.05)


def _brute_region(left, right, p, n=4000):
    """Region from the sign of g on a grid; no root finding."""
    g = lambda r: wave_curve_u_from_left(r, left, p) - wave_curve_u_from_right(r, right, p)
    floor = p.rho_floor
    if g(floor) <= 0:
        return Region.RR_CD, None
    top = 4.0 * max(left.rho, right.rho)
    while g(top) > 0:
        top *= 2
    grid = [floor + (top - floor) * k / n for k in range(n + 1)]
    for a, b in zip(grid, grid[1:]):
        if g(b) <= 0:
            return None, (a, b)
    raise AssertionError("unreachable")


def _region_of_interval(interval, left, right):
    a, b = interval
    out = set()
    for r in (a, b):
        out.add({(True, True): Region.SS, (True, False): Region.SR,
                 (False, True): Region.RS, (False, False): Region.RR}[(r > left.rho, r > right.rho)])
    return out


def test_classifier_vs_grid_scan():
    rng = random.Random(11)
    for _ in range(40):
        p = FluxParams(rng.uniform(0.01, 0.1), rng.uniform(0.05, 1.0), rng.choice([1.4, 2.0, 3.0]))
        left = State(rng.uniform(0.3, 3), rng.uniform(-2, 2))
        right = State(rng.uniform(0.3, 3), rng.uniform(-2, 2))
        region = classify_region(left, right, p)
        brute, interval = _brute_region(left, right, p)
        if brute is Region.RR_CD:
            assert region is Region.RR_CD
        else:
            assert region in _region_of_interval(interval, left, right)
            mid = solve_intermediate(left, right, p)
            assert interval[0] <= mid.rho_star <= interval[1]


@pytest.mark.parametrize("gamma", [1.4, 2.0, 3.0])
def test_lax_on_random_solutions(gamma):
    rng = random.Random(int(gamma * 10))
    for _ in range(60):
        p = FluxParams(rng.uniform(1e-3, 0.1), rng.uniform(1e-3, 2.0), gamma)
        left = State(rng.uniform(0.3, 5), rng.uniform(-3, 3))
        right = State(rng.uniform(0.3, 5), rng.uniform(-3, 3))
        sol = solve_isentropic(left, right, p)
        check_solution(sol)
        for w in sol.waves:
            if isinstance(w, Shock):
                assert lax_satisfied(w, p)


def test_rr_cd_structure():
    p = FluxParams(0.01, 0.01, 2.0)
    sol = solve_isentropic(State(1.0, 0.0), State(1.0, 0.6), p)
    assert sol.diagnostics["region"] == "RR_CD"
    r1, fan, r2 = sol.waves
    assert isinstance(r1, Rarefaction) and isinstance(fan, ConstantDensityFan)
    u1, u2 = constant_density_edges(sol.left, sol.right, p)
    assert (fan.xi_left, fan.xi_right) == (u1, u2)
    assert u1 == pytest.approx(2 * math.sqrt(0.01 * 0.98), abs=1e-12)
    assert fan.rho == 0.02
    check_solution(sol)
    with pytest.raises(ContractError):
        solve_intermediate(sol.left, sol.right, p)


# -- sampling ------------------------------------------------------------------


def test_fan_sample_closed_form():
    sol = solve_isentropic(State(1.0, 2.0), State(1.0, 2.6), FluxParams(0.0, 1.0, 2.0))
    s = sample_profile(sol, 1.3)
    assert s.flag == "fan"
    assert s.state.rho == pytest.approx(0.81, abs=1e-12)
    assert s.state.u == pytest.approx(2.2, abs=1e-12)


@pytest.mark.parametrize("gamma", [1.4, 2.0, 3.0])
def test_sampler_fan_consistency(gamma):
    rng = random.Random(3)
    p = FluxParams(0.05, 0.8, gamma)
    for _ in range(20):
        left = State(rng.uniform(0.5, 4), rng.uniform(-1, 0))
        right = State(rng.uniform(0.5, 4), rng.uniform(0.2, 1.5))
        sol = solve_isentropic(left, right, p)
        for w in sol.waves:
            if isinstance(w, Rarefaction) and w.xi_tail > w.xi_head:
                for k in range(1, 8):
                    xi = w.xi_head + (w.xi_tail - w.xi_head) * k / 8
                    s = sample_profile(sol, xi)
                    assert s.flag == "fan"
                    assert eigenvalue(w.family, s.state, p) == pytest.approx(xi, abs=1e-10)


def test_sampler_outside_and_on_shocks():
    p = FluxParams(0.01, 0.01, 2.0)
    sol = solve_isentropic(*T1, p)
    assert sample_profile(sol, -100).state == T1[0]
    assert sample_profile(sol, 100).state == T1[1]
    s1 = sol.waves[0].speed
    assert sample_profile(sol, s1).flag == "boundary"
    assert sample_profile(sol, s1).state == sol.middles[0]


# -- vacuum threshold -------------------------------------------------------------


def test_vacuum_threshold_closed_form():
    # gamma = 2: 0.6 = 4 sqrt(eps (1 - 2 eps))  =>  2 eps^2 - eps + 0.0225 = 0
    oracle = (1 - math.sqrt(1 - 8 * 0.0225)) / 4
    eps0 = vacuum_threshold(State(1.0, 0.0), State(1.0, 0.6), 2.0)
    assert eps0 == pytest.approx(oracle, abs=1e-12)
    assert eps0 == pytest.approx(0.0236152, abs=1e-6)
    below = solve_isentropic(State(1.0, 0.0), State(1.0, 0.6), FluxParams(0.99 * eps0, 0.99 * eps0))
    above = solve_isentropic(State(1.0, 0.0), State(1.0, 0.6), FluxParams(1.01 * eps0, 1.01 * eps0))
    assert below.diagnostics["region"] == "RR_CD"
    assert above.diagnostics["region"] == "RR"


def test_vacuum_threshold_infinite_and_errors():
    assert vacuum_threshold(State(1.0, 0.0), State(1.0, 50.0), 2.0) == math.inf
    with pytest.raises(ContractError):
        vacuum_threshold(State(1.0, 1.0), State(1.0, 0.0))


def test_root_failure_surfaces_numerical_error(monkeypatch):
    import fluxriemann.isentropic as ise

    monkeypatch.setattr(ise, "BRACKET_CAP", 1.0)
    with pytest.raises(NumericalError):
        solve_isentropic(*T1, FluxParams(1e-6, 1e-6, 2.0))


@pytest.mark.parametrize("rl,rr,expected", [(1.0, 3.0, Region.SR), (3.0, 1.0, Region.RS)])
def test_equal_velocities_go_through_generic_root(rl, rr, expected):
    p = FluxParams(0.05, 0.5, 2.0)
    sol = solve_isentropic(State(rl, 0.7), State(rr, 0.7), p)
    assert sol.diagnostics["region"] == expected.value
    assert min(rl, rr) < sol.diagnostics["rho_star"] < max(rl, rr)
    check_solution(sol)
