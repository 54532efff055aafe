"""Smooth compactly supported test functions phi(t, x).

A test function is a tensor product of C-infinity bumps in t and in x, each
multiplied by a polynomial.  Values and first partial derivatives are
available in closed form so the weak-form checks only need quadrature.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction


def _bump(s: float, a: float, b: float) -> tuple[float, float]:
    """exp(-1/(1-y^2)) with y mapping (a, b) onto (-1, 1); returns (value, d/ds)."""
    y = (2.0 * s - a - b) / (b - a)
    q = 1.0 - y * y
    if q <= 0.0:
        return 0.0, 0.0
    v = math.exp(-1.0 / q)
    dv_dy = v * (-2.0 * y / (q * q))
    return v, dv_dy * 2.0 / (b - a)


def _poly(coeffs: tuple[float, ...], s: float) -> tuple[float, float]:
    v = 0.0
    d = 0.0
    for c in reversed(coeffs):
        d = d * s + v
        v = v * s + c
    return v, d


@dataclass(frozen=True)
class TestFunction:
    """phi(t, x) = bump_t(t) * P(t) * bump_x(x) * Q(x).

    Polynomial coefficients are in increasing order of degree.  The support
    box is ``(t_lo, t_hi) x (x_lo, x_hi)``.
    """

    __test__ = False  # not a pytest class

    name: str
    t_lo: float
    t_hi: float
    x_lo: float
    x_hi: float
    t_poly: tuple[float, ...] = (1.0,)
    x_poly: tuple[float, ...] = (1.0,)

    def __post_init__(self):
        if not (self.t_lo < self.t_hi and self.x_lo < self.x_hi):
            raise ValueError(f"empty support box for test function {self.name!r}")
        if self.t_lo < 0:
            raise ValueError("test functions must be supported in t >= 0")

    def _parts(self, t, x):
        bt, dbt = _bump(t, self.t_lo, self.t_hi)
        bx, dbx = _bump(x, self.x_lo, self.x_hi)
        pt, dpt = _poly(self.t_poly, t)
        px, dpx = _poly(self.x_poly, x)
        return bt * pt, dbt * pt + bt * dpt, bx * px, dbx * px + bx * dpx

    def __call__(self, t: float, x: float) -> float:
        return self.t_part(t) * self.x_part(x)

    def t_part(self, t: float) -> float:
        return _bump(t, self.t_lo, self.t_hi)[0] * _poly(self.t_poly, t)[0]

    def x_part(self, x: float) -> float:
        return _bump(x, self.x_lo, self.x_hi)[0] * _poly(self.x_poly, x)[0]

    def grad(self, t: float, x: float) -> tuple[float, float]:
        """(phi_t, phi_x) at (t, x)."""
        ft, dft, fx, dfx = self._parts(t, x)
        return dft * fx, ft * dfx

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "t_support": [self.t_lo, self.t_hi],
            "x_support": [self.x_lo, self.x_hi],
            "t_poly": list(self.t_poly),
            "x_poly": list(self.x_poly),
        }


def _f(s: str) -> float:
    return float(Fraction(s))


# Every member crosses the line x = 2t/3 and the fan 0 <= x/t <= 2.
DEFAULT_SUITE: tuple[TestFunction, ...] = (
    TestFunction("bump", 0.0, 1.0, -2.0, 3.0),
    TestFunction("bump_linear_x", _f("1/5"), _f("3/2"), -1.0, 2.0, x_poly=(1.0, 1.0)),
    TestFunction("bump_quadratic", _f("1/2"), 2.0, 0.0, 2.0, t_poly=(0.0, 1.0), x_poly=(0.0, 0.0, 1.0)),
    TestFunction("bump_mixed", _f("1/10"), _f("9/10"), _f("-1/2"), _f("3/2"), t_poly=(1.0, -1.0), x_poly=(2.0, 1.0)),
    TestFunction("bump_narrow", _f("3/10"), _f("6/5"), _f("1/5"), 1.0, x_poly=(1.0, 0.0, -1.0)),
)

SUITES = {"default": DEFAULT_SUITE}


def get_suite(name: str) -> tuple[TestFunction, ...]:
    try:
        return SUITES[name]
    except KeyError:
        raise ValueError(f"unknown test suite {name!r}; known: {sorted(SUITES)}") from None
