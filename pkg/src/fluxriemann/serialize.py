"""JSON and CSV encodings of solutions and tables.

JSON keeps full shortest round-trip floats; CSV rounds to 9 significant
digits.  Solution objects have the top-level keys ``system``, ``params``,
``left``, ``right``, ``waves``, ``middles`` and ``diagnostics``.
"""
from __future__ import annotations

import csv
import io
import json
import math

from .core import (
    ConstantDensityFan,
    Contact,
    DeltaShock,
    FluxParams,
    Rarefaction,
    RiemannSolution,
    Shock,
    State,
    System,
    VacuumFan,
)


def fmt(x) -> str:
    """CSV cell: 9 significant digits for floats, empty for None."""
    if x is None:
        return ""
    if isinstance(x, float):
        if math.isnan(x):
            return "nan"
        return format(x, ".9g")
    return str(x)


def to_csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) for v in row])
    return buf.getvalue()


def to_json(obj) -> str:
    return json.dumps(obj, indent=2, allow_nan=False) + "\n"


def _state(s: State) -> dict:
    return {"rho": s.rho, "u": s.u}


def wave_to_dict(w) -> dict:
    d: dict = {"type": w.kind}
    if isinstance(w, Shock):
        d.update(family=w.family, speed=w.speed, left=_state(w.left), right=_state(w.right))
    elif isinstance(w, Rarefaction):
        d.update(family=w.family, xi_head=w.xi_head, xi_tail=w.xi_tail,
                 anchor=_state(w.anchor), inner=_state(w.inner))
    elif isinstance(w, Contact):
        d.update(speed=w.speed)
    elif isinstance(w, DeltaShock):
        d.update(sigma=w.sigma, weight_rate_mass=w.weight_rate_mass,
                 weight_rate_momentum=w.weight_rate_momentum, w_rate=w.w_rate)
    elif isinstance(w, VacuumFan):
        d.update(xi_left=w.xi_left, xi_right=w.xi_right)
    elif isinstance(w, ConstantDensityFan):
        d.update(xi_left=w.xi_left, xi_right=w.xi_right, rho=w.rho)
    else:
        raise TypeError(f"unknown wave {w!r}")
    return d


def solution_to_dict(sol: RiemannSolution) -> dict:
    p = sol.params
    return {
        "system": sol.system.value,
        "params": {"eps1": p.eps1, "eps2": p.eps2, "gamma": p.gamma},
        "left": _state(sol.left),
        "right": _state(sol.right),
        "waves": [wave_to_dict(w) for w in sol.waves],
        "middles": [_state(s) for s in sol.middles],
        "diagnostics": dict(sol.diagnostics),
    }


def _load_state(d) -> State:
    return State(float(d["rho"]), float(d["u"]))


def wave_from_dict(d: dict):
    kind = d["type"]
    if kind == "shock":
        return Shock(int(d["family"]), d["speed"], _load_state(d["left"]), _load_state(d["right"]))
    if kind == "rarefaction":
        return Rarefaction(int(d["family"]), d["xi_head"], d["xi_tail"],
                           _load_state(d["anchor"]), _load_state(d["inner"]))
    if kind == "contact":
        return Contact(d["speed"])
    if kind == "delta_shock":
        return DeltaShock(d["sigma"], d["weight_rate_mass"], d["weight_rate_momentum"])
    if kind == "vacuum_fan":
        return VacuumFan(d["xi_left"], d["xi_right"])
    if kind == "constant_density_fan":
        return ConstantDensityFan(d["xi_left"], d["xi_right"], d["rho"])
    raise ValueError(f"unknown wave type {kind!r}")


def solution_from_dict(d: dict) -> RiemannSolution:
    p = d["params"]
    return RiemannSolution(
        System(d["system"]),
        FluxParams(p["eps1"], p["eps2"], p["gamma"]),
        _load_state(d["left"]),
        _load_state(d["right"]),
        tuple(wave_from_dict(w) for w in d["waves"]),
        tuple(_load_state(s) for s in d["middles"]),
        dict(d.get("diagnostics", {})),
    )


SOLUTION_CSV_HEADER = ("item", "type", "family", "xi_left", "xi_right", "rho", "u",
                       "weight_rate_mass", "weight_rate_momentum", "w_rate")


def solution_csv_rows(sol: RiemannSolution):
    for i, w in enumerate(sol.waves):
        lo, hi = w.edges
        family = getattr(w, "family", None)
        rho = w.rho if isinstance(w, ConstantDensityFan) else None
        if isinstance(w, DeltaShock):
            yield (f"wave{i}", w.kind, family, lo, hi, rho, None,
                   w.weight_rate_mass, w.weight_rate_momentum, w.w_rate)
        else:
            yield (f"wave{i}", w.kind, family, lo, hi, rho, None, None, None, None)
    for i, s in enumerate(sol.middles):
        yield (f"middle{i}", "state", None, None, None, s.rho, s.u, None, None, None)
