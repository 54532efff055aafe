"""Exact Riemann solvers for transport and flux-approximated isentropic Euler systems."""
from .core import (
    ConstantDensityFan,
    Contact,
    ContractError,
    DeltaShock,
    DomainError,
    FluxParams,
    FluxRiemannError,
    NumericalError,
    ParameterError,
    Rarefaction,
    RiemannSolution,
    Shock,
    State,
    System,
    ValidationError,
    VacuumFan,
    check_solution,
    eigenvalues,
    flux,
    lax_satisfied,
    pressure,
    rh_residual,
    sound_speed,
    validate,
)
from .isentropic import (
    Region,
    classify_region,
    rarefaction_integral,
    sample_profile,
    solve_intermediate,
    solve_isentropic,
    vacuum_threshold,
    wave_curve_u_from_left,
    wave_curve_u_from_right,
)
from .limitlab import sweep_two_rarefaction, sweep_two_shock, two_shock_limits, weak_limit_weights
from .perturbed import delta_speed_eps1, eps1_limit_table, solve_perturbed_transport
from .testfunctions import DEFAULT_SUITE, TestFunction
from .transport import grh_residual, solve_zero_pressure, weak_form_residual, zero_pressure_delta

__version__ = "0.1.0"
