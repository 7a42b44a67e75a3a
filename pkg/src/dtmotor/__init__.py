"""Power-series time-domain simulator for a 3rd-order induction motor load.

Each time window is solved by turning the model's differential-algebraic
equations into algebraic recurrences on Taylor coefficients; the
transformed current injection equation is linear in the per-order voltage
coefficients, which lets the source coupling close with one 2x2 solve per
order instead of an iteration.  A classical fixed-step RK4 integrator over
the same equations serves as the independent cross-check.

Hot marching loops run in a compiled extension when available; see
``dtmotor.backend_name()`` and the DTMOTOR_BACKEND environment variable.
"""

from ._backend import available_backends, backend_name
from .circuit import AlgebraicPoint, TheveninSource, solve_order_k, source_series
from .errors import (
    CouplingSingularError,
    DtMotorError,
    EventInWindowError,
    NoEquilibriumError,
    ScenarioError,
    SimulationError,
    SingularSeriesError,
)
from .motor import (
    InjectionAffine,
    MotorParams,
    MotorSeries,
    MotorState,
    advance_states,
    current_direct,
    dt_currents,
    dt_intermediates,
    dt_u,
    dt_u0,
    impedance_direct,
    injection_coeffs,
    series_residuals,
)
from .oracle import algebraic_solve, integrate, propagate, rhs, taylor_probe
from .scenario import load_scenario
from .series import EPS_DIV, PowerSeries, conv, delta, divide_recurrence, evaluate
from .simulator import (
    SimConfig,
    WindowResult,
    init_steady_state,
    simulate,
    simulate_window,
    steady_state_voltage,
    torque_balance_residual,
)
from .trajectory import Trajectory, read_csv
from .verify import PropositionReport, run_proposition_fuzz
from .window import build_window

__version__ = "0.1.0"

__all__ = [
    "AlgebraicPoint",
    "CouplingSingularError",
    "DtMotorError",
    "EPS_DIV",
    "EventInWindowError",
    "InjectionAffine",
    "MotorParams",
    "MotorSeries",
    "MotorState",
    "NoEquilibriumError",
    "PowerSeries",
    "PropositionReport",
    "ScenarioError",
    "SimConfig",
    "SimulationError",
    "SingularSeriesError",
    "TheveninSource",
    "Trajectory",
    "WindowResult",
    "advance_states",
    "algebraic_solve",
    "available_backends",
    "backend_name",
    "build_window",
    "conv",
    "current_direct",
    "delta",
    "divide_recurrence",
    "dt_currents",
    "dt_intermediates",
    "dt_u",
    "dt_u0",
    "evaluate",
    "impedance_direct",
    "init_steady_state",
    "injection_coeffs",
    "integrate",
    "load_scenario",
    "propagate",
    "read_csv",
    "rhs",
    "run_proposition_fuzz",
    "series_residuals",
    "simulate",
    "simulate_window",
    "solve_order_k",
    "source_series",
    "steady_state_voltage",
    "taylor_probe",
    "torque_balance_residual",
    "__version__",
]
