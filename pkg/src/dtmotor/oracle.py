"""Classical reference integrator and finite-difference Taylor probes.

The same motor DAE is reduced to an ODE by solving the algebraic part at
every evaluation (complex arithmetic, deliberately separate from the
series code path) and integrated with fixed-step classical RK4.  This is
the iterative/classical contrast the series simulator is validated
against, so nothing here may touch the transform recurrences.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable

import numpy as np

from ._backend import get_kernels
from .circuit import AlgebraicPoint, TheveninSource
from .errors import EventInWindowError
from .motor import MotorParams, MotorState, impedance_direct
from .trajectory import Trajectory

DEFAULT_STEP = 1e-5


def algebraic_solve(
    s: float, e_mag: float, e_ang: float, r: float, x: float, params: MotorParams
) -> AlgebraicPoint:
    """Terminal voltage and injection at slip s via complex elimination.

    With z the motor impedance and Z the source impedance, V = E - Z I and
    I = V / z give I = E / (z + Z).
    """
    z_re, z_im = impedance_direct(s, params)
    z = complex(z_re, z_im)
    zs = complex(r, x)
    e = e_mag * complex(math.cos(e_ang), math.sin(e_ang))
    i = e / (z + zs)
    v = e - zs * i
    return AlgebraicPoint(vx=v.real, vy=v.imag, ire=i.real, iim=i.imag)


def rhs(
    state: MotorState | tuple, params: MotorParams, src: TheveninSource, t: float
) -> tuple[float, float, float]:
    """Time derivatives (ds/dt, dvre_p/dt, dvim_p/dt) at time t."""
    if isinstance(state, MotorState):
        s, vre, vim = state.s, state.vre_p, state.vim_p
    else:
        s, vre, vim = state
    e_mag, e_ang = src.values_at(t)
    alg = algebraic_solve(s, e_mag, e_ang, src.r, src.x, params)
    return _derivatives(s, vre, vim, alg.ire, alg.iim, params)


def _derivatives(s, vre, vim, ire, iim, params: MotorParams):
    p = params
    w1 = p.w_s * p.r_r / p.x_r
    beta = p.x_s - p.x_sp
    ds = (p.a1 * s * s + p.b1 * s + p.c1 - vre * ire + vim * iim) / (2.0 * p.H)
    dvre = -w1 * (beta * iim + vre) + p.w_s * s * vim
    dvim = -w1 * (beta * ire - vim) - p.w_s * s * vre
    return ds, dvre, dvim


def _split_segments(src: TheveninSource, t_end: float) -> list[tuple[float, float]]:
    bounds = [0.0]
    for t_ev in src.event_times():
        if 0.0 < t_ev < t_end:
            bounds.append(t_ev)
    bounds.append(t_end)
    return list(zip(bounds[:-1], bounds[1:]))


def integrate(
    params: MotorParams,
    src: TheveninSource,
    state0: MotorState,
    step: float,
    t_end: float,
    sample_dt: float | None = None,
    backend: str | None = None,
) -> Trajectory:
    """Fixed-step RK4 trajectory from state0 over [0, t_end].

    The step must divide every source segment exactly (events are honored
    by stopping and restarting on their instants), and sample times --
    multiples of sample_dt -- must land on step instants.
    """
    if step <= 0.0:
        raise ValueError("step must be positive")
    if t_end <= 0.0:
        raise ValueError("t_end must be positive")
    sample_dt = step if sample_dt is None else sample_dt

    segs = _split_segments(src, t_end)
    seg_t0 = np.array([a for a, _ in segs])
    seg_nsteps = np.empty(len(segs), dtype=np.int64)
    seg_h = np.empty(len(segs))
    seg_ex = np.empty(len(segs))
    seg_ey = np.empty(len(segs))
    for i, (a, b) in enumerate(segs):
        n = max(1, round((b - a) / step))
        if abs(n * step - (b - a)) > 1e-9:
            raise ValueError(
                f"step {step} does not split the segment [{a}, {b}] exactly"
            )
        seg_nsteps[i] = n
        seg_h[i] = (b - a) / n
        ex, ey = src.emf_at(a)
        seg_ex[i] = ex
        seg_ey[i] = ey

    n_samp = int(math.floor(t_end / sample_dt + 1e-9)) + 1
    sample_times = np.arange(n_samp) * sample_dt

    kern = get_kernels(backend)
    par = (params.H, params.a1, params.b1, params.c1, params.r_s,
           params.x_s, params.x_sp, params.r_r, params.x_r, params.w_s)
    samples, _end = kern.rk4_march(
        par, src.r, src.x, seg_t0, seg_nsteps, seg_h, seg_ex, seg_ey,
        sample_times, (state0.s, state0.vre_p, state0.vim_p),
    )
    meta = {
        "method": "rk4",
        "step": step,
        "t_end": t_end,
        "sample_dt": sample_dt,
        "backend": kern.BACKEND_NAME,
    }
    return Trajectory.from_samples(sample_times, samples, meta)


def propagate(
    state: MotorState | tuple,
    params: MotorParams,
    e_mag: float,
    e_ang: float,
    r: float,
    x: float,
    duration: float,
    step: float = 1e-6,
) -> tuple[float, float, float]:
    """RK4 flow of the fixed-source field over a signed duration.

    Negative durations integrate the field backward in time, which is what
    local Taylor probes around a window start need.  Returns the state
    triple (no sampling).
    """
    if isinstance(state, MotorState):
        y = (state.s, state.vre_p, state.vim_p)
    else:
        y = tuple(state)
    if duration == 0.0:
        return y
    n = max(1, round(abs(duration) / step))
    h = duration / n

    def f(y3):
        alg = algebraic_solve(y3[0], e_mag, e_ang, r, x, params)
        return _derivatives(y3[0], y3[1], y3[2], alg.ire, alg.iim, params)

    s, vre, vim = y
    for _ in range(n):
        k1 = f((s, vre, vim))
        k2 = f((s + 0.5 * h * k1[0], vre + 0.5 * h * k1[1], vim + 0.5 * h * k1[2]))
        k3 = f((s + 0.5 * h * k2[0], vre + 0.5 * h * k2[1], vim + 0.5 * h * k2[2]))
        k4 = f((s + h * k3[0], vre + h * k3[1], vim + h * k3[2]))
        s += h * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]) / 6.0
        vre += h * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]) / 6.0
        vim += h * (k1[2] + 2.0 * k2[2] + 2.0 * k3[2] + k4[2]) / 6.0
    return s, vre, vim


@lru_cache(maxsize=None)
def _stencil_weights(deriv_order: int, half_width: int) -> tuple[float, ...]:
    """Exact central finite-difference weights on offsets -half..+half.

    Solves sum_i w_i i^p = p! delta_{p,m} over the rationals, so the
    returned weights are correctly rounded doubles of the exact values.
    """
    n = 2 * half_width + 1
    if deriv_order >= n:
        raise ValueError("stencil too small for requested derivative order")
    offsets = range(-half_width, half_width + 1)
    a = [[Fraction(i) ** p for i in offsets] for p in range(n)]
    b = [Fraction(math.factorial(p)) if p == deriv_order else Fraction(0) for p in range(n)]
    # Gaussian elimination over Fraction
    for col in range(n):
        piv = next(row for row in range(col, n) if a[row][col] != 0)
        a[col], a[piv] = a[piv], a[col]
        b[col], b[piv] = b[piv], b[col]
        inv = Fraction(1) / a[col][col]
        a[col] = [v * inv for v in a[col]]
        b[col] = b[col] * inv
        for row in range(n):
            if row != col and a[row][col] != 0:
                factor = a[row][col]
                a[row] = [rv - factor * cv for rv, cv in zip(a[row], a[col])]
                b[row] = b[row] - factor * b[col]
    return tuple(float(v) for v in b)


def taylor_probe(
    f: Callable[[float], float],
    t0: float,
    max_order: int = 4,
    step: float = 1e-4,
    half_width: int = 4,
    events: Iterable[float] = (),
) -> np.ndarray:
    """Taylor coefficient estimates (1/k!) f^(k)(t0) for k = 0..max_order.

    Central finite differences on a symmetric 9-point stencil by default.
    The stencil must not contain a source event: pass the event times so
    the overlap check can run.

    Raises
    ------
    EventInWindowError
        If an event falls inside (t0 - half_width*step, t0 + half_width*step).
    """
    lo = t0 - half_width * step
    hi = t0 + half_width * step
    for t_ev in events:
        if lo < t_ev < hi:
            raise EventInWindowError(f"event at t={t_ev} inside the probe stencil")
    values = [f(t0 + i * step) for i in range(-half_width, half_width + 1)]
    coeffs = np.empty(max_order + 1)
    for m in range(max_order + 1):
        w = _stencil_weights(m, half_width)
        deriv = math.fsum(wi * vi for wi, vi in zip(w, values)) / step**m
        coeffs[m] = deriv / math.factorial(m)
    return coeffs
