"""Steady-state initialization and windowed series time marching.

One simulation builds a truncated series per window, evaluates it at the
window end, and restarts the next window from there.  Windows never
straddle a source event: the horizon is split at every scheduled event
time and the last window of a segment is shortened to land exactly on the
boundary.  State variables are continuous across boundaries; algebraic
variables jump with the source.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from ._backend import backend_name, get_kernels
from .circuit import AlgebraicPoint, TheveninSource, source_series
from .errors import NoEquilibriumError, SimulationError
from .motor import MotorParams, MotorSeries, MotorState
from .oracle import algebraic_solve, rhs
from .series import EPS_DIV, PowerSeries, evaluate
from .trajectory import Trajectory
from .window import WindowResiduals, build_window

RESIDUAL_TOL = 1e-10

# initialization bracket scan (see init_steady_state)
_SCAN_LO = 1e-6
_SCAN_HI = 0.99
_SCAN_POINTS = 200
_BISECT_TOL = 1e-12
_NEWTON_ITERS = 3


@dataclass(frozen=True)
class SimConfig:
    """Marching configuration: window length, series order, horizon, sampling."""

    h: float = 1e-3
    K: int = 8
    t_end: float = 1.0
    sample_dt: float = 1e-3
    eps_div: float = EPS_DIV
    residual_tol: float = RESIDUAL_TOL

    def __post_init__(self):
        if not self.h > 0.0:
            raise ValueError("window length h must be positive")
        if self.K < 1:
            raise ValueError("series order K must be at least 1")
        if not self.t_end > 0.0:
            raise ValueError("t_end must be positive")
        if not self.sample_dt > 0.0:
            raise ValueError("sample_dt must be positive")


def steady_state_voltage(
    s: float, ire: float, iim: float, params: MotorParams
) -> tuple[float, float]:
    """Transient voltage making both voltage derivatives vanish at fixed slip.

    The two voltage equations at equilibrium are linear in (vre_p, vim_p):

        [ alpha  -s    ] [vre_p]   [-alpha beta iim]
        [ -s     alpha ] [vim_p] = [ alpha beta ire],   alpha = r_r/x_r.

    Singular exactly at s = alpha (the determinant alpha^2 - s^2 vanishes);
    callers probing across that slip see huge residuals, not crashes.
    """
    alpha = params.r_r / params.x_r
    beta = params.x_s - params.x_sp
    det = alpha * alpha - s * s
    r1 = -alpha * beta * iim
    r2 = alpha * beta * ire
    vre = (alpha * r1 + s * r2) / det
    vim = (s * r1 + alpha * r2) / det
    return vre, vim


def torque_balance_residual(s: float, params: MotorParams, src: TheveninSource) -> float:
    """Slip equation right-hand side (times 2H) at the quasi-steady point for s.

    Positive residual accelerates the slip.  Used by the equilibrium search;
    the voltage equations are satisfied exactly by construction.
    """
    e_mag, e_ang = src.values_at(0.0)
    alg = algebraic_solve(s, e_mag, e_ang, src.r, src.x, params)
    vre, vim = steady_state_voltage(s, alg.ire, alg.iim, params)
    return (
        params.a1 * s * s + params.b1 * s + params.c1
        - vre * alg.ire + vim * alg.iim
    )


def _equilibrium_point(s: float, params: MotorParams, src: TheveninSource):
    e_mag, e_ang = src.values_at(0.0)
    alg = algebraic_solve(s, e_mag, e_ang, src.r, src.x, params)
    vre, vim = steady_state_voltage(s, alg.ire, alg.iim, params)
    return MotorState(s=s, vre_p=vre, vim_p=vim), alg


def init_steady_state(
    params: MotorParams, src: TheveninSource, residual_tol: float = RESIDUAL_TOL
) -> tuple[MotorState, AlgebraicPoint]:
    """Equilibrium of the full model under the source values active at t = 0.

    Bracket-scans the torque balance over slip, bisects each sign change,
    polishes with a few finite-difference Newton steps, and accepts the
    smallest root whose full right-hand side is below residual_tol (this
    filters sign changes caused by the quasi-steady voltage pole at
    s = r_r/x_r, where the residual diverges instead of crossing zero).
    Multiple accepted roots emit a warning; the smallest wins.
    """

    def f(s):
        return torque_balance_residual(s, params, src)

    grid = np.linspace(_SCAN_LO, _SCAN_HI, _SCAN_POINTS)
    vals = [f(s) for s in grid]
    brackets = [
        (grid[i], grid[i + 1])
        for i in range(len(grid) - 1)
        if vals[i] == 0.0 or (vals[i] < 0.0) != (vals[i + 1] < 0.0)
    ]
    if not brackets:
        raise NoEquilibriumError(
            "torque balance does not change sign over the slip bracket (0, 1)"
        )

    accepted = []
    for lo, hi in brackets:
        flo = f(lo)
        while hi - lo > _BISECT_TOL:
            mid = 0.5 * (lo + hi)
            fmid = f(mid)
            if fmid == 0.0:
                lo = hi = mid
                break
            if (fmid < 0.0) == (flo < 0.0):
                lo, flo = mid, fmid
            else:
                hi = mid
        s_root = 0.5 * (lo + hi)
        for _ in range(_NEWTON_ITERS):
            fd = 1e-7 * max(1.0, abs(s_root))
            dfds = (f(s_root + fd) - f(s_root - fd)) / (2.0 * fd)
            if dfds == 0.0:
                break
            s_root -= f(s_root) / dfds
        if not _SCAN_LO / 2 < s_root < 1.0:
            continue
        try:
            state, alg = _equilibrium_point(s_root, params, src)
            res = max(abs(v) for v in rhs(state, params, src, 0.0))
        except (ValueError, ZeroDivisionError):
            continue  # bracket straddled the voltage pole, not a root
        if res <= residual_tol:
            accepted.append((s_root, state, alg))

    if not accepted:
        raise NoEquilibriumError(
            "no sign change converged to a true torque-balance root"
        )
    accepted.sort(key=lambda item: item[0])
    if len(accepted) > 1:
        warnings.warn(
            f"{len(accepted)} equilibria found; using the smallest slip",
            stacklevel=2,
        )
    _, state, alg = accepted[0]
    return state, alg


@dataclass
class WindowResult:
    """Output of one window: populated series, voltage series, end state."""

    series: MotorSeries
    vx: PowerSeries
    vy: PowerSeries
    end_state: MotorState
    residuals: WindowResiduals
    window_start: float
    window_len: float


def simulate_window(
    state: MotorState,
    params: MotorParams,
    src: TheveninSource,
    window_start: float,
    cfg: SimConfig,
    window_len: float | None = None,
) -> WindowResult:
    """Build and evaluate one event-free window starting from ``state``."""
    length = cfg.h if window_len is None else window_len
    ex_series, ey_series = source_series(src, window_start, length, cfg.K)
    io, vx, vy, res = build_window(
        state.s, state.vre_p, state.vim_p, params, src,
        ex_series[0], ey_series[0], cfg.K, cfg.eps_div,
    )
    end_state = MotorState(
        s=evaluate(io.s, length),
        vre_p=evaluate(io.vre_p, length),
        vim_p=evaluate(io.vim_p, length),
    )
    return WindowResult(io, vx, vy, end_state, res, window_start, length)


def _plan_windows(src: TheveninSource, cfg: SimConfig):
    """Window geometry: starts, lengths and per-window EMF components."""
    bounds = [0.0]
    for t_ev in src.event_times():
        if 0.0 < t_ev < cfg.t_end:
            bounds.append(t_ev)
    bounds.append(cfg.t_end)

    starts, lens, exs, eys = [], [], [], []
    for a, b in zip(bounds[:-1], bounds[1:]):
        ex, ey = src.emf_at(a)
        n = max(1, math.ceil((b - a) / cfg.h - 1e-9))
        for i in range(n):
            start = a + i * cfg.h
            starts.append(start)
            lens.append(min(cfg.h, b - start) if i == n - 1 else cfg.h)
            exs.append(ex)
            eys.append(ey)
    return (np.array(starts), np.array(lens), np.array(exs), np.array(eys))


def simulate(
    params: MotorParams,
    src: TheveninSource,
    cfg: SimConfig,
    state0: MotorState | None = None,
    backend: str | None = None,
) -> Trajectory:
    """Full windowed series march over [0, t_end]; samples every sample_dt.

    Starts from ``state0`` or, when omitted, from the computed equilibrium.
    Samples are evaluated from the window polynomials (left-closed at
    boundaries, so a sample on an event instant reports post-event
    algebraic values).  Per-window residual maxima are recorded in
    Trajectory.meta["residuals"].
    """
    if state0 is None:
        state0, _ = init_steady_state(params, src)

    win_starts, win_lens, win_ex, win_ey = _plan_windows(src, cfg)
    n_samp = int(math.floor(cfg.t_end / cfg.sample_dt + 1e-9)) + 1
    sample_times = np.arange(n_samp) * cfg.sample_dt

    kern = get_kernels(backend)
    par = (params.H, params.a1, params.b1, params.c1, params.r_s,
           params.x_s, params.x_sp, params.r_r, params.x_r, params.w_s)
    try:
        samples, win_res, _end = kern.dt_march(
            par, src.r, src.x, win_starts, win_lens, win_ex, win_ey,
            cfg.K, cfg.eps_div, sample_times,
            (state0.s, state0.vre_p, state0.vim_p),
        )
    except SimulationError as err:
        if getattr(err, "kernel_partial", None) is not None:
            sp, samples, n_win_done, win_res = err.kernel_partial
            err.partial = Trajectory.from_samples(
                sample_times[:sp], samples[:sp],
                _meta(cfg, kern, win_starts[:n_win_done], win_res[:n_win_done]),
            )
        raise

    meta = _meta(cfg, kern, win_starts, win_res)
    worst = max((float(win_res[:, j].max()) for j in range(3)), default=0.0)
    if len(win_res) and worst > cfg.residual_tol:
        warnings.warn(
            f"series residual maximum {worst:.3e} above tolerance {cfg.residual_tol:.1e}",
            stacklevel=2,
        )
    return Trajectory.from_samples(sample_times, samples, meta)


def _meta(cfg: SimConfig, kern, win_starts, win_res) -> dict:
    return {
        "method": "dt",
        "config": {
            "h": cfg.h, "K": cfg.K, "t_end": cfg.t_end,
            "sample_dt": cfg.sample_dt, "eps_div": cfg.eps_div,
            "residual_tol": cfg.residual_tol,
        },
        "backend": kern.BACKEND_NAME if kern is not None else backend_name(),
        "window_starts": np.asarray(win_starts),
        "residuals": {
            "z": np.asarray(win_res[:, 0]),
            "u_re": np.asarray(win_res[:, 1]),
            "u_im": np.asarray(win_res[:, 2]),
            "two_path": np.asarray(win_res[:, 3]),
        },
    }
