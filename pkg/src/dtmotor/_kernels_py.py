"""Pure-Python marching kernels.

Fallback twin of the compiled extension in ``_kernels.pyx``: same call
signatures, same arithmetic, same operation order, so that either backend
produces the same trajectories.  Window/segment geometry and sample grids
are planned by the caller; the kernels only execute the hot loops.

The window march is built on the op-level series functions (one extra
layer of checking per order, which is the point of the fallback); the RK4
march hand-rolls the classical scheme with the algebraic solve inlined.
"""

from __future__ import annotations

import numpy as np

from .circuit import TheveninSource
from .errors import SimulationError
from .motor import MotorParams
from .series import evaluate
from .window import build_window

BACKEND_NAME = "pure"

# must match the compiled kernel exactly; see circuit.TIME_SLACK
_TIME_SLACK = 1e-12
_SAMPLE_HIT = 1e-9


def dt_march(
    par: tuple,
    r: float,
    x: float,
    win_starts: np.ndarray,
    win_lens: np.ndarray,
    win_ex: np.ndarray,
    win_ey: np.ndarray,
    order: int,
    eps_div: float,
    sample_times: np.ndarray,
    state0: tuple,
):
    """March the transform windows; returns (samples, win_res, end_state).

    samples has one row (s, vre_p, vim_p, vx, vy, ire, iim) per sample
    time; win_res one row (res_z, res_u_re, res_u_im, two_path) per window.
    """
    params = MotorParams(*par)
    src = TheveninSource(e_mag=0.0, e_ang=0.0, r=r, x=x)
    n_win = len(win_starts)
    n_samp = len(sample_times)
    samples = np.empty((n_samp, 7))
    win_res = np.empty((n_win, 4))

    s, vre, vim = state0
    sp = 0
    for iw in range(n_win):
        start = win_starts[iw]
        length = win_lens[iw]
        try:
            io, vx, vy, res = build_window(
                s, vre, vim, params, src, win_ex[iw], win_ey[iw], order, eps_div
            )
        except Exception as exc:
            err = SimulationError(
                f"window {iw} starting at t={start:.6g} failed: {exc}",
                window_index=iw,
                order=getattr(exc, "order", None),
            )
            err.kernel_partial = (sp, samples, iw, win_res)
            raise err from exc
        win_res[iw, 0] = res.res_z
        win_res[iw, 1] = res.res_u_re
        win_res[iw, 2] = res.res_u_im
        win_res[iw, 3] = res.two_path

        end = start + length
        final = iw == n_win - 1
        while sp < n_samp and (
            sample_times[sp] < end - _TIME_SLACK
            or (final and sample_times[sp] <= end + _TIME_SLACK)
        ):
            tau = sample_times[sp] - start
            samples[sp, 0] = evaluate(io.s, tau)
            samples[sp, 1] = evaluate(io.vre_p, tau)
            samples[sp, 2] = evaluate(io.vim_p, tau)
            samples[sp, 3] = evaluate(vx, tau)
            samples[sp, 4] = evaluate(vy, tau)
            samples[sp, 5] = evaluate(io.ire, tau)
            samples[sp, 6] = evaluate(io.iim, tau)
            sp += 1

        s = evaluate(io.s, length)
        vre = evaluate(io.vre_p, length)
        vim = evaluate(io.vim_p, length)

    if sp != n_samp:
        raise SimulationError(
            f"sample grid extends past the marched horizon ({sp} of {n_samp} placed)"
        )
    return samples, win_res, (s, vre, vim)


def _alg(s, ex, ey, r, x, r_s, x_s, x_sp, r_r, x_r):
    """Terminal voltage and current at slip s for the fixed EMF (ex, ey)."""
    z1 = r_r * r_r + x_r * x_r * s * s
    z0 = r_r * r_r * (x_s - x_sp) / z1
    z_re = r_s + z0
    z_im = x_sp + (x_r / r_r) * z0 * s
    w_re = z_re + r
    w_im = z_im + x
    den = w_re * w_re + w_im * w_im
    ire = (ex * w_re + ey * w_im) / den
    iim = (ey * w_re - ex * w_im) / den
    vx = ex - (r * ire - x * iim)
    vy = ey - (x * ire + r * iim)
    return vx, vy, ire, iim


def _deriv(s, vre, vim, ex, ey, r, x, par):
    H, a1, b1, c1, r_s, x_s, x_sp, r_r, x_r, w_s = par
    _, _, ire, iim = _alg(s, ex, ey, r, x, r_s, x_s, x_sp, r_r, x_r)
    w1 = w_s * r_r / x_r
    beta = x_s - x_sp
    ds = (a1 * s * s + b1 * s + c1 - vre * ire + vim * iim) / (2.0 * H)
    dvre = -w1 * (beta * iim + vre) + w_s * s * vim
    dvim = -w1 * (beta * ire - vim) - w_s * s * vre
    return ds, dvre, dvim


def rk4_march(
    par: tuple,
    r: float,
    x: float,
    seg_t0: np.ndarray,
    seg_nsteps: np.ndarray,
    seg_h: np.ndarray,
    seg_ex: np.ndarray,
    seg_ey: np.ndarray,
    sample_times: np.ndarray,
    state0: tuple,
):
    """Classical fixed-step RK4 over pre-split source segments.

    Sample times must coincide with step instants (the caller guarantees
    alignment); returns (samples, end_state).
    """
    H, a1, b1, c1, r_s, x_s, x_sp, r_r, x_r, w_s = par
    n_samp = len(sample_times)
    samples = np.empty((n_samp, 7))
    s, vre, vim = state0
    sp = 0
    t = 0.0
    for iseg in range(len(seg_t0)):
        t0 = seg_t0[iseg]
        h = seg_h[iseg]
        ex = seg_ex[iseg]
        ey = seg_ey[iseg]
        for i in range(int(seg_nsteps[iseg])):
            t = t0 + i * h
            if sp < n_samp and abs(t - sample_times[sp]) <= _SAMPLE_HIT:
                vx, vy, ire, iim = _alg(s, ex, ey, r, x, r_s, x_s, x_sp, r_r, x_r)
                samples[sp] = (s, vre, vim, vx, vy, ire, iim)
                sp += 1
            k1s, k1r, k1i = _deriv(s, vre, vim, ex, ey, r, x, par)
            k2s, k2r, k2i = _deriv(
                s + 0.5 * h * k1s, vre + 0.5 * h * k1r, vim + 0.5 * h * k1i,
                ex, ey, r, x, par,
            )
            k3s, k3r, k3i = _deriv(
                s + 0.5 * h * k2s, vre + 0.5 * h * k2r, vim + 0.5 * h * k2i,
                ex, ey, r, x, par,
            )
            k4s, k4r, k4i = _deriv(
                s + h * k3s, vre + h * k3r, vim + h * k3i,
                ex, ey, r, x, par,
            )
            s = s + h * (k1s + 2.0 * k2s + 2.0 * k3s + k4s) / 6.0
            vre = vre + h * (k1r + 2.0 * k2r + 2.0 * k3r + k4r) / 6.0
            vim = vim + h * (k1i + 2.0 * k2i + 2.0 * k3i + k4i) / 6.0
        t = t0 + int(seg_nsteps[iseg]) * h

    if sp < n_samp and abs(t - sample_times[sp]) <= _SAMPLE_HIT:
        ex = seg_ex[-1]
        ey = seg_ey[-1]
        vx, vy, ire, iim = _alg(s, ex, ey, r, x, r_s, x_s, x_sp, r_r, x_r)
        samples[sp] = (s, vre, vim, vx, vy, ire, iim)
        sp += 1
    if sp != n_samp:
        raise SimulationError(
            f"sample grid misaligned with step grid ({sp} of {n_samp} hit)"
        )
    return samples, (s, vre, vim)
