"""Third-order induction motor load model and its power-series transform.

State variables are the slip s and the rectangular components of the
transient internal voltage (vre_p, vim_p).  The algebraic current injection
follows from the terminal voltage through a slip-dependent equivalent
impedance:

    i_re = (v_x z_re + v_y z_im) / (z_re^2 + z_im^2)
    i_im = (-v_x z_im + v_y z_re) / (z_re^2 + z_im^2)
    z_re = r_s  + r_r^2 (x_s - x_sp) / (r_r^2 + x_r^2 s^2)
    z_im = x_sp + r_r^2 (x_s - x_sp) / (r_r^2 + x_r^2 s^2) * (x_r / r_r) * s

and the differential part is

    ds/dt      = (a1 s^2 + b1 s + c1 - vre_p i_re + vim_p i_im) / (2H)
    dvre_p/dt  = -w_s (r_r/x_r) ((x_s - x_sp) i_im + vre_p) + w_s s vim_p
    dvim_p/dt  = -w_s (r_r/x_r) ((x_s - x_sp) i_re - vim_p) - w_s s vre_p

Signs are implemented exactly as written above; note the +vim_p feedback in
the third equation makes the internal-voltage pair neutrally oscillatory
(for s > r_r/x_r) rather than damped, so check conventions before reusing
parameter sets fitted to other formulations.

The transformed (per-order) versions of these relations live in the dt_*
functions below; `injection_coeffs` exposes the affine map that makes the
transformed injection equation linear in the order-k voltage coefficients.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import SingularSeriesError
from .series import EPS_DIV, PowerSeries, conv, delta


@dataclass(frozen=True)
class MotorParams:
    """Physical constants of the motor load, all in per unit except H (s) and w_s (rad/s).

    a1, b1, c1 are the mechanical-torque polynomial coefficients
    (torque = a1 s^2 + b1 s + c1); they are opaque scenario inputs.
    """

    H: float
    a1: float
    b1: float
    c1: float
    r_s: float
    x_s: float
    x_sp: float
    r_r: float
    x_r: float
    w_s: float

    def __post_init__(self):
        for name in ("H", "r_r", "x_r", "w_s"):
            if not getattr(self, name) > 0.0:
                raise ValueError(f"{name} must be positive")
        if not (self.x_s > self.x_sp > 0.0):
            raise ValueError("need x_s > x_sp > 0")
        for name in ("H", "a1", "b1", "c1", "r_s", "x_s", "x_sp", "r_r", "x_r", "w_s"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")


@dataclass(frozen=True)
class MotorState:
    """Instantaneous state: slip and transient voltage components."""

    s: float
    vre_p: float
    vim_p: float

    def __post_init__(self):
        if not all(map(math.isfinite, (self.s, self.vre_p, self.vim_p))):
            raise ValueError("state must be finite")
        if not 0.0 <= self.s < 1.0:
            warnings.warn("slip outside the healthy range [0, 1)", stacklevel=2)


class MotorSeries:
    """Per-window coefficient series of every transformed motor signal.

    All series share one truncation order.  Population is strictly layered
    per order k (intermediates -> u-terms -> currents -> state advance);
    the *_level counters record the highest populated order of each layer
    and the dt_* functions enforce them.
    """

    __slots__ = (
        "s", "vre_p", "vim_p", "ire", "iim",
        "z0", "z1", "zre", "zim", "u0", "u1", "u2",
        "state_level", "z_level", "u0_level", "u_level", "i_level",
    )

    def __init__(self, order: int):
        if order < 0:
            raise ValueError("order must be non-negative")
        for name in ("s", "vre_p", "vim_p", "ire", "iim",
                     "z0", "z1", "zre", "zim", "u0", "u1", "u2"):
            setattr(self, name, PowerSeries.zeros(order))
        self.state_level = -1
        self.z_level = -1
        self.u0_level = -1
        self.u_level = -1
        self.i_level = -1

    @classmethod
    def from_state(cls, state: MotorState, order: int) -> "MotorSeries":
        ms = cls(order)
        ms.s[0] = state.s
        ms.vre_p[0] = state.vre_p
        ms.vim_p[0] = state.vim_p
        ms.state_level = 0
        return ms

    @property
    def order(self) -> int:
        return self.s.order

    def mark_states_populated(self, level: int | None = None) -> None:
        """Declare externally written state coefficients (used by fuzz setups)."""
        self.state_level = self.order if level is None else level


@dataclass(frozen=True)
class InjectionAffine:
    """Order-k affine map from voltage to current coefficients.

    I(k) = a @ V(k) + b, with a of the rotation-like form
    [[p, q], [-q, p]] where p = Zre(0)/U0(0), q = Zim(0)/U0(0).
    """

    a: np.ndarray
    b: np.ndarray

    @classmethod
    def from_components(cls, p: float, q: float, b1: float, b2: float) -> "InjectionAffine":
        return cls(a=np.array([[p, q], [-q, p]]), b=np.array([b1, b2]))

    def apply(self, vx_k: float, vy_k: float) -> tuple[float, float]:
        a = self.a
        b = self.b
        return (
            float(a[0, 0] * vx_k + a[0, 1] * vy_k + b[0]),
            float(a[1, 0] * vx_k + a[1, 1] * vy_k + b[1]),
        )


# --------------------------------------------------------------------------
# direct (non-series) algebra, used by initialization and the RK4 oracle
# --------------------------------------------------------------------------


def impedance_direct(s: float, params: MotorParams) -> tuple[float, float]:
    """Equivalent impedance (z_re, z_im) at slip s."""
    p = params
    z1 = p.r_r * p.r_r + p.x_r * p.x_r * s * s
    z0 = p.r_r * p.r_r * (p.x_s - p.x_sp) / z1
    z_re = p.r_s + z0
    z_im = p.x_sp + (p.x_r / p.r_r) * z0 * s
    return z_re, z_im


def current_direct(
    vx: float, vy: float, s: float, params: MotorParams, eps_div: float = EPS_DIV
) -> tuple[float, float]:
    """Instantaneous current injection at terminal voltage (vx, vy) and slip s."""
    z_re, z_im = impedance_direct(s, params)
    u0 = z_re * z_re + z_im * z_im
    if u0 <= eps_div:
        raise SingularSeriesError(u0, "degenerate impedance magnitude")
    i_re = (vx * z_re + vy * z_im) / u0
    i_im = (-vx * z_im + vy * z_re) / u0
    return i_re, i_im


# --------------------------------------------------------------------------
# per-order transform recurrences
# --------------------------------------------------------------------------


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise ValueError(message)


def dt_intermediates(io: MotorSeries, params: MotorParams, k: int,
                     eps_div: float = EPS_DIV) -> None:
    """Fill Z1(k), Z0(k), Zre(k), Zim(k) from the slip series.

    Z1(k)  = r_r^2 d(k) + x_r^2 (S o S)(k)
    Z0(k)  = (r_r^2 (x_s - x_sp) d(k) - sum_{m<k} Z1(k-m) Z0(m)) / Z1(0)
    Zre(k) = r_s d(k) + Z0(k)
    Zim(k) = x_sp d(k) + (x_r/r_r) (Z0 o S)(k)
    """
    _require(io.state_level >= k, f"slip series not populated through order {k}")
    _require(io.z_level >= k - 1, f"intermediates not populated through order {k - 1}")
    p = params
    d = delta(k)
    rr2 = p.r_r * p.r_r
    io.z1[k] = rr2 * d + (p.x_r * p.x_r) * conv(io.s, io.s, k)
    z1_0 = io.z1[0]
    if abs(z1_0) <= eps_div:
        raise SingularSeriesError(z1_0, "Z1(0) vanished")  # impossible for r_r > 0
    acc = 0.0
    z1c = io.z1.coeffs
    z0c = io.z0.coeffs
    for m in range(k):
        acc += z1c[k - m] * z0c[m]
    io.z0[k] = (rr2 * (p.x_s - p.x_sp) * d - acc) / z1_0
    io.zre[k] = p.r_s * d + io.z0[k]
    io.zim[k] = p.x_sp * d + (p.x_r / p.r_r) * conv(io.z0, io.s, k)
    io.z_level = k


def dt_u0(io: MotorSeries, k: int) -> None:
    """Fill U0(k) = (Zre o Zre)(k) + (Zim o Zim)(k).

    Split out of :func:`dt_u` because the affine injection map needs U0
    through order k before the order-k voltage coefficients exist.
    """
    _require(io.z_level >= k, f"impedance series not populated through order {k}")
    _require(io.u0_level >= k - 1, f"U0 not populated through order {k - 1}")
    io.u0[k] = conv(io.zre, io.zre, k) + conv(io.zim, io.zim, k)
    io.u0_level = max(io.u0_level, k)


def dt_u(io: MotorSeries, vx: PowerSeries, vy: PowerSeries, k: int) -> None:
    """Fill U0(k), U1(k), U2(k) from the voltage and impedance series.

    U1 = Vx o Zre + Vy o Zim;  U2 = -Vx o Zim + Vy o Zre;
    U0 = Zre o Zre + Zim o Zim.
    """
    _require(io.z_level >= k, f"impedance series not populated through order {k}")
    _require(io.u_level >= k - 1, f"u-terms not populated through order {k - 1}")
    if io.u0_level < k:
        dt_u0(io, k)
    io.u1[k] = conv(vx, io.zre, k) + conv(vy, io.zim, k)
    io.u2[k] = -conv(vx, io.zim, k) + conv(vy, io.zre, k)
    io.u_level = k


def dt_currents(io: MotorSeries, k: int, eps_div: float = EPS_DIV) -> None:
    """Fill Ire(k), Iim(k) by the division recurrence of the injection equation.

    Ire(k) = (U1(k) - sum_{m<k} U0(k-m) Ire(m)) / U0(0), same shape for Iim
    with U2.
    """
    _require(io.u_level >= k, f"u-terms not populated through order {k}")
    _require(io.i_level >= k - 1, f"currents not populated through order {k - 1}")
    u0_0 = io.u0[0]
    if abs(u0_0) <= eps_div:
        raise SingularSeriesError(u0_0, "U0(0) vanished")
    u0c = io.u0.coeffs
    irec = io.ire.coeffs
    iimc = io.iim.coeffs
    acc_re = 0.0
    acc_im = 0.0
    for m in range(k):
        acc_re += u0c[k - m] * irec[m]
        acc_im += u0c[k - m] * iimc[m]
    io.ire[k] = (io.u1[k] - acc_re) / u0_0
    io.iim[k] = (io.u2[k] - acc_im) / u0_0
    io.i_level = k


def injection_coeffs(io: MotorSeries, vx: PowerSeries, vy: PowerSeries, k: int,
                     eps_div: float = EPS_DIV) -> InjectionAffine:
    """Affine relation I(k) = A V(k) + B at order k.

    Only history strictly below order k of vx, vy and the currents is read,
    so the order-k voltage coefficients may still be unknown; A and B depend
    on lower-order data alone.  Feeding any (vx[k], vy[k]) through dt_u and
    dt_currents reproduces A @ V(k) + B exactly (algebraic rearrangement).
    """
    _require(io.z_level >= k, f"impedance series not populated through order {k}")
    _require(io.u0_level >= k, f"U0 not populated through order {k}")
    _require(io.i_level >= k - 1, f"currents not populated through order {k - 1}")
    _require(min(vx.order, vy.order) >= k - 1,
             f"voltage history must reach order {k - 1}")
    u0_0 = io.u0[0]
    if abs(u0_0) <= eps_div:
        raise SingularSeriesError(u0_0, "U0(0) vanished")
    zrec = io.zre.coeffs
    zimc = io.zim.coeffs
    u0c = io.u0.coeffs
    vxc = vx.coeffs
    vyc = vy.coeffs
    irec = io.ire.coeffs
    iimc = io.iim.coeffs
    b1 = 0.0
    b2 = 0.0
    for m in range(k):
        b1 += vxc[m] * zrec[k - m] + vyc[m] * zimc[k - m] - u0c[k - m] * irec[m]
        b2 += -vxc[m] * zimc[k - m] + vyc[m] * zrec[k - m] - u0c[k - m] * iimc[m]
    return InjectionAffine.from_components(
        p=zrec[0] / u0_0, q=zimc[0] / u0_0, b1=b1 / u0_0, b2=b2 / u0_0
    )


def advance_states(io: MotorSeries, params: MotorParams, k: int) -> tuple[float, float, float]:
    """Fill the order-(k+1) state coefficients from order-k data.

    (k+1) S(k+1)     = (a1 (S o S)(k) + b1 S(k) + c1 d(k)
                        - (Vre' o Ire)(k) + (Vim' o Iim)(k)) / (2H)
    (k+1) Vre'(k+1)  = -w_s (r_r/x_r) ((x_s - x_sp) Iim(k) + Vre'(k))
                        + w_s (S o Vim')(k)
    (k+1) Vim'(k+1)  = -w_s (r_r/x_r) ((x_s - x_sp) Ire(k) - Vim'(k))
                        - w_s (S o Vre')(k)
    """
    _require(io.state_level >= k, f"states not populated through order {k}")
    _require(io.i_level >= k, f"currents not populated through order {k}")
    _require(k + 1 <= io.order, f"order {k + 1} exceeds series order {io.order}")
    p = params
    d = delta(k)
    w1 = p.w_s * p.r_r / p.x_r
    beta = p.x_s - p.x_sp
    s_next = (
        p.a1 * conv(io.s, io.s, k) + p.b1 * io.s[k] + p.c1 * d
        - conv(io.vre_p, io.ire, k) + conv(io.vim_p, io.iim, k)
    ) / (2.0 * p.H * (k + 1))
    vre_next = (
        -w1 * (beta * io.iim[k] + io.vre_p[k]) + p.w_s * conv(io.s, io.vim_p, k)
    ) / (k + 1)
    vim_next = (
        -w1 * (beta * io.ire[k] - io.vim_p[k]) - p.w_s * conv(io.s, io.vre_p, k)
    ) / (k + 1)
    io.s[k + 1] = s_next
    io.vre_p[k + 1] = vre_next
    io.vim_p[k + 1] = vim_next
    io.state_level = max(io.state_level, k + 1)
    return s_next, vre_next, vim_next


def series_residuals(io: MotorSeries, params: MotorParams, k: int) -> tuple[float, float, float]:
    """Order-k defining-identity residuals of the populated series.

    Returns |conv(Z0,Z1,k) - r_r^2 (x_s-x_sp) d(k)|, |conv(U0,Ire,k) - U1(k)|
    and |conv(U0,Iim,k) - U2(k)|; all should sit at round-off for a
    correctly populated window.
    """
    p = params
    res_z = abs(conv(io.z0, io.z1, k) - p.r_r * p.r_r * (p.x_s - p.x_sp) * delta(k))
    res_ure = abs(conv(io.u0, io.ire, k) - io.u1[k])
    res_uim = abs(conv(io.u0, io.iim, k) - io.u2[k])
    return res_z, res_ure, res_uim
