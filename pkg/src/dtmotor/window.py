"""Single-window series construction: one truncated series per signal.

Per order k the algebra is layered as intermediates -> U0 -> affine
injection map -> coupled circuit solve -> u-terms -> currents, then the
state coefficients of order k+1 follow from the transformed differential
equations.  The algebraic series are populated through the full truncation
order K (the state advance stops one short, which already fills the state
series to K); defining-identity residuals and the deviation between the
recurrence currents and the affine prediction are recorded at every order.
"""

from __future__ import annotations

from dataclasses import dataclass

from .circuit import TheveninSource, solve_order_k
from .motor import (
    MotorParams,
    MotorSeries,
    advance_states,
    dt_currents,
    dt_intermediates,
    dt_u,
    dt_u0,
    injection_coeffs,
    series_residuals,
)
from .series import PowerSeries


@dataclass
class WindowResiduals:
    """Maxima over the window's orders of the series health monitors."""

    res_z: float
    res_u_re: float
    res_u_im: float
    two_path: float


def build_window(
    s0: float,
    vre0: float,
    vim0: float,
    params: MotorParams,
    src: TheveninSource,
    ex: float,
    ey: float,
    order: int,
    eps_div: float,
) -> tuple[MotorSeries, PowerSeries, PowerSeries, WindowResiduals]:
    """Populate all series for one window from its starting state.

    ex, ey are the (constant) rectangular EMF components active during the
    window.  Returns the populated MotorSeries, the terminal voltage series
    and the residual record.
    """
    io = MotorSeries(order)
    io.s[0] = s0
    io.vre_p[0] = vre0
    io.vim_p[0] = vim0
    io.state_level = 0

    vx = PowerSeries.zeros(order)
    vy = PowerSeries.zeros(order)

    res_z = 0.0
    res_u_re = 0.0
    res_u_im = 0.0
    two_path = 0.0

    for k in range(order + 1):
        dt_intermediates(io, params, k, eps_div)
        dt_u0(io, k)
        aff = injection_coeffs(io, vx, vy, k, eps_div)
        ek = (ex, ey) if k == 0 else (0.0, 0.0)
        vx_k, vy_k, ire_aff, iim_aff = solve_order_k(aff, ek, src)
        vx[k] = vx_k
        vy[k] = vy_k
        dt_u(io, vx, vy, k)
        dt_currents(io, k, eps_div)

        dev = max(abs(io.ire[k] - ire_aff), abs(io.iim[k] - iim_aff))
        scale = max(1.0, abs(io.ire[k]), abs(io.iim[k]))
        two_path = max(two_path, dev / scale)
        rz, rure, ruim = series_residuals(io, params, k)
        res_z = max(res_z, rz)
        res_u_re = max(res_u_re, rure)
        res_u_im = max(res_u_im, ruim)

        if k < order:
            advance_states(io, params, k)

    return io, vx, vy, WindowResiduals(res_z, res_u_re, res_u_im, two_path)
