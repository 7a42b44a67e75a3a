"""Thevenin source and the per-order coupling solve.

The motor sees a single EMF behind a series impedance:

    V(k) = E(k) - Z_net @ I(k),   Z_net = [[r, -x], [x, r]]

Combined with the affine injection relation I(k) = A V(k) + B this gives
one well-posed 2x2 system per series order:

    (I2 + A Z_net) I(k) = A E(k) + B

The source is piecewise constant: a schedule of (time, e_mag, e_ang)
events, each taking effect exactly at its event time (left-closed).  The
simulator splits windows at event times so a single window never straddles
a discontinuity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import CouplingSingularError, EventInWindowError
from .motor import InjectionAffine
from .series import PowerSeries

DET_GUARD = 1e-14
COND_LIMIT = 1e12

# slack for "does this event sit inside the window" comparisons; window
# lengths are >= microseconds, so 1e-12 s is far below any real geometry
TIME_SLACK = 1e-12


@dataclass(frozen=True)
class TheveninSource:
    """EMF behind a series impedance, with a stepwise magnitude/angle schedule."""

    e_mag: float
    e_ang: float
    r: float
    x: float
    schedule: tuple[tuple[float, float, float], ...] = field(default_factory=tuple)

    def __post_init__(self):
        if self.r < 0.0:
            raise ValueError("series resistance must be non-negative")
        if self.e_mag < 0.0:
            raise ValueError("EMF magnitude must be non-negative")
        object.__setattr__(
            self, "schedule", tuple((float(t), float(m), float(a)) for t, m, a in self.schedule)
        )
        times = [t for t, _, _ in self.schedule]
        if any(t2 <= t1 for t1, t2 in zip(times, times[1:])):
            raise ValueError("event times must be strictly increasing")
        if any(m < 0.0 for _, m, _ in self.schedule):
            raise ValueError("scheduled EMF magnitudes must be non-negative")

    def values_at(self, t: float) -> tuple[float, float]:
        """(e_mag, e_ang) active at time t; events apply from t_event onward."""
        mag, ang = self.e_mag, self.e_ang
        for t_ev, m, a in self.schedule:
            if t_ev <= t:
                mag, ang = m, a
            else:
                break
        return mag, ang

    def emf_at(self, t: float) -> tuple[float, float]:
        """Rectangular EMF components (e_x, e_y) active at time t."""
        mag, ang = self.values_at(t)
        return mag * math.cos(ang), mag * math.sin(ang)

    def event_times(self) -> tuple[float, ...]:
        return tuple(t for t, _, _ in self.schedule)


@dataclass(frozen=True)
class AlgebraicPoint:
    """Terminal voltage and current injection at one instant."""

    vx: float
    vy: float
    ire: float
    iim: float


def source_series(
    src: TheveninSource, window_start: float, window_len: float, order: int
) -> tuple[PowerSeries, PowerSeries]:
    """Constant EMF coefficient series for one event-free window.

    Raises
    ------
    EventInWindowError
        If an event falls strictly inside (window_start, window_start + window_len).
    """
    for t_ev in src.event_times():
        if window_start + TIME_SLACK < t_ev < window_start + window_len - TIME_SLACK:
            raise EventInWindowError(
                f"source event at t={t_ev} inside window starting at {window_start}"
            )
    ex, ey = src.emf_at(window_start)
    return PowerSeries.constant(ex, order), PowerSeries.constant(ey, order)


def solve_order_k(
    aff: InjectionAffine, e_k: tuple[float, float], src: TheveninSource
) -> tuple[float, float, float, float]:
    """Solve the coupled order-k system; returns (vx_k, vy_k, ire_k, iim_k).

    Uses the closed-form 2x2 inverse.  Because both A and Z_net are
    rotation-like, the system matrix is too: M = [[m1, m2], [-m2, m1]]
    with det = m1^2 + m2^2.
    """
    p = float(aff.a[0, 0])
    q = float(aff.a[0, 1])
    b1 = float(aff.b[0])
    b2 = float(aff.b[1])
    r, x = src.r, src.x
    ex_k, ey_k = e_k

    m1 = 1.0 + p * r + q * x
    m2 = q * r - p * x
    det = m1 * m1 + m2 * m2
    if abs(det) <= DET_GUARD:
        raise CouplingSingularError(f"coupling determinant {det:.3e} below guard")
    norm = abs(m1) + abs(m2)
    if norm * norm / det > COND_LIMIT:
        raise CouplingSingularError(f"coupling condition estimate above {COND_LIMIT:.0e}")

    rhs1 = p * ex_k + q * ey_k + b1
    rhs2 = -q * ex_k + p * ey_k + b2
    ire_k = (m1 * rhs1 - m2 * rhs2) / det
    iim_k = (m2 * rhs1 + m1 * rhs2) / det
    vx_k = ex_k - (r * ire_k - x * iim_k)
    vy_k = ey_k - (x * ire_k + r * iim_k)
    return vx_k, vy_k, ire_k, iim_k
