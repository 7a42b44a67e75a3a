"""Truncated power-series arithmetic.

A series holds the Taylor coefficients X(k) = (1/k!) * d^k x/dt^k of one
scalar signal, taken at the start of the current time window (unscaled
convention: no step-length factor is folded into the coefficients, so
evaluation uses plain powers of the elapsed time).
"""

from __future__ import annotations

import math

import numpy as np

from .errors import SingularSeriesError

# Below this magnitude a leading denominator coefficient is treated as
# singular; failing beats silently regularizing a broken model.
EPS_DIV = 1e-12


class PowerSeries:
    """Coefficients X(0..K) of one signal over one window.

    Thin wrapper over a float64 array; coefficients are mutable in place
    (the transform recurrences fill them order by order).
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        arr = np.ascontiguousarray(coeffs, dtype=np.float64)
        if arr.ndim != 1 or arr.size == 0:
            raise ValueError("coefficients must be a non-empty 1-D sequence")
        if not np.all(np.isfinite(arr)):
            raise ValueError("coefficients must be finite")
        self.coeffs = arr

    @classmethod
    def zeros(cls, order: int) -> "PowerSeries":
        if order < 0:
            raise ValueError("order must be non-negative")
        return cls(np.zeros(order + 1))

    @classmethod
    def constant(cls, value: float, order: int) -> "PowerSeries":
        s = cls.zeros(order)
        s.coeffs[0] = value
        return s

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __len__(self) -> int:
        return len(self.coeffs)

    def __getitem__(self, k: int) -> float:
        if not 0 <= k <= self.order:
            raise IndexError(f"order {k} outside 0..{self.order}")
        return float(self.coeffs[k])

    def __setitem__(self, k: int, value: float) -> None:
        if not 0 <= k <= self.order:
            raise IndexError(f"order {k} outside 0..{self.order}")
        self.coeffs[k] = value

    def copy(self) -> "PowerSeries":
        return PowerSeries(self.coeffs.copy())

    def __repr__(self) -> str:
        return f"PowerSeries({self.coeffs.tolist()})"


def conv(f: PowerSeries, g: PowerSeries, k: int) -> float:
    """Order-k Cauchy product coefficient sum_{m=0}^{k} F(m) G(k-m)."""
    if not 0 <= k <= min(f.order, g.order):
        raise IndexError(f"order {k} outside both series (orders {f.order}, {g.order})")
    fc = f.coeffs
    gc = g.coeffs
    acc = 0.0
    for m in range(k + 1):
        acc += fc[m] * gc[k - m]
    return float(acc)


def delta(k: int) -> float:
    """Transform of the constant 1: one at order zero, zero elsewhere."""
    return 1.0 if k == 0 else 0.0


def divide_recurrence(
    numerator: PowerSeries, denominator: PowerSeries, eps_div: float = EPS_DIV
) -> PowerSeries:
    """Series quotient Q with conv(Q, denominator, k) == numerator(k) for all k.

    Q(k) = (N(k) - sum_{m=0}^{k-1} D(k-m) Q(m)) / D(0), the same recurrence
    shape the transformed model uses for its own rational terms.

    Raises
    ------
    SingularSeriesError
        If |D(0)| <= eps_div.
    """
    d0 = denominator[0]
    if abs(d0) <= eps_div:
        raise SingularSeriesError(d0)
    order = min(numerator.order, denominator.order)
    nc = numerator.coeffs
    dc = denominator.coeffs
    q = np.zeros(order + 1)
    for k in range(order + 1):
        acc = 0.0
        for m in range(k):
            acc += dc[k - m] * q[m]
        q[k] = (nc[k] - acc) / d0
    return PowerSeries(q)


def evaluate(f: PowerSeries, t: float) -> float:
    """Polynomial value sum_k F(k) t^k via Horner; t is elapsed window time."""
    acc = 0.0
    for c in f.coeffs[::-1]:
        acc = acc * t + c
    return float(acc)


def evaluate_many(f: PowerSeries, t: np.ndarray) -> np.ndarray:
    """Vectorized :func:`evaluate` over an array of elapsed times."""
    t = np.asarray(t, dtype=np.float64)
    acc = np.zeros_like(t)
    for c in f.coeffs[::-1]:
        acc = acc * t + c
    return acc


def factorial_scaled(derivatives: list[float]) -> PowerSeries:
    """Build a series from raw derivatives d^k x/dt^k (divides by k!)."""
    return PowerSeries([d / math.factorial(k) for k, d in enumerate(derivatives)])
