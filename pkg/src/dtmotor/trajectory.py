"""Time-sampled simulation output shared by the series simulator and the oracle."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .circuit import AlgebraicPoint
from .motor import MotorState

CSV_HEADER = "t,s,vre_p,vim_p,vx,vy,ire,iim"
_COLUMNS = ("s", "vre_p", "vim_p", "vx", "vy", "ire", "iim")


@dataclass
class Trajectory:
    """Columnar samples of states and algebraic variables at increasing times."""

    times: np.ndarray
    s: np.ndarray
    vre_p: np.ndarray
    vim_p: np.ndarray
    vx: np.ndarray
    vy: np.ndarray
    ire: np.ndarray
    iim: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        n = len(self.times)
        for name in _COLUMNS:
            if len(getattr(self, name)) != n:

                raise ValueError(f"column {name} length differs from times")
        if np.any(np.diff(self.times) <= 0.0):
            raise ValueError("sample times must be strictly increasing")

    @classmethod
    def from_samples(cls, times: np.ndarray, samples: np.ndarray, meta: dict) -> "Trajectory":
        """Build from an (n, 7) sample block ordered as the CSV columns."""
        cols = {name: np.ascontiguousarray(samples[:, j]) for j, name in enumerate(_COLUMNS)}
        return cls(times=np.asarray(times, dtype=float), meta=meta, **cols)

    def __len__(self) -> int:
        return len(self.times)

    def state_at(self, i: int) -> MotorState:
        return MotorState(s=float(self.s[i]), vre_p=float(self.vre_p[i]),
                          vim_p=float(self.vim_p[i]))

    def algebraic_at(self, i: int) -> AlgebraicPoint:
        return AlgebraicPoint(vx=float(self.vx[i]), vy=float(self.vy[i]),
                              ire=float(self.ire[i]), iim=float(self.iim[i]))

    def columns(self) -> np.ndarray:
        """(n, 8) array: time column followed by the seven data columns."""
        return np.column_stack([self.times] + [getattr(self, c) for c in _COLUMNS])

    def to_csv(self, path) -> None:
        """Write round-trippable CSV: 17 significant digits, LF endings."""
        rows = self.columns()
        with open(path, "w", encoding="ascii", newline="\n") as fh:
            fh.write(CSV_HEADER + "\n")
            for row in rows:
                fh.write(",".join(f"{v:.17g}" for v in row) + "\n")


def read_csv(path) -> Trajectory:
    """Inverse of :meth:`Trajectory.to_csv` (header checked, meta empty)."""
    with open(path, "r", encoding="ascii") as fh:
        header = fh.readline().strip()
        if header != CSV_HEADER:
            raise ValueError(f"unexpected CSV header: {header!r}")
        data = np.loadtxt(fh, delimiter=",", ndmin=2)
    return Trajectory.from_samples(data[:, 0], data[:, 1:], meta={})
