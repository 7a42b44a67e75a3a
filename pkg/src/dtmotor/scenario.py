"""Scenario files: one JSON object describing motor, source and marching setup.

Layout (all keys required unless noted, unknown keys rejected):

    {
      "motor":  {"H": .., "a1": .., "b1": .., "c1": .., "r_s": ..,
                 "x_s": .., "x_sp": .., "r_r": .., "x_r": .., "w_s": ..},
      "source": {"e_mag": .., "e_ang": .., "r": .., "x": ..,
                 "schedule": [[t, e_mag, e_ang], ...]},   # schedule optional
      "sim":    {"h": .., "K": .., "t_end": .., "sample_dt": ..}
    }
"""

from __future__ import annotations

import json
from pathlib import Path

from .circuit import TheveninSource
from .errors import ScenarioError
from .motor import MotorParams
from .simulator import SimConfig

_MOTOR_KEYS = ("H", "a1", "b1", "c1", "r_s", "x_s", "x_sp", "r_r", "x_r", "w_s")
_SOURCE_KEYS = ("e_mag", "e_ang", "r", "x")
_SIM_KEYS = ("h", "K", "t_end", "sample_dt")


def _section(obj: dict, name: str, keys: tuple, optional: tuple = ()) -> dict:
    if name not in obj:
        raise ScenarioError(f"missing section {name!r}")
    sec = obj[name]
    if not isinstance(sec, dict):
        raise ScenarioError(f"section {name!r} must be an object")
    unknown = set(sec) - set(keys) - set(optional)
    if unknown:
        raise ScenarioError(f"unknown keys in {name!r}: {sorted(unknown)}")
    missing = set(keys) - set(sec)
    if missing:
        raise ScenarioError(f"missing keys in {name!r}: {sorted(missing)}")
    return sec


def _number(sec: dict, section: str, key: str) -> float:
    v = sec[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ScenarioError(f"{section}.{key} must be a number")
    return float(v)


def load_scenario(path) -> tuple[MotorParams, TheveninSource, SimConfig]:
    """Parse and validate a scenario file; raises ScenarioError on any defect."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ScenarioError(f"cannot read scenario: {exc}") from exc
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"scenario is not valid JSON: {exc}") from exc
    if not isinstance(obj, dict):
        raise ScenarioError("scenario must be a JSON object")
    unknown = set(obj) - {"motor", "source", "sim"}
    if unknown:
        raise ScenarioError(f"unknown top-level keys: {sorted(unknown)}")

    motor_sec = _section(obj, "motor", _MOTOR_KEYS)
    source_sec = _section(obj, "source", _SOURCE_KEYS, optional=("schedule",))
    sim_sec = _section(obj, "sim", _SIM_KEYS)

    schedule = source_sec.get("schedule", [])
    if not isinstance(schedule, list) or any(
        not isinstance(ev, list) or len(ev) != 3 for ev in schedule
    ):
        raise ScenarioError("source.schedule must be a list of [t, e_mag, e_ang]")

    try:
        params = MotorParams(**{k: _number(motor_sec, "motor", k) for k in _MOTOR_KEYS})
        src = TheveninSource(
            e_mag=_number(source_sec, "source", "e_mag"),
            e_ang=_number(source_sec, "source", "e_ang"),
            r=_number(source_sec, "source", "r"),
            x=_number(source_sec, "source", "x"),
            schedule=tuple((float(t), float(m), float(a)) for t, m, a in schedule),
        )
        k_raw = sim_sec["K"]
        if isinstance(k_raw, bool) or not isinstance(k_raw, int):
            raise ScenarioError("sim.K must be an integer")
        cfg = SimConfig(
            h=_number(sim_sec, "sim", "h"),
            K=k_raw,
            t_end=_number(sim_sec, "sim", "t_end"),
            sample_dt=_number(sim_sec, "sim", "sample_dt"),
        )
    except ScenarioError:
        raise
    except (TypeError, ValueError) as exc:
        raise ScenarioError(f"invalid scenario values: {exc}") from exc
    return params, src, cfg
