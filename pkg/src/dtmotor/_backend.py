"""Kernel backend selection.

The compiled extension is preferred when importable; the pure-Python twin
is the fallback.  DTMOTOR_BACKEND=pure|cython forces a choice (forcing
cython raises if the extension is missing).
"""

from __future__ import annotations

import os

from . import _kernels_py

_FORCE = os.environ.get("DTMOTOR_BACKEND", "").strip().lower()
if _FORCE not in ("", "pure", "cython"):
    raise ImportError(f"DTMOTOR_BACKEND must be 'pure' or 'cython', not {_FORCE!r}")

if _FORCE == "pure":
    _default = _kernels_py
else:
    try:
        from . import _kernels as _default  # type: ignore[attr-defined]
    except ImportError:
        if _FORCE == "cython":
            raise
        _default = _kernels_py

DEFAULT_BACKEND = _default.BACKEND_NAME


def backend_name() -> str:
    """Name of the kernel backend simulations use by default."""
    return DEFAULT_BACKEND


def get_kernels(backend: str | None = None):
    """Kernel module for the requested backend (None = default)."""
    if backend is None:
        return _default
    if backend == "pure":
        return _kernels_py
    if backend == "cython":
        from . import _kernels  # raises ImportError when not built

        return _kernels
    raise ValueError(f"unknown backend {backend!r}")


def available_backends() -> tuple[str, ...]:
    names = ["pure"]
    try:
        from . import _kernels  # noqa: F401

        names.insert(0, "cython")
    except ImportError:
        pass
    return tuple(names)
