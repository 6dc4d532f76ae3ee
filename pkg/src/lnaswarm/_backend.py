"""Numba on/off switch.

Set ``LNASWARM_NUMBA=0`` to force the pure-numpy kernels. With numba missing
the numpy path is used regardless.
"""

from __future__ import annotations

import os

ENV_FLAG = "LNASWARM_NUMBA"

try:
    import numba  # noqa: F401

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - declared, but the package runs without it
    HAVE_NUMBA = False


def default_backend() -> str:
    flag = os.environ.get(ENV_FLAG, "1").strip().lower()
    if flag in ("0", "false", "no", "off", "numpy"):
        return "numpy"
    return "numba" if HAVE_NUMBA else "numpy"


def resolve(backend: str | None) -> str:
    if backend is None:
        return default_backend()
    if backend not in ("numpy", "numba"):
        raise ValueError(f"unknown backend {backend!r}")
    if backend == "numba" and not HAVE_NUMBA:
        raise RuntimeError("numba backend requested but numba is not installed")
    return backend
