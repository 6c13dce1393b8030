"""Backend selection for the hot Monte Carlo kernels.

Two interchangeable implementations exist: numba-jitted per-cycle loops
and a vectorized pure-numpy fallback.  The default comes from the
CLIQUESIM_BACKEND environment variable ("auto", "numba" or "numpy");
call sites may override it per call.  Both backends produce bit-identical
counts, which the test suite asserts.
"""

from __future__ import annotations

import os

VALID_BACKENDS = ("auto", "numba", "numpy")


def numba_available() -> bool:
    try:
        import numba  # noqa: F401
    except ImportError:
        return False
    return True


def default_backend() -> str:
    name = os.environ.get("CLIQUESIM_BACKEND", "auto").lower()
    if name not in VALID_BACKENDS:
        raise ValueError(
            f"CLIQUESIM_BACKEND must be one of {VALID_BACKENDS}, got {name!r}"
        )
    return name


def resolve_backend(name: str | None = None) -> str:
    """Return the concrete backend name ("numba" or "numpy") to use."""
    if name is None:
        name = default_backend()
    name = name.lower()
    if name not in VALID_BACKENDS:
        raise ValueError(f"backend must be one of {VALID_BACKENDS}, got {name!r}")
    if name == "auto":
        return "numba" if numba_available() else "numpy"
    if name == "numba" and not numba_available():
        raise RuntimeError("numba backend requested but numba is not importable")
    return name
