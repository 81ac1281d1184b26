"""Selection between the compiled kernel core and the numpy fallback.

The compiled extension is used when importable; GLT_BACKEND=python or
GLT_BACKEND=compiled forces a choice (the latter raising if the build is
missing).  Both backends expose lambda_sweep / tau_upper_bound / xi_log_lik
with identical semantics and uniform-draw consumption.
"""

from __future__ import annotations

import os

from . import _kernels_py


def _load(choice: str | None):
    if choice in (None, "", "auto"):
        try:
            from . import _core  # noqa: PLC0415

            return _core
        except ImportError:
            return _kernels_py
    if choice == "python":
        return _kernels_py
    if choice == "compiled":
        from . import _core  # noqa: PLC0415

        return _core
    raise ValueError(f"GLT_BACKEND must be auto, python or compiled, got {choice!r}")


_active = _load(os.environ.get("GLT_BACKEND"))


def get_kernels():
    """The active kernel namespace."""
    return _active


def backend_name() -> str:
    return _active.name


def set_backend(choice: str) -> None:
    """Force a backend (used by tests and the benchmark)."""
    global _active
    _active = _load(choice)
