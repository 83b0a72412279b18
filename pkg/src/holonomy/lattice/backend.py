"""Pick the compiled grid kernel when available, else the numpy fallback.

Set ``HOLONOMY_PURE=1`` to force the fallback.
"""
from __future__ import annotations

import os

from . import _kernel_py

compiled = None
if not os.environ.get("HOLONOMY_PURE"):
    try:
        from . import _kernel as compiled
    except ImportError:  # extension not built
        compiled = None

BACKEND = "compiled" if compiled is not None else "python"


def grid_kernel(name: str | None = None):
    """The ``chi3_grid_sum`` implementation for ``name`` (default: the active one)."""
    name = name or BACKEND
    if name == "compiled":
        if compiled is None:
            raise RuntimeError("compiled kernel is not available")
        return compiled.chi3_grid_sum
    if name == "python":
        return _kernel_py.chi3_grid_sum
    raise ValueError(f"unknown backend {name!r}")
