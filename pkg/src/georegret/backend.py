"""Kernel backend selection.

The Poincare-ball kernels exist twice: a compiled extension
(``georegret._speedups``) and a pure-numpy twin (``_kernels_py``).  The
compiled module is used when importable; set ``GEOREGRET_PURE=1`` to force
the fallback (useful for benchmarking and debugging).
"""

from __future__ import annotations

import os

from . import _kernels_py as pure_kernels

if os.environ.get("GEOREGRET_PURE", "") not in ("", "0"):
    poincare = pure_kernels
    COMPILED = False
else:
    try:
        from . import _speedups as poincare  # type: ignore[no-redef]

        COMPILED = True
    except ImportError:
        poincare = pure_kernels
        COMPILED = False


def backend_name() -> str:
    return "compiled" if COMPILED else "pure-python"
