"""Kernel backend selection.

The two hot kernels (batched phase sums and the variation dynamic program)
exist twice: compiled with Cython in polyergo._core and vectorized with
NumPy in polyergo._corepy.  Import picks the compiled module when present.
Set POLYERGO_BACKEND=python to force the fallback or =compiled to require
the extension (raising if it is missing).
"""

from __future__ import annotations

import os

_requested = os.environ.get("POLYERGO_BACKEND", "auto").strip().lower()

if _requested not in ("auto", "", "compiled", "python"):
    raise RuntimeError(
        f"POLYERGO_BACKEND={_requested!r} not understood; use 'compiled' or 'python'"
    )

if _requested == "python":
    from . import _corepy as _impl

    BACKEND = "python"
else:
    try:
        from . import _core as _impl  # type: ignore[attr-defined]

        BACKEND = "compiled"
    except ImportError:
        if _requested == "compiled":
            raise
        from . import _corepy as _impl

        BACKEND = "python"

phase_sum_weighted = _impl.phase_sum_weighted
pvar_dp = _impl.pvar_dp
