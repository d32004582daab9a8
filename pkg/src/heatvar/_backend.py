"""Kernel backend selection.

The compiled Cython core is used when importable; otherwise the pure
numpy/python fallback takes over transparently.  Set ``HEATVAR_BACKEND`` to
``compiled`` or ``python`` to force a choice (forcing ``compiled`` raises if
the extension is missing).  Within one backend all outputs are
bit-reproducible; across backends, power-variation sums are bit-identical
and sampled sections agree to a few ulp (dot-product reductions differ).
"""

from __future__ import annotations

import os

_requested = os.environ.get("HEATVAR_BACKEND", "").strip().lower()

if _requested in ("", "compiled", "c"):
    try:
        from . import _kernels as _impl

        BACKEND = "compiled"
    except ImportError:
        if _requested:
            raise
        from . import _kernels_py as _impl

        BACKEND = "python"
elif _requested in ("python", "fallback"):
    from . import _kernels_py as _impl

    BACKEND = "python"
else:
    raise RuntimeError(
        f"HEATVAR_BACKEND={_requested!r} not recognized (use 'compiled' or 'python')"
    )

neumaier_sum = _impl.neumaier_sum
abs_pow_sum = _impl.abs_pow_sum
ou_section_fill = _impl.ou_section_fill


def load_backend(name: str):
    """Return the raw kernel module for an explicit backend name (benchmarks)."""
    if name == "compiled":
        from . import _kernels

        return _kernels
    if name == "python":
        from . import _kernels_py

        return _kernels_py
    raise ValueError(f"unknown backend {name!r}")
