"""Select the fixed-point kernel implementation at import time.

The compiled GMP kernels are used when importable.  Setting
``DETMOMENTS_KERNELS=python`` forces the pure-Python fallback.
"""

from __future__ import annotations

import os

from . import _kernels_py

_forced = os.environ.get("DETMOMENTS_KERNELS", "").lower()

if _forced == "python":
    _impl = _kernels_py
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined,no-redef]
    except ImportError:
        if _forced == "cython":
            raise
        _impl = _kernels_py

hyp_fixed_sum = _impl.hyp_fixed_sum
legendre_moments = _impl.legendre_moments
IMPLEMENTATION: str = _impl.IMPLEMENTATION

__all__ = ["hyp_fixed_sum", "legendre_moments", "IMPLEMENTATION", "python_kernels", "compiled_kernels"]

python_kernels = _kernels_py


def compiled_kernels():
    """The compiled module, or ``None`` when it was not built."""
    try:
        from . import _kernels

        return _kernels
    except ImportError:
        return None
