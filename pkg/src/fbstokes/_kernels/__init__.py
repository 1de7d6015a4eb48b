"""Kernel backend selection.

The compiled extension is preferred when present; setting the environment
variable ``FBSTOKES_PURE_PYTHON=1`` forces the numpy fallback (used by the
benchmark and the backend-parity tests).
"""

import os

from . import _symbols_py

if os.environ.get("FBSTOKES_PURE_PYTHON"):
    impl = _symbols_py
    BACKEND = "python"
else:
    try:
        from . import _symbols_cy as impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:
        impl = _symbols_py
        BACKEND = "python"

symbol_B = impl.symbol_B
symbol_B0 = impl.symbol_B0
symbol_D = impl.symbol_D
symbol_detL = impl.symbol_detL
symbol_E = impl.symbol_E
kernel_M = impl.kernel_M

__all__ = [
    "BACKEND",
    "impl",
    "kernel_M",
    "symbol_B",
    "symbol_B0",
    "symbol_D",
    "symbol_detL",
    "symbol_E",
]
