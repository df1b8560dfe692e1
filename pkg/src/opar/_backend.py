"""Select the lifetime kernel implementation at import time.

The compiled extension is preferred. Setting ``OPAR_PURE_PYTHON=1`` forces
the pure-Python twin, which is also used when the extension is not built.
"""
import os

if os.environ.get("OPAR_PURE_PYTHON", "") not in ("", "0"):
    from . import _kernels_py as kernels
    BACKEND = "python"
else:
    try:
        from . import _kernels as kernels
        BACKEND = "cython"
    except ImportError:
        from . import _kernels_py as kernels
        BACKEND = "python"

__all__ = ["kernels", "BACKEND"]
