"""Kernel-assembly backend selection.

The compiled Cython core is preferred; the numpy implementation is the
fallback. Set ``NMCASCADE_PURE_PYTHON=1`` to force the fallback (used by the
backend-equivalence tests and the benchmark).
"""

import os

if os.environ.get("NMCASCADE_PURE_PYTHON", "0") not in ("", "0"):
    from . import _kernels_py as kernels

    BACKEND_NAME = "python"
else:
    try:
        from . import _kernels_cy as kernels  # type: ignore[no-redef]

        BACKEND_NAME = "compiled"
    except ImportError:
        from . import _kernels_py as kernels  # type: ignore[no-redef]

        BACKEND_NAME = "python"
