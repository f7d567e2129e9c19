"""Kernel backend selection.

At import time the compiled extension is preferred, with the numpy kernels as
fallback.  ``REFDEN_BACKEND`` overrides the choice: ``cython`` fails loudly if
the extension is missing, ``python`` forces the numpy kernels, ``auto`` (the
default) picks whatever is available.
"""

import os

from . import _kernels_py

_choice = os.environ.get("REFDEN_BACKEND", "auto").strip().lower()
if _choice not in ("auto", "cython", "python"):
    raise ImportError(
        f"REFDEN_BACKEND must be 'auto', 'cython' or 'python', got {_choice!r}"
    )

if _choice == "python":
    kernels = _kernels_py
    BACKEND = "python"
else:
    try:
        from . import _kernels as _ext
    except ImportError:
        if _choice == "cython":
            raise
        kernels = _kernels_py
        BACKEND = "python"
    else:
        kernels = _ext
        BACKEND = "cython"
