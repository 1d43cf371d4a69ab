"""Kernel backend selection.

Hot inner loops have two implementations: numba @njit kernels and pure-numpy
fallbacks.  The active backend is chosen once at import time from the
FFENERGY_BACKEND environment variable:

    FFENERGY_BACKEND=numba   require numba (ImportError if missing)
    FFENERGY_BACKEND=numpy   force the pure-numpy path
    unset / auto             numba when importable, numpy otherwise

Both implementations satisfy the same contracts and are compared against each
other (and against independent oracles) in the test suite and in
``python -m ffenergy.bench``.
"""

import os

_requested = os.environ.get("FFENERGY_BACKEND", "auto").strip().lower()

try:
    from numba import njit  # noqa: F401

    HAVE_NUMBA = True
except ImportError:
    HAVE_NUMBA = False

if _requested in ("", "auto"):
    USE_NUMBA = HAVE_NUMBA
elif _requested == "numba":
    if not HAVE_NUMBA:
        raise ImportError("FFENERGY_BACKEND=numba but numba is not installed")
    USE_NUMBA = True
elif _requested in ("numpy", "python"):
    USE_NUMBA = False
else:
    raise ValueError(f"unrecognized FFENERGY_BACKEND value: {_requested!r}")

BACKEND = "numba" if USE_NUMBA else "numpy"
