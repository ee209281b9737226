"""Hot loops behind the spectral analyses.

Two interchangeable backends: numba (default) and pure numpy.  Set
``BUTTERFLY_NUMBA=0`` to force numpy; numpy is also used when numba is
missing.  Both backends are importable directly for cross-checking.
"""
import os

import numpy as np

from . import _numpy as numpy_backend

try:
    from . import _numba as numba_backend
    NUMBA_AVAILABLE = True
except ImportError:  # pragma: no cover
    numba_backend = None
    NUMBA_AVAILABLE = False

USE_NUMBA = NUMBA_AVAILABLE and os.environ.get("BUTTERFLY_NUMBA", "1").lower() not in ("0", "off", "false", "no")
backend = numba_backend if USE_NUMBA else numpy_backend
BACKEND_NAME = "numba" if USE_NUMBA else "numpy"

fwht = backend.fwht
walsh_hist = backend.walsh_hist
ddt_hist = backend.ddt_hist
ddt_max = backend.ddt_max
moebius = backend.moebius


def warmup():
    """Trigger JIT compilation on a tiny table (no-op on the numpy path)."""
    lut = np.arange(4, dtype=np.int64)
    walsh_hist(lut, 2, 2, 1, 4)
    ddt_hist(lut, 2, 2, 1, 4)
    ddt_max(lut, 2, 2, 4)
    moebius(lut)
    fwht(lut)


__all__ = ["fwht", "walsh_hist", "ddt_hist", "ddt_max", "moebius", "warmup",
           "numpy_backend", "numba_backend", "NUMBA_AVAILABLE", "BACKEND_NAME"]
