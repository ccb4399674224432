"""Select the kernel implementation once, at import.

The compiled extension is preferred; ``FINEALIGN_PURE=1`` forces the
pure-Python kernels (useful for debugging and for the backend benchmark).
"""

import logging
import os

from . import _pycore

log = logging.getLogger(__name__)

pure = _pycore
compiled = None

if os.environ.get("FINEALIGN_PURE", "") not in ("", "0"):
    kernels = _pycore
    BACKEND = "python"
else:
    try:
        from . import _core as compiled
    except ImportError:  # extension not built
        kernels = _pycore
        BACKEND = "python"
        log.debug("compiled kernels unavailable, using pure-Python fallback")
    else:
        kernels = compiled
        BACKEND = "compiled"

__all__ = ["kernels", "pure", "BACKEND"]
