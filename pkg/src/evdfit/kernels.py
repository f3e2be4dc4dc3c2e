"""Kernel backend selection.

The Cython extension is used when it was built; otherwise the numpy fallback.
Set ``EVDFIT_PURE_PYTHON=1`` to force the fallback.
"""

import os

from . import _pykernels

if os.environ.get("EVDFIT_PURE_PYTHON", "") not in ("", "0"):
    _impl = _pykernels
    BACKEND = "python"
else:
    try:
        from . import _ckernels as _impl

        BACKEND = "cython"
    except ImportError:  # extension not built
        _impl = _pykernels
        BACKEND = "python"

weighted_lse_mean = _impl.weighted_lse_mean

__all__ = ["BACKEND", "weighted_lse_mean"]
