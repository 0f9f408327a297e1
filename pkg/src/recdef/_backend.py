"""Pick the kernel implementation at import time.

The compiled extension is used when it was built. Setting
``RECDEF_PURE_PYTHON=1`` forces the numpy fallback.
"""
import os

from . import _pykernels

if os.environ.get("RECDEF_PURE_PYTHON", "") not in ("", "0"):
    kernels = _pykernels
else:
    try:
        from . import _kernels as kernels
    except ImportError:
        kernels = _pykernels

BACKEND = kernels.NAME


def available():
    """Names and modules of every kernel backend importable here."""
    out = {"python": _pykernels}
    try:
        from . import _kernels
    except ImportError:
        pass
    else:
        out["cython"] = _kernels
    return out
