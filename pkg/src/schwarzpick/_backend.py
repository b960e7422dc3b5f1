"""Kernel backend selection.

The compiled Cython kernels are used when importable; set
``SCHWARZPICK_PURE_PYTHON=1`` to force the pure-Python fallback.
"""
from __future__ import annotations

import os

from . import _pykernels

NAME = "python"
kernels = _pykernels

if not os.environ.get("SCHWARZPICK_PURE_PYTHON"):
    try:
        from . import _ckernels
    except ImportError:  # extension not built
        pass
    else:
        kernels = _ckernels
        NAME = "cython"


def available() -> dict:
    """Map backend name to kernel module for every importable backend."""
    found = {"python": _pykernels}
    try:
        from . import _ckernels
    except ImportError:
        pass
    else:
        found["cython"] = _ckernels
    return found
