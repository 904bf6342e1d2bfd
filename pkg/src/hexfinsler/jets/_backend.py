"""Kernel selection.

The compiled extension is preferred; set ``HEXFINSLER_PURE=1`` to force the
numpy fallback (the benchmark and the parity tests do this explicitly).
"""

import os

from . import _pykernels

try:
    from . import _kernels as _compiled
except ImportError:  # extension not built
    _compiled = None


def _select(force_pure):
    if _compiled is None or force_pure:
        return "python", _pykernels
    return "cython", _compiled


BACKEND, kernels = _select(os.environ.get("HEXFINSLER_PURE", "") not in ("", "0"))


def available():
    """Names of the backends importable in this environment."""
    return ["python"] + (["cython"] if _compiled is not None else [])


def get(name):
    if name == "python":
        return _pykernels
    if name == "cython" and _compiled is not None:
        return _compiled
    raise LookupError(f"kernel backend {name!r} is not available")


def set_backend(name):
    """Switch the active kernels process-wide; returns the previous backend name."""
    global BACKEND, kernels
    previous = BACKEND
    kernels = get(name)
    BACKEND = name
    return previous
