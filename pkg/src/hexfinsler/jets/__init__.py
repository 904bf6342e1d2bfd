"""Exact higher-order partials of fields on (x, y) by truncated Taylor arithmetic."""

from . import _backend
from .fd import fd_agreement, fd_partial, multi_indices
from .jet import Jet, cos, exp, log, sin, sqrt, value_of
from .ring import Ring, get_ring
from .table import JetRequest, JetTable, derivative_y, jet_eval, lift, variables

__all__ = [
    "Jet",
    "JetRequest",
    "JetTable",
    "Ring",
    "cos",
    "derivative_y",
    "exp",
    "fd_agreement",
    "fd_partial",
    "get_ring",
    "jet_eval",
    "lift",
    "log",
    "multi_indices",
    "sin",
    "sqrt",
    "value_of",
    "variables",
]


def backend():
    """Name of the active kernel backend ("cython" or "python")."""
    return _backend.BACKEND
