"""Requests, derivative tables and the ``jet_eval`` entry point."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from ..errors import DomainError, UsageError
from .jet import Jet
from .ring import MAX_Y_ORDER, get_ring

PUBLIC_MAX_Y_ORDER = 4


@dataclass(frozen=True)
class JetRequest:
    """Highest derivative orders wanted: x_order in {0, 1}, y_order in 0..4."""

    x_order: int = 0
    y_order: int = 2

    def __post_init__(self):
        if self.x_order not in (0, 1):
            raise UsageError(f"x_order must be 0 or 1, got {self.x_order!r}")
        if not (isinstance(self.y_order, int) and 0 <= self.y_order <= PUBLIC_MAX_Y_ORDER):
            raise UsageError(f"y_order must be in 0..{PUBLIC_MAX_Y_ORDER}, got {self.y_order!r}")


class JetTable:
    """All mixed partials d_x^a d_y^b f at one base point, |a| <= 1, |b| <= y_order.

    Entries are read with :meth:`partial` or unpacked into dense, fully
    symmetric tensors with :meth:`y_tensor` / :meth:`xy_tensor`.
    """

    def __init__(self, jet, x, y):
        self.ring = jet.ring
        self.coeffs = jet.c
        self.x = np.asarray(x, dtype=float)
        self.y = np.asarray(y, dtype=float)

    @property
    def value(self):
        return float(self.coeffs[0])

    @property
    def x_order(self):
        return self.ring.x_order

    @property
    def y_order(self):
        return self.ring.y_order

    def partial(self, x_index=None, y_indices=()):
        """Mixed partial d/dx^{x_index} d/dy^{i1} ... d/dy^{ik} (indices 0-based)."""
        n = self.ring.n
        e = [0] * n
        for i in y_indices:
            if not 0 <= i < n:
                raise UsageError(f"y index {i} out of range for n={n}")
            e[i] += 1
        if x_index is not None and not 0 <= x_index < n:
            raise UsageError(f"x index {x_index} out of range for n={n}")
        fac = 1.0
        for p in e:
            for q in range(2, p + 1):
                fac *= q
        return float(self.coeffs[self.ring.index(x_index, e)] * fac)

    def y_tensor(self, order):
        """Dense array of fiber partials of the given order, shape (n,)*order."""
        if order == 0:
            return self.value
        idx, fac = self.ring.tensor_map(order, False)
        return self.coeffs[idx] * fac

    def xy_tensor(self, order):
        """Array T[k, i1..ip] = d_{x^k} d_{y^i1} .. d_{y^ip} f."""
        idx, fac = self.ring.tensor_map(order, True)
        return self.coeffs[idx] * fac


def variables(ring, x, y):
    """Seed jets X^k = x^k + dx^k, Y^k = y^k + dy^k in ``ring``."""
    n = ring.n
    X, Y = [], []
    for k in range(n):
        c = np.zeros(ring.size)
        c[0] = x[k]
        if ring.x_order:
            c[ring.index(k, [0] * n)] = 1.0
        X.append(Jet(ring, c))
        c = np.zeros(ring.size)
        c[0] = y[k]
        if ring.y_order:
            e = [0] * n
            e[k] = 1
            c[ring.index(None, e)] = 1.0
        Y.append(Jet(ring, c))
    return X, Y


def lift(ring, value):
    """Promote a float (or same-ring jet) into ``ring``."""
    if isinstance(value, Jet):
        if value.ring is not ring:
            raise UsageError(f"jet from {value.ring!r} used in {ring!r}")
        return value
    return Jet.constant(ring, float(value))


def _check_point(x, y, n=None):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.ndim != 1 or x.shape != y.shape:
        raise UsageError(f"x and y must be equal-length vectors, got {x.shape} and {y.shape}")
    if n is not None and x.shape[0] != n:
        raise UsageError(f"expected dimension {n}, got {x.shape[0]}")
    if not np.any(y):
        raise DomainError("supporting element y must be non-zero")
    return x, y


def jet_eval(
    f: Callable,
    x: Sequence[float],
    y: Sequence[float],
    req: JetRequest,
    domain: Callable | None = None,
):
    """Evaluate ``f(X, Y)`` on seeded jets and return its derivative table.

    ``f`` takes two sequences of length n and returns a scalar; if it returns a
    sequence (a covector field) a list of tables is returned instead.
    """
    if not isinstance(req, JetRequest):
        raise UsageError("req must be a JetRequest")
    x, y = _check_point(x, y)
    if domain is not None and not domain(x, y):
        raise DomainError(f"point x={x.tolist()}, y={y.tolist()} is outside the domain")
    return _eval_in_ring(f, x, y, req.x_order, req.y_order)


def _eval_in_ring(f, x, y, x_order, y_order):
    if y_order > MAX_Y_ORDER:
        raise UsageError(f"internal y order {y_order} exceeds {MAX_Y_ORDER}")
    ring = get_ring(x.shape[0], x_order, y_order)
    X, Y = variables(ring, x, y)
    out = f(X, Y)
    if isinstance(out, (list, tuple)):
        return [JetTable(lift(ring, o), x, y) for o in out]
    return JetTable(lift(ring, out), x, y)


def derivative_y(jet, i, target_ring):
    """d/dy^i of ``jet`` re-expressed in the lower ring ``target_ring``."""
    src, mult = jet.ring.derivative_map(target_ring, i)
    return Jet(target_ring, jet.c[src] * mult)
