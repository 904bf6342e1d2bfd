"""Finite-difference oracle for mixed partials.

Independent of the jet arithmetic: ``f`` is only ever called on plain floats.
Mixed partials are nested central differences.  First derivatives use a
single level with step ``h = eps**(1/3) * max(1, |coord|)`` (error O(h^2)).
Orders p >= 2 use two-level Richardson extrapolation ``(4 D(h/2) - D(h)) / 3``
with ``h = eps**(1/(p+4)) * max(1, |coord|)``, which removes the O(h^2) term
and leaves O(h^4) truncation against O(eps / h^p) round-off.
"""

from __future__ import annotations

import itertools

import numpy as np

from ..errors import DomainError, UsageError

EPS = np.finfo(float).eps


def _base_step(order):
    if order == 1:
        return EPS ** (1.0 / 3.0)
    return EPS ** (1.0 / (order + 4))


def _nested_central(f, x, y, dirs, steps, domain):
    total = 0.0
    for signs in itertools.product((1.0, -1.0), repeat=len(dirs)):
        xs, ys = x.copy(), y.copy()
        for s, (space, k), h in zip(signs, dirs, steps):
            if space == "x":
                xs[k] += s * h
            else:
                ys[k] += s * h
        if domain is not None and not domain(xs, ys):
            raise DomainError(f"finite-difference stencil leaves the domain at x={xs}, y={ys}")
        total += np.prod(signs) * float(f(list(xs), list(ys)))
    return total / np.prod([2.0 * h for h in steps])


def fd_partial(f, x, y, multi_index, domain=None):
    """Estimate d_x^{x_index} d_y^{y_indices} f at (x, y).

    ``multi_index`` is ``(x_index, y_indices)`` with ``x_index`` an int or None.
    """
    x_index, y_indices = multi_index
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    n = x.shape[0]
    dirs = []
    if x_index is not None:
        if not 0 <= x_index < n:
            raise UsageError(f"x index {x_index} out of range")
        dirs.append(("x", x_index))
    for i in y_indices:
        if not 0 <= i < n:
            raise UsageError(f"y index {i} out of range")
        dirs.append(("y", i))
    order = len(dirs)
    if order == 0:
        if domain is not None and not domain(x, y):
            raise DomainError("point outside the domain")
        return float(f(list(x), list(y)))
    h0 = _base_step(order)
    steps = [h0 * max(1.0, abs(x[k] if s == "x" else y[k])) for s, k in dirs]
    coarse = _nested_central(f, x, y, dirs, steps, domain)
    if order == 1:
        return coarse
    fine = _nested_central(f, x, y, dirs, [h / 2 for h in steps], domain)
    return (4.0 * fine - coarse) / 3.0


def multi_indices(n, x_order, y_order):
    """All (x_index, y_indices) with the given x-order (0 or 1) and y-order."""
    xs = [None] if x_order == 0 else list(range(n))
    return [(xi, ys) for xi in xs
            for ys in itertools.combinations_with_replacement(range(n), y_order)]


def fd_agreement(f, x, y, table, orders=(1, 2, 3), domain=None):
    """Max relative gap |jet - fd| / max(1, |jet|) per total order.

    ``table`` is a JetTable of ``f`` at (x, y); every multi-index it carries
    whose total order is in ``orders`` is compared.
    """
    n = len(x)
    ring = table.ring
    out = {}
    for p in orders:
        worst = 0.0
        for xo in range(min(ring.x_order, p) + 1):
            yo = p - xo
            if yo > ring.y_order:
                continue
            for xi, ys in multi_indices(n, xo, yo):
                exact = table.partial(xi, ys)
                approx = fd_partial(f, x, y, (xi, ys), domain)
                worst = max(worst, abs(exact - approx) / max(1.0, abs(exact)))
        out[p] = worst
    return out
