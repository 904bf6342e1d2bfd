"""Monomial bookkeeping for truncated Taylor rings in (x, y).

A ring ``Ring(n, x_order, y_order)`` holds polynomials in the 2n perturbation
variables (dx^1..dx^n, dy^1..dy^n) modulo every monomial whose x-degree
exceeds ``x_order`` or whose y-degree exceeds ``y_order``.  That ideal is
closed under multiplication, so arithmetic in the quotient is exact: the
coefficient of a surviving monomial of the product of two truncated series is
the same as in the product of the full series.

Coefficients are stored in a flat float64 vector.  The layout is
``x_block * ny + y_index`` where x_block 0 is the x-free part and block k+1
carries the factor dx^k (only present when ``x_order == 1``).
"""

from __future__ import annotations

import itertools
import math
from functools import lru_cache

import numpy as np

from ..errors import UsageError

MAX_DIM = 5
MAX_X_ORDER = 1
# one more than the public limit: fields built from dL (b = f l + c) need it
MAX_Y_ORDER = 5


def _y_monomials(n, order):
    monos = []
    for deg in range(order + 1):
        for combo in itertools.combinations_with_replacement(range(n), deg):
            e = [0] * n
            for i in combo:
                e[i] += 1
            monos.append(tuple(e))
    return monos


class Ring:
    """Static tables for one (n, x_order, y_order) truncation."""

    def __init__(self, n, x_order, y_order):
        if not 1 <= n <= MAX_DIM:
            raise UsageError(f"dimension must be in 1..{MAX_DIM}, got {n}")
        if x_order not in (0, 1):
            raise UsageError(f"x_order must be 0 or 1, got {x_order}")
        if not 0 <= y_order <= MAX_Y_ORDER:
            raise UsageError(f"y_order must be in 0..{MAX_Y_ORDER}, got {y_order}")
        self.n = n
        self.x_order = x_order
        self.y_order = y_order
        self.ymonos = _y_monomials(n, y_order)
        self.yindex = {e: k for k, e in enumerate(self.ymonos)}
        self.ny = len(self.ymonos)
        self.nx_blocks = 1 + (n if x_order else 0)
        self.size = self.ny * self.nx_blocks
        # Nilpotency: any product of more than this many zero-mean elements vanishes.
        self.nil_degree = x_order + y_order
        self._build_products()
        self._tensor_cache = {}

    def __repr__(self):
        return f"Ring(n={self.n}, x_order={self.x_order}, y_order={self.y_order})"

    def _build_products(self):
        ia, ib, ic = [], [], []
        for a, ea in enumerate(self.ymonos):
            da = sum(ea)
            for b, eb in enumerate(self.ymonos):
                if da + sum(eb) > self.y_order:
                    continue
                ia.append(a)
                ib.append(b)
                ic.append(self.yindex[tuple(p + q for p, q in zip(ea, eb))])
        ya, yb, yc = (np.asarray(v, dtype=np.int32) for v in (ia, ib, ic))
        parts_a, parts_b, parts_c = [ya], [yb], [yc]
        ny = self.ny
        for k in range(1, self.nx_blocks):
            off = k * ny
            parts_a += [ya, ya + off]
            parts_b += [yb + off, yb]
            parts_c += [yc + off, yc + off]
        self.ia = np.ascontiguousarray(np.concatenate(parts_a), dtype=np.int32)
        self.ib = np.ascontiguousarray(np.concatenate(parts_b), dtype=np.int32)
        self.ic = np.ascontiguousarray(np.concatenate(parts_c), dtype=np.int32)

    def index(self, x_index, y_exponent):
        """Flat position of dx^{x_index} * dy^{y_exponent} (x_index None = no x factor)."""
        block = 0 if x_index is None else x_index + 1
        if block >= self.nx_blocks:
            raise UsageError("ring carries no x-derivatives")
        try:
            return block * self.ny + self.yindex[tuple(y_exponent)]
        except KeyError:
            raise UsageError(f"y multi-index {tuple(y_exponent)} exceeds order {self.y_order}") from None

    def tensor_map(self, order, with_x):
        """Index and factorial arrays that unpack coefficients into a dense tensor.

        The returned arrays have shape ``(n,)*order`` (prefixed by an x axis when
        ``with_x``); ``coeffs[idx] * fac`` is the tensor of partial derivatives.
        """
        key = (order, with_x)
        cached = self._tensor_cache.get(key)
        if cached is not None:
            return cached
        n = self.n
        if order > self.y_order or (with_x and self.x_order < 1):
            raise UsageError(f"{self!r} cannot supply order {order} (with_x={with_x})")
        shape = ((n,) if with_x else ()) + (n,) * order
        idx = np.empty(shape, dtype=np.intp)
        fac = np.empty(shape, dtype=float)
        for full in itertools.product(range(n), repeat=len(shape)):
            if with_x:
                xk, ys = full[0], full[1:]
            else:
                xk, ys = None, full
            e = [0] * n
            for i in ys:
                e[i] += 1
            idx[full] = self.index(xk, e)
            fac[full] = math.prod(math.factorial(p) for p in e)
        self._tensor_cache[key] = (idx, fac)
        return idx, fac

    def derivative_map(self, target, i):
        """Map for d/dy^i from this ring into the lower ring ``target``.

        Returns ``(src, mult)`` such that the derivative's coefficients are
        ``coeffs[src] * mult``.
        """
        key = ("d", target.x_order, target.y_order, i)
        cached = self._tensor_cache.get(key)
        if cached is not None:
            return cached
        if target.n != self.n or target.x_order != self.x_order or target.y_order > self.y_order - 1:
            raise UsageError(f"cannot differentiate {self!r} into {target!r}")
        src = np.empty(target.size, dtype=np.intp)
        mult = np.empty(target.size, dtype=float)
        for block in range(target.nx_blocks):
            for k, e in enumerate(target.ymonos):
                up = list(e)
                up[i] += 1
                src[block * target.ny + k] = block * self.ny + self.yindex[tuple(up)]
                mult[block * target.ny + k] = up[i]
        self._tensor_cache[key] = (src, mult)
        return src, mult


@lru_cache(maxsize=None)
def get_ring(n, x_order, y_order):
    """Shared, cached ring instance (rings are immutable after construction)."""
    return Ring(n, x_order, y_order)
