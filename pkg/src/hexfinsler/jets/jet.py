"""Truncated Taylor series arithmetic.

``Jet`` is a number-like object: fields written with ``+ - * / **`` and the
elementary functions of this module evaluate unchanged on plain floats and on
jets.  Nonlinear functions are applied by Taylor composition
``f(a0 + h) = sum_k f^(k)(a0)/k! h^k``, which terminates because the
zero-mean part ``h`` is nilpotent in a truncated ring.
"""

from __future__ import annotations

import math
import numbers

import numpy as np

from ..errors import DomainError, UsageError
from . import _backend


class Jet:
    __slots__ = ("ring", "c")
    __array_ufunc__ = None  # numpy scalars defer to Jet operators

    def __init__(self, ring, coeffs):
        self.ring = ring
        self.c = coeffs

    @classmethod
    def constant(cls, ring, value):
        c = np.zeros(ring.size)
        c[0] = value
        return cls(ring, c)

    @property
    def value(self):
        return float(self.c[0])

    def __repr__(self):
        return f"Jet({self.value!r}, {self.ring!r})"

    def __float__(self):
        return self.value

    # -- arithmetic ------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, Jet):
            if other.ring is not self.ring:
                raise UsageError(f"cannot combine jets from {self.ring!r} and {other.ring!r}")
            return other
        if isinstance(other, numbers.Real):
            return None
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if o is None:
            c = self.c.copy()
            c[0] += other
            return Jet(self.ring, c)
        return Jet(self.ring, self.c + o.c)

    __radd__ = __add__

    def __neg__(self):
        return Jet(self.ring, -self.c)

    def __pos__(self):
        return self

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if o is None:
            c = self.c.copy()
            c[0] -= other
            return Jet(self.ring, c)
        return Jet(self.ring, self.c - o.c)

    def __rsub__(self, other):
        c = -self.c
        c[0] += other
        return Jet(self.ring, c)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if o is None:
            return Jet(self.ring, self.c * other)
        r = self.ring
        return Jet(r, _backend.kernels.mul(self.c, o.c, r.ia, r.ib, r.ic, r.size))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if o is None:
            return Jet(self.ring, self.c / other)
        return self * o.reciprocal()

    def __rtruediv__(self, other):
        return self.reciprocal() * other

    def __pow__(self, p):
        if isinstance(p, Jet):
            return exp(p * log(self))
        if isinstance(p, numbers.Integral) and 0 <= p <= 4:
            out = Jet.constant(self.ring, 1.0)
            for _ in range(int(p)):
                out = out * self
            return out
        return self.power(float(p))

    def __rpow__(self, base):
        return exp(self * math.log(base))

    # -- composition -----------------------------------------------------
    def compose(self, derivs):
        """Apply a scalar function given its derivatives f^(k)(a0), k = 0..D."""
        r = self.ring
        d = r.nil_degree
        coef = np.empty(d + 1)
        fact = 1.0
        for k in range(d + 1):
            if k:
                fact *= k
            coef[k] = derivs[k] / fact
        h = self.c.copy()
        h[0] = 0.0
        return Jet(r, _backend.kernels.horner(coef, h, r.ia, r.ib, r.ic, r.size))

    def power(self, p):
        a0 = self.value
        if a0 <= 0.0 and not float(p).is_integer():
            raise DomainError(f"non-integer power of non-positive value {a0!r}")
        if a0 == 0.0:
            raise DomainError("power series about zero is not defined")
        d = self.ring.nil_degree
        derivs = []
        coeff = 1.0
        for k in range(d + 1):
            derivs.append(coeff * a0 ** (p - k))
            coeff *= p - k
        return self.compose(derivs)

    def reciprocal(self):
        if self.value == 0.0:
            raise DomainError("division by a jet with zero value")
        return self.power(-1.0)


def _is_jet(a):
    return isinstance(a, Jet)


def sqrt(a):
    if _is_jet(a):
        if a.value <= 0.0:
            raise DomainError(f"sqrt of non-positive value {a.value!r}")
        return a.power(0.5)
    return math.sqrt(a)


def exp(a):
    if _is_jet(a):
        e = math.exp(a.value)
        return a.compose([e] * (a.ring.nil_degree + 1))
    return math.exp(a)


def log(a):
    if _is_jet(a):
        a0 = a.value
        if a0 <= 0.0:
            raise DomainError(f"log of non-positive value {a0!r}")
        derivs = [math.log(a0)]
        for k in range(1, a.ring.nil_degree + 1):
            derivs.append((-1) ** (k - 1) * math.factorial(k - 1) / a0**k)
        return a.compose(derivs)
    return math.log(a)


def sin(a):
    if _is_jet(a):
        s, c = math.sin(a.value), math.cos(a.value)
        cyc = [s, c, -s, -c]
        return a.compose([cyc[k % 4] for k in range(a.ring.nil_degree + 1)])
    return math.sin(a)


def cos(a):
    if _is_jet(a):
        s, c = math.sin(a.value), math.cos(a.value)
        cyc = [c, -s, -c, s]
        return a.compose([cyc[k % 4] for k in range(a.ring.nil_degree + 1)])
    return math.cos(a)


def value_of(a):
    """Plain float value of a jet or number."""
    return a.value if _is_jet(a) else float(a)
