"""h-vector fields b_i(x, y) = f(x) l_i + c_i(x) and their compatibility checks.

For every field of this family ``L d(b_i)/dy^j = f h_ij`` holds identically, so
it is a weak h-vector with scalar rho = f.  It is also a strong one
(v-covariant constant, ``L C^h_ij b_h = rho h_ij``) when the base is
Riemannian and f = 0.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import UsageError
from .finsler import metric_sample
from .jets import JetTable, derivative_y, get_ring, lift, sqrt, variables

LEVELS = ("weak", "strong")


@dataclass(frozen=True)
class HVector:
    kind: str
    scale: Optional[Callable] = None     # f(x); also the scalar rho
    shift: Optional[Callable] = None     # c_i(x)
    declared_level: str = "weak"
    params: dict = field(default_factory=dict, compare=False)

    def rho(self, x):
        return 0.0 if self.scale is None else self.scale(x)

    def beta(self, L, x, y):
        """beta = b_i y^i = f L + c_i y^i (Euler's relation removes l_i)."""
        out = 0.0
        if self.scale is not None:
            out = self.scale(x) * L
        if self.shift is not None:
            for ci, yi in zip(self.shift(x), y):
                out = out + ci * yi
        return out

    @property
    def is_zero(self):
        return self.scale is None and self.shift is None


# -- field builders (all accept floats or jets) -----------------------------

def constant_field(values):
    vals = [float(v) for v in values]
    return lambda x: list(vals)


def constant_scalar(value):
    v = float(value)
    return lambda x: v


def affine_scalar(const, grad):
    """f(x) = const + grad . x"""
    w = [float(g) for g in grad]

    def f(x):
        out = float(const)
        for wi, xi in zip(w, x):
            if wi:
                out = out + wi * xi
        return out
    return f


def quadratic_gradient(p, Q):
    """Gradient field of phi = p.x + x^T Q x / 2 (Q symmetrised)."""
    p = [float(v) for v in p]
    Q = np.asarray(Q, float)
    Q = (0.5 * (Q + Q.T)).tolist()

    def c(x):
        out = []
        for i in range(len(p)):
            ci = p[i]
            for j, qij in enumerate(Q[i]):
                if qij:
                    ci = ci + qij * x[j]
            out.append(ci)
        return out
    return c


def angular_gradient(axis, weight=1.0):
    """Gradient of phi = weight * x^axis / |x|, which is 0-homogeneous in x.

    Its radial component vanishes, so it is tangent to every sphere |x| = r.
    """
    def c(x):
        r2 = 0.0
        for xi in x:
            r2 = r2 + xi * xi
        r = sqrt(r2)
        r3 = r2 * r
        out = []
        for i, xi in enumerate(x):
            ci = -weight * x[axis] * xi / r3
            if i == axis:
                ci = ci + weight / r
            out.append(ci)
        return out
    return c


def make_hvector(kind, **params):
    """Constructors: zero, position(c), support_scaled(f), mixed(f, c).

    ``c`` may be a constant covector or a callable x -> covector; ``f`` a
    number or a callable x -> scalar.
    """
    level = params.pop("declared_level", "weak")
    if level not in LEVELS:
        raise UsageError(f"declared_level must be one of {LEVELS}")

    def as_shift(c):
        if c is None:
            raise UsageError(f"{kind} h-vector needs c")
        return c if callable(c) else constant_field(c)

    def as_scale(f):
        if f is None:
            raise UsageError(f"{kind} h-vector needs f")
        return f if callable(f) else constant_scalar(f)

    if kind == "zero":
        return HVector("zero", declared_level="strong")
    if kind == "position":
        return HVector("position", shift=as_shift(params.get("c")), declared_level=level, params=params)
    if kind == "support_scaled":
        return HVector("support_scaled", scale=as_scale(params.get("f")), declared_level=level, params=params)
    if kind == "mixed":
        return HVector("mixed", scale=as_scale(params.get("f")), shift=as_shift(params.get("c")),
                       declared_level=level, params=params)
    raise UsageError(f"unknown h-vector kind {kind!r}")


# -- evaluation ---------------------------------------------------------------

def b_jets(space, hv, X, Y, L_hi, ring):
    """b_i as jets in ``ring`` given X, Y seeded there and L's jet one y-order higher."""
    n = ring.n
    out = [lift(ring, 0.0)] * n
    if hv.scale is not None:
        f = lift(ring, hv.scale(X))
        out = [f * derivative_y(L_hi, i, ring) for i in range(n)]
    if hv.shift is not None:
        out = [o + ci for o, ci in zip(out, hv.shift(X))]
    return [lift(ring, o) for o in out]


def b_tables(space, hv, x, y, x_order=0, y_order=1):
    """Jet tables of b_i at (x, y) up to the requested orders."""
    x = np.asarray(x, float)
    y = np.asarray(y, float)
    n = space.n
    hi = get_ring(n, x_order, y_order + 1)
    lo = get_ring(n, x_order, y_order)
    Xh, Yh = variables(hi, x, y)
    L_hi = lift(hi, space.L(Xh, Yh))
    X, Y = variables(lo, x, y)
    return [JetTable(j, x, y) for j in b_jets(space, hv, X, Y, L_hi, lo)]


def b_values(space, hv, x, y, ms=None):
    """b_i at the point, using l_i from a metric sample when supplied."""
    x = np.asarray(x, float)
    if ms is None:
        ms = metric_sample(space, x, y)
    b = np.zeros(space.n)
    if hv.scale is not None:
        b = b + float(hv.scale(list(x))) * ms.l
    if hv.shift is not None:
        b = b + np.array([float(v) for v in hv.shift(list(x))])
    return b


def _fit_rho(lhs, h):
    return float(np.sum(lhs * h) / np.sum(h * h))


@dataclass(frozen=True)
class HVectorReport:
    weak_residual: float
    strong_residual_ii: float
    vconst_residual: float
    indicatory_residual: float
    rho_direction_residual: float
    beta: float
    tau: float
    rho: float
    m: np.ndarray
    m2: float

    def weak_ok(self, tol=1e-9):
        return self.weak_residual <= tol

    def strong_ok(self, tol=1e-9):
        return self.strong_residual_ii <= tol and self.vconst_residual <= tol


def check_hvector(space, hv, x, y):
    """Residuals of L d_j b_i = rho h_ij (weak), of both strong conditions,
    and of the indicatory property d(beta)/dy^j = b_j."""
    x = np.asarray(x, float)
    y = np.asarray(y, float)
    ms = metric_sample(space, x, y)
    tabs = b_tables(space, hv, x, y, 0, 1)
    b = np.array([t.value for t in tabs])
    db = np.array([t.y_tensor(1) for t in tabs])  # db[i, j] = d b_i / d y^j
    rho = float(hv.rho(list(x)))
    weak = np.abs(ms.L * db - rho * ms.h).max()
    strong = np.abs(ms.L * np.einsum("hij,h->ij", ms.C_up, b) - rho * ms.h).max()
    vconst = np.abs(db - np.einsum("r,rik->ik", b, ms.C_up)).max()

    ring = get_ring(space.n, 0, 1)
    X, Y = variables(ring, x, y)
    beta_jet = lift(ring, hv.beta(space.L(X, Y), X, Y))
    dbeta = JetTable(beta_jet, x, y).y_tensor(1)
    indicatory = np.abs(dbeta - b).max()
    # direction independence of rho: least-squares rho from L d_j b_i ~ rho h_ij at y and 2y
    rho_fit = _fit_rho(ms.L * db, ms.h)
    ms2 = metric_sample(space, x, 2.0 * y)
    db2 = np.array([t.y_tensor(1) for t in b_tables(space, hv, x, 2.0 * y, 0, 1)])
    rho_fit2 = _fit_rho(ms2.L * db2, ms2.h)
    beta = float(b @ y)
    tau = beta / ms.L
    m = b - tau * ms.l
    return HVectorReport(
        weak_residual=float(weak), strong_residual_ii=float(strong), vconst_residual=float(vconst),
        indicatory_residual=float(indicatory), rho_direction_residual=abs(rho_fit2 - rho_fit),
        beta=beta, tau=tau, rho=rho, m=m, m2=float(m @ ms.ginv @ m),
    )
