"""Finsler spaces, the metric zoo and fundamental tensors at a point."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np
import scipy.linalg

from .errors import ConstructionError, DegeneracyError, DomainError, UsageError
from .jets import JetRequest, jet_eval, sqrt, value_of

MIN_L2 = 1e-12
RANDERS_MARGIN = 0.95
MAX_CONDITION = 1e12


@dataclass(frozen=True)
class FinslerSpace:
    """A fundamental function L(x, y), positively 1-homogeneous in y.

    ``L`` must accept sequences of floats or of jets; ``domain`` is a cheap
    float-only predicate on (x, y).
    """

    n: int
    L: Callable
    domain: Callable
    kind: str = "custom"
    params: dict = field(default_factory=dict, compare=False)

    def __call__(self, x, y):
        return self.L(x, y)

    def contains(self, x, y):
        try:
            return bool(self.domain(np.asarray(x, float), np.asarray(y, float)))
        except (DomainError, ValueError, ZeroDivisionError, OverflowError):
            return False


def _as_field(value, shape):
    """Wrap a constant array as an x-callable; pass callables through."""
    if callable(value):
        return value
    arr = np.asarray(value, dtype=float)
    if arr.shape != shape:
        raise ConstructionError(f"expected shape {shape}, got {arr.shape}")
    rows = arr.tolist()
    return lambda x: rows


def _quad(a, y):
    n = len(y)
    total = 0.0
    for i in range(n):
        for j in range(n):
            aij = a[i][j]
            if isinstance(aij, (int, float)) and aij == 0.0:
                continue
            total = total + aij * y[i] * y[j]
    return total


def _dot(b, y):
    total = 0.0
    for bi, yi in zip(b, y):
        if isinstance(bi, (int, float)) and bi == 0.0:
            continue
        total = total + bi * yi
    return total


def _numeric(mat):
    return np.array([[value_of(v) for v in row] for row in mat], dtype=float)


def _randers_norm(a, b, x):
    A = _numeric(a(x))
    bv = np.array([value_of(v) for v in b(x)], dtype=float)
    return float(np.sqrt(bv @ np.linalg.solve(A, bv)))


def _default_domain(L):
    def domain(x, y):
        val = value_of(L(list(x), list(y)))
        return val > 0.0 and val * val > MIN_L2
    return domain


def make_space(kind, n=None, **params):
    """Build a space from the zoo.

    kinds: ``euclidean``; ``riemannian`` (``a``: constant matrix or x -> matrix);
    ``randers`` (``a`` as above, ``b``: constant covector or x -> covector, with
    |b|_a < 1); ``custom`` (``L``: callable, optional ``domain``).
    """
    if kind == "euclidean":
        if n is None:
            raise UsageError("euclidean space needs n")
        _check_dim(n)

        def L(x, y):
            return sqrt(sum(yi * yi for yi in y))

        return FinslerSpace(n, L, _default_domain(L), "euclidean", {"n": n})

    if kind == "riemannian":
        a_raw = params.get("a")
        if a_raw is None:
            raise UsageError("riemannian space needs a")
        n = n or np.asarray(a_raw).shape[0]
        _check_dim(n)
        a = _as_field(a_raw, (n, n))
        pd_at = np.asarray(params.get("check_point", np.zeros(n)), float)
        if np.linalg.eigvalsh(_numeric(a(list(pd_at)))).min() <= 0:
            raise ConstructionError("a_ij is not positive definite")

        def L(x, y):
            return sqrt(_quad(a(x), y))

        base = _default_domain(L)

        def domain(x, y):
            return np.linalg.eigvalsh(_numeric(a(list(x)))).min() > 0 and base(x, y)

        return FinslerSpace(n, L, domain, "riemannian", dict(params))

    if kind == "randers":
        a_raw, b_raw = params.get("a"), params.get("b")
        if b_raw is None:
            raise UsageError("randers space needs b")
        if n is None:
            n = len(b_raw) if not callable(b_raw) else np.asarray(a_raw).shape[0]
        _check_dim(n)
        a = _as_field(np.eye(n) if a_raw is None else a_raw, (n, n))
        b = _as_field(b_raw, (n,))
        probe = list(np.asarray(params.get("check_point", np.zeros(n)), float))
        norm = _randers_norm(a, b, probe)
        if norm >= 1.0:
            raise ConstructionError(f"Randers one-form has a-norm {norm:.4g} >= 1; L is not positive")

        def L(x, y):
            return sqrt(_quad(a(x), y)) + _dot(b(x), y)

        base = _default_domain(L)

        def domain(x, y):
            return _randers_norm(a, b, list(x)) <= RANDERS_MARGIN and base(x, y)

        return FinslerSpace(n, L, domain, "randers", dict(params))

    if kind == "custom":
        L = params.get("L")
        if L is None or n is None:
            raise UsageError("custom space needs n and L")
        _check_dim(n)
        user_domain = params.get("domain")
        base = _default_domain(L)
        if user_domain is None:
            domain = base
        else:
            def domain(x, y):
                return user_domain(x, y) and base(x, y)
        return FinslerSpace(n, L, domain, "custom", dict(params))

    raise UsageError(f"unknown space kind {kind!r}")


def _check_dim(n):
    if not 2 <= n <= 5:
        raise UsageError(f"dimension must be in 2..5, got {n}")


# -- zoo -----------------------------------------------------------------

def warped_metric(n):
    """diag(1, 1 + (x^1)^2, 1, ...): the curved Riemannian zoo member."""
    def a(x):
        rows = [[0.0] * n for _ in range(n)]
        for i in range(n):
            rows[i][i] = 1.0
        rows[1][1] = 1.0 + x[0] * x[0]
        return rows
    return a


def zoo(name, n):
    """Named members of the metric zoo used by tests and scenarios."""
    if name == "euclidean":
        return make_space("euclidean", n)
    if name == "riemannian":
        return make_space("riemannian", n, a=warped_metric(n))
    if name == "randers":
        b = [0.5] + [0.0] * (n - 1)
        return make_space("randers", n, a=np.eye(n), b=b)
    if name == "randers_x":
        wa = warped_metric(n)

        def b(x):
            out = [0.0] * n
            out[0] = 0.3 + 0.1 * x[1]
            out[1] = 0.1 * x[0]
            return out
        return make_space("randers", n, a=wa, b=b)
    if name == "quartic":
        # (|y|^4 + c sum y_i^4)^(1/4): a non-Randers, strongly convex metric
        c = 0.3

        def L(x, y):
            s2 = sum(yi * yi for yi in y)
            s4 = sum(yi * yi * yi * yi for yi in y)
            return (s2 * s2 + c * s4) ** 0.25
        return make_space("custom", n, L=L)
    raise UsageError(f"unknown zoo metric {name!r}")


ZOO_NAMES = ("euclidean", "riemannian", "randers", "randers_x", "quartic")


# -- fundamental tensors ---------------------------------------------------

@dataclass(frozen=True)
class MetricSample:
    x: np.ndarray
    y: np.ndarray
    L: float
    l: np.ndarray          # l_i = dL/dy^i
    g: np.ndarray          # g_ij
    ginv: np.ndarray       # g^ij
    h: np.ndarray          # h_ij = g_ij - l_i l_j
    C: np.ndarray          # C_ijk
    C_up: np.ndarray       # C^i_jk
    Lij: np.ndarray
    Lijk: np.ndarray
    condition: float

    @property
    def l_up(self):
        return self.y / self.L


def invert_metric(g):
    """Inverse of a symmetric positive-definite matrix with a condition guard."""
    w = np.linalg.eigvalsh(g)
    if w[0] <= 0.0:
        raise DegeneracyError(f"metric is not positive definite (min eigenvalue {w[0]:.3e})", np.inf)
    cond = float(w[-1] / w[0])
    if cond > MAX_CONDITION:
        raise DegeneracyError(f"metric condition {cond:.3e} exceeds {MAX_CONDITION:.0e}", cond)
    factor = scipy.linalg.cho_factor(g)
    ginv = scipy.linalg.cho_solve(factor, np.eye(g.shape[0]))
    return 0.5 * (ginv + ginv.T), cond


def with_square(L):
    """Field returning (L, L^2) so both tables come from one evaluation."""
    def f(x, y):
        val = L(x, y)
        return [val, val * val]
    return f


def metric_from_tables(tab_L, tab_E):
    """MetricSample from jet tables of L and E = L^2, both of y-order >= 3."""
    Lval = tab_L.value
    l = tab_L.y_tensor(1)
    g = 0.5 * tab_E.y_tensor(2)
    C = 0.25 * tab_E.y_tensor(3)
    ginv, cond = invert_metric(g)
    return MetricSample(
        x=tab_L.x, y=tab_L.y, L=Lval, l=l, g=g, ginv=ginv, h=g - np.outer(l, l), C=C,
        C_up=np.einsum("ir,rjk->ijk", ginv, C), Lij=tab_L.y_tensor(2),
        Lijk=tab_L.y_tensor(3), condition=cond,
    )


def metric_sample(space, x, y):
    """All fundamental tensors of ``space`` at (x, y) from order-3 jets of L and L^2."""
    tab_L, tab_E = jet_eval(with_square(space.L), x, y, JetRequest(0, 3), domain=space.domain)
    if tab_L.value <= 0.0:
        raise DomainError(f"L = {tab_L.value!r} is not positive")
    return metric_from_tables(tab_L, tab_E)


def check_euler(space, x, y):
    """Residuals of the homogeneity consequences of the definitions."""
    x = np.asarray(x, float)
    y = np.asarray(y, float)
    ms = metric_sample(space, x, y)
    Lval = ms.L
    hom = max(abs(value_of(space.L(list(x), list(lam * y))) - lam * Lval) / max(1.0, lam * Lval)
              for lam in (0.5, 2.0))
    return {
        "homogeneity": hom,
        "g_yy": abs(y @ ms.g @ y - Lval**2) / max(1.0, Lval**2),
        "h_y": float(np.abs(ms.h @ y).max()),
        "C_y": float(np.abs(ms.C @ y).max()),
    }


def lijk_identity_rhs(ms):
    hl = (np.einsum("ij,k->ijk", ms.h, ms.l) + np.einsum("jk,i->ijk", ms.h, ms.l)
          + np.einsum("ki,j->ijk", ms.h, ms.l))
    return 2.0 / ms.L * ms.C - hl / ms.L**2


def check_Lijk_identity(space, x, y):
    """max |L_ijk - [(2/L) C_ijk - (h_ij l_k + h_jk l_i + h_ki l_j)/L^2]|."""
    ms = metric_sample(space, x, y)
    return float(np.abs(ms.Lijk - lijk_identity_rhs(ms)).max())
