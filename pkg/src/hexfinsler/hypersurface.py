"""Hypersurfaces x = x(u), their induced data in a Finsler space and in its
h-exponential change, and the hyperplane-kind classification."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
import scipy.linalg

from .connection import (
    b_derivative_tensors,
    difference_tensors,
    spray_and_connection,
)
from .errors import DegeneracyError, DegenerateSurfaceError, UsageError
from .expchange import rel_residual, star_space

KINDS = ("none", "first", "second", "third")
CLASSIFY_TOL = 1e-7
TANGENT_TOL = 1e-9
COUNTER_TOL = 1e-3
KAPPA_TOL = 1e-8


# -- the surface zoo -----------------------------------------------------------

@dataclass(frozen=True)
class Hypersurface:
    """x^i(u^alpha) with analytic projection factors.

    ``B(u)`` has shape (n, n-1) and ``B2(u)`` shape (n, n-1, n-1) holding
    d^2 x^i / du^alpha du^beta.
    """

    n: int
    kind: str
    embed: Callable
    B: Callable
    B2: Callable
    u_low: np.ndarray
    u_high: np.ndarray
    params: dict = field(default_factory=dict, compare=False)

    @property
    def dim(self):
        return self.n - 1


def hyperplane(n, point=None, basis=None):
    """x = point + basis @ u; the default is the coordinate plane x^n = 0."""
    p = np.zeros(n) if point is None else np.asarray(point, float)
    E = np.eye(n)[:, : n - 1] if basis is None else np.asarray(basis, float)
    if E.shape != (n, n - 1) or p.shape != (n,):
        raise UsageError(f"hyperplane needs point of shape ({n},) and basis of shape ({n}, {n - 1})")
    zero2 = np.zeros((n, n - 1, n - 1))
    return Hypersurface(
        n, "hyperplane", lambda u: p + E @ u, lambda u: E.copy(), lambda u: zero2.copy(),
        -np.ones(n - 1), np.ones(n - 1), {"point": p.tolist(), "basis": E.tolist()},
    )


def _sphere_factors(n):
    # x^k = r * prod_a f[k][a](u^a) with f in {sin, cos, one}
    table = []
    for k in range(n):
        row = []
        for a in range(n - 1):
            if a < k:
                row.append("sin")
            elif a == k:
                row.append("cos")
            else:
                row.append("one")
        table.append(row)
    return table


_F0 = {"sin": math.sin, "cos": math.cos, "one": lambda t: 1.0}
_F1 = {"sin": math.cos, "cos": lambda t: -math.sin(t), "one": lambda t: 0.0}
_F2 = {"sin": lambda t: -math.sin(t), "cos": lambda t: -math.cos(t), "one": lambda t: 0.0}


def sphere(n, radius=1.0, center=None):
    """Hypersphere |x - center| = radius in hyperspherical angles.

    For n = 2 this is the circle (cos u, sin u); for n = 3 the usual
    (polar, azimuth) chart.  The parameter box keeps polar angles away from
    the poles, where the chart degenerates.
    """
    r = float(radius)
    if r <= 0:
        raise UsageError("sphere radius must be positive")
    c = np.zeros(n) if center is None else np.asarray(center, float)
    table = _sphere_factors(n)
    m = n - 1

    def factors(u, k, d):
        # d[a] = derivative order applied to angle a
        out = r
        for a in range(m):
            fn = (_F0, _F1, _F2)[d[a]][table[k][a]]
            out *= fn(u[a])
        return out

    def embed(u):
        return c + np.array([factors(u, k, [0] * m) for k in range(n)])

    def B(u):
        out = np.empty((n, m))
        for k in range(n):
            for a in range(m):
                d = [0] * m
                d[a] = 1
                out[k, a] = factors(u, k, d)
        return out

    def B2(u):
        out = np.empty((n, m, m))
        for k in range(n):
            for a in range(m):
                for b in range(m):
                    d = [0] * m
                    d[a] += 1
                    d[b] += 1
                    out[k, a, b] = factors(u, k, d)
        return out

    lo = np.full(m, 0.35)
    hi = np.full(m, math.pi - 0.35)
    lo[-1], hi[-1] = 0.0, 2.0 * math.pi
    return Hypersurface(n, "sphere", embed, B, B2, lo, hi, {"radius": r, "center": c.tolist()})


def quadric_graph(n, Q, p=None, c=0.0):
    """Graph x^n = phi(u) = c + p.u + u^T Q u / 2 over the first n-1 coordinates."""
    m = n - 1
    Q = np.asarray(Q, float)
    Q = 0.5 * (Q + Q.T)
    p = np.zeros(m) if p is None else np.asarray(p, float)
    if Q.shape != (m, m) or p.shape != (m,):
        raise UsageError(f"quadric graph needs Q of shape ({m}, {m}) and p of shape ({m},)")

    def embed(u):
        return np.append(u, c + p @ u + 0.5 * u @ Q @ u)

    def B(u):
        return np.vstack([np.eye(m), p + Q @ u])

    def B2(u):
        out = np.zeros((n, m, m))
        out[-1] = Q
        return out

    return Hypersurface(n, "quadric_graph", embed, B, B2, -np.ones(m), np.ones(m),
                        {"Q": Q.tolist(), "p": p.tolist(), "c": float(c)})


def make_hypersurface(kind, n, **params):
    if kind == "hyperplane":
        return hyperplane(n, params.get("point"), params.get("basis"))
    if kind == "sphere":
        return sphere(n, params.get("radius", 1.0), params.get("center"))
    if kind == "quadric_graph":
        if "Q" not in params:
            raise UsageError("quadric_graph needs Q")
        return quadric_graph(n, params["Q"], params.get("p"), params.get("c", 0.0))
    raise UsageError(f"unknown hypersurface kind {kind!r}")


# -- induced data ------------------------------------------------------------------

@dataclass(frozen=True)
class SurfaceSample:
    u: np.ndarray
    v: np.ndarray
    x: np.ndarray
    y: np.ndarray
    B: np.ndarray          # B^i_alpha
    B2: np.ndarray         # B^i_alpha beta
    B0: np.ndarray         # B^i_0alpha = B^i_beta alpha v^beta
    g_ab: np.ndarray
    g_ab_inv: np.ndarray
    B_inv: np.ndarray      # B^alpha_i, stored [alpha, i]
    N_up: np.ndarray
    N_low: np.ndarray
    H_a: np.ndarray
    H0: float
    H_ab: np.ndarray
    M_a: np.ndarray
    M_ab: np.ndarray
    kind: str
    conn: object = field(repr=False, compare=False)


def hyperplane_kind(H_a, H_ab, M_ab, tol=CLASSIFY_TOL):
    """Strongest kind whose characteristic condition holds within ``tol``."""
    if np.abs(H_ab).max() <= tol:
        return "third" if np.abs(M_ab).max() <= tol else "second"
    if np.abs(H_a).max() <= tol:
        return "first"
    return "none"


def unit_normal(g, B, orient=None):
    """Unit normal from the null space of g_ij B^i_alpha.

    The sign makes the largest-magnitude component positive, or, when a
    covector ``orient`` is given, makes orient_i N^i positive.
    """
    ns = scipy.linalg.null_space(B.T @ g)
    if ns.shape[1] != 1:
        raise DegeneracyError(f"normal space has dimension {ns.shape[1]}, expected 1")
    N = ns[:, 0]
    N = N / math.sqrt(float(N @ g @ N))
    if orient is not None and abs(float(orient @ N)) > 0.0:
        s = float(orient @ N)
    else:
        s = N[np.argmax(np.abs(N))]
    return N if s > 0 else -N


def surface_sample(space, hs, u, v, conn=None, orient=None, tol=CLASSIFY_TOL):
    """Projection factors, unit normal and second fundamental tensors at (u, v)."""
    u = np.asarray(u, float)
    v = np.asarray(v, float)
    if space.n != hs.n:
        raise UsageError(f"space has dimension {space.n}, surface lives in {hs.n}")
    x = np.asarray(hs.embed(u), float)
    B = np.asarray(hs.B(u), float)
    B2 = np.asarray(hs.B2(u), float)
    sv = np.linalg.svd(B, compute_uv=False)
    if sv[-1] <= 1e-12 * max(1.0, sv[0]):
        raise DegenerateSurfaceError(f"projection factors have rank < {hs.n - 1} at u = {u.tolist()}",
                                     float("inf"))
    y = B @ v
    conn = conn or spray_and_connection(space, x, y)
    ms = conn.ms
    g = ms.g
    g_ab = B.T @ g @ B
    g_ab_inv = np.linalg.inv(g_ab)
    B_inv = g_ab_inv @ B.T @ g
    N_up = unit_normal(g, B, orient)
    N_low = g @ N_up
    B0 = np.einsum("iba,b->ia", B2, v)
    H_a = N_low @ (B0 + conn.N @ B)
    M_a = np.einsum("ijk,ia,j,k->a", ms.C, B, N_up, N_up)
    M_ab = np.einsum("ijk,ia,jb,k->ab", ms.C, B, B, N_up)
    H_ab = (np.einsum("i,iab->ab", N_low, B2 + np.einsum("ijk,ja,kb->iab", conn.F, B, B))
            + np.outer(M_a, H_a))
    return SurfaceSample(
        u=u, v=v, x=x, y=y, B=B, B2=B2, B0=B0, g_ab=g_ab, g_ab_inv=g_ab_inv, B_inv=B_inv,
        N_up=N_up, N_low=N_low, H_a=H_a, H0=float(H_a @ v), H_ab=H_ab, M_a=M_a, M_ab=M_ab,
        kind=hyperplane_kind(H_a, H_ab, M_ab, tol), conn=conn,
    )


def check_gauss_relations(space, hs, u, v, ss=None):
    """Residuals of the algebraic projection relations and of the contractions
    H_0alpha = H_alpha, H_alpha0 = H_alpha + M_alpha H_0."""
    ss = ss or surface_sample(space, hs, u, v)
    n = hs.n
    m = n - 1
    g = ss.conn.ms.g
    y_low = g @ ss.y
    C = ss.conn.ms.C
    # contracted consequence of the v-derivative relations: the v-derivative of
    # g_ij B^i_a N^j along the surface vanishes, i.e. C(B_a, B_b, N) appears
    # symmetrically; here we check M_ab = M_ba and M_a0 = 0 (C_ijk y^k = 0)
    M_a0 = np.einsum("ijk,ia,j,k->a", C, ss.B, ss.y, ss.N_up)
    return {
        "eq2.5_BB": float(np.abs(ss.B_inv @ ss.B - np.eye(m)).max()),
        "eq2.5_BN": float(np.abs(ss.N_low @ ss.B).max()),
        "eq2.5_NN": abs(float(ss.N_low @ ss.N_up) - 1.0),
        "eq2.6": float(np.abs(ss.B @ ss.B_inv + np.outer(ss.N_up, ss.N_low) - np.eye(n)).max()),
        "eq2.9_0a": float(np.abs(ss.v @ ss.H_ab - ss.H_a).max()),
        "eq2.9_a0": float(np.abs(ss.H_ab @ ss.v - ss.H_a - ss.M_a * ss.H0).max()),
        "eq2.12_M": float(max(np.abs(ss.M_ab - ss.M_ab.T).max(), np.abs(M_a0).max())),
        "eq4.5": abs(float(y_low @ ss.N_up)),
    }


# -- starred data ----------------------------------------------------------------------

@dataclass(frozen=True)
class StarredSurfaceSample:
    base: SurfaceSample
    star: SurfaceSample
    tangency: float            # b_j N^j
    tangential: bool
    tau: float
    nu: float
    rho: float
    star_N_formula: np.ndarray
    star_N_low_formula: np.ndarray
    star_H_a_formula: np.ndarray
    star_H0_formula: float
    star_Hab_formula: np.ndarray       # right side of the full relation with N_i D^i_jk B B
    star_Hab_reduced: np.ndarray       # right side once the kappa condition is used
    star_M_ab_formula: np.ndarray
    ND_BB: np.ndarray                  # N_j D^j_ik B^i_a B^k_b
    ND_BB_formula: np.ndarray          # mu/lambda expression including the beta_r C^r_ij terms
    mu: float
    lam: float
    kappa: Optional[float]
    kappa_residual: float
    residuals: dict = field(default_factory=dict)     # None marks "not applicable"
    reasons: dict = field(default_factory=dict)


def check_kappa_condition(space, hv, x, y, conn=None, bd=None):
    """Least-squares kappa in b_{r|0} C^r_ij = kappa h_ij with its residual.

    Returns (None, 0.0) when the left side vanishes and the angular metric
    gives no information (e.g. Riemannian bases where C = 0).
    """
    y = np.asarray(y, float)
    conn = conn or spray_and_connection(space, x, y)
    bd = bd or b_derivative_tensors(space, hv, x, y, conn)
    ms = conn.ms
    b0 = bd.b_cov_h @ y
    lhs = np.einsum("r,rij->ij", b0, ms.C_up)
    if np.abs(ms.C).max() <= 1e-14:
        return None, float(np.abs(lhs).max())
    hh = float(np.sum(ms.h * ms.h))
    kappa = float(np.sum(lhs * ms.h) / hh)
    return kappa, float(np.abs(lhs - kappa * ms.h).max())


def starred_surface_sample(space, hv, hs, u, v, tangent_tol=TANGENT_TOL, tol=CLASSIFY_TOL):
    """Base and changed surface data with every closed-form relation evaluated.

    Relations that need tangency of b are reported as None when
    |b_j N^j| > ``tangent_tol``.
    """
    base = surface_sample(space, hs, u, v, tol=tol)
    conn = base.conn
    ms = conn.ms
    star = surface_sample(star_space(space, hv), hs, u, v, orient=base.N_low, tol=tol)
    bd = b_derivative_tensors(space, hv, base.x, base.y, conn)
    dt = difference_tensors(space, hv, base.x, base.y, conn, bd)
    e = math.exp(dt.tau)
    nu = dt.nu
    sq = math.sqrt(nu) * e
    b = dt.b
    bN = float(b @ base.N_up)
    tangential = abs(bN) <= tangent_tol
    B, N_up, N_low = base.B, base.N_up, base.N_low

    star_N = N_up / sq
    star_N_low = N_low * sq
    ND0B = N_low @ dt.D0j @ B
    star_H_a = sq * (base.H_a + ND0B)
    star_H0 = sq * base.H0
    ND_BB = np.einsum("j,jik,ia,kb->ab", N_low, dt.Djk, B, B)
    star_Hab = sq * (base.H_ab + ND_BB) - sq * np.outer(base.M_a, base.H_a)
    L = ms.L
    beta_r = bd.b_cov_h @ base.y               # b_{r|0}
    bC = np.einsum("r,rij->ij", beta_r, ms.C_up)
    mB = dt.m @ B
    extra = np.einsum("ij,j,ia,b->ab", bC, N_up, B, mB)
    ND_formula = L * (dt.mu - 2 * dt.lam) / (e * nu) * base.M_ab + e / (2 * L) * (extra + extra.T)
    reduced = sq * (base.H_ab + L * (dt.mu - 2 * dt.lam) / (nu * e) * base.M_ab) \
        - sq * np.outer(base.M_a, base.H_a)
    kappa, kres = check_kappa_condition(space, hv, base.x, base.y, conn, bd)
    # L_ijr D^r_0k transvected by N^j B^i_a B^k_b in its three index placements
    Lk = np.einsum("ijr,j,ia,kb,rk->ab", ms.Lijk, N_up, B, B, dt.D0j)    # D^r_0k
    Li = np.einsum("kjr,j,ia,kb,ri->ab", ms.Lijk, N_up, B, B, dt.D0j)    # D^r_0i
    Lj = np.einsum("kir,j,ia,kb,rj->ab", ms.Lijk, N_up, B, B, dt.D0j)    # D^r_0j
    GN = dt.G2 @ N_up

    sg = star.conn.ms.g
    res = {
        "eq4.6": rel_residual(N_up @ sg @ N_up, nu * e * e + 2 * e * e * bN * bN),
        "eq4.8": rel_residual(B.T @ sg @ N_up,
                              bN * e * e * ((1 - 2 * dt.tau) * ms.l @ B + 2 * b @ B)),
    }
    gradient = float(np.abs(bd.F).max()) <= tangent_tol
    defect = float(beta_r @ N_up)                # b_(i|0) N^i
    first_kind = abs(defect) <= tangent_tol
    kappa_ok = kres <= KAPPA_TOL
    not_tangent = f"b is not tangent (b_j N^j = {bN:.2e})"
    not_first = f"surface not of the first kind (b_(i|0) N^i = {defect:.2e})"
    gates = {
        "eq4.9": (rel_residual(star.N_up, star_N), []),
        "eq4.10": (rel_residual(star.N_low, star_N_low), []),
        "eq4.15": (rel_residual(star.H_a, star_H_a), []),
        "eq4.16": (abs(star.H0 - star_H0) / max(1.0, abs(base.H0)),
                   [(gradient, "b is not a gradient")]),
        "eq4.18": (rel_residual(star.H_ab - np.outer(star.M_a, star.H_a), star_Hab), []),
        "eq4.24": (rel_residual(ND_BB, ND_formula),
                   [(first_kind, not_first)]),
        "eq4.19": (rel_residual(ND_BB, -0.5 * L * (Lk + Li - Lj)), [(first_kind, not_first)]),
        "eq4.20": (float(np.abs(GN @ B).max()) / max(1.0, float(np.abs(GN).max())),
                   [(first_kind, not_first)]),
        "eq4.21": (rel_residual(Lj, 2 * dt.mu / (nu * e) * base.M_ab), [(first_kind, not_first)]),
        "eq4.22": (rel_residual(Lk, 2 / (nu * e) * (dt.lam * base.M_ab - e / (2 * L) * extra)),
                   [(first_kind, not_first)]),
        "eq4.23": (rel_residual(Li, 2 / (nu * e) * (dt.lam * base.M_ab - e / (2 * L) * extra.T)),
                   [(first_kind, not_first)]),
        "eq4.20_mu": (abs(float(GN @ N_up) - dt.mu) / max(1.0, abs(dt.mu)), [(first_kind, not_first)]),
        "eq4.27": (rel_residual(ND_BB, L * (dt.mu - 2 * dt.lam) / (nu * e) * base.M_ab),
                   [(first_kind, not_first),
                    (kappa_ok, f"kappa condition fails (residual {kres:.2e})")]),
        "eq4.28": (rel_residual(star.H_ab - np.outer(star.M_a, star.H_a), reduced),
                   [(first_kind, not_first),
                    (kappa_ok, f"kappa condition fails (residual {kres:.2e})")]),
        "eq4.29": (rel_residual(star.M_ab, sq * base.M_ab), []),
    }
    reasons = {}
    for key, (val, conds) in gates.items():
        why = not_tangent if not tangential else next((r for ok, r in conds if not ok), "")
        res[key] = None if why else val
        if why:
            reasons[key] = why
    return StarredSurfaceSample(
        base=base, star=star, tangency=bN, tangential=tangential, tau=dt.tau, nu=nu, rho=dt.rho,
        star_N_formula=star_N, star_N_low_formula=star_N_low, star_H_a_formula=star_H_a,
        star_H0_formula=star_H0, star_Hab_formula=star_Hab, star_Hab_reduced=reduced,
        star_M_ab_formula=sq * base.M_ab, ND_BB=ND_BB, ND_BB_formula=ND_formula,
        mu=dt.mu, lam=dt.lam, kappa=kappa, kappa_residual=kres, residuals=res, reasons=reasons,
    )


@dataclass(frozen=True)
class BatteryReport:
    residuals: dict          # gated identities
    informational: dict      # alternative readings, reported but never gated
    tangency: float          # b_j N^j
    first_kind_defect: float  # b_{i|0} N^i
    applicable: bool
    reason: str = ""


def check_identity_battery(space, hv, hs, u, v, tangent_tol=TANGENT_TOL):
    """Residuals of the relations the D and G tensors satisfy for a gradient
    h-vector tangent to the surface.

    Besides tangency the relations use b_{i|0} N^i = 0, which follows from
    H_alpha = 0 (surfaces of the first kind); when either fails the report is
    marked not applicable and the residuals are still returned.

    The line "D^r_0j L_jr N^j = 0" repeats an index.  The gated reading is
    D^r_0j L_ir N^j B^i_alpha (free alpha); the free-i and fully summed
    readings are reported as informational entries because neither vanishes
    (both are proportional to N_r D^r_0j N^j).
    """
    ss = surface_sample(space, hs, u, v)
    conn = ss.conn
    ms = conn.ms
    bd = b_derivative_tensors(space, hv, ss.x, ss.y, conn)
    dt = difference_tensors(space, hv, ss.x, ss.y, conn, bd)
    N_up, N_low, B = ss.N_up, ss.N_low, ss.B
    L = ms.L
    G_up = ms.ginv @ dt.G2
    K = 1.0 / (dt.m2 + dt.nu)
    DLN_i = np.einsum("rj,ir,j->i", dt.D0j, ms.Lij, N_up)
    coef = bd.E_00 - K * bd.beta_0 * dt.m2
    LD00_rhs = coef * ((2 * dt.rho / (L**2 * dt.nu) - 1 / L**2) * ms.h
                       - (np.outer(ms.l, dt.m) + np.outer(dt.m, ms.l)) / (L**2 * dt.nu))
    residuals = {
        "eq4.14_D00N": abs(float(dt.D00 @ N_low)),
        "eq4.17_DLN": float(np.abs(DLN_i @ B).max()),
        "eq4.17_LD00": float(np.abs(ms.Lijk @ dt.D00 - LD00_rhs).max()),
        "eq4.17_GNB": float(np.abs(N_up @ dt.G2 @ B).max()),
        "eq4.17_DNB": float(np.abs(N_low @ dt.D0j @ B).max()),
        "eq4.17_GjN": abs(float(dt.G1 @ N_up)),
        "eq4.17_GbN": abs(float(dt.b_up @ dt.G2 @ N_up)),
        "eq4.17_DbN": abs(float(dt.b @ dt.D0j @ N_up)),
        "eq4.17_DNBh": float(np.abs(np.einsum("ij,j,ka,ik->a", dt.D0j, N_up, B, ms.h)).max()),
        "eq4.17_DlN": abs(float(ms.l @ dt.D0j @ N_up)),
        "eq4.17_GlN": abs(float(ms.l @ G_up @ N_up)),
    }
    informational = {
        "eq4.17_DLN_free_i": float(np.abs(DLN_i).max()),
        "eq4.17_DLN_summed": abs(float(np.einsum("rj,jr,j->", dt.D0j, ms.Lij, N_up))),
    }
    bN = float(dt.b @ N_up)
    defect = float((bd.b_cov_h @ ss.y) @ N_up)
    reason = ""
    if float(np.abs(bd.F).max()) > tangent_tol:
        reason = "b is not a gradient"
    elif abs(bN) > tangent_tol:
        reason = f"b is not tangent (b_j N^j = {bN:.2e})"
    elif abs(defect) > tangent_tol:
        reason = f"surface not of the first kind (b_(i|0) N^i = {defect:.2e})"
    return BatteryReport(residuals, informational, bN, defect, not reason, reason)


# -- classification --------------------------------------------------------------------

@dataclass(frozen=True)
class Classification:
    kind: str
    max_H_a: float
    max_H_ab: float
    max_M_ab: float
    samples: int


def classify(samples, tol=CLASSIFY_TOL):
    """Kind of the surface over a set of SurfaceSample (max-reduction)."""
    if not samples:
        raise UsageError("classification needs at least one sample")
    Ha = max(float(np.abs(s.H_a).max()) for s in samples)
    Hab = max(float(np.abs(s.H_ab).max()) for s in samples)
    Mab = max(float(np.abs(s.M_ab).max()) for s in samples)
    if Hab <= tol:
        kind = "third" if Mab <= tol else "second"
    elif Ha <= tol:
        kind = "first"
    else:
        kind = "none"
    return Classification(kind, Ha, Hab, Mab, len(samples))


__all__ = [
    "Hypersurface", "hyperplane", "sphere", "quadric_graph", "make_hypersurface",
    "SurfaceSample", "surface_sample", "unit_normal", "hyperplane_kind", "check_gauss_relations",
    "StarredSurfaceSample", "starred_surface_sample", "check_kappa_condition",
    "check_identity_battery", "BatteryReport", "Classification", "classify",
]
