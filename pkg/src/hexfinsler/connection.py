"""Spray, nonlinear and Cartan connections, covariant derivatives, the
difference tensors D of the exponential change, and the (v)hv-torsion P."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DomainError
from .expchange import change_scalars
from .finsler import MetricSample, invert_metric
from .hvector import b_jets, b_tables
from .jets import JetRequest, JetTable, get_ring, jet_eval, lift, variables


@dataclass(frozen=True)
class ConnectionSample:
    ms: MetricSample
    G: np.ndarray        # G^i
    N: np.ndarray        # N^i_j = dG^i/dy^j
    F: np.ndarray        # F^i_jk
    dg_x: np.ndarray     # d_k g_ij, stored [k, i, j]
    dC_x: Optional[np.ndarray] = None   # d_k C_abc, stored [k, a, b, c]
    dC_y: Optional[np.ndarray] = None   # d C_abc / dy^s, stored [a, b, c, s]

    @property
    def F_0(self):
        """F^i_j0 = F^i_jk y^k (equal to N^i_j for the Cartan connection)."""
        return self.F @ self.ms.y


def _connection_from_tables(tab_L, tab_E):
    from .finsler import metric_from_tables

    ms = metric_from_tables(tab_L, tab_E)
    y = ms.y
    ginv, C = ms.ginv, ms.C
    E_x = tab_E.xy_tensor(0)            # [l]
    E_xy = tab_E.xy_tensor(1)           # [k, l]
    E_xyy = tab_E.xy_tensor(2)          # [k, a, b]
    A = y @ E_xy - E_x                  # A_l = y^k d_k d_l E - d_l E
    G = 0.25 * ginv @ A
    dA = E_xy + np.einsum("k,kjl->jl", y, E_xyy) - E_xy.T      # dA[j, l] = dA_l / dy^j
    dginv = -2.0 * np.einsum("ia,abj,bl->ijl", ginv, C, ginv)  # d g^{il} / dy^j
    N = 0.25 * (np.einsum("ijl,l->ij", dginv, A) + np.einsum("il,jl->ij", ginv, dA))
    dg_x = 0.5 * E_xyy
    # delta_k g_ab = d_k g_ab - N^s_k dg_ab/dy^s
    delta_g = dg_x - 2.0 * np.einsum("sk,abs->kab", N, C)
    # F^i_jk = g^{ir}(delta_j g_rk + delta_k g_jr - delta_r g_jk) / 2
    T = (delta_g + np.einsum("kjr->jrk", delta_g) - np.einsum("rjk->jrk", delta_g))
    F = 0.5 * np.einsum("ir,jrk->ijk", ginv, T)
    dC_x = dC_y = None
    if tab_E.y_order >= 4:
        dC_x = 0.25 * tab_E.xy_tensor(3)
        dC_y = 0.25 * tab_E.y_tensor(4)
    return ConnectionSample(ms=ms, G=G, N=N, F=F, dg_x=dg_x, dC_x=dC_x, dC_y=dC_y)


def spray_and_connection(space, x, y, with_torsion=False):
    """G^i, N^i_j and the Cartan coefficients F^i_jk at (x, y).

    G^i = g^{il}(y^k d_k dE/dy^l - dE/dx^l) / 4 with E = L^2; N^i_j = dG^i/dy^j;
    F^i_jk from the delta-derivatives delta_k = d_k - N^r_k d/dy^r of g.
    ``with_torsion`` carries the jets one y-order higher (needed by P).
    """
    def f(X, Y):
        val = space.L(X, Y)
        return [val, val * val]

    order = 4 if with_torsion else 3
    tab_L, tab_E = jet_eval(f, x, y, JetRequest(1, order), domain=space.domain)
    if tab_L.value <= 0.0:
        raise DomainError(f"L = {tab_L.value!r} is not positive")
    return _connection_from_tables(tab_L, tab_E)


# -- covariant derivatives ------------------------------------------------

def _field_arrays(X, x, y):
    """(value, d_x, d_y) of a covector field given as callable or JetTables."""
    if callable(X):
        tabs = jet_eval(X, x, y, JetRequest(1, 1))
    else:
        tabs = X
    val = np.array([t.value for t in tabs])
    dx = np.array([t.xy_tensor(0) for t in tabs])   # dx[i, j] = d_j X_i
    dy = np.array([t.y_tensor(1) for t in tabs])    # dy[i, j] = dX_i/dy^j
    return val, dx, dy


def h_cov_from_arrays(val, dx, dy, conn):
    """X_{i|j} = d_j X_i - N^r_j dX_i/dy^r - X_r F^r_ij."""
    return dx - dy @ conn.N - np.einsum("r,rij->ij", val, conn.F)


def v_cov_from_arrays(val, dy, ms):
    """X_i|_j = dX_i/dy^j - X_r C^r_ij."""
    return dy - np.einsum("r,rij->ij", val, ms.C_up)


def h_cov_deriv(space, X, x, y, conn=None):
    """h-covariant derivative matrix X_{i|j} of a covector field.

    ``X`` is a callable (x, y) -> covector or a list of JetTables with x-order 1.
    """
    conn = conn or spray_and_connection(space, x, y)
    val, dx, dy = _field_arrays(X, x, y)
    return h_cov_from_arrays(val, dx, dy, conn)


def v_cov_deriv(space, X, x, y, ms=None):
    """v-covariant derivative matrix X_i|_j of a covector field."""
    if ms is None:
        ms = spray_and_connection(space, x, y).ms
    val, _, dy = _field_arrays(X, x, y)
    return v_cov_from_arrays(val, dy, ms)


def l_tables(space, x, y):
    """Jet tables of l_i = dL/dy^i with x-order 1, y-order 1."""
    x = np.asarray(x, float)
    y = np.asarray(y, float)
    hi = get_ring(space.n, 1, 2)
    lo = get_ring(space.n, 1, 1)
    X, Y = variables(hi, x, y)
    Lj = lift(hi, space.L(X, Y))
    from .jets import derivative_y
    return [JetTable(derivative_y(Lj, i, lo), x, y) for i in range(space.n)]


# -- derivatives of the h-vector ----------------------------------------------

@dataclass(frozen=True)
class BDerivatives:
    b: np.ndarray
    b_cov_h: np.ndarray     # b_{i|j}
    b_cov_v: np.ndarray     # b_i|_j
    E: np.ndarray
    F: np.ndarray
    beta_bar: np.ndarray    # beta_{|k}
    beta_bar_direct: np.ndarray   # delta_k beta computed from the scalar beta
    E_00: float
    beta_0: float
    F_0_up: np.ndarray      # F^i_0 = g^{ij} F_j0
    rho: float
    rho_k: np.ndarray
    rho_0: float


def b_derivative_tensors(space, hv, x, y, conn=None):
    """b_{i|j}, its symmetric/antisymmetric parts E, F, beta_{|k} and rho_k."""
    x = np.asarray(x, float)
    y = np.asarray(y, float)
    conn = conn or spray_and_connection(space, x, y)
    n = space.n
    hi = get_ring(n, 1, 2)
    lo = get_ring(n, 1, 1)
    Xh, Yh = variables(hi, x, y)
    L_hi = lift(hi, space.L(Xh, Yh))
    X, Y = variables(lo, x, y)
    bj = b_jets(space, hv, X, Y, L_hi, lo)
    tabs = [JetTable(j, x, y) for j in bj]
    val, dx, dy = _field_arrays(tabs, x, y)
    bcov = h_cov_from_arrays(val, dx, dy, conn)
    E = 0.5 * (bcov + bcov.T)
    F = 0.5 * (bcov - bcov.T)
    beta_bar = y @ bcov
    # beta as a scalar field: delta_k beta = d_k beta - N^r_k d beta/dy^r
    L_lo = lift(lo, space.L(X, Y))
    beta_tab = JetTable(lift(lo, hv.beta(L_lo, X, Y)), x, y)
    beta_bar_direct = beta_tab.xy_tensor(0) - beta_tab.y_tensor(1) @ conn.N
    rho_tab = JetTable(lift(lo, hv.rho(X)), x, y)
    rho_k = rho_tab.xy_tensor(0)
    return BDerivatives(
        b=val, b_cov_h=bcov, b_cov_v=v_cov_from_arrays(val, dy, conn.ms), E=E, F=F,
        beta_bar=beta_bar, beta_bar_direct=beta_bar_direct, E_00=float(y @ E @ y),
        beta_0=float(beta_bar @ y), F_0_up=conn.ms.ginv @ (F @ y), rho=rho_tab.value,
        rho_k=rho_k, rho_0=float(rho_k @ y),
    )


# -- difference tensors ----------------------------------------------------------

@dataclass(frozen=True)
class DifferenceTensors:
    D00: np.ndarray      # D^i_00
    D0j: np.ndarray      # D^i_0j, stored [i, j]
    Djk: np.ndarray      # D^i_jk, stored [i, j, k]
    G2: np.ndarray       # G_ij
    G1: np.ndarray       # G_j
    H3: np.ndarray       # H_jik, stored [j, i, k]
    H2: np.ndarray       # H_ik
    A: np.ndarray        # A_ijk
    mu: float
    lam: float
    tau: float
    nu: float
    rho: float
    m: np.ndarray
    m_up: np.ndarray
    m2: float
    b: np.ndarray
    b_up: np.ndarray
    B0_term: float       # size of the B_0 contribution in G_ij


def _cyclic_A(e, L, nu, m, l, Lij, D0):
    """A_ijk = (e/L) D^r_0k S_(rij)[(nu - 1) m_r L_ij - m_i m_j l_r / L].

    ``D0`` is D^r_0k stored [r, k]; S is the cyclic sum over (r, i, j).
    """
    T = (nu - 1.0) * np.einsum("r,ij->rij", m, Lij) - np.einsum("i,j,r->rij", m, m, l) / L
    S = T + np.einsum("ijr->rij", T) + np.einsum("jri->rij", T)
    return e / L * np.einsum("rk,rij->ijk", D0, S)


def difference_tensors(space, hv, x, y, conn=None, bd=None, literal=False):
    """D^i_00, D^i_0j, D^i_jk of the change and their helper tensors.

    Evaluation order: D_00 -> (G_ij, G_j) -> D_0j -> (H_jik, H_ik, A_ijk) -> D_jk.
    ``B_0`` in G_ij is taken as beta_{|0}.

    G_ij = *L_ir D^r_0j, G_j = *l_r D^r_0j, H_jik = *L_jr D^r_ik and
    H_ik = *l_r D^r_ik.  The default form restores the terms that the
    Christoffel process on *L_ij and *l_i produces: (e/L)(m_i|0 m_j + m_i m_j|0)
    in G_ij, its cyclic analogue in H_jik together with the sign of A_jki,
    and 2 e E_ik in H_ik.  ``literal=True`` evaluates the uncorrected forms.
    """
    x = np.asarray(x, float)
    y = np.asarray(y, float)
    conn = conn or spray_and_connection(space, x, y)
    bd = bd or b_derivative_tensors(space, hv, x, y, conn)
    ms = conn.ms
    _, b, rho, tau, nu, m, m_up, m2 = change_scalars(space, hv, x, y, ms)
    L, l, l_up, ginv = ms.L, ms.l, ms.l_up, ms.ginv
    Lij, Lijk = ms.Lij, ms.Lijk
    e = math.exp(tau)
    K = 1.0 / (m2 + nu)
    b_up = ginv @ b
    beta0 = bd.beta_0
    E00 = bd.E_00
    F_b0 = float(b_up @ bd.F @ y)
    beta_k = bd.beta_bar
    rho_k, rho_0 = bd.rho_k, bd.rho_0

    bracket = e / L * beta0 * m2 + 2 * e * F_b0
    D00 = (L / (nu * e) * (e / L * beta0 * m_up + 2 * e * bd.F_0_up)
           + l_up * (E00 - L / e * K * bracket)
           - m_up * L / (nu * e) * K * bracket)

    # A_ijk y^k only needs D^r_00
    A_y = _cyclic_A(e, L, nu, m, l, Lij, D00[:, None])[:, :, 0]
    mD00 = float(m @ D00)
    LD00 = Lijk @ D00
    B0 = beta0
    # m_{i|k} = b_{i|k} - beta_{|k} l_i / L
    m_cov = bd.b_cov_h - np.outer(l, beta_k) / L
    m_cov0 = m_cov @ y
    G2 = 0.5 * (e / L * (np.outer(m, beta_k) - np.outer(beta_k, m))   # beta_|j m_i - beta_|i m_j
                + 2 * e * bd.F - nu * e * LD00 - A_y
                - e / L**2 * mD00 * np.outer(m, m)
                + (nu - 1) / L * e * beta0 * Lij
                + e / L**2 * B0 * np.outer(m, m)
                + e * rho_0 * Lij)
    if not literal:
        G2 = G2 + 0.5 * e / L * (np.outer(m_cov0, m) + np.outer(m, m_cov0))
    B0_term = abs(0.5 * e / L**2 * B0) * float(np.abs(np.outer(m, m)).max())
    G1 = e * (bd.E @ y - bd.F @ y)
    G_up = ginv @ G2                    # G^i_j
    G_b = b_up @ G2                     # G_beta j
    D0j = (L * G_up / (nu * e) + np.outer(l_up, G1 - L * K * G_b) / e
           - np.outer(m_up, G_b) * L / (nu * e) * K)

    A = _cyclic_A(e, L, nu, m, l, Lij, D0j)
    a_sign = 1.0 if literal else -1.0
    # LD[i, j, k] = L_ijr D^r_0k
    LD = np.einsum("ijr,rk->ijk", Lijk, D0j)
    mmD = np.einsum("i,j,k->ijk", m, m, m @ D0j)   # m_i m_j m_r D^r_0k
    # H3[j, i, k] = 2H_jik / 2
    H3 = 0.5 * (
        -nu * e * (np.einsum("ijk->jik", LD)              # L_ijr D^r_0k
                   + np.einsum("jki->jik", LD)            # L_jkr D^r_0i
                   - np.einsum("kij->jik", LD))           # L_kir D^r_0j
        + a_sign * np.einsum("jki->jik", A) + np.einsum("kij->jik", A) - np.einsum("ijk->jik", A)
        - e / L**2 * (np.einsum("ijk->jik", mmD) + np.einsum("jki->jik", mmD)
                      - np.einsum("kij->jik", mmD))
        + (nu - 1) * e / L * (np.einsum("k,ij->jik", beta_k, Lij) + np.einsum("i,jk->jik", beta_k, Lij)
                              - np.einsum("j,ki->jik", beta_k, Lij))
        + e * (np.einsum("k,ij->jik", rho_k, Lij) + np.einsum("i,jk->jik", rho_k, Lij)
               - np.einsum("j,ki->jik", rho_k, Lij))
        + e / L**2 * (np.einsum("k,i,j->jik", beta_k, m, m) + np.einsum("i,j,k->jik", beta_k, m, m)
                      - np.einsum("j,k,i->jik", beta_k, m, m))
    )
    if not literal:
        # W[i, j, k] = m_i|k m_j + m_i m_j|k
        W = np.einsum("ik,j->ijk", m_cov, m) + np.einsum("i,jk->ijk", m, m_cov)
        H3 = H3 + 0.5 * e / L * (np.einsum("ijk->jik", W) + np.einsum("jki->jik", W)
                                 - np.einsum("kij->jik", W))
    P = nu * e * Lij + e / L * np.outer(m, m)       # nu e L_ir + (e/L) m_i m_r
    E_factor = 1.0 if literal else 2.0
    H2 = 0.5 * (e / L * (np.outer(m, beta_k) + np.outer(beta_k, m)) + E_factor * e * bd.E
                - P @ D0j - (P @ D0j).T)
    H_up = np.einsum("jm,mik->jik", ginv, H3)
    H_b = np.einsum("m,mik->ik", b_up, H3)
    Djk = (L * H_up / (nu * e) + np.einsum("j,ik->jik", l_up, H2 - L * K * H_b) / e
           - np.einsum("j,ik->jik", m_up, H_b) * L / (nu * e) * K)

    core = -e * (E00 - K * beta0 * m2) * (2 * rho - nu)
    mu = (core - e * nu * mD00 + nu * (nu - 1) * e * beta0) / (2 * L**2)
    lam = (core - e * nu * (nu - 1) * mD00 + nu * (nu - 1) * e * beta0) / (2 * L**2)
    return DifferenceTensors(
        D00=D00, D0j=D0j, Djk=Djk, G2=G2, G1=G1, H3=H3, H2=H2, A=A, mu=mu, lam=lam,
        tau=tau, nu=nu, rho=rho, m=m, m_up=m_up, m2=m2, b=b, b_up=b_up, B0_term=B0_term,
    )


def verify_connection_change(space, hv, x, y, star=None):
    """max |*F^i_jk - F^i_jk - D^i_jk| relative to max(1, |*F|), plus the
    intermediate D^i_00, D^i_0j against the directly computed differences.

    ``eq3.8_literal`` is the same residual for the uncorrected forms of the
    helper tensors; it is reported for information only.
    """
    from .expchange import star_space

    conn = spray_and_connection(space, x, y)
    sconn = spray_and_connection(star or star_space(space, hv), x, y)
    dt = difference_tensors(space, hv, x, y, conn)
    lit = difference_tensors(space, hv, x, y, conn, literal=True)
    y = np.asarray(y, float)
    true_D = sconn.F - conn.F
    scale = max(1.0, float(np.abs(sconn.F).max()))
    return {
        "eq3.8": float(np.abs(true_D - dt.Djk).max()) / scale,
        "eq3.9": float(np.abs(true_D @ y @ y - dt.D00).max()) / scale,
        "eq3.10": float(np.abs(np.einsum("ijk,j->ik", true_D, y) - dt.D0j).max()) / scale,
        "eq3.8_literal": float(np.abs(true_D - lit.Djk).max()) / scale,
    }


# -- (v)hv-torsion ------------------------------------------------------------------

@dataclass(frozen=True)
class PTensorResult:
    P: np.ndarray                  # P^r_ij
    lambda_P: Optional[float]
    fit_residual: Optional[float]
    landsberg: bool
    kappa: Optional[float]
    C_cov: Optional[np.ndarray] = None   # C^r_{ij|k}, stored [r, i, j, k]


def p_tensor(space, x, y, hv=None, tol=1e-9, conn=None):
    """P^r_ij = C^r_{ij|0} with a least-squares fit P ~ lambda_P C."""
    conn = conn or spray_and_connection(space, x, y, with_torsion=True)
    if conn.dC_x is None:
        raise ValueError("connection sample lacks order-4 jets; pass with_torsion=True")
    ms = conn.ms
    y = ms.y
    C, F, N = ms.C, conn.F, conn.N
    # delta_k C_aij
    dC = conn.dC_x - np.einsum("sk,aijs->kaij", N, conn.dC_y)
    Ck = (dC - np.einsum("sij,sak->kaij", C, F) - np.einsum("asj,sik->kaij", C, F)
          - np.einsum("ais,sjk->kaij", C, F))
    P_low = np.einsum("k,kaij->aij", y, Ck)
    P = np.einsum("ra,aij->rij", ms.ginv, P_low)
    C_cov = np.einsum("ra,kaij->rijk", ms.ginv, Ck)
    landsberg = bool(np.abs(P).max() <= tol)
    Cup = ms.C_up
    cc = float(np.sum(Cup * Cup))
    if cc <= tol**2:
        return PTensorResult(P, None, None, landsberg, 0.0 if landsberg else None, C_cov)
    lam = float(np.sum(P * Cup) / cc)
    resid = float(np.abs(P - lam * Cup).max())
    kappa = None
    if hv is not None:
        kappa = -lam * float(hv.rho(list(ms.x))) / ms.L
    return PTensorResult(P, lam, resid, landsberg, kappa, C_cov)
