"""The h-exponential change *L = L exp(beta / L) and its closed-form tensors."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import SingularChangeError
from .finsler import FinslerSpace, metric_sample
from .hvector import b_values
from .jets import exp, value_of

NU_MIN = 1e-6
M2NU_MIN = 1e-6


def rel_residual(a, ref):
    """max |a - ref| scaled by max(1, max |ref|)."""
    a = np.asarray(a, float)
    ref = np.asarray(ref, float)
    return float(np.abs(a - ref).max() / max(1.0, float(np.abs(ref).max())))


def star_space(space, hv):
    """The changed space; a regular FinslerSpace usable by every other module."""
    if hv.is_zero:
        L_star = space.L
    else:
        def L_star(x, y):
            L = space.L(x, y)
            return L * exp(hv.beta(L, x, y) / L)

    def domain(x, y):
        if not space.domain(x, y):
            return False
        L = value_of(space.L(list(x), list(y)))
        tau = value_of(hv.beta(L, list(x), list(y))) / L
        return 1.0 + value_of(hv.rho(list(x))) - tau > NU_MIN

    return FinslerSpace(space.n, L_star, domain, f"hexp({space.kind})",
                        {"base": space, "hvector": hv})


@dataclass(frozen=True)
class ChangeSample:
    tau: float
    nu: float
    rho: float
    b: np.ndarray
    m: np.ndarray
    m_up: np.ndarray
    m2: float
    starL: float
    star_l: np.ndarray
    star_g: np.ndarray
    star_ginv: np.ndarray
    star_C: np.ndarray
    star_Lij: np.ndarray
    star_Lijk: np.ndarray


def _sym3(v, M):
    """v_i M_jk + v_j M_ki + v_k M_ij"""
    return (np.einsum("i,jk->ijk", v, M) + np.einsum("j,ki->ijk", v, M)
            + np.einsum("k,ij->ijk", v, M))


def change_scalars(space, hv, x, y, ms=None):
    """(ms, b, rho, tau, nu, m, m_up, m2) with the singularity guards applied."""
    if ms is None:
        ms = metric_sample(space, x, y)
    b = b_values(space, hv, x, y, ms)
    rho = float(hv.rho(list(np.asarray(x, float))))
    tau = float(b @ ms.y) / ms.L
    nu = 1.0 + rho - tau
    if nu <= NU_MIN:
        raise SingularChangeError(f"nu = {nu:.3e} <= {NU_MIN:.0e}")
    m = b - tau * ms.l
    m_up = ms.ginv @ m
    m2 = float(m @ m_up)
    if abs(m2 + nu) <= M2NU_MIN:
        raise SingularChangeError(f"|m^2 + nu| = {abs(m2 + nu):.3e} <= {M2NU_MIN:.0e}")
    return ms, b, rho, tau, nu, m, m_up, m2


def change_sample(space, hv, x, y, ms=None):
    """Starred tensors from their closed forms in terms of the base tensors."""
    ms, b, rho, tau, nu, m, m_up, m2 = change_scalars(space, hv, x, y, ms)
    L, l, g, h = ms.L, ms.l, ms.g, ms.h
    e = math.exp(tau)
    e2 = e * e

    star_l = e * (m + l)
    star_g = (nu * e2 * g + e2 * (2 * tau**2 - tau - rho) * np.outer(l, l)
              + e2 * (1 - 2 * tau) * (np.outer(b, l) + np.outer(l, b)) + 2 * e2 * np.outer(b, b))
    star_C = (nu * e2 * ms.C + 2.0 / L * e2 * np.einsum("i,j,k->ijk", m, m, m)
              + e2 * (2 * nu - 1) / (2 * L) * _sym3(m, h))

    K = 1.0 / (m2 + nu)
    b_up = ms.ginv @ b
    l_up = ms.l_up
    star_ginv = np.exp(-2 * tau) / nu * (
        ms.ginv - K * np.outer(b_up, b_up)
        + (tau - nu) * K * (np.outer(b_up, l_up) + np.outer(l_up, b_up))
        - ((tau - nu) * K * (m2 + tau) - rho) * np.outer(l_up, l_up)
    )
    star_Lij = e * nu * ms.Lij + e / L * np.outer(m, m)
    mmm = np.einsum("i,j,k->ijk", m, m, m)
    mml = (np.einsum("j,k,i->ijk", m, m, l) + np.einsum("i,k,j->ijk", m, m, l)
           + np.einsum("i,j,k->ijk", m, m, l))
    star_Lijk = e * nu * ms.Lijk + (rho - tau) * e / L * _sym3(m, ms.Lij) - e / L**2 * (mml - mmm)
    return ChangeSample(
        tau=tau, nu=nu, rho=rho, b=b, m=m, m_up=m_up, m2=m2, starL=L * e, star_l=star_l,
        star_g=star_g, star_ginv=star_ginv, star_C=star_C, star_Lij=star_Lij, star_Lijk=star_Lijk,
    )


def verify_change(space, hv, x, y, star=None):
    """Closed forms against jets of the changed fundamental function.

    Keys name the closed form being tested; values are relative residuals.
    """
    cs = change_sample(space, hv, x, y)
    sms = metric_sample(star or star_space(space, hv), x, y)
    n = space.n
    return {
        "starL": rel_residual(cs.starL, sms.L),
        "eq3.1": rel_residual(cs.star_Lij, sms.Lij),
        "eq3.2": rel_residual(cs.star_Lijk, sms.Lijk),
        "eq3.3": rel_residual(cs.star_l, sms.l),
        "eq3.4": rel_residual(cs.star_g, sms.g),
        "eq3.6": rel_residual(cs.star_C, sms.C),
        "eq3.7": float(np.abs(cs.star_ginv @ cs.star_g - np.eye(n)).max()),
        "eq3.7_vs_ad": rel_residual(cs.star_ginv, sms.ginv),
        "g_yy": abs(ms_quad(cs.star_g, sms.y) - cs.starL**2) / max(1.0, cs.starL**2),
    }


def ms_quad(M, y):
    return float(y @ M @ y)
