"""Scenario runner: sampling, identity batteries and the JSON Lines report.

Every identity has a stable id.  Ids of the form ``eqA.B`` carry the tag of
the relation they test; others are prefixed by their battery.
"""

from __future__ import annotations

import json
import math
import re
import time
from collections import Counter
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.stats import norm, qmc

from . import __version__
from .connection import (
    b_derivative_tensors,
    h_cov_deriv,
    l_tables,
    p_tensor,
    spray_and_connection,
    verify_connection_change,
)
from .errors import DegeneracyError, DomainError, SingularChangeError
from .expchange import verify_change
from .finsler import check_euler, check_Lijk_identity
from .hvector import check_hvector
from .hypersurface import (
    CLASSIFY_TOL,
    COUNTER_TOL,
    TANGENT_TOL,
    check_gauss_relations,
    check_identity_battery,
    classify,
    starred_surface_sample,
    surface_sample,
)
from .jets import JetRequest, backend, fd_agreement, jet_eval
from .scenario import build_hvector, build_space, build_surface, expected_kind

GATE, INFO, COUNT = "gate", "info", "count"

# id -> (battery, default tolerance, mode)
IDENTITIES = {
    "engine.jet_fd_low": ("engine", 1e-5, GATE),
    "engine.jet_fd_order4": ("engine", 1e-4, GATE),
    "engine.euler": ("engine", 1e-9, GATE),
    "eq3.5": ("metric", 1e-9, GATE),
    "eq1.1": ("hvector", 1e-9, GATE),
    "eq1.2": ("hvector", 1e-9, GATE),
    "hvector.indicatory": ("hvector", 1e-9, GATE),
    "hvector.rho_direction": ("hvector", 1e-7, GATE),
    "lemma3.1": ("hvector", 1e-9, GATE),
    "change.starL": ("change", 1e-8, GATE),
    "eq3.1": ("change", 1e-8, GATE),
    "eq3.2": ("change", 1e-8, GATE),
    "eq3.3": ("change", 1e-8, GATE),
    "eq3.4": ("change", 1e-8, GATE),
    "eq3.6": ("change", 1e-8, GATE),
    "eq3.7": ("change", 1e-8, GATE),
    "eq3.7_ad": ("change", 1e-8, GATE),
    "connection.N_F0": ("connection", 1e-9, GATE),
    "connection.spray": ("connection", 1e-9, GATE),
    "connection.l_cov": ("connection", 1e-8, GATE),
    "eq3.8": ("connection", 1e-6, GATE),
    "eq3.9": ("connection", 1e-6, GATE),
    "eq3.10": ("connection", 1e-6, GATE),
    "eq3.8_literal": ("connection", 1e-6, INFO),
    "eq5.1_P": ("torsion", 1e-10, GATE),
    "eq5.2": ("torsion", 1e-9, GATE),
    "eq5.3": ("torsion", 1e-10, GATE),
    "eq4.25_kappa": ("torsion", 1e-8, INFO),
    "eq2.5": ("surface", 1e-9, GATE),
    "eq2.6": ("surface", 1e-9, GATE),
    "eq2.9": ("surface", 1e-9, GATE),
    "eq2.12": ("surface", 1e-9, GATE),
    "eq4.5": ("surface", 1e-9, GATE),
    "surface.kind": ("surface", 0.0, COUNT),
    "eq4.3": ("starred", 1e-9, GATE),
    "eq4.6": ("starred", 1e-8, GATE),
    "eq4.8": ("starred", 1e-8, GATE),
    "eq4.9": ("starred", 1e-8, GATE),
    "eq4.10": ("starred", 1e-8, GATE),
    "eq4.15": ("starred", 1e-7, GATE),
    "eq4.16": ("starred", 1e-7, GATE),
    "eq4.18": ("starred", 1e-6, GATE),
    "eq4.19": ("starred", 1e-6, GATE),
    "eq4.20": ("starred", 1e-7, GATE),
    "eq4.20_mu": ("starred", 1e-7, INFO),
    "eq4.21": ("starred", 1e-6, GATE),
    "eq4.22": ("starred", 1e-6, GATE),
    "eq4.23": ("starred", 1e-6, GATE),
    "eq4.24": ("starred", 1e-6, GATE),
    "eq4.27": ("starred", 1e-6, GATE),
    "eq4.28": ("starred", 1e-6, GATE),
    "eq4.29": ("starred", 1e-8, GATE),
    "starred.tangency": ("starred", 1e-10, GATE),
    "thm4.1_counter": ("starred", 0.1, COUNT),
    "thm4.2_kind": ("starred", 0.0, COUNT),
    "thm4.3_kind": ("starred", 0.0, COUNT),
    "eq4.14": ("battery", 1e-7, GATE),
    "eq4.17_DLN": ("battery", 1e-7, GATE),
    "eq4.17_LD00": ("battery", 1e-7, GATE),
    "eq4.17_GNB": ("battery", 1e-7, GATE),
    "eq4.17_DNB": ("battery", 1e-7, GATE),
    "eq4.17_GjN": ("battery", 1e-7, GATE),
    "eq4.17_GbN": ("battery", 1e-7, GATE),
    "eq4.17_DbN": ("battery", 1e-7, GATE),
    "eq4.17_DNBh": ("battery", 1e-7, GATE),
    "eq4.17_DlN": ("battery", 1e-7, GATE),
    "eq4.17_GlN": ("battery", 1e-7, GATE),
    "eq4.17_DLN_free_i": ("battery", 1e-7, INFO),
    "eq4.17_DLN_summed": ("battery", 1e-7, INFO),
}

# tags exercised by an identity besides its own: definitions and intermediate
# relations it evaluates on the way to the residual it reports
COVERS = {
    "change.starL": ("(1.3)",),
    "connection.l_cov": ("(2.1)",),
    "eq1.2": ("(2.2)",),
    "eq2.5": ("(2.3)", "(2.4)"),
    "eq2.9": ("(2.7)", "(2.8)"),
    "eq2.12": ("(2.10)", "(2.11)"),
    "surface.kind": ("Lemma 2.1", "Lemma 2.2", "Lemma 2.3"),
    "eq3.8": ("(3.11)", "(3.12)", "(3.13)", "(3.14)", "(3.15)", "(3.16)"),
    "eq4.3": ("(4.1)", "(4.2)", "(4.4)"),
    "eq4.9": ("(4.7)",),
    "lemma3.1": ("(4.11)", "(4.12)"),
    "starred.tangency": ("(4.13)",),
    "eq4.25_kappa": ("(4.25)", "(4.26)"),
    "thm4.1_counter": ("Theorem 4.1",),
    "thm4.3_kind": ("Theorem 5.1", "Corollary 5.1"),
    "eq5.3": ("(4.25)", "(4.26)", "Theorem 5.1", "Corollary 5.1"),
}

GUARDS = (SingularChangeError, DegeneracyError, DomainError)
STRONG_TOL = 1e-9


# -- sampling ----------------------------------------------------------------------

def _directions(block):
    z = norm.ppf(np.clip(block, 1e-12, 1.0 - 1e-12))
    nz = np.linalg.norm(z, axis=1, keepdims=True)
    nz[nz == 0.0] = 1.0
    return z / nz


def ambient_points(space, count, box, seed):
    """Halton points: x uniform in ``box`` on every axis, y on the unit sphere."""
    n = space.n
    sampler = qmc.Halton(d=2 * n, scramble=True, seed=seed)
    lo, hi = box
    pts, rejected = [], 0
    while len(pts) < count and rejected < 50 * count:
        batch = sampler.random(max(16, count))
        xs = lo + (hi - lo) * batch[:, :n]
        ys = _directions(batch[:, n:])
        for x, y in zip(xs, ys):
            if len(pts) == count:
                break
            if space.contains(x, y):
                pts.append((x, y))
            else:
                rejected += 1
    return pts, rejected


def surface_points(space, hs, count, seed):
    """Halton (u, v) pairs with v rescaled so that L(x(u), B v) = 1."""
    m = hs.dim
    sampler = qmc.Halton(d=2 * m, scramble=True, seed=seed + 7919)
    pts, rejected = [], 0
    while len(pts) < count and rejected < 50 * count:
        batch = sampler.random(max(16, count))
        us = hs.u_low + (hs.u_high - hs.u_low) * batch[:, :m]
        vs = _directions(batch[:, m:]) if m > 1 else np.where(batch[:, m:] < 0.5, -1.0, 1.0)
        for u, v in zip(us, vs):
            if len(pts) == count:
                break
            try:
                x = hs.embed(u)
                y = hs.B(u) @ v
                if not space.contains(x, y):
                    rejected += 1
                    continue
                Lv = float(space.L(list(x), list(y)))
            except GUARDS:
                rejected += 1
                continue
            pts.append((u, v / Lv))
    return pts, rejected


# -- tallies --------------------------------------------------------------------------

@dataclass
class Tally:
    id: str
    battery: str
    tolerance: float
    mode: str
    worst: float = 0.0
    samples: int = 0
    skipped: int = 0
    reasons: Counter = field(default_factory=Counter)
    detail: Optional[dict] = None
    forced: Optional[float] = None   # count-mode residual computed at the end

    def add(self, value, reason=""):
        if value is None:
            # drop the per-sample numbers so reasons aggregate
            self.reasons[(reason or "not applicable").split(" (")[0]] += 1
            return
        v = float(value)
        self.samples += 1
        if math.isnan(v):
            self.worst = math.inf
        else:
            self.worst = max(self.worst, abs(v))

    def record(self):
        if self.mode == COUNT and self.forced is not None:
            residual = self.forced
            evaluated = True
        else:
            residual = self.worst
            evaluated = self.samples > 0
        if not evaluated:
            status = "not-applicable"
            reason = (self.reasons.most_common(1)[0][0] if self.reasons
                      else ("all samples rejected by guards" if self.skipped else "no samples"))
        elif self.mode == INFO:
            status, reason = "info", ""
        else:
            status = "pass" if residual <= self.tolerance else "fail"
            reason = ""
        rec = {
            "record": "identity", "id": self.id, "tag": _tag(self.id), "covers": covered_tags(self.id),
            "battery": self.battery,
            "samples": self.samples, "skipped": self.skipped,
            "not_applicable": sum(self.reasons.values()),
            "max_residual": residual if evaluated else None,
            "tolerance": self.tolerance, "status": status,
        }
        if reason:
            rec["reason"] = reason
        if self.detail is not None:
            rec["detail"] = self.detail
        return rec


def _tag(key):
    """Equation tag carried by an identity id, e.g. "eq4.17_GNB" -> "(4.17)"."""
    m = re.match(r"(eq|thm|lemma)(\d+\.\d+)", key)
    if m is None:
        return None
    prefix = {"eq": "", "thm": "Theorem ", "lemma": "Lemma "}[m.group(1)]
    return f"{prefix}({m.group(2)})" if not prefix else f"{prefix}{m.group(2)}"


def covered_tags(key):
    """Every tag exercised by identity ``key``: its own and those in COVERS."""
    own = _tag(key)
    return ([own] if own else []) + [t for t in COVERS.get(key, ()) if t != own]


class Collector:
    def __init__(self, scenario, tol_scale=1.0):
        self.tallies = {}
        for key, (battery, tol, mode) in IDENTITIES.items():
            if battery in scenario.batteries:
                tol = scenario.tolerances.get(key, tol) * tol_scale
                self.tallies[key] = Tally(key, battery, tol, mode)

    def add(self, key, value, reason=""):
        t = self.tallies.get(key)
        if t is not None:
            t.add(value, reason)

    def skip(self, battery):
        for t in self.tallies.values():
            if t.battery == battery:
                t.skipped += 1

    def records(self):
        return [self.tallies[k].record() for k in sorted(self.tallies)]


# -- batteries ------------------------------------------------------------------------

def _engine(col, space, x, y):
    tab = jet_eval(space.L, x, y, JetRequest(1, 4), domain=space.domain)
    gaps = fd_agreement(space.L, x, y, tab, (1, 2, 3, 4), space.domain)
    col.add("engine.jet_fd_low", max(gaps[1], gaps[2], gaps[3]))
    col.add("engine.jet_fd_order4", gaps[4])
    col.add("engine.euler", max(check_euler(space, x, y).values()))


def _hvector(col, space, hv, x, y, declared_strong):
    rep = check_hvector(space, hv, x, y)
    col.add("eq1.2", rep.weak_residual)
    strong = max(rep.strong_residual_ii, rep.vconst_residual)
    if declared_strong:
        col.add("eq1.1", strong)
    else:
        col.add("eq1.1", None, "h-vector declared weak")
    col.add("hvector.indicatory", rep.indicatory_residual)
    col.add("hvector.rho_direction", rep.rho_direction_residual)
    bd = b_derivative_tensors(space, hv, x, y)
    if float(np.abs(bd.F).max()) <= STRONG_TOL:
        col.add("lemma3.1", float(np.abs(bd.rho_k).max()))
    else:
        col.add("lemma3.1", None, "b is not a gradient")


def _connection(col, space, hv, x, y, star):
    conn = spray_and_connection(space, x, y)
    col.add("connection.N_F0", float(np.abs(conn.N - conn.F_0).max()) / max(1.0, float(np.abs(conn.N).max())))
    col.add("connection.spray", float(np.abs(2 * conn.G - conn.F_0 @ y).max()) / max(1.0, float(np.abs(conn.G).max())))
    lcov = h_cov_deriv(space, l_tables(space, x, y), x, y, conn)
    col.add("connection.l_cov", float(np.abs(lcov).max()))
    for key, val in verify_connection_change(space, hv, x, y, star=star).items():
        col.add(key, val)


def _torsion(col, space, hv, x, y, landsberg):
    conn = spray_and_connection(space, x, y, with_torsion=True)
    res = p_tensor(space, x, y, hv, conn=conn)
    Pmax = float(np.abs(res.P).max())
    if landsberg:
        col.add("eq5.1_P", Pmax)
    else:
        col.add("eq5.1_P", None, "metric not declared Landsberg")
    bd = b_derivative_tensors(space, hv, x, y, conn)
    ms = conn.ms
    lhs = np.einsum("r,rij->ij", bd.b_cov_h @ ms.y, ms.C_up)
    if _hvector_strong_at(space, hv, x, y):
        lhs52 = (np.einsum("rk,rij->ijk", bd.b_cov_h, ms.C_up)
                 + np.einsum("r,rijk->ijk", bd.b, res.C_cov))
        col.add("eq5.2", float(np.abs(lhs52).max()))
    else:
        col.add("eq5.2", None, "strong h-vector unavailable")
    p_finsler = res.landsberg or (res.fit_residual is not None and res.fit_residual <= 1e-8)
    if p_finsler:
        lam = 0.0 if res.lambda_P is None else res.lambda_P
        kappa = -lam * float(hv.rho(list(x))) / ms.L
        col.add("eq5.3", float(np.abs(lhs - kappa * ms.h).max()))
    else:
        col.add("eq5.3", None, "P is not proportional to C at the point")
    hh = float(np.sum(ms.h * ms.h))
    kfit = float(np.sum(lhs * ms.h) / hh) if hh > 0 else 0.0
    col.add("eq4.25_kappa", float(np.abs(lhs - kfit * ms.h).max()))


def _surface(col, space, hs, u, v):
    ss = surface_sample(space, hs, u, v)
    g = check_gauss_relations(space, hs, u, v, ss)
    col.add("eq2.5", max(g["eq2.5_BB"], g["eq2.5_BN"], g["eq2.5_NN"]))
    col.add("eq2.6", g["eq2.6"])
    col.add("eq2.9", max(g["eq2.9_0a"], g["eq2.9_a0"]))
    col.add("eq2.12", g["eq2.12_M"])
    col.add("eq4.5", g["eq4.5"])
    return ss


def _first_kind(ss, tol):
    return float(np.abs(ss.H_a).max()) <= tol


def _starred(col, space, hv, hs, u, v, strong, expect_tangent, state, class_tol):
    if not strong:
        for key in ("eq4.3", "eq4.6", "eq4.8", "eq4.9", "eq4.10", "eq4.15", "eq4.16", "eq4.18",
                    "eq4.19", "eq4.20", "eq4.20_mu", "eq4.21", "eq4.22", "eq4.23", "eq4.24", "eq4.27", "eq4.28", "eq4.29", "starred.tangency"):
            col.add(key, None, "strong h-vector unavailable")
        return None
    st = starred_surface_sample(space, hv, hs, u, v, tol=class_tol)
    for key, val in st.residuals.items():
        col.add(key, val, st.reasons.get(key, ""))
    star_sp = st.star
    gs = check_gauss_relations(None, hs, u, v, star_sp) if star_sp is not None else None
    col.add("eq4.3", max(gs["eq2.5_BB"], gs["eq2.5_BN"], gs["eq2.5_NN"], gs["eq2.6"]))
    if expect_tangent is None:
        col.add("starred.tangency", None, "tangency not declared")
    elif expect_tangent:
        col.add("starred.tangency", abs(st.tangency))
    else:
        col.add("starred.tangency", None, "surface declared non-tangential")
    if abs(st.tangency) > COUNTER_TOL:
        cross = float(np.abs(st.base.B.T @ star_sp.conn.ms.g @ st.base.N_up).max())
        state["counter_total"] += 1
        state["counter_hits"] += int(cross > COUNTER_TOL)
    if st.tangential:
        state["kind_total"] += 1
        fb, fs = _first_kind(st.base, class_tol), _first_kind(star_sp, class_tol)
        state["kind_mismatch"] += int(fb != fs)
        if st.residuals.get("eq4.28") is not None:
            state["third_total"] += 1
            base_third = st.base.kind == "third"
            state["third_mismatch"] += int(base_third and star_sp.kind != "third")
    return st


def _battery(col, space, hv, hs, u, v, strong):
    ids = [k for k, (b, _, _) in IDENTITIES.items() if b == "battery"]
    if not strong:
        for key in ids:
            col.add(key, None, "strong h-vector unavailable")
        return
    br = check_identity_battery(space, hv, hs, u, v)
    if not br.applicable:
        for key in ids:
            col.add(key, None, br.reason)
        return
    for key, val in br.residuals.items():
        col.add("eq4.14" if key == "eq4.14_D00N" else key, val)
    for key, val in br.informational.items():
        col.add(key, val)


def _hvector_strong_at(space, hv, x, y):
    rep = check_hvector(space, hv, x, y)
    return rep.strong_ok(STRONG_TOL)


# -- driver ------------------------------------------------------------------------------

@dataclass
class RunResult:
    records: list
    header: dict
    runtime: float

    @property
    def failed(self):
        return [r for r in self.records if r["status"] == "fail"]

    def lines(self):
        out = [json.dumps(self.header, sort_keys=True)]
        out += [json.dumps(r, sort_keys=True) for r in self.records]
        out.append(json.dumps({"record": "runtime", "seconds": round(self.runtime, 3)}, sort_keys=True))
        return out

    def body(self):
        """Every line except the trailing runtime record."""
        return "\n".join(self.lines()[:-1]) + "\n"


def run_scenario(sc, tol_scale=1.0, progress=None):
    """Evaluate every selected battery of ``sc`` and collect identity records."""
    from .expchange import star_space

    t0 = time.perf_counter()
    space = build_space(sc)
    hv = build_hvector(sc)
    hs = build_surface(sc)
    col = Collector(sc, tol_scale)
    star = star_space(space, hv)
    landsberg = bool(sc.metric.get("landsberg", False))
    declared_strong = sc.hvector.get("declared_level", "weak") == "strong" or hv.is_zero
    class_tol = sc.tolerances.get("classify", CLASSIFY_TOL)
    n_amb = sc.sampling.ambient_points
    pts, rejected = ambient_points(space, n_amb, sc.sampling.box, sc.seed)
    counts = {"ambient": len(pts), "ambient_rejected": rejected}

    ambient = [b for b in ("engine", "metric", "hvector", "change", "connection", "torsion")
               if b in sc.batteries]
    for k, (x, y) in enumerate(pts):
        for battery in ambient:
            if battery == "engine" and k >= sc.sampling.smoke_points:
                continue
            try:
                if battery == "engine":
                    _engine(col, space, x, y)
                elif battery == "metric":
                    col.add("eq3.5", check_Lijk_identity(space, x, y))
                elif battery == "hvector":
                    _hvector(col, space, hv, x, y, declared_strong)
                elif battery == "change":
                    res = verify_change(space, hv, x, y, star=star)
                    col.add("change.starL", res["starL"])
                    for key in ("eq3.1", "eq3.2", "eq3.3", "eq3.4", "eq3.6", "eq3.7"):
                        col.add(key, res[key])
                    col.add("eq3.7_ad", res["eq3.7_vs_ad"])
                elif battery == "connection":
                    _connection(col, space, hv, x, y, star)
                elif battery == "torsion":
                    _torsion(col, space, hv, x, y, landsberg)
            except GUARDS:
                col.skip(battery)
        if progress:
            progress("ambient", k + 1, len(pts))

    if hs is not None:
        spts, srej = surface_points(space, hs, sc.sampling.surface_points, sc.seed)
        counts.update(surface=len(spts), surface_rejected=srej)
        expect_tangent = sc.hypersurface.get("expect_tangent")
        state = Counter()
        base_samples = []
        for k, (u, v) in enumerate(spts):
            strong = True
            if "starred" in sc.batteries or "battery" in sc.batteries:
                try:
                    x = hs.embed(u)
                    strong = hv.is_zero or _hvector_strong_at(space, hv, x, hs.B(u) @ v)
                except GUARDS:
                    strong = False
            if "surface" in sc.batteries:
                try:
                    base_samples.append(_surface(col, space, hs, u, v))
                except GUARDS:
                    col.skip("surface")
            if "starred" in sc.batteries:
                try:
                    _starred(col, space, hv, hs, u, v, strong, expect_tangent, state, class_tol)
                except GUARDS:
                    col.skip("starred")
            if "battery" in sc.batteries:
                try:
                    _battery(col, space, hv, hs, u, v, strong)
                except GUARDS:
                    col.skip("battery")
            if progress:
                progress("surface", k + 1, len(spts))
        _finish_counts(col, sc, base_samples, state, class_tol)

    runtime = time.perf_counter() - t0
    header = {
        "record": "header", "engine": f"hexfinsler {__version__}", "backend": backend(),
        "scenario": sc.name, "seed": sc.seed, "tol_scale": tol_scale, "counts": counts,
        "config": _echo(sc.raw),
    }
    return RunResult(col.records(), header, runtime)


def _finish_counts(col, sc, base_samples, state, class_tol):
    t = col.tallies.get("surface.kind")
    exp_kind = expected_kind(sc)
    if t is not None:
        if base_samples and exp_kind is not None:
            cl = classify(base_samples, class_tol)
            t.forced = 0.0 if cl.kind == exp_kind else 1.0
            t.samples = cl.samples
            t.detail = {"kind": cl.kind, "expected": exp_kind, "max_H_a": cl.max_H_a,
                        "max_H_ab": cl.max_H_ab, "max_M_ab": cl.max_M_ab}
        else:
            t.reasons["no expected kind declared" if base_samples else "no surface samples"] += 1
    t = col.tallies.get("thm4.1_counter")
    if t is not None:
        total = state["counter_total"]
        if total:
            t.forced = 1.0 - state["counter_hits"] / total
            t.samples = total
            t.detail = {"non_tangent_samples": total, "violations": state["counter_hits"]}
        else:
            t.reasons["no sample with |b_j N^j| > 1e-3"] += 1
    for key, tot, bad in (("thm4.2_kind", "kind_total", "kind_mismatch"),
                          ("thm4.3_kind", "third_total", "third_mismatch")):
        t = col.tallies.get(key)
        if t is None:
            continue
        if state[tot]:
            t.forced = float(state[bad])
            t.samples = state[tot]
            t.detail = {"mismatches": state[bad]}
        else:
            t.reasons["no sample meets the hypotheses"] += 1


def _echo(raw):
    """JSON-safe copy of the parsed scenario for the report header."""
    return json.loads(json.dumps(raw, sort_keys=True, default=str))


def write_report(result, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(result.lines()) + "\n")


def format_table(result):
    rows = [f"{'identity':<22} {'status':<15} {'max residual':>13} {'tolerance':>10} {'n':>5}"]
    for r in result.records:
        res = r["max_residual"]
        res_s = "-" if res is None else f"{res:.3e}"
        rows.append(f"{r['id']:<22} {r['status']:<15} {res_s:>13} {r['tolerance']:>10.1e} {r['samples']:>5}"
                    + (f"  ({r['reason']})" if r.get("reason") else ""))
    nfail = len(result.failed)
    rows.append(f"{len(result.records)} identities, {nfail} failed, {result.runtime:.2f}s")
    return "\n".join(rows)


__all__ = ["IDENTITIES", "COVERS", "covered_tags", "RunResult", "ambient_points", "surface_points", "run_scenario",
           "write_report", "format_table", "TANGENT_TOL"]
