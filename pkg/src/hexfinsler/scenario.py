"""Scenario files: a TOML description of a base metric, an h-vector, an
optional hypersurface, sampling controls and tolerance overrides.

Schema (every table except ``[metric]`` is optional)::

    name = "riemannian-gradient-plane"
    dimension = 3
    seed = 1234

    [metric]
    kind = "euclidean"          # euclidean | riemannian | randers | quartic
    # zoo = "randers_x"         # or pick a named zoo member instead of kind
    # a = [[...]] or "warped"   # riemannian / randers quadratic form
    # b = [...]                 # randers one-form
    # landsberg = true          # expectation gating the torsion checks

    [hvector]
    kind = "position"           # zero | position | support_scaled | mixed
    c = [0.2, 0.0, 0.0]         # constant covector, or a potential table:
    # c = { potential = "quadratic", p = [...], Q = [[...]] }
    # c = { potential = "angular", axis = 0, weight = 0.3 }
    # f = 0.1  or  f = { const = 0.1, grad = [...] }
    declared_level = "strong"   # annotation only; levels are re-checked

    [hypersurface]
    kind = "hyperplane"         # hyperplane | sphere | quadric_graph
    # point, basis / radius, center / Q, p, c
    # expected_kind = "third"
    # expect_tangent = true     # gate |b_j N^j| <= tol; false turns on the
    #                           # counterexample check instead

    [sampling]
    ambient_points = 100
    surface_points = 100
    smoke_points = 50
    box = [-0.5, 0.5]           # x box, same interval on every axis

    [tolerances]
    "eq3.8" = 1e-6              # per-identity overrides

    [identities]
    select = ["engine", "metric", "hvector", "change", "connection",
              "torsion", "surface", "starred", "battery"]
"""

from __future__ import annotations

import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .errors import ConfigError, ConstructionError, UsageError
from .finsler import ZOO_NAMES, make_space, warped_metric, zoo
from .hvector import (
    HVector,
    affine_scalar,
    angular_gradient,
    make_hvector,
    quadratic_gradient,
)
from .hypersurface import Hypersurface, make_hypersurface

BATTERIES = ("engine", "metric", "hvector", "change", "connection", "torsion",
             "surface", "starred", "battery")
SURFACE_BATTERIES = ("surface", "starred", "battery")
_TOP_KEYS = {"name", "dimension", "seed", "metric", "hvector", "hypersurface", "sampling",
             "tolerances", "identities", "description"}


@dataclass(frozen=True)
class Sampling:
    ambient_points: int = 100
    surface_points: int = 100
    smoke_points: int = 50
    box: tuple = (-0.5, 0.5)


@dataclass(frozen=True)
class Scenario:
    name: str
    dimension: int
    seed: int
    metric: dict
    hvector: dict
    hypersurface: Optional[dict]
    sampling: Sampling
    tolerances: dict
    batteries: tuple
    raw: dict = field(default_factory=dict, compare=False)

    def with_overrides(self, samples=None, seed=None):
        s = self.sampling
        if samples is not None:
            if samples < 1:
                raise ConfigError("--samples must be >= 1")
            s = Sampling(samples, samples, min(s.smoke_points, samples), s.box)
        return Scenario(self.name, self.dimension, self.seed if seed is None else int(seed),
                        self.metric, self.hvector, self.hypersurface, s, self.tolerances,
                        self.batteries, self.raw)


def _require(cond, msg):
    if not cond:
        raise ConfigError(msg)


def _matrix(val, n, what):
    try:
        arr = np.asarray(val, float)
    except (TypeError, ValueError):
        raise ConfigError(f"{what} must be a numeric matrix") from None
    _require(arr.shape == (n, n), f"{what} must have shape ({n}, {n}), got {arr.shape}")
    return arr


def _vector(val, n, what):
    try:
        arr = np.asarray(val, float)
    except (TypeError, ValueError):
        raise ConfigError(f"{what} must be a numeric vector") from None
    _require(arr.shape == (n,), f"{what} must have length {n}, got shape {arr.shape}")
    return arr


def parse_scenario(data, source="<memory>"):
    """Validate a parsed TOML document into a Scenario."""
    _require(isinstance(data, dict), "scenario must be a table")
    unknown = set(data) - _TOP_KEYS
    _require(not unknown, f"unknown top-level keys: {sorted(unknown)}")
    n = data.get("dimension")
    _require(isinstance(n, int) and not isinstance(n, bool) and 2 <= n <= 5,
             "dimension must be an integer in 2..5")
    seed = data.get("seed", 0)
    _require(isinstance(seed, int) and not isinstance(seed, bool) and seed >= 0,
             "seed must be a non-negative integer")
    metric = data.get("metric")
    _require(isinstance(metric, dict), "[metric] table is required")
    hv = data.get("hvector", {"kind": "zero"})
    _require(isinstance(hv, dict), "[hvector] must be a table")
    hs = data.get("hypersurface")
    _require(hs is None or isinstance(hs, dict), "[hypersurface] must be a table")

    samp = data.get("sampling", {})
    _require(isinstance(samp, dict), "[sampling] must be a table")
    counts = {}
    for key, default in (("ambient_points", 100), ("surface_points", 100), ("smoke_points", 50)):
        val = samp.get(key, default)
        _require(isinstance(val, int) and not isinstance(val, bool) and val >= 1,
                 f"sampling.{key} must be an integer >= 1")
        counts[key] = val
    box = samp.get("box", [-0.5, 0.5])
    _require(isinstance(box, list) and len(box) == 2 and all(isinstance(b, (int, float)) for b in box)
             and box[0] < box[1], "sampling.box must be [low, high] with low < high")
    extra = set(samp) - {"ambient_points", "surface_points", "smoke_points", "box"}
    _require(not extra, f"unknown sampling keys: {sorted(extra)}")

    tols = data.get("tolerances", {})
    _require(isinstance(tols, dict), "[tolerances] must be a table")
    for key, val in tols.items():
        _require(isinstance(val, (int, float)) and not isinstance(val, bool) and val > 0,
                 f"tolerance {key!r} must be a positive number")

    ident = data.get("identities", {})
    _require(isinstance(ident, dict), "[identities] must be a table")
    select = ident.get("select", list(BATTERIES))
    _require(isinstance(select, list) and select, "identities.select must be a non-empty list")
    bad = [s for s in select if s not in BATTERIES]
    _require(not bad, f"unknown batteries {bad}; choose from {list(BATTERIES)}")
    if hs is None:
        select = [s for s in select if s not in SURFACE_BATTERIES]

    sc = Scenario(
        name=str(data.get("name", Path(source).stem)), dimension=n, seed=seed, metric=dict(metric),
        hvector=dict(hv), hypersurface=None if hs is None else dict(hs),
        sampling=Sampling(counts["ambient_points"], counts["surface_points"],
                          counts["smoke_points"], (float(box[0]), float(box[1]))),
        tolerances={k: float(v) for k, v in tols.items()},
        batteries=tuple(b for b in BATTERIES if b in select), raw=data,
    )
    # build once so parameter errors surface as configuration errors
    build_space(sc)
    build_hvector(sc)
    if sc.hypersurface is not None:
        build_surface(sc)
        expected_kind(sc)
    return sc


def load_scenario(path):
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read scenario {path}: {exc}") from None
    try:
        data = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{path}: {exc}") from None
    return parse_scenario(data, str(path))


# -- builders --------------------------------------------------------------------------

def build_space(sc):
    m = dict(sc.metric)
    n = sc.dimension
    m.pop("landsberg", None)
    try:
        if "zoo" in m:
            name = m.pop("zoo")
            _require(name in ZOO_NAMES, f"metric.zoo must be one of {list(ZOO_NAMES)}")
            _require(not m, f"metric.zoo takes no other keys, got {sorted(m)}")
            return zoo(name, n)
        kind = m.pop("kind", None)
        if kind == "euclidean":
            return make_space("euclidean", n)
        if kind == "quartic":
            return zoo("quartic", n)
        if kind in ("riemannian", "randers"):
            a = m.get("a", "warped" if kind == "riemannian" else None)
            if isinstance(a, str):
                _require(a == "warped", "metric.a must be a matrix or \"warped\"")
                a = warped_metric(n)
            elif a is not None:
                a = _matrix(a, n, "metric.a")
            if kind == "riemannian":
                return make_space("riemannian", n, a=a)
            _require("b" in m, "randers metric needs b")
            return make_space("randers", n, a=a, b=_vector(m["b"], n, "metric.b"))
    except (ConstructionError, UsageError) as exc:
        raise ConfigError(f"metric: {exc}") from None
    raise ConfigError(f"metric.kind must be one of euclidean, riemannian, randers, quartic (got {kind!r})")


def _covector_field(spec, n):
    if isinstance(spec, list):
        return _vector(spec, n, "hvector.c").tolist()
    _require(isinstance(spec, dict), "hvector.c must be a list or a potential table")
    pot = spec.get("potential")
    if pot == "quadratic":
        p = _vector(spec.get("p", [0.0] * n), n, "hvector.c.p")
        Q = _matrix(spec.get("Q", np.zeros((n, n)).tolist()), n, "hvector.c.Q")
        return quadratic_gradient(p, Q)
    if pot == "angular":
        axis = spec.get("axis", 0)
        _require(isinstance(axis, int) and 0 <= axis < n, f"hvector.c.axis must be in 0..{n - 1}")
        return angular_gradient(axis, float(spec.get("weight", 1.0)))
    raise ConfigError("hvector.c.potential must be \"quadratic\" or \"angular\"")


def _scalar_field(spec, n):
    if isinstance(spec, (int, float)) and not isinstance(spec, bool):
        return float(spec)
    _require(isinstance(spec, dict), "hvector.f must be a number or {const, grad}")
    return affine_scalar(float(spec.get("const", 0.0)), _vector(spec.get("grad", [0.0] * n), n,
                                                                "hvector.f.grad"))


def build_hvector(sc) -> HVector:
    h = dict(sc.hvector)
    kind = h.pop("kind", "zero")
    params = {}
    if "declared_level" in h:
        params["declared_level"] = h.pop("declared_level")
    if "c" in h:
        params["c"] = _covector_field(h.pop("c"), sc.dimension)
    if "f" in h:
        params["f"] = _scalar_field(h.pop("f"), sc.dimension)
    _require(not h, f"unknown hvector keys: {sorted(h)}")
    try:
        return make_hvector(kind, **params)
    except UsageError as exc:
        raise ConfigError(f"hvector: {exc}") from None


def build_surface(sc) -> Optional[Hypersurface]:
    if sc.hypersurface is None:
        return None
    h = dict(sc.hypersurface)
    h.pop("expected_kind", None)
    tangent = h.pop("expect_tangent", None)
    _require(tangent is None or isinstance(tangent, bool), "hypersurface.expect_tangent must be a boolean")
    kind = h.pop("kind", None)
    allowed = {"hyperplane": {"point", "basis"}, "sphere": {"radius", "center"},
               "quadric_graph": {"Q", "p", "c"}}
    _require(kind in allowed, f"hypersurface.kind must be one of {sorted(allowed)}")
    _require(set(h) <= allowed[kind], f"unknown {kind} keys: {sorted(set(h) - allowed[kind])}")
    try:
        return make_hypersurface(kind, sc.dimension, **h)
    except (UsageError, TypeError, ValueError) as exc:
        raise ConfigError(f"hypersurface: {exc}") from None


def expected_kind(sc):
    if sc.hypersurface is None:
        return None
    kind = sc.hypersurface.get("expected_kind")
    _require(kind in (None, "none", "first", "second", "third"),
             "hypersurface.expected_kind must be none, first, second or third")
    return kind
