import json

import numpy as np

from hexfinsler.finsler import make_space, zoo
from hexfinsler.hypersurface import sphere
from hexfinsler.runner import IDENTITIES, covered_tags, ambient_points, run_scenario, surface_points
from hexfinsler.scenario import load_scenario


def test_ambient_points_are_seeded_and_unit_directions():
    space = zoo("randers", 3)
    a, ra = ambient_points(space, 20, (-0.5, 0.5), 4)
    b, _ = ambient_points(space, 20, (-0.5, 0.5), 4)
    c, _ = ambient_points(space, 20, (-0.5, 0.5), 5)
    assert len(a) == 20 and ra == 0
    assert all(np.array_equal(p[0], q[0]) and np.array_equal(p[1], q[1]) for p, q in zip(a, b))
    assert not np.array_equal(a[0][0], c[0][0])
    for x, y in a:
        assert np.all(np.abs(x) <= 0.5)
        assert abs(np.linalg.norm(y) - 1.0) < 1e-15


def test_surface_directions_have_unit_length():
    space = zoo("quartic", 3)
    hs = sphere(3)
    pts, _ = surface_points(space, hs, 10, 1)
    for u, v in pts:
        assert abs(space.L(list(hs.embed(u)), list(hs.B(u) @ v)) - 1.0) < 1e-12


def test_domain_rejections_are_counted():
    space = make_space("custom", 2, L=lambda x, y: (y[0] ** 2 + y[1] ** 2) ** 0.5,
                       domain=lambda x, y: x[0] > 0.0)
    pts, rejected = ambient_points(space, 40, (-1.0, 1.0), 3)
    assert len(pts) == 40
    assert rejected > 10
    assert all(x[0] > 0 for x, _ in pts)


def test_every_selected_identity_appears_once(scenario_dir):
    sc = load_scenario(scenario_dir / "randers-weak.toml").with_overrides(samples=3)
    res = run_scenario(sc)
    ids = [r["id"] for r in res.records]
    assert ids == sorted(ids)
    assert set(ids) == {k for k, (b, _, _) in IDENTITIES.items() if b in sc.batteries}
    for r in res.records:
        if r["status"] == "not-applicable":
            assert r["reason"]
    by_id = {r["id"]: r for r in res.records}
    assert by_id["eq4.9"]["reason"] == "strong h-vector unavailable"
    assert by_id["eq3.8"]["tag"] == "(3.8)"
    assert by_id["thm4.2_kind"]["tag"] == "Theorem 4.2"


def test_report_lines_are_json(scenario_dir):
    sc = load_scenario(scenario_dir / "identity-change.toml").with_overrides(samples=2)
    res = run_scenario(sc)
    lines = [json.loads(s) for s in res.lines()]
    assert lines[0]["record"] == "header" and lines[0]["seed"] == 11
    assert lines[-1]["record"] == "runtime"
    assert all(r["record"] == "identity" for r in lines[1:-1])


def test_tolerance_scale_applies_to_every_identity(scenario_dir):
    sc = load_scenario(scenario_dir / "minkowski-randers.toml").with_overrides(samples=2)
    res = run_scenario(sc, tol_scale=1e-30)
    assert res.failed
    for r in res.records:
        assert r["tolerance"] == IDENTITIES[r["id"]][1] * 1e-30


EQUATION_COUNTS = {1: 3, 2: 12, 3: 16, 4: 29, 5: 3}
NAMED = (["Lemma 2.1", "Lemma 2.2", "Lemma 2.3", "Lemma 3.1", "Theorem 4.1", "Theorem 4.2",
          "Theorem 4.3", "Theorem 5.1", "Corollary 5.1"])


def test_shipped_scenarios_cover_every_tag(scenario_dir):
    wanted = {f"({s}.{k})" for s, count in EQUATION_COUNTS.items() for k in range(1, count + 1)}
    wanted |= set(NAMED)
    seen = set()
    for path in sorted(scenario_dir.glob("*.toml")):
        sc = load_scenario(path).with_overrides(samples=12)
        for rec in run_scenario(sc).records:
            if rec["status"] in ("pass", "info") and rec["samples"] > 0:
                seen.update(rec["covers"])
    assert sorted(wanted - seen) == []


def test_covers_starts_with_own_tag():
    assert covered_tags("eq3.8")[0] == "(3.8)"
    assert "(3.14)" in covered_tags("eq3.8")
    assert covered_tags("engine.euler") == []
    assert covered_tags("thm4.2_kind") == ["Theorem 4.2"]
