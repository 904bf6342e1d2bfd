import json
import subprocess
import sys

import pytest

from hexfinsler.cli import EXIT_CONFIG, EXIT_FAIL, EXIT_OK, main


def body(path):
    lines = path.read_text().splitlines()
    assert json.loads(lines[-1])["record"] == "runtime"
    return "\n".join(lines[:-1])


def test_verify_passes_and_writes_report(scenario_dir, tmp_path, capsys):
    rep = tmp_path / "r.jsonl"
    code = main(["verify", str(scenario_dir / "riemannian-gradient-plane.toml"),
                 "--samples", "4", "--report", str(rep)])
    assert code == EXIT_OK
    assert "0 failed" in capsys.readouterr().out
    records = [json.loads(s) for s in rep.read_text().splitlines()]
    assert records[0]["counts"]["ambient"] == 4


def test_verify_reports_failures(scenario_dir):
    code = main(["verify", str(scenario_dir / "minkowski-randers.toml"), "--samples", "2",
                 "--tol-scale", "1e-30", "--quiet"])
    assert code == EXIT_FAIL


@pytest.mark.parametrize("argv", [
    ["verify", "does-not-exist.toml"],
    ["verify"],
    ["frobnicate"],
    ["verify", "SCEN", "--tol-scale", "0"],
    ["verify", "SCEN", "--samples", "0"],
    ["sample", "SCEN", "--x", "0.1"],
])
def test_configuration_errors_exit_with_two(argv, scenario_dir, capsys):
    argv = [str(scenario_dir / "identity-change.toml") if a == "SCEN" else a for a in argv]
    assert main(argv) == EXIT_CONFIG


def test_malformed_scenario_exits_with_two(tmp_path):
    f = tmp_path / "bad.toml"
    f.write_text('dimension = 3\n[metric]\nkind = "randers"\nb = [3.0, 0.0, 0.0]\n')
    assert main(["verify", str(f)]) == EXIT_CONFIG


def test_same_seed_gives_identical_report_bodies(scenario_dir, tmp_path):
    scen = str(scenario_dir / "sphere-angular.toml")
    a, b, c = tmp_path / "a.jsonl", tmp_path / "b.jsonl", tmp_path / "c.jsonl"
    for path, seed in ((a, "5"), (b, "5"), (c, "6")):
        assert main(["verify", scen, "--samples", "6", "--seed", seed, "--report", str(path),
                     "--quiet"]) == EXIT_OK
    assert body(a) == body(b)
    assert body(a) != body(c)


def test_sample_prints_both_provenances(scenario_dir, capsys):
    assert main(["sample", str(scenario_dir / "sphere-angular.toml"), "--u", "1.2", "0.7",
                 "--v", "0.3", "0.5"]) == EXIT_OK
    out = capsys.readouterr().out
    for label in ("*g_ij", "D^i_jk", "*N^i", "H_alpha beta", "M_alpha beta", "closed form:",
                  "differentiated:"):
        assert label in out


def test_sample_at_an_ambient_point(scenario_dir, capsys):
    assert main(["sample", str(scenario_dir / "minkowski-randers.toml"), "--x", "0", "0", "0",
                 "--y", "1", "0", "0"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "x = [0.0, 0.0, 0.0]" in out
    assert "surface point" not in out


def test_module_entry_point(scenario_dir):
    proc = subprocess.run([sys.executable, "-m", "hexfinsler", "verify",
                           str(scenario_dir / "identity-change.toml"), "--samples", "2", "--quiet"],
                          capture_output=True, text=True)
    assert proc.returncode == EXIT_OK, proc.stderr
