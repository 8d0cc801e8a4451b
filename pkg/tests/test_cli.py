import csv
import json
import subprocess
import sys

import numpy as np
import pytest

from curvelab.cli import main, stem
from curvelab.curves import catalog_curve, resample_csv


def run(args, tmp_path, env=None):
    return main(list(args) + ["--out", str(tmp_path)], environ=env or {})


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def test_stem():
    assert stem("circular_helix(2,1)") == "circular_helix_2_1"
    assert stem("salkowski(0.5)") == "salkowski_0.5"
    assert stem("///") == "curve"


def test_analyze_helix(tmp_path):
    assert run(["analyze", "--builtin", "circular_helix(2,1)", "--format", "csv,json,svg"], tmp_path) == 0
    rows = read_csv(tmp_path / "circular_helix_2_1_frenet.csv")
    assert len(rows) == 256
    assert max(abs(float(r["kappa"]) - 0.4) for r in rows) < 1e-8
    prof = read_csv(tmp_path / "circular_helix_2_1_profiles.csv")
    assert set(prof[0]) == {"s", "kappa", "tau", "tau_kappa", "sigma", "mannheim"}
    assert abs(float(prof[5]["mannheim"]) - 2.0) < 1e-12
    svg = (tmp_path / "circular_helix_2_1_profiles.svg").read_text()
    assert svg.startswith("<svg") and 'viewBox="0 0 800 500"' in svg and "<polyline" in svg
    summary = json.loads((tmp_path / "circular_helix_2_1_analyze.json").read_text())
    assert summary["schema_version"] == 1


def test_exit_codes(tmp_path, capsys):
    assert run(["analyze", "--builtin", "line"], tmp_path) == 2
    assert "curvature vanishes" in capsys.readouterr().err
    assert run(["analyze", "--builtin", "circle(1)", "--samples", "8"], tmp_path) == 1
    assert "n_samples below minimum" in capsys.readouterr().err
    assert run(["analyze", "--curve", str(tmp_path / "missing.txt")], tmp_path) == 3
    assert run(["bogus"], tmp_path) == 1
    assert run(["analyze"], tmp_path) == 1
    assert run(["analyze", "--builtin", "circle(1)", "--tol", "-1"], tmp_path) == 1
    assert run(["analyze", "--builtin", "circle(1)", "--format", "pdf"], tmp_path) == 1
    assert run(["analyze", "--builtin", "circle(1)"], tmp_path, env={"CURVELAB_TOL": "abc"}) == 1
    bad = tmp_path / "bad.txt"
    bad.write_text("x = sin(\ny = t\nz = t\nt = 0:1\n")
    assert run(["analyze", "--curve", str(bad)], tmp_path) == 1
    assert "offset" in capsys.readouterr().err
    domain = tmp_path / "domain.txt"
    domain.write_text("x = log(t)\ny = t\nz = t^2\nt = -1:1\n")
    assert run(["analyze", "--curve", str(domain)], tmp_path) == 1
    blocked = tmp_path / "blocked"
    blocked.write_text("not a directory")
    assert main(["analyze", "--builtin", "circle(1)", "--out", str(blocked)], environ={}) == 3


@pytest.mark.parametrize("builtin, expected", [
    ("circular_helix(2,1)", {"general_helix": True, "slant_helix": True, "bertrand": True, "mannheim": True}),
    ("twisted_cubic", {"general_helix": False, "slant_helix": False, "bertrand": False, "mannheim": False}),
])
def test_classify(tmp_path, builtin, expected):
    assert run(["classify", "--builtin", builtin], tmp_path) == 0
    data = json.loads((tmp_path / f"{stem(builtin)}_classify.json").read_text())
    assert data["verdicts"] == expected


def test_classify_salkowski(tmp_path):
    assert run(["classify", "--builtin", "salkowski(0.5)"], tmp_path) == 0
    verdicts = json.loads((tmp_path / "salkowski_0.5_classify.json").read_text())["verdicts"]
    assert verdicts["general_helix"] is False and verdicts["slant_helix"] is True


def test_classify_points_and_env_tolerance(tmp_path):
    pts = tmp_path / "helix.csv"
    pts.write_text(resample_csv(catalog_curve("circular_helix", (2, 1)), 2000))
    assert run(["classify", "--points", str(pts)], tmp_path) == 0
    data = json.loads((tmp_path / "helix_classify.json").read_text())
    assert data["source"] == "sampled" and data["tol"] == 1e-2
    assert all(data["verdicts"].values())
    assert run(["classify", "--points", str(pts)], tmp_path, env={"CURVELAB_TOL": "1e-12"}) == 0
    data = json.loads((tmp_path / "helix_classify.json").read_text())
    assert data["tol"] == 1e-12 and not data["verdicts"]["general_helix"]


def test_indicatrix(tmp_path):
    assert run(["indicatrix", "--builtin", "circular_helix(1,1)", "--format", "csv,svg"], tmp_path) == 0
    rows = read_csv(tmp_path / "circular_helix_1_1_tangent_indicatrix.csv")
    norms = [float(r["x"]) ** 2 + float(r["y"]) ** 2 + float(r["z"]) ** 2 for r in rows]
    assert max(abs(n - 1) for n in norms) < 1e-9
    assert (tmp_path / "circular_helix_1_1_tangent_indicatrix.svg").exists()
    assert run(["indicatrix", "--builtin", "circle(1)", "--kind", "binormal"], tmp_path) == 2
    assert run(["indicatrix", "--builtin", "salkowski(0.5)", "--samples", "100"], tmp_path) == 0
    assert len(read_csv(tmp_path / "salkowski_0.5_tangent_indicatrix.csv")) == 100
    assert run(["indicatrix", "--builtin", "circle(1)", "--kind", "up"], tmp_path) == 1


def test_axis(tmp_path, capsys):
    assert run(["axis", "--builtin", "circular_helix(2,1)"], tmp_path) == 0
    data = json.loads((tmp_path / "circular_helix_2_1_axis.json").read_text())
    assert data["verdict"] and data["max_angle"] < 1e-6
    assert run(["axis", "--builtin", "twisted_cubic"], tmp_path) == 0
    assert not json.loads((tmp_path / "twisted_cubic_axis.json").read_text())["verdict"]
    capsys.readouterr()
    assert run(["axis", "--builtin", "circle(1)"], tmp_path) == 0
    assert "stationary locus" in capsys.readouterr().err
    assert "stationary locus" in json.loads((tmp_path / "circle_1_axis.json").read_text())["note"]


def test_partner(tmp_path):
    assert run(["partner", "--builtin", "circular_helix(2,1)", "--lambda", "2"], tmp_path) == 0
    rows = read_csv(tmp_path / "circular_helix_2_1_partner.csv")
    assert max(abs(float(r["tau_star_curvature"]) - 1) for r in rows) < 1e-6
    data = json.loads((tmp_path / "circular_helix_2_1_partner.json").read_text())
    assert data["anti_salkowski"]["equivalent"]
    assert run(["partner", "--builtin", "circle(1)", "--lambda", "1"], tmp_path) == 2
    assert run(["partner", "--builtin", "circular_helix(2,1)", "--lambda", "0"], tmp_path) == 1


def test_surface(tmp_path):
    args = ["surface", "--builtin-surface", "cylinder(1)", "--uv-text", "u=t; v=t; t=0:4*pi; label=helix"]
    assert run(args, tmp_path) == 0
    data = json.loads((tmp_path / "cylinder_1_helix_surface.json").read_text())
    assert data["geodesic"]["geodesic"] and data["geodesic"]["helix_test"]
    uv = tmp_path / "small.uv"
    uv.write_text("u = t\nv = pi/3\nt = 0:2*pi\nlabel = small\n")
    assert run(["surface", "--builtin-surface", "sphere(1)", "--uv", str(uv)], tmp_path) == 0
    data = json.loads((tmp_path / "sphere_1_small_surface.json").read_text())
    assert data["geodesic"]["geodesic"] is False
    surf = tmp_path / "helicoid.surf"
    surf.write_text("x = u*cos(v)\ny = u*sin(v)\nz = v\nu = -5:5\nv = -20:20\nlabel = helicoid\n")
    assert run(["surface", "--surface", str(surf), "--uv-text", "u=1; v=t; t=0:4*pi; label=u1",
                "--tol", "1e-5", "--format", "json,csv,svg"], tmp_path) == 0
    data = json.loads((tmp_path / "helicoid_u1_surface.json").read_text())
    assert data["asymptotic"]["asymptotic"] and data["asymptotic"]["helix_test"]
    assert len(read_csv(tmp_path / "helicoid_u1_darboux.csv")) == 256
    assert run(["surface", "--builtin-surface", "plane", "--uv-text", "u=t; v=2*t; t=0:1"], tmp_path) == 2
    assert run(["surface", "--builtin-surface", "plane"], tmp_path) == 1


def test_plot(tmp_path):
    assert run(["plot", "--builtin", "circular_helix(2,1)", "--format", "svg,csv"], tmp_path) == 0
    rows = read_csv(tmp_path / "circular_helix_2_1_plot_kappa_tau.csv")
    assert max(abs(float(r["kappa"]) - 0.4) for r in rows) < 1e-12
    assert (tmp_path / "circular_helix_2_1_plot_kappa_tau.svg").read_text().count("<polyline") == 2
    assert run(["plot", "--builtin", "salkowski(0.5)", "--profiles", "sigma,bertrand_residual"], tmp_path) == 0
    assert run(["plot", "--builtin", "twisted_cubic", "--profiles", "tau_kappa", "--format", "csv"], tmp_path) == 0
    tk = [float(r["tau_kappa"]) for r in read_csv(tmp_path / "twisted_cubic_plot_tau_kappa.csv")]
    assert np.ptp(tk) > 0.1
    assert run(["plot", "--builtin", "twisted_cubic", "--profiles", "speed"], tmp_path) == 1


def test_outputs_are_byte_identical(tmp_path):
    for cmd in (["analyze", "--format", "csv,json,svg"], ["classify", "--format", "json,csv"], ["axis"]):
        a, b = tmp_path / "a", tmp_path / "b"
        for out in (a, b):
            assert main([cmd[0], "--builtin", "salkowski(0.5)", *cmd[1:], "--out", str(out)], environ={}) == 0
        names = sorted(p.name for p in a.iterdir())
        assert names == sorted(p.name for p in b.iterdir())
        for name in names:
            assert (a / name).read_bytes() == (b / name).read_bytes()


def test_module_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "curvelab", "classify", "--builtin", "circle(1)",
                           "--out", str(tmp_path)], capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    assert "general_helix=true" in proc.stdout
