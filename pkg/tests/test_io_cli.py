import json

import numpy as np
import pytest

from conftest import TWO_PI, blob_curve, circle_curve, ellipse_curve, segment_curve

from shapegeo import CLOSED, OPEN, PlaneCurve, normalize
from shapegeo.cli import main
from shapegeo.curves import theta_grid
from shapegeo.io import (
    RunConfig,
    read_curve,
    read_lift,
    read_tangent_field,
    write_curve,
    write_lift,
    write_tangent_field,
)
from shapegeo.lift import lift_curve, zero_set


def test_curve_json_roundtrip(tmp_path):
    curve = blob_curve(64, seed=1)
    path = tmp_path / "c.json"
    write_curve(path, curve)
    back = read_curve(path)
    assert back.topology == CLOSED
    assert np.max(np.abs(back.points - curve.points)) < 1e-11


def test_curve_csv_roundtrip(tmp_path):
    curve = segment_curve(64)
    path = tmp_path / "c.csv"
    write_curve(path, curve)
    back = read_curve(path)
    assert back.topology == OPEN
    assert np.max(np.abs(back.points - curve.points)) < 1e-11
    closed = blob_curve(64, seed=2)
    path2 = tmp_path / "d.csv"
    write_curve(path2, closed)
    assert read_curve(path2).topology == CLOSED


def test_csv_parse_error_is_located(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("x,y\n0.0,0.0\nnot-a-number,3\n")
    with pytest.raises(ValueError, match="bad.csv:3"):
        read_curve(path)


def test_lift_file_roundtrip(tmp_path):
    pair = lift_curve(circle_curve(64))
    path = tmp_path / "lift.json"
    write_lift(path, pair, zero_set(pair))
    back = read_lift(path)
    assert back.parity == pair.parity
    assert np.max(np.abs(back.e - pair.e)) < 1e-11
    obj = json.loads(path.read_text())
    assert obj["zero_set"]["crosses_bad_set"] is False


def test_tangent_field_roundtrip(tmp_path):
    field = np.exp(1j * theta_grid(32, CLOSED)) * (0.3 - 0.1j)
    path = tmp_path / "field.json"
    write_tangent_field(path, field)
    assert np.max(np.abs(read_tangent_field(path) - field)) < 1e-11


def test_runconfig_roundtrip(tmp_path):
    cfg = RunConfig(n=64, n_rot=8, seed=3)
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(cfg.to_dict()))
    assert RunConfig.load(path) == cfg


# ---------------------------------------------------------------------------
# commands


def _write(tmp_path, name, curve):
    path = tmp_path / name
    write_curve(path, curve)
    return str(path)


def test_cmd_lift_circle(tmp_path, capsys):
    path = _write(tmp_path, "circle.json", circle_curve(128))
    code = main(["lift", path, "-o", str(tmp_path / "out.json")])
    assert code == 0
    back = read_lift(tmp_path / "out.json")
    assert back.parity == "odd"


def test_cmd_lift_segment(tmp_path):
    path = _write(tmp_path, "seg.json", segment_curve(128))
    code = main(["lift", path, "-o", str(tmp_path / "out.json")])
    assert code == 0
    assert read_lift(tmp_path / "out.json").parity == "open"


def test_cmd_lift_cusp_warns(tmp_path):
    # velocity decays smoothly to ~0 at the midpoint: a near-cusp sample;
    # the finite-difference speed floors at grid-squared scale, so the
    # degeneracy threshold comes from the config
    n = 257
    th = np.linspace(0.0, TWO_PI, n)
    speed = (np.cos(th / 2.0)) ** 2 + 3e-8
    pts = np.concatenate([[0.0], np.cumsum(0.5 * (speed[1:] + speed[:-1]) * np.diff(th))]) + 0j
    path = _write(tmp_path, "cusp.json", PlaneCurve(pts, OPEN))
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"eps_zero": 1e-4}))
    code = main(["lift", path, "-o", str(tmp_path / "out.json"), "--config", str(cfg)])
    assert code == 2
    obj = json.loads((tmp_path / "out.json").read_text())
    assert obj["zero_set"]["crosses_bad_set"] is True
    # away from the pinch the default threshold sees no degeneracy
    clean = _write(tmp_path, "clean.json", blob_curve(128, seed=9))
    assert main(["lift", clean, "-o", str(tmp_path / "c2.json")]) == 0


def test_cmd_dist_identical(tmp_path):
    path = _write(tmp_path, "b.json", blob_curve(128, seed=4))
    out = tmp_path / "dist.json"
    code = main(["dist", path, path, "-o", str(out), "-n", "128"])
    assert code == 0
    rep = json.loads(out.read_text())
    assert rep["d"] < 1e-5
    assert rep["d_mod_rot"] < 1e-5


def test_cmd_dist_elastic_closed(tmp_path):
    c0 = _write(tmp_path, "c0.json", circle_curve(128))
    c1 = _write(tmp_path, "c1.json", ellipse_curve(128))
    out = tmp_path / "dist.json"
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps(RunConfig(n=128, n_segments=48, n_offsets=48, n_rot=16).to_dict()))
    code = main(["dist", c0, c1, "--elastic", "--closed", "-o", str(out), "--config", str(cfg)])
    assert code == 0
    rep = json.loads(out.read_text())
    el = rep["elastic"]
    assert el["lower"] <= el["upper"] + 1e-8
    assert 0.0 < el["lower"] < np.pi
    assert 0.0 < el["upper"] < np.pi
    assert rep["config"]["n_segments"] == 48


def test_cmd_dist_open_kink_reports_flats(tmp_path):
    n = 257
    th = np.linspace(0.0, TWO_PI, n)
    ramp = np.clip((th - np.pi) / (0.5 * np.pi), 0.0, 1.0)
    alpha = 1.3 * np.pi * (3 * ramp**2 - 2 * ramp**3)
    z = np.exp(1j * alpha) / TWO_PI
    pts = np.concatenate([[0.0], np.cumsum(0.5 * (z[1:] + z[:-1]) * np.diff(th))])
    c0 = _write(tmp_path, "turn.json", normalize(PlaneCurve(pts, OPEN)))
    seg = _write(tmp_path, "seg.json", segment_curve(n))
    out = tmp_path / "dist.json"
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps(RunConfig(n=257, n_segments=128).to_dict()))
    code = main(["dist", c0, seg, "--elastic", "-o", str(out), "--config", str(cfg)])
    assert code == 0
    rep = json.loads(out.read_text())
    assert rep["elastic"]["map_summary"]["flat_segments"] > 0
    assert len(rep["elastic"]["breakpoints"]) == rep["elastic"]["map_summary"]["corners"]
    assert rep["elastic"]["map_summary"]["flat_mass"] > 0.1


def test_cmd_dist_topology_mismatch(tmp_path):
    a = _write(tmp_path, "a.json", blob_curve(64, seed=5))
    b = _write(tmp_path, "b.json", segment_curve(64))
    assert main(["dist", a, b]) == 1


def test_cmd_geodesic_pair(tmp_path):
    c0 = _write(tmp_path, "c0.json", circle_curve(128))
    c1 = _write(tmp_path, "c1.json", ellipse_curve(128))
    prefix = str(tmp_path / "geo")
    code = main(["geodesic", c0, c1, "-o", prefix, "-n", "128", "--frames", "5"])
    assert code == 0
    for name in ("great_circle", "neretin"):
        data = json.loads((tmp_path / f"geo_{name}.json").read_text())
        assert len(data["curves"]) == 5
        svg = (tmp_path / f"geo_{name}.svg").read_text()
        assert svg.startswith("<svg")


def test_cmd_geodesic_identical_is_constant(tmp_path):
    c0 = _write(tmp_path, "c0.json", blob_curve(128, seed=6))
    prefix = str(tmp_path / "flat")
    code = main(["geodesic", c0, c0, "-o", prefix, "-n", "128", "--frames", "4"])
    assert code == 0
    data = json.loads((tmp_path / "flat_great_circle.json").read_text())
    first = np.asarray(data["curves"][0]["points"])
    last = np.asarray(data["curves"][-1]["points"])
    assert np.max(np.abs(first - last)) < 1e-6


def test_cmd_geodesic_examples(tmp_path):
    prefix = str(tmp_path / "demo")
    assert main(["geodesic", "--example", "fig1", "-o", prefix, "-n", "128"]) == 0
    assert (tmp_path / "demo_fig1.svg").exists()
    assert main(["geodesic", "--example", "fig3", "-o", prefix, "-n", "256", "--frames", "17"]) == 0
    data = json.loads((tmp_path / "demo_fig3.json").read_text())
    assert len(data["curves"]) == 17


def test_cmd_curvature(tmp_path):
    path = _write(tmp_path, "e.json", ellipse_curve(128))
    out = tmp_path / "curv.json"
    code = main(["curvature", path, "-n", "128", "-o", str(out)])
    assert code == 0
    rep = json.loads(out.read_text())
    assert rep["k_b_sim"] >= 0.0
    assert rep["upper_bound"] >= rep["k_b_sim"]
    assert rep["rho"] >= 0.0
    assert set(rep) >= {"k_gr", "k_st", "k_imm_sim", "rho", "k_b_sim", "upper_bound"}


def test_cmd_curvature_circle_singular(tmp_path):
    path = _write(tmp_path, "c.json", circle_curve(128))
    assert main(["curvature", path, "-n", "128"]) == 3


def test_cmd_integrate(tmp_path):
    curve = circle_curve(128)
    path = _write(tmp_path, "c.json", curve)
    field = tmp_path / "v.json"
    write_tangent_field(field, np.zeros(128, dtype=complex))
    prefix = str(tmp_path / "traj")
    code = main(["integrate", path, str(field), "--T", "0.2", "--steps", "10", "-o", prefix])
    assert code == 0
    data = json.loads((tmp_path / "traj.json").read_text())
    assert len(data["curves"]) == 11
    csv_text = (tmp_path / "traj.csv").read_text()
    assert csv_text.splitlines()[0] == "t,energy,angular,scaling,sup_reparam"


def test_cmd_integrate_bad_set(tmp_path):
    from shapegeo.geodesy import example_bifurcation_family

    pairs, curves = example_bifurcation_family(257, np.array([-0.6, -0.59]))
    path = _write(tmp_path, "c.json", curves[0])
    # the command normalizes the curve (doubling its scale), so scale the
    # velocity to match
    v0 = (curves[1].points - curves[0].points) / 0.01 * 0.6 * 2.0
    field = tmp_path / "v.json"
    write_tangent_field(field, v0)
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"eps_speed": 1e-5}))
    prefix = str(tmp_path / "traj")
    code = main(
        ["integrate", path, str(field), "--T", "1.6", "--steps", "160", "-o", prefix, "--config", str(cfg)]
    )
    assert code == 4
    assert (tmp_path / "traj.json").exists()  # partial trajectory written


def test_floats_rounded_to_twelve_digits(tmp_path):
    path = _write(tmp_path, "b.json", blob_curve(64, seed=7))
    obj = json.loads((tmp_path / "b.json").read_text())
    for x, y in obj["points"][:5]:
        assert len(repr(float(x)).replace("-", "").replace(".", "").lstrip("0")) <= 13


def test_cmd_dist_deterministic(tmp_path):
    c0 = _write(tmp_path, "c0.json", blob_curve(128, seed=11))
    c1 = _write(tmp_path, "c1.json", blob_curve(128, seed=12))
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps(RunConfig(n=128, n_segments=32, n_offsets=32, n_rot=8).to_dict()))
    outs = []
    for name in ("a.json", "b.json"):
        out = tmp_path / name
        assert main(["dist", c0, c1, "--elastic", "--closed", "-o", str(out), "--config", str(cfg)]) == 0
        outs.append(out.read_text())
    assert outs[0] == outs[1]


def test_cmd_lift_roundtrip_through_files(tmp_path):
    from shapegeo.lift import apply_phi as phi

    curve = blob_curve(256, seed=13)
    path = _write(tmp_path, "c.json", curve)
    out = tmp_path / "lift.json"
    assert main(["lift", path, "-o", str(out)]) == 0
    pair = read_lift(out)
    back = phi(pair)
    reference = normalize(read_curve(path))
    assert np.max(np.abs(back.points - reference.points)) < 1e-3
