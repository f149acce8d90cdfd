import csv
import io
import json
import math
import os
import re
import subprocess
import sys
import xml.etree.ElementTree as ET
from pathlib import Path

import numpy as np
import pytest

from shapesphere import cli, shapemap

DATA = Path(__file__).parent / "data"
NUM = re.compile(r"-?\d+(?:\.\d+)?(?:[eE][-+]?\d+)?|nan|inf", re.I)


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr().out
    return code, out


def run_json(capsys, *argv):
    code, out = run(capsys, *argv)
    return code, json.loads(out)


# ---------------------------------------------------------------------------
# classify


def test_classify_right_triangle(capsys):
    code, rec = run_json(capsys, "classify", "--vertices", "0,1", "-1,0", "1,0")
    assert code == 0
    assert rec["alpha_max"] == pytest.approx(math.pi / 2, abs=1e-12)
    assert rec["alpha_max_vertices"] == ["A"]
    assert rec["right"] == "critical"
    assert rec["shape"]["1"]["theta"] == pytest.approx(math.pi / 3, abs=1e-12)
    assert rec["shape"]["1"]["phi"] == pytest.approx(math.pi / 2, abs=1e-12)
    assert list(rec)[:4] == ["vertices", "degeneracy", "angles", "angles_deg"]
    assert set(rec["shape"]) == {"1", "2", "3"}


def test_classify_equilateral(capsys):
    code, rec = run_json(capsys, "classify", "--sides", "1", "1", "1")
    assert code == 0
    assert rec["equilateral"] is True and rec["fermat"] == "acute"
    assert rec["alpha_max"] == pytest.approx(math.pi / 3, abs=1e-12)
    assert rec["fermat_point"]["location"] == "interior"


def test_classify_sides_realise_lengths(capsys):
    _, rec = run_json(capsys, "classify", "--sides", "3", "4", "5")
    A, B, C = (np.array(v) for v in rec["vertices"])
    assert np.linalg.norm(C - B) == pytest.approx(3) and np.linalg.norm(A - C) == pytest.approx(4)
    assert np.linalg.norm(B - A) == pytest.approx(5)
    assert rec["alpha_max_vertices"] == ["C"] and rec["right"] == "critical"


def test_classify_alpha_threshold(capsys):
    _, rec = run_json(capsys, "classify", "--sides", "3", "4", "5", "--alpha", "100deg")
    assert rec["alpha_class"] == "acute" and rec["alpha_deg"] == pytest.approx(100)
    _, rec = run_json(capsys, "classify", "--sides", "1", "1", "1.9", "--alpha", "2.0944")
    assert rec["alpha_class"] == "obtuse" and rec["fermat"] == "obtuse"
    assert rec["fermat_point"]["location"] == "at_vertex"


def test_classify_errors(capsys):
    code, rec = run_json(capsys, "classify", "--sides", "1", "1", "3")
    assert code == 2 and rec["error"]["type"] == "usage"
    code, rec = run_json(capsys, "classify", "--vertices", "0,0", "0,0", "1,0")
    assert code == 2 and rec["error"]["type"] == "degenerate_triangle"
    code, rec = run_json(capsys, "classify", "--vertices", "0,0", "1,x", "1,0")
    assert code == 2
    code, rec = run_json(capsys, "classify", "--sides", "1", "1", "1", "--alpha", "30deg")
    assert code == 2


def test_classify_collinear_is_reported(capsys):
    code, rec = run_json(capsys, "classify", "--vertices", "0,0", "2,0", "1,0")
    assert code == 0 and rec["degeneracy"] == "collinear"
    assert rec["alpha_max"] == pytest.approx(math.pi)


# ---------------------------------------------------------------------------
# contour


def test_contour_regimes(capsys):
    expect = {"60deg": "equilateral", "75deg": "acute", "90deg": "separatrix", "120deg": "obtuse", "180deg": "collinear"}
    for a, regime in expect.items():
        code, rec = run_json(capsys, "contour", "--alpha", a, "--resolution", "16")
        assert code == 0 and rec["regime"] == regime, a


def test_contour_right_is_three_cap_circles(capsys):
    _, rec = run_json(capsys, "contour", "--alpha", "90deg", "--resolution", "64")
    assert len(rec["arcs"]) == 3 and all(a["closed"] for a in rec["arcs"])
    assert sorted(a["cluster"] for a in rec["arcs"]) == [1, 2, 3]
    assert len(rec["intersections"]) == 3
    assert sorted(p["label"] for p in rec["intersections"]) == ["B1", "B2", "B3"]


def test_contour_obtuse_flags_limit_points(capsys):
    _, rec = run_json(capsys, "contour", "--alpha", "120deg", "--resolution", "32")
    assert sorted(p["label"] for p in rec["excluded_limit_points"]) == ["B1", "B2", "B3"]
    for arc in rec["arcs"]:
        assert len(arc["limit_endpoints"]) == 2 and all(e.startswith("B") for e in arc["limit_endpoints"])


def test_contour_equilateral_point_orbits(capsys):
    _, rec = run_json(capsys, "contour", "--alpha", "60deg")
    pts = [(a["theta"][0], a["phi"][0]) for a in rec["arcs"]]
    assert sorted(p for _, p in pts) == pytest.approx([-math.pi / 2, math.pi / 2], abs=1e-12)


def test_contour_domain_errors(capsys):
    for bad in ("59deg", "181deg", "4", "abc"):
        code, rec = run_json(capsys, "contour", "--alpha", bad)
        assert code == 2 and "error" in rec


def test_csv_golden_header_and_columns(capsys):
    code, out = run(capsys, "contour", "--alpha", "90deg", "--resolution", "4", "--format", "csv")
    assert code == 0
    golden = (DATA / "contour_90deg_res4.csv").read_text()
    got_rows = list(csv.reader(io.StringIO(out)))
    ref_rows = list(csv.reader(io.StringIO(golden)))
    assert got_rows[0] == ref_rows[0] == ["arc_id", "cluster", "hemisphere", "theta", "phi", "x", "y", "z"]
    assert len(got_rows) == len(ref_rows)
    for g, r in zip(got_rows[1:], ref_rows[1:]):
        assert g[:3] == r[:3]
        assert np.allclose([float(x) for x in g[3:]], [float(x) for x in r[3:]], atol=1e-13)


def test_csv_rows_are_consistent(capsys):
    _, out = run(capsys, "contour", "--alpha", "120deg", "--resolution", "20", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert out.endswith("\n") and "\r" not in out
    for r in rows:
        v = shapemap.embed_array(float(r["theta"]), float(r["phi"]))
        assert np.allclose(v, [float(r["x"]), float(r["y"]), float(r["z"])], atol=1e-15)
        assert r["hemisphere"] in ("upper", "lower", "both")


# ---------------------------------------------------------------------------
# svg


def svg_numbers(root):
    for el in root.iter():
        for key in ("d", "cx", "cy", "r", "x", "y", "points", "x1", "x2", "y1", "y2"):
            if key in el.attrib:
                for tok in NUM.findall(el.attrib[key]):
                    yield float(tok)


def test_flow_svg_is_well_formed(capsys):
    code, out = run(capsys, "flow-svg", "--resolution", "64")
    assert code == 0
    root = ET.fromstring(out)
    assert root.tag.endswith("svg")
    nums = list(svg_numbers(root))
    assert nums and all(math.isfinite(x) for x in nums)
    classes = [el.attrib.get("class", "") for el in root.iter()]
    assert "contour separatrix" in classes
    ids = [el.attrib.get("id") for el in root.iter()]
    assert "meridians" in ids and "stroke-dasharray" in out


def test_flow_svg_empty_alpha_list(capsys):
    code, out = run(capsys, "flow-svg", "--alpha", "")
    root = ET.fromstring(out)
    classes = [el.attrib.get("class", "") for el in root.iter()]
    assert code == 0 and not any(c.startswith("contour") for c in classes)
    assert "E" in out and "B1" in out


def test_flow_svg_views(capsys):
    for view in ("U1", "1,0,0", "0,0,1", "Ebar"):
        code, out = run(capsys, "flow-svg", "--view", view, "--resolution", "32", "--alpha", "75deg,120deg")
        assert code == 0
        ET.fromstring(out)
    code, rec = run_json(capsys, "flow-svg", "--view", "0,0,0")
    assert code == 2
    code, rec = run_json(capsys, "flow-svg", "--alpha", "20deg")
    assert code == 2


def test_contour_svg_format(capsys):
    code, out = run(capsys, "contour", "--alpha", "105deg", "--format", "svg", "--resolution", "32")
    assert code == 0 and ET.fromstring(out).tag.endswith("svg")


# ---------------------------------------------------------------------------
# prob and paper-check


def test_prob_examples(capsys):
    _, rec = run_json(capsys, "prob", "--alpha", "90deg", "--method", "region")
    assert rec["p"] == pytest.approx(0.75, abs=1e-9) and rec["method"] == "region_quadrature"
    _, rec = run_json(capsys, "prob", "--alpha", "120deg", "--method", "paper-literal")
    assert rec["p"] == pytest.approx(0.1394, abs=5e-4)
    _, rec = run_json(capsys, "prob", "--alpha", "90deg", "--method", "cap")
    assert rec["p"] == 0.75


def test_prob_monte_carlo(capsys):
    _, rec = run_json(capsys, "prob", "--alpha", "120deg", "--method", "mc", "--n", "200000", "--seed", "42")
    assert rec["method"] == "monte_carlo" and rec["n"] == 200000 and rec["seed"] == 42
    assert rec["stderr"] == pytest.approx(math.sqrt(rec["p"] * (1 - rec["p"]) / 200000))
    assert abs(rec["p"] - 0.437) < 5 * rec["stderr"]


def test_prob_incompatible_methods(capsys):
    for argv in (("--alpha", "80deg", "--method", "region"), ("--alpha", "120deg", "--method", "cap"),
                 ("--alpha", "100deg", "--method", "paper-literal"), ("--alpha", "1.0", "--method", "mc")):
        code, rec = run_json(capsys, "prob", *argv)
        assert code == 2 and rec["error"]["message"]


def test_degrees_and_radians_agree(capsys):
    _, a = run_json(capsys, "prob", "--alpha", "120deg")
    _, b = run_json(capsys, "prob", "--alpha", "2.0943951")
    _, c = run_json(capsys, "prob", "--alpha", "2.0943951rad")
    assert abs(a["alpha"] - b["alpha"]) < 1e-7 and b == c
    assert a["p"] == pytest.approx(b["p"], abs=1e-7)
    assert cli.parse_angle("120deg") == pytest.approx(2 * math.pi / 3, abs=1e-15)


def test_paper_check(capsys):
    code, out = run(capsys, "paper-check", "--format", "json", "--n", "200000")
    rep = json.loads(out)
    assert code == 0 and rep["ok"]
    status = {(r["quantity"], r["method"]): r["status"] for r in rep["rows"]}
    assert status[("Prob(obtuse)", "cap_closed_form")] == "pass"
    assert status[("Prob(Fermat-obtuse), printed integral", "paper_literal_integral")] == "pass"
    assert status[("Prob(Fermat-acute), printed integral", "paper_literal_integral")] == "pass"
    flagged = [r for r in rep["rows"] if r["status"] == "flagged"]
    assert {r["method"] for r in flagged} == {"region_quadrature", "monte_carlo"}
    assert rep["adjudication"]["agree_3sigma"]
    assert rep["open_question"].startswith("Open question")


def test_paper_check_table(capsys):
    code, out = run(capsys, "paper-check", "--n", "50000")
    assert code == 0
    assert "flagged" in out and "pass" in out and "Open question" in out


# ---------------------------------------------------------------------------
# special points, io, determinism


def test_special_points(capsys):
    _, rec = run_json(capsys, "special-points")
    assert rec["E"]["theta"] == pytest.approx(math.pi / 2) and rec["E"]["phi"] == pytest.approx(math.pi / 2)
    assert rec["B3"]["theta"] == pytest.approx(math.pi / 3) and abs(rec["B3"]["phi"]) == pytest.approx(math.pi)
    assert rec["U1"]["theta"] == 0.0 and rec["U1"]["phi"] is None
    assert set(rec) >= {"E", "Ebar", "U1", "U2", "U3", "B1", "B2", "B3", "H1", "H2", "H3"}
    for p in rec.values():
        assert np.linalg.norm(p["xyz"]) == pytest.approx(1.0)


def test_out_flag_writes_file(tmp_path, capsys):
    target = tmp_path / "c.csv"
    code, out = run(capsys, "contour", "--alpha", "90deg", "--resolution", "4", "--format", "csv", "--out", str(target))
    assert code == 0 and out == ""
    assert target.read_text() == (DATA / "contour_90deg_res4.csv").read_text()
    code = cli.main(["special-points", "--out", str(tmp_path / "missing" / "x.json")])
    assert code == 1


def test_seed_environment_override(capsys, monkeypatch):
    argv = ("prob", "--alpha", "110deg", "--method", "mc", "--n", "20000")
    monkeypatch.setenv(cli.SEED_ENV, "7")
    _, env = run_json(capsys, *argv)
    _, flag = run_json(capsys, *argv, "--seed", "7")
    assert env == flag and env["seed"] == 7
    _, other = run_json(capsys, *argv, "--seed", "8")
    assert other["p"] != env["p"]
    monkeypatch.setenv(cli.SEED_ENV, "x")
    code, rec = run_json(capsys, *argv)
    assert code == 2


def test_repeated_invocations_are_byte_identical(capsys):
    cases = [
        ("classify", "--sides", "2", "3", "4"),
        ("contour", "--alpha", "75deg", "--resolution", "40"),
        ("flow-svg", "--resolution", "40"),
        ("prob", "--alpha", "2.5", "--method", "mc", "--n", "100000", "--seed", "3"),
    ]
    for argv in cases:
        assert run(capsys, *argv) == run(capsys, *argv)
    a = run(capsys, "prob", "--alpha", "2.5", "--method", "mc", "--n", "300000", "--seed", "3", "--workers", "1")
    b = run(capsys, "prob", "--alpha", "2.5", "--method", "mc", "--n", "300000", "--seed", "3", "--workers", "4")
    assert a == b


def test_module_entry_point(tmp_path):
    env = dict(os.environ)
    env.pop(cli.SEED_ENV, None)
    proc = subprocess.run([sys.executable, "-m", "shapesphere", "classify", "--sides", "1", "1", "3"],
                          capture_output=True, text=True, env=env)
    assert proc.returncode == 2 and json.loads(proc.stdout)["error"]["type"] == "usage"
    proc = subprocess.run([sys.executable, "-m", "shapesphere", "nonsense"], capture_output=True, text=True)
    assert proc.returncode == 2
