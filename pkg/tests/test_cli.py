import csv
import io
import json
import subprocess
import sys
import xml.etree.ElementTree as ET

import jsonschema
import pytest

from bisectrix.cli import load_schema, main, validate_report

SVG_NS = "{http://www.w3.org/2000/svg}"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_solve_equilateral(capsys):
    code, out, _ = run(capsys, "solve", "--sq", "1", "1", "1")
    assert code == 0
    assert "Incenter" in out and "Constructible" in out


def test_solve_triangle_inequality(capsys):
    code, _, err = run(capsys, "solve", "--sq", "1", "1", "4")
    assert code == 1 and "triangle inequality" in err


def test_solve_worked_instance_json(capsys):
    code, out, _ = run(capsys, "solve", "--sq", "4", "9", "7", "--json")
    doc = json.loads(out)
    validate_report(doc)
    assert code == 3  # no incenter solution exists for this instance
    assert doc["characteristic"]["ground_truth"]["t"] == [14, 33, -594, 1215]
    assert doc["characteristic"]["printed"]["s"] == doc["characteristic"]["ground_truth"]["s"]
    assert len(doc["roots"]) == 1 and doc["verdict"]["status"] == "NotConstructible"
    assert doc["discrepancy"] is None
    assert "timing" not in doc


def test_solve_sides_numeric(capsys):
    code, out, _ = run(capsys, "solve", "--sides", "3", "4", "5", "--json")
    doc = json.loads(out)
    assert doc["instance"]["mode"] == "numeric" and doc["verdict"] is None


def test_solve_points_exact(capsys):
    code, out, _ = run(capsys, "solve", "--points", "0", "0", "4", "0", "0", "3", "--json")
    doc = json.loads(out)
    assert doc["instance"]["exact"] == ["25", "9", "16"]


def test_solve_collinear_points(capsys):
    code, _, _ = run(capsys, "solve", "--points", "0", "0", "1", "1", "2", "2")
    assert code == 1


@pytest.mark.parametrize(
    "argv",
    [
        ["solve", "--sq", "1", "x", "1"],
        ["solve", "--sq", "4", "9", "7", "--eps", "0"],
        ["solve"],
        ["solve", "--sq", "4", "9", "7", "--system", "bogus"],
        ["frobnicate"],
    ],
)
def test_input_errors_exit_1(capsys, argv):
    with pytest.raises(SystemExit) as exc:
        code = main(argv)
        raise SystemExit(code)
    assert exc.value.code == 1


def test_timing_flag(capsys):
    _, out, _ = run(capsys, "solve", "--sq", "1", "1", "1", "--json", "--timing")
    assert json.loads(out)["timing"]["seconds"] >= 0


def test_out_file(tmp_path, capsys):
    path = tmp_path / "r.json"
    code, out, _ = run(capsys, "solve", "--sq", "1", "1", "1", "--json", "--out", str(path))
    assert out == "" and json.loads(path.read_text())["schema"] == 1


def test_schema_rejects_bad_report():
    with pytest.raises(jsonschema.ValidationError):
        jsonschema.validate({"schema": 2}, load_schema())


def test_reproduce_paper_reports_checks(capsys):
    code, out, _ = run(capsys, "reproduce-paper", "--json")
    doc = json.loads(out)
    validate_report(doc)
    assert code == 4
    names = [c["name"] for c in doc["checks"]]
    assert len(names) == 8
    passed = {c["name"]: c["passed"] for c in doc["checks"]}
    assert passed["NotConstructible"] and passed["degree 3"]
    pub = doc["published_cubic"]
    assert pub["kind"] == "published-cubic-mismatch"
    assert pub["diagnosis"]["matches_published"] is True
    assert [r["classification"] for r in pub["diagnosis"]["roots"]].count("Incenter") == 1


def test_reproduce_paper_text(capsys):
    code, out, _ = run(capsys, "reproduce-paper")
    assert out.count("[PASS]") + out.count("[FAIL]") == 8
    assert "t^3 + 74*t^2 + 259*t - 570" in out


def test_reproduce_paper_coarse_eps_same_classes(capsys):
    _, a, _ = run(capsys, "reproduce-paper", "--json")
    _, b, _ = run(capsys, "reproduce-paper", "--json", "--eps", "1e-4")
    cls = lambda d: [s["classification"] for s in json.loads(d)["solutions"]]
    assert cls(a) == cls(b)


def test_reproduce_paper_printed_only(capsys):
    code, out, _ = run(capsys, "reproduce-paper", "--system", "printed-only", "--json")
    doc = json.loads(out)
    assert doc["system"] == "printed" and doc["characteristic"]["used"] == "printed"


def _csv(out):
    return list(csv.DictReader(io.StringIO(out)))


def test_sweep_forward_rows(capsys, monkeypatch):
    monkeypatch.setenv("BISECTRIX_THREADS", "4")
    code, out, _ = run(capsys, "sweep", "--n", "200", "--seed", "7")
    rows = _csv(out)
    assert code == 0 and len(rows) == 200
    assert [int(r["index"]) for r in rows] == list(range(200))
    assert all(int(r["n_incenter"]) >= 1 for r in rows)
    assert all(float(r["max_feet_residual"]) <= 1e-8 for r in rows)


def test_sweep_deterministic_across_workers(capsys, monkeypatch):
    monkeypatch.setenv("BISECTRIX_THREADS", "1")
    _, serial, _ = run(capsys, "sweep", "--n", "12", "--seed", "3")
    monkeypatch.setenv("BISECTRIX_THREADS", "3")
    _, parallel, _ = run(capsys, "sweep", "--n", "12", "--seed", "3")
    assert serial == parallel


def test_sweep_degenerate(capsys):
    code, out, _ = run(capsys, "sweep", "--n", "1", "--seed", "1", "--degenerate")
    rows = _csv(out)
    assert code == 0 and rows[0]["status"] == "Invalid"


def test_sweep_rational_grid(capsys):
    code, out, _ = run(capsys, "sweep", "--rational-grid", "5")
    rows = _csv(out)
    assert rows and all(r["verdict"] in ("Constructible", "NotConstructible", "Undetermined") for r in rows)


@pytest.mark.parametrize("lo, hi", [("70", "80"), ("100", "50"), ("0", "90")])
def test_sweep_invalid_range(capsys, lo, hi):
    code, _, _ = run(capsys, "sweep", "--n", "3", "--angle-min", lo, "--angle-max", hi)
    assert code == 1


def test_sweep_header_fixed(capsys):
    _, out, _ = run(capsys, "sweep", "--n", "0")
    assert out.strip().split(",")[:3] == ["index", "source", "angle_A"]


def _svg(out):
    root = ET.fromstring(out.split("\n", 1)[1])
    return root


def _points(poly):
    return [tuple(map(float, p.split(","))) for p in poly.get("points").split()]


def test_plot_incenter(capsys):
    code, out, _ = run(capsys, "plot", "--sq", "4", "9", "19")
    assert code == 0
    root = _svg(out)
    ref = _points(root.find(f"{SVG_NS}polygon[@id='reference']"))
    sol = _points(root.find(f"{SVG_NS}polygon[@id='solution']"))
    for i, name in enumerate("ABC"):
        line = root.find(f"{SVG_NS}line[@id='bisector-{name}']")
        assert line.get("class") == "internal"
        x1, y1, x2, y2 = (float(line.get(k)) for k in ("x1", "y1", "x2", "y2"))
        assert abs(x1 - sol[i][0]) < 1 and abs(y1 - sol[i][1]) < 1
        assert abs(x2 - ref[i][0]) < 1 and abs(y2 - ref[i][1]) < 1
        # the foot also lies on the opposite side of the solution, within 1 px
        P, Q = sol[(i + 1) % 3], sol[(i + 2) % 3]
        cross = (Q[0] - P[0]) * (ref[i][1] - P[1]) - (Q[1] - P[1]) * (ref[i][0] - P[0])
        assert abs(cross) / ((Q[0] - P[0]) ** 2 + (Q[1] - P[1]) ** 2) ** 0.5 < 1


def test_plot_equilateral_symmetric(capsys):
    _, out, _ = run(capsys, "plot", "--sq", "1", "1", "1")
    root = _svg(out)
    ref = _points(root.find(f"{SVG_NS}polygon[@id='reference']"))
    c = root.find(f"{SVG_NS}circle[@id='center']")
    cx = sum(p[0] for p in ref) / 3
    cy = sum(p[1] for p in ref) / 3
    assert abs(float(c.get("cx")) - cx) < 1e-2 and abs(float(c.get("cy")) - cy) < 1e-2


def test_plot_excenter_styling(capsys):
    code, out, _ = run(capsys, "plot", "--sq", "4", "9", "19", "--root", "2")
    root = _svg(out)
    classes = [root.find(f"{SVG_NS}line[@id='bisector-{n}']").get("class") for n in "ABC"]
    assert code == 0 and classes.count("external") == 2


def test_plot_no_solution(capsys):
    code, _, _ = run(capsys, "plot", "--sq", "4", "9", "7")
    assert code == 3


def test_plot_bytes_stable(capsys):
    _, a, _ = run(capsys, "plot", "--sq", "5", "6", "7", "--root", "1")
    _, b, _ = run(capsys, "plot", "--sq", "5", "6", "7", "--root", "1")
    assert a == b and "font-family=\"sans-serif\"" in a


def test_oracle_check_pass(capsys):
    code, out, _ = run(capsys, "oracle-check", "--n", "5", "--seed", "1")
    assert code == 0 and "5/5 passed" in out


def test_oracle_check_vacuous(capsys):
    code, out, _ = run(capsys, "oracle-check", "--n", "0")
    assert code == 0 and "0/0" in out


def test_oracle_check_perturbed_fails(capsys):
    code, out, _ = run(capsys, "oracle-check", "--n", "1", "--seed", "0", "--perturb", "1e-3")
    assert code == 4 and "amplification" in out


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "bisectrix", "solve", "--sq", "1", "1", "1"], capture_output=True, text=True)
    assert proc.returncode == 0 and "Incenter" in proc.stdout
