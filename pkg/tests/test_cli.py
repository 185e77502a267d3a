import csv
import io
import subprocess
import sys

import pytest

from foldedtoric.cli import forms_check_lines, run

from pathlib import Path

FIXTURES = Path(__file__).resolve().parents[1] / "fixtures"


def fx(name):
    return str(FIXTURES / f"{name}.fdp")


@pytest.mark.parametrize("name", ["unit_triangle", "scaled_triangle", "square", "cp2cp2"])
def test_validate_passes(name):
    code, out, _ = run(["validate", fx(name)])
    assert code == 0 and out.endswith("result: pass\n")


def test_validate_names_bad_vertex():
    code, out, _ = run(["validate", fx("bad_vertex")])
    assert code == 1
    failing = [l for l in out.splitlines() if l.startswith("check:") and not l.endswith(": ok")]
    assert len(failing) == 1 and "(0, 1)" in failing[0]


def test_validate_fold_on_corner():
    code, _, err = run(["validate", fx("fold_on_corner")])
    assert code == 1 and "fold on corner forbidden" in err


def test_usage_errors():
    assert run(["validate", "no/such/file.fdp"])[0] == 2
    code, _, err = run(["validate", fx("unit_triangle"), "--bogus"])
    assert code == 2 and "usage:" in err
    assert run([])[0] == 2
    assert run(["morse", "--xi", "0,0"])[0] == 2
    assert run(["morse", "--xi", "1"])[0] == 2
    assert run(["reeb", "--k", "1", "--x3", "2"])[0] == 2
    assert run(["example", "other"])[0] == 2


def test_validate_report_keys_in_order():
    _, out, _ = run(["validate", fx("cp2cp2")])
    keys = [l.split(":", 1)[0] for l in out.splitlines()]
    assert keys[:4] == ["file", "loops", "corners", "folds"]
    assert keys[-2:] == ["failures", "result"]
    assert "corners: 4" in out and "folds: 1" in out


def test_plot_writes_svg(tmp_path):
    target = tmp_path / "tri.svg"
    code, out, _ = run(["plot", fx("unit_triangle"), "-o", str(target)])
    assert code == 0 and target.read_text().startswith("<?xml")
    code, out, _ = run(["plot", fx("cp2cp2")])
    assert code == 0 and out.count('class="fold"') == 1


def test_morse_reports(tmp_path):
    code, out, _ = run(["morse", "--xi", "1,0"])
    assert code == 0
    assert "morse_bott: true" in out and "hessian_at_origin: -1,0,0; 0,-1,0; 0,0,2" in out
    code, out, _ = run(["morse", "--xi", "0,1"])
    assert "morse_bott: false" in out and "sign_change_at_z: 0" in out
    target = tmp_path / "sep.csv"
    run(["morse", "--xi", "1,0.2", "-o", str(target), "--samples", "50"])
    rows = list(csv.reader(target.open()))
    assert rows[0] == ["p1", "p2"] and len(rows) == 51


def test_reeb_csv_conserves_r2():
    code, out, err = run(["reeb", "--k", "1", "--x3", "0"])
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 10001
    assert max(abs(float(r["drift"])) for r in rows) <= 1e-6
    assert max(abs(float(r["r2"]) - 1) for r in rows) <= 1e-6
    assert "orbit: theta-circle-equator" in err


def test_reeb_to_file(tmp_path):
    target = tmp_path / "orbit.csv"
    code, out, _ = run(["reeb", "--k", "1", "--x3", "0.3333333333333333", "--t", "1", "-o", str(target)])
    assert code == 0 and "ratio: 3/2" in out and "orbit: resonant" in out
    assert target.read_text().splitlines()[0] == "t,x1,x2,x3,theta,r2,drift"


def test_forms_check():
    lines, ok = forms_check_lines(20, 1)
    assert ok and lines[-1] == "result: pass"
    code, out, _ = run(["forms", "check", "--points", "20"])
    assert code == 0 and "L_signature: (+2, -1)" in out


def test_example_cp2cp2(tmp_path):
    target = tmp_path / "example.svg"
    code, out, _ = run(["example", "cp2cp2", "--samples", "300", "-o", str(target)])
    assert code == 0
    assert "charts: 4" in out and "overlaps: 3" in out and "corners: 4" in out
    assert "misscaled_control: fail (expected fail)" in out
    assert target.exists()


@pytest.mark.parametrize(
    "argv",
    [["validate", fx("cp2cp2")], ["plot", fx("cp2cp2")], ["morse", "--xi", "1,0.2"], ["forms", "check"]],
)
def test_outputs_are_deterministic(argv):
    assert run(argv) == run(argv)


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "foldedtoric", "validate", fx("unit_triangle")],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0 and "result: pass" in proc.stdout
