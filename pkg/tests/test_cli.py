"""Command line driver: pipelines, outputs, and the exit code contract.

Most tests call main() in-process; one subprocess case covers the module
entry point.  Grid and z values beginning with "-" are passed as separate
tokens on purpose: the dash-binding preprocessing must keep them values.
"""

import json
import math
import re
import subprocess
import sys

import numpy as np
import pytest

from cliffdunkl.cdt_engine import rel_l2_error, reports_from_json
from cliffdunkl.cli import main
from cliffdunkl.field_io import load_field


def _gauss_doc(scale=None):
    body = "exp(-(x1^2+x2^2))"
    if scale is not None:
        body = f"{scale}*{body}"
    return {
        "signature": [0, 2],
        "kappa": [0.3, 0.7],
        "split": 1,
        "blades": {"1": body},
    }


@pytest.fixture()
def gauss_file(tmp_path):
    path = tmp_path / "gauss.json"
    path.write_text(json.dumps(_gauss_doc()))
    return path


def test_transform_inverse_pipeline(tmp_path, gauss_file, capsys):
    fwd = tmp_path / "F.json"
    back = tmp_path / "back.json"
    rc = main(["transform", "--field", str(gauss_file),
               "--in-grid", "-6:6:1:32", "--out-grid", "-8:8:1:32",
               "--out", str(fwd)])
    assert rc == 0
    assert "transform: wrote" in capsys.readouterr().out
    F = load_field(fwd)
    assert F.grid.axes[0].L == 8.0
    rc = main(["inverse", "--field", str(fwd),
               "--in-grid", "-8:8:1:32", "--out-grid", "-6:6:1:32",
               "--out", str(back)])
    assert rc == 0
    got = load_field(back)
    f = load_field(gauss_file)
    want = got.__class__(f.sig, f.ms, got.grid, f.sample(got.grid))
    assert rel_l2_error(got, want) <= 1e-5


def test_roundtrip_reports_the_error(gauss_file, capsys):
    rc = main(["roundtrip", "--field", str(gauss_file),
               "--in-grid", "-6:6:1:48", "--out-grid", "-9:9:1:48"])
    assert rc == 0
    out = capsys.readouterr().out
    m = re.search(r"roundtrip relative L2 error: ([0-9.e+-]+)", out)
    assert m and float(m.group(1)) <= 1e-5


def test_plancherel_prints_ratio_and_claim(gauss_file, capsys):
    rc = main(["plancherel", "--field", str(gauss_file),
               "--in-grid", "-8:8:1:48", "--out-grid", "-8:8:1:48"])
    assert rc == 0
    out = capsys.readouterr().out
    m = re.search(r"ratio \|F\|\^2/\|f\|\^2 = ([0-9.]+)", out)
    assert m and float(m.group(1)) == pytest.approx(18.282784859, rel=1e-6)
    assert "[flagged]" in out  # the asserted constant disagrees; that is data


def test_eigencheck_from_flags(capsys):
    rc = main(["eigencheck", "--sig", "0,2", "--kappa", "0.3,0.7", "--split", "1",
               "--v", "1", "--u", "0",
               "--in-grid", "-8:8:1:48", "--out-grid", "-8:8:1:48"])
    assert rc == 0
    out = capsys.readouterr().out
    m = re.search(r"measured ([0-9.]+)", out)
    assert m and float(m.group(1)) == pytest.approx(4.2758373, rel=1e-5)


def test_translate_methods_agree(tmp_path, gauss_file):
    outs = {}
    for method in ("spectral", "explicit"):
        out = tmp_path / f"{method}.json"
        rc = main(["translate", "--field", str(gauss_file),
                   "--z", "-0.4,0.2", "--method", method,
                   "--in-grid", "-6.5:6.5:1:48", "--out-grid", "-9:9:1:48",
                   "--out", str(out)])
        assert rc == 0
        outs[method] = load_field(out)
    assert rel_l2_error(outs["spectral"], outs["explicit"]) <= 1e-5


def test_convolve_runs(tmp_path, gauss_file, capsys):
    g2 = tmp_path / "g2.json"
    g2.write_text(json.dumps(_gauss_doc()))
    out = tmp_path / "conv.json"
    rc = main(["convolve", "--field", str(gauss_file), "--field2", str(g2),
               "--in-grid", "-5:5:1:12", "--out-grid", "-5:5:1:12",
               "--out", str(out)])
    assert rc == 0
    assert load_field(out).norm2() > 0.0


def test_miyachi_boundary_verdict(tmp_path, capsys):
    f = tmp_path / "two_gauss.json"
    f.write_text(json.dumps(_gauss_doc(scale=2)))
    rc = main(["miyachi", "--field", str(f),
               "--alpha", "1", "--beta", "0.25", "--lambda", "3",
               "--exponent", "inf",
               "--in-grid", "-8:8:1:32", "--out-grid", "-8:8:1:32"])
    assert rc == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["case"] == "boundary"
    assert doc["condition1"] == "finite" and doc["condition2"] == "finite"
    assert doc["C"]["1"] == pytest.approx(2.0, abs=1e-9)
    assert doc["lambda_check"] is True
    assert [r["L"] for r in doc["ladder"]] == [2.0, 3.0, 4.0, 5.0]


def test_miyachi_ladder_flag(tmp_path, capsys):
    f = tmp_path / "g.json"
    f.write_text(json.dumps(_gauss_doc()))
    rc = main(["miyachi", "--field", str(f),
               "--alpha", "1", "--beta", "1", "--lambda", "1",
               "--ladder", "2,2.5,3,3.5",
               "--in-grid", "-8:8:1:32", "--out-grid", "-8:8:1:32"])
    assert rc == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["case"] == "vanishing"
    assert [r["L"] for r in doc["ladder"]] == [2.0, 2.5, 3.0, 3.5]


def test_verify_flags_and_writes_reports(tmp_path, capsys):
    out = tmp_path / "reports.json"
    rc = main(["verify", "--out", str(out)])
    assert rc == 5  # the asserted constants disagree with measurement
    err = capsys.readouterr().err
    assert "28 claims measured, 6 flagged" in err
    reports = reports_from_json(out.read_text())
    assert len(reports) == 28
    assert sum(r.status == "flagged" for r in reports) == 6


def test_verify_passes_with_loose_tolerance(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"rtol": 100.0, "order": 24, "L_x": 6.0, "L_y": 6.0}))
    rc = main(["verify", "--config", str(cfg), "--out", str(tmp_path / "r.json")])
    assert rc == 0


def test_kernel_component_parity(capsys):
    rc = main(["kernel", "--kappa", "0.5", "--t", "2.0"])
    assert rc == 0
    out1 = capsys.readouterr().out
    rc = main(["kernel", "--kappa", "0.5", "--t", "-2.0"])
    assert rc == 0
    out2 = capsys.readouterr().out

    def grab(text):
        a = float(re.search(r"A = (.+)", text).group(1))
        b = float(re.search(r"B = (.+)", text).group(1))
        return a, b

    a1, b1 = grab(out1)
    a2, b2 = grab(out2)
    assert a1 == a2 and b1 == -b2  # A even, B odd
    assert abs(a1) <= 1.0 and b1 != 0.0


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "cliffdunkl.cli", "kernel", "--kappa", "0", "--t", "1.0"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    a = float(re.search(r"A = (.+)", proc.stdout).group(1))
    b = float(re.search(r"B = (.+)", proc.stdout).group(1))
    assert a == math.cos(1.0) and b == -math.sin(1.0)


# -- exit codes ----------------------------------------------------------------


def test_usage_errors_exit_2(tmp_path, gauss_file, capsys):
    rc = main(["transform", "--field", str(gauss_file),
               "--in-grid", "junk", "--out", str(tmp_path / "o.json")])
    assert rc == 2
    rc = main(["transform", "--field", str(gauss_file),
               "--in-grid", "-6:6:1:32", "--out-grid", "-6:6:2:32",
               "--out", str(tmp_path / "o.json")])
    assert rc == 2  # panels/order must match across sides
    rc = main(["eigencheck", "--sig", "0,2", "--kappa", "0.3,0.7",
               "--v", "1,1", "--u", "0"])
    assert rc == 2
    rc = main(["eigencheck", "--kappa", "0.3,0.7", "--v", "0", "--u", "0"])
    assert rc == 2  # --sig required without a field file
    capsys.readouterr()


def test_argparse_rejections_exit_2(tmp_path, capsys):
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["transform", "--field", "f.json"])  # --out is required
    assert exc.value.code == 2
    capsys.readouterr()


def test_input_errors_exit_3(tmp_path, gauss_file, capsys):
    rc = main(["transform", "--field", str(tmp_path / "missing.json"),
               "--out", str(tmp_path / "o.json")])
    assert rc == 3
    bad = tmp_path / "bad.json"
    bad.write_text("{broken")
    rc = main(["transform", "--field", str(bad), "--out", str(tmp_path / "o.json")])
    assert rc == 3
    rc = main(["transform", "--field", str(gauss_file), "--kappa", "0.5,0.5",
               "--out", str(tmp_path / "o.json")])
    assert rc == 3  # cross-check against the file header fails
    rc = main(["verify", "--config", str(tmp_path / "missing_cfg.json")])
    assert rc == 3
    capsys.readouterr()


def test_numerical_failures_exit_4(tmp_path, gauss_file, capsys):
    rc = main(["transform", "--field", str(gauss_file),
               "--in-grid", "-12:12:1:16", "--out-grid", "-12:12:1:16",
               "--out", str(tmp_path / "o.json")])
    assert rc == 4  # kernel argument beyond the trusted radius
    capsys.readouterr()


def test_miyachi_bad_ladder_exits_2(tmp_path, gauss_file, capsys):
    rc = main(["miyachi", "--field", str(gauss_file),
               "--alpha", "1", "--beta", "1", "--lambda", "1",
               "--ladder", "5,4,3,2"])
    assert rc == 2
    capsys.readouterr()
