import csv
import io
import json

import pytest

from vsheet.cli import main
from vsheet.scans import SCAN_COLUMNS


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def write_cfg(tmp_path, **data):
    p = tmp_path / "bg.json"
    p.write_text(json.dumps(data))
    return str(p)


def test_classify_default(capsys):
    code, out, _ = run(capsys, "classify")
    d = json.loads(out)
    assert code == 0 and d["regime"] == "SupersonicStable" and d["constraints"]["passed"]


def test_classify_from_config(capsys, tmp_path):
    cfg = write_cfg(tmp_path, rho_bar=1.0, v_bar=0.3, F11_bar=1.0)
    code, out, _ = run(capsys, "classify", "--config", cfg)
    assert code == 0 and json.loads(out)["regime"] == "SubsonicStable"


def test_roots_and_poles(capsys):
    code, out, _ = run(capsys, "roots")
    d = json.loads(out)
    assert code == 0 and len(d["elastic"]) == 3 and d["velocity"] == [-3.0, 3.0]
    code, out, _ = run(capsys, "poles")
    fams = {c["family"] for c in json.loads(out)["curves"]}
    assert code == 0 and "RootElastic" not in fams and "PoleVelocity" in fams


def test_det_scan_csv_and_json(capsys, tmp_path):
    code, out, _ = run(capsys, "det-scan", "--grid", "16")
    rows = list(csv.reader(io.StringIO(out)))
    assert code == 0 and tuple(rows[0]) == SCAN_COLUMNS and len(rows) == 17
    outp = tmp_path / "scan.json"
    code, _, _ = run(capsys, "det-scan", "--grid", "512", "--format", "json", "--out", str(outp))
    d = json.loads(outp.read_text())
    assert code == 0 and len(d["zeros"]) == 5


def test_region_map_formats(capsys):
    code, out, _ = run(capsys, "region-map", "--grid", "9", "--F-grid", "5")
    assert code == 0 and out.startswith("<svg")
    code, out, _ = run(capsys, "region-map", "--grid", "9", "--F-grid", "5", "--format", "csv")
    assert code == 0 and len(out.strip().split("\n")) == 46


def test_separation_exit_codes(capsys, tmp_path):
    code, out, _ = run(capsys, "separation")
    assert code == 0 and json.loads(out)["min_radius"] > 0
    cfg = write_cfg(tmp_path, rho_bar=1.0, v_bar=0.5, F11_bar=1.0)
    code, _, err = run(capsys, "separation", "--config", cfg)
    assert code == 2 and "AdmissibilityViolation" in err


def test_triangular_check(capsys):
    code, out, _ = run(capsys, "triangular-check", "--grid", "40")
    d = json.loads(out)
    assert code == 0 and d["max_pattern_residual"] < 1e-9 and d["measured_c_lower_bound"] > 0


def test_oracle_check(capsys):
    code, out, _ = run(capsys, "oracle-check", "--grid", "256")
    d = json.loads(out)
    assert code == 0 and d["max_zero_distance"] < 1e-5 and d["max_subspace_angle"] < 1e-7


def test_trace_with_perturbation(capsys, tmp_path):
    cfg = write_cfg(tmp_path, rho_bar=1.0, v_bar=3.0, F11_bar=1.0, perturbation={
        "v_r": {"amplitude": 0.02, "center": [0, 0, 0.5], "width": 0.4, "kind": "smooth"}})
    code, out, _ = run(capsys, "trace", "--config", cfg, "--grid", "5")
    lines = out.strip().split("\n")
    assert code == 0 and lines[0].startswith("x2,") and len(lines) == 6


def test_dump_symbols(capsys, tmp_path):
    p = tmp_path / "sym.json"
    code, _, _ = run(capsys, "classify", "--dump-symbols", str(p), "--freq", "0.3", "0.2", "0.9")
    d = json.loads(p.read_text())
    names = [s["name"] for s in d["symbols"]]
    assert code == 0 and names == ["A_r", "A_l", "b", "M", "Pi", "beta"]
    assert len(d["symbols"][0]["data"]) == 7


@pytest.mark.parametrize("content, code", [(None, 4), ("{not json", 4), ('{"v_bar": 1, "bogus": 2}', 2),
                                            ('{"rho_bar": -1}', 2)])
def test_bad_configs(capsys, tmp_path, content, code):
    p = tmp_path / "cfg.json"
    if content is not None:
        p.write_text(content)
    assert run(capsys, "classify", "--config", str(p))[0] == code


def test_version(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["--version"])
    assert exc.value.code == 0 and "vsheet" in capsys.readouterr().out
