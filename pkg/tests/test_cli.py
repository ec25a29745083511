import json

import numpy as np
import pytest

from confsphere import cli, sphgrid as sg, verify


def run_cli(args, capsys):
    code = cli.main(args)
    out = capsys.readouterr().out
    return code, out


def test_pair_constant_prints_8pi(capsys):
    code, out = run_cli(["pair", "--s", "2", "--f", "const:1"], capsys)
    assert code == 0
    blob = json.loads(out)
    value = float(blob["value"][0])
    assert abs(value - 8 * np.pi) < 1e-10
    # twelve significant digits in scientific notation
    assert blob["value"][0] == "2.51327412287e+01"


def test_residue_constant_prints_pi(capsys):
    code, out = run_cli(["residue", "--k", "0", "--f", "const:1"], capsys)
    blob = json.loads(out)
    assert abs(float(blob["residue"][0]) - np.pi) < 1e-9
    assert {"center", "radius", "residue", "regular", "condition"} <= blob.keys()


def test_pair_with_coefficient_file(tmp_path, capsys):
    c = sg.random_coeffs(6, 77)
    path = tmp_path / "f.json"
    sg.save_coeffs(path, c)
    code, out = run_cli(["pair", "--s", "1.5", "--f", str(path)], capsys)
    from confsphere.mero import pair_distance_power
    from confsphere.lorentz import Dimension
    want = pair_distance_power(Dimension(3), 1.5, c)
    blob = json.loads(out)
    assert abs(complex(float(blob["value"][0]), float(blob["value"][1])) - want) \
        <= 1e-9 * abs(want)


def test_multiplier_csv(tmp_path, capsys):
    code, out = run_cli(["--out-dir", str(tmp_path), "multiplier",
                         "--kind", "gjms", "--k", "1", "--L", "8"], capsys)
    assert code == 0
    lines = (tmp_path / "multiplier_gjms.csv").read_text().strip().splitlines()
    assert lines[0] == "l,re,im"
    assert len(lines) == 10
    l2 = lines[3].split(",")
    assert abs(float(l2[1]) - (-6.0)) < 1e-10   # Delta_1 on degree 2


def test_trilinear_command(tmp_path, capsys):
    paths = []
    for j in range(3):
        c = sg.coeffs_constant(1.0, 2)
        p = tmp_path / f"f{j}.json"
        sg.save_coeffs(p, c)
        paths.append(str(p))
    code, out = run_cli(["trilinear", "--alpha", "3", "1", "1",
                         "--f1", paths[0], "--f2", paths[1], "--f3", paths[2],
                         "--grid", "16", "32"], capsys)
    blob = json.loads(out)
    want = 2 * (4 * np.pi) ** 3
    assert abs(float(blob["value"][0]) - want) < 1e-6 * want
    assert blob["method"] == "direct"
    assert blob["grid"] == [16, 32]
    assert float(blob["truncation_error_estimate"]) < 1e-10


def test_trilinear_lambda_conversion(tmp_path, capsys):
    p = tmp_path / "c.json"
    sg.save_coeffs(p, sg.coeffs_constant(1.0, 2))
    code, out = run_cli(["trilinear", "--lam", "1.5", "1.25", "1.25",
                         "--f1", str(p), "--f2", str(p), "--f3", str(p),
                         "--grid", "16", "32"], capsys)
    blob = json.loads(out)
    # lambda (1.5,1.25,1.25) -> alpha (1,1.5,1.5)
    assert abs(float(blob["alpha"][0][0]) - 1.0) < 1e-12
    assert abs(float(blob["alpha"][1][0]) - 1.5) < 1e-12


def test_pole_scan_command(capsys):
    code, out = run_cli(["pole-scan", "--family", "alpha3",
                         "--window", "-4", "0"], capsys)
    blob = json.loads(out)
    fams = sorted((p["family"], round(float(p["position"][0])))
                  for p in blob["poles"])
    assert ("alpha3", -1) in fams and ("alpha3", -3) in fams
    assert any(f == "sum" for f, _ in fams)


def test_verify_quick_report(tmp_path, capsys):
    code, out = run_cli(["--out-dir", str(tmp_path), "verify", "--quick",
                         "--suite", "geometry", "--suite", "residues",
                         "--report", "r.json"], capsys)
    assert code == 0
    report = json.loads((tmp_path / "r.json").read_text())
    assert verify.validate_report(report) == []
    assert report["all_passed"] is True
    names = [s["name"] for s in report["suites"]]
    assert names == ["geometry", "residues"]
    assert all(c["identity"] for s in report["suites"] for c in s["checks"])


def test_verify_fault_injection_fails_residues(tmp_path, capsys):
    code, out = run_cli(["--out-dir", str(tmp_path), "verify", "--quick",
                         "--fault-inject", "--suite", "residues",
                         "--report", "fault.json"], capsys)
    assert code == 1
    report = json.loads((tmp_path / "fault.json").read_text())
    suite = report["suites"][0]
    assert not suite["passed"]
    failing = [c for c in suite["checks"] if not c["passed"]]
    assert any(c["id"] == "res-operator" for c in failing)
    assert all(c["identity"] for c in failing)


def test_verify_determinism(tmp_path, capsys):
    for name in ("a.json", "b.json"):
        run_cli(["--out-dir", str(tmp_path), "verify", "--quick",
                 "--suite", "residues", "--report", name], capsys)
    a = json.loads((tmp_path / "a.json").read_text())
    b = json.loads((tmp_path / "b.json").read_text())

    def strip(rep):
        rep = json.loads(json.dumps(rep))
        rep.pop("timings")
        for s in rep["suites"]:
            s.pop("elapsed_s")
        return rep

    assert strip(a) == strip(b)


def test_config_file_and_env_outdir(tmp_path, capsys, monkeypatch):
    cfgfile = tmp_path / "cfg.json"
    cfgfile.write_text(json.dumps({"seed": 99, "quick": True}))
    monkeypatch.setenv(cli.OUT_ENV, str(tmp_path / "outs"))
    code, out = run_cli(["verify", "--config", str(cfgfile),
                         "--suite", "residues"], capsys)
    assert code == 0
    report = json.loads((tmp_path / "outs" / "verify_report.json").read_text())
    assert report["config"]["seed"] == 99


def test_config_rejects_unknown_keys(tmp_path):
    cfgfile = tmp_path / "bad.json"
    cfgfile.write_text(json.dumps({"no_such_option": 1}))
    with pytest.raises(ValueError, match="unknown config key"):
        verify.RunConfig.from_json(cfgfile)
