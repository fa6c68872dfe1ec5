import csv
import io
import json
import subprocess
import sys

import pytest

from dunkl.cli import RunConfig, ConfigError, main, parse_index, read_config_file


def run(args, capsys):
    code = main(args)
    out, err = capsys.readouterr()
    return code, out, err


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_spectrum_levels(capsys):
    code, out, _ = run(["spectrum", "--level-max", "4", "--mu-x", "0.3", "--mu-y", "0.5"], capsys)
    assert code == 0
    data = rows(out)
    level3_polar = [r["label"] for r in data if r["level"] == "3" and r["basis"] == "polar"]
    assert level3_polar == ["|1,1/2;+-⟩", "|1,1/2;-+⟩", "|0,3/2;+-⟩", "|0,3/2;-+⟩"]
    level4_polar = [r["label"] for r in data if r["level"] == "4" and r["basis"] == "polar"]
    assert len(level4_polar) == 5 and "|1,1;--⟩" in level4_polar
    level0 = [r for r in data if r["level"] == "0"]
    assert len(level0) == 2 and all(r["degeneracy"] == "1" for r in level0)
    assert float(level0[0]["energy"]) == pytest.approx(1.8)


def test_spectrum_json(capsys):
    code, out, _ = run(["spectrum", "--level-max", "1", "--format", "json"], capsys)
    assert code == 0
    assert len(json.loads(out)["states"]) == 6


def test_wavefunction_cartesian_ground(capsys):
    code, out, _ = run(["wavefunction", "--kind", "cartesian", "--index", "0,0", "--x=-1:1:3", "--y=-1:1:3"], capsys)
    assert code == 0
    data = rows(out)
    assert len(data) == 9 and all(float(r["real"]) > 0 for r in data)


def test_wavefunction_polar_and_jd(capsys):
    code, out, _ = run(
        ["wavefunction", "--kind", "polar", "--index", "0,1/2,+,-", "--rho", "1:1:1", "--phi", "1.5707963267948966:1.5707963267948966:1"],
        capsys,
    )
    assert code == 0 and len(rows(out)) == 1
    code, out, _ = run(["wavefunction", "--kind", "jacobi-dunkl", "--index", "1,+,+", "--phi", "0.3:1.2:4"], capsys)
    plus = rows(out)
    code, out, _ = run(["wavefunction", "--kind", "jacobi-dunkl", "--index", "1,+,-", "--phi", "0.3:1.2:4"], capsys)
    minus = rows(out)
    for a, b in zip(plus, minus):
        assert float(a["real"]) == pytest.approx(float(b["real"]))
        assert float(a["imag"]) == pytest.approx(-float(b["imag"]))


def test_wavefunction_invalid_index(capsys):
    code, _, err = run(["wavefunction", "--kind", "polar", "--index", "0,0,-,-"], capsys)
    assert code == 1 and "vanishes" in err
    code, _, err = run(["wavefunction", "--kind", "cartesian", "--index", "1"], capsys)
    assert code == 1
    code, _, _ = run(["wavefunction", "--kind", "cartesian", "--index", "0,0", "--x", "bad"], capsys)
    assert code == 1


def test_overlaps(capsys):
    code, out, err = run(["overlaps", "--level", "0", "--level-max", "0", "--format", "json"], capsys)
    assert code == 0 and json.loads(out)["discrepancy"] < 1e-15
    code, out, err = run(["overlaps", "--level", "5", "--level-max", "5", "--tol", "1e-7"], capsys)
    assert code == 0
    data = rows(out)
    assert {r["provenance"] for r in data} == {"closed-form", "diagonalization", "quadrature"}
    code, out, _ = run(["overlaps", "--level", "1", "--level-max", "1", "--format", "json"], capsys)
    payload = json.loads(out)
    assert payload["discrepancy"] < 1e-10 and len(payload["tables"]) == 5


def test_overlaps_level_out_of_range(capsys):
    code, _, err = run(["overlaps", "--level", "6", "--level-max", "4"], capsys)
    assert code == 1 and "level" in err


def test_overlaps_verification_failure(capsys):
    code, _, _ = run(["overlaps", "--level", "4", "--tol", "1e-30"], capsys)
    assert code == 2


def test_check_default_passes(capsys, monkeypatch):
    monkeypatch.setenv("DUNKL_NO_COLOR", "1")
    code, out, err = run(["check"], capsys)
    assert code == 0
    data = rows(out)
    assert len(data) >= 20 and all(r["status"] == "PASS" for r in data)
    assert any(r["identity"].startswith("<g,Df>+<Dg,f>") and float(r["residual"]) < 1e-10 for r in data)
    assert "\033[" not in err


def test_check_failure_exit(capsys):
    code, _, _ = run(["check", "--tol", "1e-300", "--level-max", "1"], capsys)
    assert code == 2


def test_check_json(capsys):
    code, out, _ = run(["check", "--format", "json", "--level-max", "2"], capsys)
    assert code == 0 and all(item["pass"] for item in json.loads(out)["identities"])


@pytest.mark.parametrize(
    "args",
    [
        ["check", "--mu-x", "-0.6"],
        ["check", "--nodes", "4"],
        ["check", "--level-max", "-1"],
        ["check", "--tol", "0"],
        ["bogus"],
        ["spectrum", "--format", "xml"],
        ["check", "--config", "/nonexistent/file.cfg"],
    ],
)
def test_usage_errors(args, capsys):
    with pytest.raises(SystemExit) as exc:
        raise SystemExit(main(args))
    assert exc.value.code == 1


def test_config_file_and_flag_precedence(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# demo\nmu_x = 1.2\nmu_y = 0.1\nlevel_max = 1\nformat = json\n")
    assert read_config_file(str(cfg))["mu_x"] == 1.2
    code, out, _ = run(["spectrum", "--config", str(cfg)], capsys)
    assert json.loads(out)["mu"] == [1.2, 0.1]
    code, out, _ = run(["spectrum", "--config", str(cfg), "--mu-x", "0.4"], capsys)
    assert json.loads(out)["mu"] == [0.4, 0.1]
    bad = tmp_path / "bad.cfg"
    bad.write_text("colour = red\n")
    with pytest.raises(ConfigError):
        read_config_file(str(bad))
    code, _, _ = run(["spectrum", "--config", str(bad)], capsys)
    assert code == 1


def test_deterministic_output_files(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for path in (a, b):
        assert main(["overlaps", "--level", "3", "--out", str(path)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_run_config_validation():
    assert RunConfig().tolerance == 1e-10 and RunConfig().quadrature_nodes == 64
    with pytest.raises(ConfigError):
        RunConfig(output_format="xml")
    with pytest.raises(ConfigError):
        parse_index("polar", "0,x,+,+")


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "dunkl", "spectrum", "--level-max", "0"], capture_output=True, text=True)
    assert proc.returncode == 0 and "|0,0⟩" in proc.stdout
    proc = subprocess.run([sys.executable, "-m", "dunkl", "check", "--mu-x", "-0.6"], capture_output=True, text=True)
    assert proc.returncode == 1
