import csv
import io
import json
import subprocess
import sys

import pytest

from phasequant import cli


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def rows(text):
    return list(csv.reader(io.StringIO(text)))


def test_fmt_fifteen_significant_digits():
    assert cli.fmt(1 / 3) == "0.333333333333333"
    assert cli.fmt(-0.0) == "0"
    assert cli.fmt(2) == "2"
    assert cli.fmt(float("nan")) == "nan"
    assert cli.fmt(True) == "true"


def test_coherent_ground_state(capsys):
    code, out, _ = run(capsys, "coherent", "--k", "0.5", "--rho", "0", "--alpha", "0")
    assert code == 0
    header, values = rows(out)
    rec = dict(zip(header, values))
    assert float(rec["mean_cos"]) == 0.0
    assert float(rec["mean_K3"]) == 0.5


def test_coherent_json_schema(capsys):
    code, out, _ = run(capsys, "coherent", "--k", "1", "--rho", "2", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["schema"] == "phasequant/1"
    assert doc["var_K1"] * doc["var_K2"] == pytest.approx(0.25 * doc["mean_K3"] ** 2, rel=1e-12)


def test_spectrum_k1(capsys):
    code, out, _ = run(capsys, "spectrum", "--k", "1", "--dim", "2000")
    assert code == 0
    r = rows(out)
    assert r[0] == ["index", "eigenvalue"]
    vals = [float(v) for _, v in r[1:]]
    assert len(vals) == 2000
    assert all(abs(v) <= 1 + 1e-3 for v in vals)


def test_output_is_deterministic(capsys):
    a = run(capsys, "spectrum", "--k", "0.7", "--dim", "64")[1]
    b = run(capsys, "spectrum", "--k", "0.7", "--dim", "64")[1]
    assert a == b


def test_dump_operator_csv_and_json(capsys):
    code, out, _ = run(capsys, "dump-operator", "CosPhi", "1", "4")
    assert code == 0
    r = rows(out)
    assert r[0] == ["row", "col", "re", "im"]
    entries = {(int(a), int(b)): float(c) for a, b, c, _ in r[1:]}
    assert entries[(0, 1)] == entries[(1, 0)] == pytest.approx(1.5 * 2 ** 0.5 / 4)
    code, out, _ = run(capsys, "dump-operator", "Kplus", "1", "3", "--format", "json")
    doc = json.loads(out)
    assert doc["schema"] == "phasequant/1" and doc["kind"] == "Kplus"


def test_two_mode(capsys):
    code, out, _ = run(capsys, "two-mode", "6")
    assert code == 0
    r = rows(out)
    assert r[0] == ["delta", "branch", "k", "multiplicity", "max_defect"]
    assert sum(int(x[3]) for x in r[1:]) == 36
    code, out, _ = run(capsys, "two-mode", "6", "--format", "json")
    doc = json.loads(out)
    assert doc["dirac_eigen_ok"] and max(doc["commutator_defect"]) < 1e-12


def test_out_file(capsys, tmp_path):
    target = tmp_path / "sub" / "s.csv"
    code, out, _ = run(capsys, "spectrum", "--k", "1", "--dim", "12", "--out", str(target))
    assert code == 0 and out == ""
    assert target.read_text().startswith("index,eigenvalue\n")


@pytest.mark.parametrize("argv", [
    ["spectrum", "--k", "-1"],
    ["spectrum", "--k", "1", "--dim", "3"],
    ["coherent", "--k", "1", "--rho", "-2"],
    ["dump-operator", "Nope", "1", "4"],
    ["two-mode", "1"],
])
def test_domain_errors_exit_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert "error" in err


def test_argparse_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as info:
        cli.main(["spectrum"])
    assert info.value.code == 2


def test_convergence_errors_exit_3(capsys, monkeypatch):
    from phasequant.exceptions import ConvergenceError

    def boom(*a, **k):
        raise ConvergenceError("no luck")

    monkeypatch.setattr(cli.spectral, "cos_spectrum", boom)
    code, _, err = run(capsys, "spectrum", "--k", "1", "--dim", "20")
    assert code == 3 and "no luck" in err


def test_config_and_flag_precedence(capsys, tmp_path):
    cfg = tmp_path / "pq.cfg"
    cfg.write_text("# defaults\nspectrum_dim = 30\nformat = json\n")
    code, out, _ = run(capsys, "--config", str(cfg), "spectrum", "--k", "1")
    doc = json.loads(out)
    assert doc["dim"] == 30 and len(doc["eigenvalues"]) == 30
    code, out, _ = run(capsys, "--config", str(cfg), "spectrum", "--k", "1", "--dim", "12", "--format", "csv")
    assert len(rows(out)) == 13


def test_bad_config(capsys, tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("spectrum_dim 30\n")
    assert run(capsys, "--config", str(cfg), "spectrum", "--k", "1")[0] == 2
    cfg.write_text("unknown = 1\n")
    assert run(capsys, "--config", str(cfg), "spectrum", "--k", "1")[0] == 2
    cfg.write_text("spectrum_dim = lots\n")
    assert run(capsys, "--config", str(cfg), "spectrum", "--k", "1")[0] == 2
    assert run(capsys, "--config", str(tmp_path / "missing"), "spectrum", "--k", "1")[0] == 2


def test_reproduce_k1_bound(capsys, tmp_path):
    code, _, err = run(capsys, "reproduce", "--out", str(tmp_path), "--only", "k1_bound")
    assert code == 0
    report = json.loads((tmp_path / "report.json").read_text())
    assert report["schema"] == "phasequant/1"
    assert report["claims"]["k1_bound"]["value"] == pytest.approx(0.162, abs=5e-4)
    assert (tmp_path / "01_k1_bound.csv").read_text().startswith("quantity,value\n")


def test_reproduce_env_default_dir(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv(cli.ENV_OUT_DIR, str(tmp_path / "envout"))
    code, _, _ = run(capsys, "reproduce", "--only", "ground_state")
    assert code == 0
    assert (tmp_path / "envout" / "report.json").exists()


def test_reproduce_failure_lists_claims(capsys, tmp_path):
    code, _, err = run(capsys, "reproduce", "--out", str(tmp_path), "--only", "correspondence")
    assert code == 1
    assert "commutator_slope" in err
    report = json.loads((tmp_path / "report.json").read_text())
    assert report["passed"] is False


def test_reproduce_unwritable_target(capsys, tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    code, _, err = run(capsys, "reproduce", "--out", str(blocker / "res"), "--only", "k1_bound")
    assert code == 2 and "not writable" in err
    assert blocker.read_text() == "x"


def test_reproduce_unknown_claim(capsys, tmp_path):
    assert run(capsys, "reproduce", "--out", str(tmp_path), "--only", "bogus")[0] == 2
    assert not (tmp_path / "report.json").exists()


def test_scan_k_json(capsys, tmp_path):
    cfg = tmp_path / "fast.cfg"
    cfg.write_text("grid_points = 300\n")
    code, out, err = run(capsys, "--config", str(cfg), "scan-k", "--lo", "0.3", "--hi", "0.34",
                         "--tol", "5e-3", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    lo, hi = doc["threshold_bracket"]
    assert 0.30 <= lo < hi <= 0.34 and hi - lo <= 5e-3
    assert "threshold bracket" in err


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "phasequant", "coherent", "--k", "1", "--rho", "0"],
                       capture_output=True, text=True, check=False)
    assert r.returncode == 0
    assert r.stdout.startswith("k,rho,alpha,")
