import json
import math
import subprocess
import sys

import pytest

from conetrace.cli import parse_angle, run
from conetrace.errors import ValidationError


def _run(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


# ---------------------------------------------------------------- angles

@pytest.mark.parametrize("text, value", [("2pi", 2 * math.pi), ("0.75pi", 0.75 * math.pi),
                                         ("3/4pi", 0.75 * math.pi), ("pi/2", math.pi / 2),
                                         ("pi", math.pi), ("3.5", 3.5), ("2*pi", 2 * math.pi)])
def test_parse_angle(text, value):
    assert parse_angle(text) == value


@pytest.mark.parametrize("text", ["", "abc", "-pi", "0", "nan", "2 pie"])
def test_parse_angle_rejects(text):
    with pytest.raises(ValidationError):
        parse_angle(text)


# ---------------------------------------------------------------- commands

def test_coeffs_example(tmp_path, capsys):
    out = tmp_path / "c.json"
    code, _, err = _run(capsys, "coeffs", "--cross-section", "circle", "--angle", "3.14159265",
                        "--m", "2", "--epsilon", "1", "--out", str(out))
    assert code == 0
    doc = json.loads(out.read_text())
    assert set(doc) == {"meta", "result"}
    assert "timestamp" not in doc["meta"]
    res = doc["result"]
    assert res["a_tilde"][0]["value"] == pytest.approx(3.14159265 / 2)
    assert res["c"] == 0.0
    assert res["b_direct"] == pytest.approx(0.125, abs=1e-6)
    # the two constant-term routes disagree: structured warning on stderr, exit 0
    lines = [json.loads(l) for l in err.strip().splitlines()]
    assert any(l.get("warning") == "BDiscrepancyWarning" for l in lines)
    assert res["warnings"][0]["kind"] == "b_discrepancy"


def test_zeta_example(capsys):
    code, out, _ = _run(capsys, "zeta", "--cross-section", "sphere", "--n", "2", "--radius", "1",
                        "--h", "0.5", "--s", "-0.5")
    assert code == 0
    res = json.loads(out)["result"]
    # 2 (2^(2s-1) - 1) zeta(2s - 1) at s = -1/2: 2 (1/4 - 1) zeta(-2) = 0
    assert res["res1"] == pytest.approx(0.0, abs=1e-9)
    assert res["res0"] == pytest.approx(0.0, abs=1e-9)


def test_zeta_eval(capsys):
    code, out, _ = _run(capsys, "zeta", "--cross-section", "circle", "--angle", "2pi",
                        "--s", "1", "--method", "eval")
    assert code == 0
    assert json.loads(out)["result"]["value"] == pytest.approx(math.pi**2 / 3, abs=1e-9)


def test_spectrum_csv_and_json(tmp_path, capsys):
    code, out, _ = _run(capsys, "spectrum", "--cross-section", "circle", "--lambda-max", "30")
    assert code == 0
    rows = out.strip().splitlines()
    assert rows[0] == "nu,k,zero,eigenvalue,multiplicity"
    assert float(rows[1].split(",")[3]) == pytest.approx(5.7832, abs=1e-4)
    code, out, _ = _run(capsys, "spectrum", "--cross-section", "circle", "--lambda-max", "30",
                        "--format", "json")
    modes = json.loads(out)["result"]["modes"]
    assert modes[0]["nu"] == 0.0 and modes[1]["multiplicity"] == 2


def test_verify_example(tmp_path, capsys):
    out = tmp_path / "report.json"
    code, _, _ = _run(capsys, "verify", "--angles", "pi,2pi,4pi", "--out", str(out))
    assert code == 0
    res = json.loads(out.read_text())["result"]
    assert [r["status"] for r in res["rows"]] == ["ok"] * 3
    assert res["all_direct_vs_oracle_pass"]
    assert any("is equal to zero" in n for n in res["notes"])


# ---------------------------------------------------------------- exit codes

@pytest.mark.parametrize("argv", [
    ["coeffs", "--cross-section", "circle", "--angle", "-1", "--m", "2"],
    ["coeffs", "--cross-section", "sphere", "--m", "3"],
    ["coeffs", "--cross-section", "sphere", "--n", "2", "--m", "4"],
    ["coeffs", "--cross-section", "circle", "--m", "2", "--epsilon", "0"],
    ["zeta", "--cross-section", "sphere", "--n", "2", "--s", "0.5", "--method", "eval"],
    ["verify", "--angles", "pi", "--m", "3"],
])
def test_validation_errors_exit_2(argv, capsys):
    code, _, err = _run(capsys, *argv)
    assert code == 2
    assert "error" in json.loads(err.strip().splitlines()[-1])


def test_argparse_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        run(["coeffs", "--cross-section", "cone"])
    assert exc.value.code == 2


def test_missing_files_exit_2(tmp_path, capsys):
    code, _, _ = _run(capsys, "report", str(tmp_path / "nope.json"))
    assert code == 2
    bad = tmp_path / "bad.json"
    bad.write_text("[1, 2]")
    assert _run(capsys, "report", str(bad))[0] == 2
    code, _, _ = _run(capsys, "zeta", "--cross-section", "custom", "--n", "1", "--vol", "1",
                      "--spectrum", str(tmp_path / "missing.csv"), "--s", "1")
    assert code == 2


def test_numeric_failure_exit_3(tmp_path, capsys):
    path = tmp_path / "s.csv"
    path.write_text("lambda,multiplicity\n" + "".join(f"{k * k},2\n" for k in range(1, 40)))
    code, _, err = _run(capsys, "zeta", "--cross-section", "custom", "--n", "1", "--vol",
                        str(2 * math.pi), "--spectrum", str(path), "--h", "0", "--s", "0.75",
                        "--method", "eval")
    assert code == 3
    assert json.loads(err.strip().splitlines()[-1])["error"] == "InsufficientSpectrum"


def test_bad_thread_count_exit_2(capsys, monkeypatch):
    monkeypatch.setenv("CONETRACE_THREADS", "zero")
    code, _, _ = _run(capsys, "spectrum", "--cross-section", "circle", "--lambda-max", "30")
    assert code == 2


# ---------------------------------------------------------------- determinism

def test_report_round_trip_is_bit_identical(tmp_path, capsys):
    first = tmp_path / "a.json"
    second = tmp_path / "b.json"
    argv = ["coeffs", "--cross-section", "sphere", "--n", "3", "--radius", "2", "--m", "4",
            "--epsilon", "0.5"]
    assert _run(capsys, *argv, "--out", str(first))[0] == 0
    assert _run(capsys, "report", str(first), "--out", str(second))[0] == 0
    assert first.read_bytes() == second.read_bytes()
    doc = json.loads(first.read_text())
    assert doc["result"]["c"] == -9 / 64


def test_identical_config_identical_bytes(capsys, monkeypatch):
    argv = ["spectrum", "--cross-section", "circle", "--angle", "0.75pi", "--lambda-max", "800",
            "--format", "json"]
    monkeypatch.setenv("CONETRACE_THREADS", "1")
    _, a, _ = _run(capsys, *argv)
    monkeypatch.setenv("CONETRACE_THREADS", "4")
    _, b, _ = _run(capsys, *argv)
    _, c, _ = _run(capsys, *argv)
    assert a == b == c


def test_console_entry_point(tmp_path):
    out = tmp_path / "z.json"
    proc = subprocess.run([sys.executable, "-m", "conetrace.cli", "zeta", "--cross-section",
                           "circle", "--s", "-0.5", "--out", str(out)],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0, proc.stderr
    assert json.loads(out.read_text())["result"]["res0"] == pytest.approx(-1 / 6, abs=1e-8)
