"""Command-line interface: exit codes, deterministic output, and formats."""
import json

import pytest

from oscchain.cli import main, parse_range
from fractions import Fraction


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_parse_range():
    assert parse_range("0:2:1/2") == [Fraction(0), Fraction(1, 2),
                                      Fraction(1), Fraction(3, 2),
                                      Fraction(2)]
    assert parse_range("3/4") == [Fraction(3, 4)]


def test_spectrum_success(capsys):
    code, out, err = run(capsys, "spectrum", "--case", "twobody_es",
                         "--N", "2")
    assert code == 0
    doc = json.loads(out)
    assert doc["command"] == "spectrum"
    assert doc["results"]["basis_size"] == 3
    assert [ev["value"] for ev in doc["results"]["gauged"]] \
        == ["0/1", "4/1", "8/1"]


def test_integrals_success_and_shape(capsys):
    code, out, _ = run(capsys, "integrals", "--m1", "2", "--m2", "3",
                       "--m3", "5/2")
    assert code == 0
    doc = json.loads(out)
    assert doc["results"]["verdict"]["kind"] == "maximal"
    assert doc["results"]["consistent"] is True


def test_sepvar_success(capsys):
    code, out, _ = run(capsys, "sepvar", "--m1", "1", "--m2", "1",
                       "--m3", "1", "--points", "50")
    assert code == 0
    doc = json.loads(out)
    assert doc["results"]["pushforward_ok"] is True
    assert doc["results"]["A"] == "2/1"
    assert doc["results"]["B"] == "6/1"


def test_qes_success(capsys):
    code, out, _ = run(capsys, "qes", "--N", "1", "--A", "1")
    assert code == 0
    doc = json.loads(out)
    assert doc["results"]["agree"] is True
    assert len(doc["results"]["algebraic"]) == 2


def test_qes_failure_exit_code(capsys):
    code, out, err = run(capsys, "qes", "--N", "1", "--A", "1",
                         "--rtol", "1e-18")
    assert code == 1
    assert "verification failed" in err
    assert "qes-grid-cross-validation" in err


def test_bo_success(capsys):
    code, out, _ = run(capsys, "bo", "--m1", "1/100", "--a", "1", "--b", "1",
                       "--c", "1")
    assert code == 0
    doc = json.loads(out)
    assert abs(doc["results"]["c1_fit"] - 3.0) < 1e-4


def test_curve_json_and_csv(capsys):
    code, out, _ = run(capsys, "curve", "--rho23-range", "0:1:1/2", "--d", "3")
    assert code == 0
    doc = json.loads(out)
    assert doc["results"]["rows"] == [["0/1", "6/1"], ["1/2", "7/1"],
                                      ["1/1", "8/1"]]
    code, out, _ = run(capsys, "curve", "--rho23-range", "0:1:1/2",
                       "--d", "3", "--format", "csv")
    assert code == 0
    assert out.splitlines()[0] == "rho23,E0"


def test_deterministic_output(capsys):
    _, out1, _ = run(capsys, "spectrum", "--case", "general3", "--N", "2",
                     "--m1", "2", "--m2", "3", "--m3", "5/2", "--seed", "11")
    _, out2, _ = run(capsys, "spectrum", "--case", "general3", "--N", "2",
                     "--m1", "2", "--m2", "3", "--m3", "5/2", "--seed", "11")
    assert out1 == out2


def test_input_error_exit_codes(capsys):
    code, _, err = run(capsys, "spectrum", "--case", "general3")
    assert code == 2 and "input error" in err
    code, _, err = run(capsys, "bo", "--m1", "1", "--m2", "1", "--m3", "2")
    assert code == 2
    code, _, _ = run(capsys, "spectrum", "--case", "nonsense", "--N", "1")
    assert code == 2


def test_params_file(tmp_path, capsys):
    f = tmp_path / "p.json"
    f.write_text(json.dumps({"case": "general3", "m": [2, 3, "5/2"],
                             "springs": [1, 1, 1], "omega": 1, "d": 4}))
    code, out, _ = run(capsys, "integrals", "--params", str(f))
    assert code == 0
    doc = json.loads(out)
    assert doc["params"]["d"] == 4
    # inline flag overrides the file
    code, out, _ = run(capsys, "integrals", "--params", str(f), "--d", "2")
    assert json.loads(out)["params"]["d"] == 2


def test_infinite_mass_flag(capsys):
    code, out, _ = run(capsys, "spectrum", "--case", "molecular3",
                       "--m2", "inf", "--m3", "inf", "--c", "0",
                       "--rho23", "2", "--N", "1")
    assert code == 0
    doc = json.loads(out)
    assert doc["params"]["m"][1] == "inf"


def test_verify_all(capsys):
    code, out, _ = run(capsys, "verify-all", "--m1", "2", "--m2", "3",
                       "--m3", "5")
    assert code == 0
    doc = json.loads(out)
    assert doc["results"]["all_ok"] is True
    assert all(doc["results"]["checks"].values())
