import csv
import io
import json

import pytest

from lvmelnikov.cli import main
from lvmelnikov.coeffs import CoeffFile


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def coeff_file(tmp_path):
    path = tmp_path / "c.json"
    path.write_text(json.dumps({"family": "X29", "b": 0.0, "c": 1.0, "n": 3,
                                "a": {"1,1": 0.5}, "b_coeffs": {"3,0": 1.0}}))
    return path


def test_eval_csv_schema(capsys, coeff_file):
    code, out, _ = run(capsys, "eval", "--coeffs", str(coeff_file), "--grid", "3")
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["annulus", "h", "M_closed", "M_oracle", "abs_diff"]
    assert len(rows) == 1 + 2 * 3
    for row in rows[1:]:
        assert float(row[4]) <= 1e-8
        assert float(repr(float(row[1]))) == float(row[1])


def test_eval_tolerance_failure(capsys, coeff_file):
    code, _, err = run(capsys, "eval", "--coeffs", str(coeff_file), "--grid", "3", "--tol", "0")
    assert code == 1 and "exceeds" in err


def test_ect_json(capsys):
    code, out, _ = run(capsys, "ect", "--b", "1.2", "--c", "1.8")
    table = json.loads(out)
    assert code == 0
    assert table["U-"] == "FullECT"
    assert table["U+"]["verdict"] == "PartialECT"
    code, out, _ = run(capsys, "ect", "--family", "X210", "--b", "1.0")
    assert json.loads(out) == {"U": "FullECT"}


def test_realize_writes_certified_file(capsys, tmp_path):
    out_file = tmp_path / "r.json"
    code, out, _ = run(capsys, "realize", "--b", "0", "--c", "1", "--u", "3", "--v", "2",
                       "--out", str(out_file))
    assert code == 0
    assert json.loads(out)["certified"] == [3, 2]
    assert CoeffFile.load(out_file).coeffs.n == 3


def test_realize_zero_zero(capsys):
    code, out, _ = run(capsys, "realize", "--b", "0", "--c", "1", "--u", "0", "--v", "0")
    assert code == 0 and json.loads(out)["certified"] == [0, 0]


def test_realize_impossible(capsys):
    code, out, _ = run(capsys, "realize", "--b", "0", "--c", "1", "--u", "3", "--v", "3")
    assert code == 2
    assert json.loads(out)["certificate"]["disjoint"] is True


def test_simulate(capsys, tmp_path):
    cfile = tmp_path / "one.json"
    run(capsys, "realize", "--b", "0", "--c", "1.9", "--u", "1", "--v", "0", "--out", str(cfile))
    code, out, err = run(capsys, "simulate", "--coeffs", str(cfile), "--eps", "1e-4",
                         "--annulus", "U+", "--grid", "21")
    assert code == 0
    assert out.splitlines()[0] == "annulus,h,displacement_over_eps,M_prediction"
    assert json.loads(err)["annuli"]["U+"]["count"] == 1


def test_simulate_eps_zero(capsys, tmp_path):
    cfile = tmp_path / "one.json"
    run(capsys, "realize", "--b", "0", "--c", "1.9", "--u", "1", "--v", "0", "--out", str(cfile))
    out_csv = tmp_path / "d.csv"
    code, _, _ = run(capsys, "simulate", "--coeffs", str(cfile), "--eps", "0",
                     "--grid", "5", "--out", str(out_csv))
    rows = list(csv.DictReader(out_csv.open()))
    assert code == 0 and len(rows) == 10
    assert all(abs(float(r["displacement"])) <= 1e-9 for r in rows)


def test_certify_ect(capsys):
    code, out, _ = run(capsys, "certify", "--suite", "ect")
    report = json.loads(out)
    assert code == 0 and report["passed"]


@pytest.mark.parametrize("argv", [
    ["eval"],
    ["simulate", "--coeffs", "x.json", "--eps", "0.5"],
    ["certify", "--suite", "nope"],
    ["frobnicate"],
])
def test_usage_errors(capsys, argv):
    with pytest.raises(SystemExit) as info:
        main(argv)
    assert info.value.code == 64


def test_missing_file(capsys, tmp_path):
    code, _, err = run(capsys, "eval", "--coeffs", str(tmp_path / "missing.json"))
    assert code == 64 and "error" in err
