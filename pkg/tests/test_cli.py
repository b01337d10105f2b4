from __future__ import annotations

import csv
import io
import json
import subprocess
import sys

import pytest

from cyclohodge import runner
from cyclohodge.cli import main
from cyclohodge.fourier import IdentityViolation
from cyclohodge.runner import CheckRecord, RunConfig, VerificationReport


def invoke(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def floats_outside_numeric(obj, key=""):
    if isinstance(obj, float):
        return [] if key.startswith("numeric_") else [key]
    if isinstance(obj, dict):
        inherited = key if key.startswith("numeric_") else ""
        return [b for k, v in obj.items() for b in floats_outside_numeric(v, inherited or k)]
    if isinstance(obj, list):
        return [b for v in obj for b in floats_outside_numeric(v, key)]
    return []


def test_verify_fourier_passes(capsys):
    code, out, _ = invoke(capsys, "verify-fourier", "--p", "5", "--r", "1", "--n-max", "10")
    data = json.loads(out)
    assert code == 0 and data["summary"]["fail"] == 0 and data["summary"]["pass"] > 0


def test_center_json(capsys):
    code, out, _ = invoke(capsys, "center", "--p", "3", "--r", "2", "--n", "2")
    row = json.loads(out)["rows"][0]
    assert code == 0 and row["tower_dim"] == 3 and row["level_dims"] == [1, 3]


def test_table_has_q2_rows(capsys):
    code, out, _ = invoke(capsys, "table", "--p-max", "2", "--r-max", "1", "--n-max", "3")
    rows = json.loads(out)["rows"]
    assert code == 0
    assert [r for r in rows if r["q"] == 2 and r["tower_dim"] == 0 and r["ambient_dim"] == 0]


def test_table_csv(capsys):
    code, out, _ = invoke(capsys, "--format", "csv", "table", "--p-max", "3", "--r-max", "2",
                          "--n-max", "4")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0
    assert {(r["q"], r["n"]) for r in rows} >= {("9", "2"), ("3", "4"), ("4", "3")}
    assert all(r["exotic_gap"] in ("True", "False") for r in rows)


def test_characters_csv(capsys):
    code, out, _ = invoke(capsys, "characters", "--q", "5", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and len(rows) == 4
    odd = [r for r in rows if r["parity"] == "odd"]
    assert {r["a=2"] for r in odd} == {"z4^1", "z4^3"}


def test_characters_odd_only(capsys):
    _, out, _ = invoke(capsys, "characters", "--q", "16", "--odd-only")
    assert len(json.loads(out)["rows"]) == 4


def test_gauss_and_classnum(capsys):
    code, out, _ = invoke(capsys, "gauss", "--q", "25")
    assert code == 0 and json.loads(out)["summary"]["fail"] == 0
    code, out, _ = invoke(capsys, "classnum", "--p-max", "43", "--n", "5")
    data = json.loads(out)
    assert code == 0
    assert [c["status"] for c in data["checks"] if c["params"]["p"] == 3] == ["skipped"]
    row7 = next(r for r in data["rows"] if r["p"] == 7)
    assert row7["numeric_L1"]["precision_bits"] == 53


def test_verify_tower_random_samples(capsys):
    code, out, _ = invoke(capsys, "verify-tower", "--p", "3", "--r", "3", "--n", "2",
                          "--random-samples", "20", "--seed", "11")
    data = json.loads(out)
    assert code == 0 and data["config"]["seed"] == 11
    assert data["rows"][0]["tower_dim"] == 9


def test_text_format(capsys):
    code, out, _ = invoke(capsys, "center", "--p", "2", "--r", "3", "--n", "3", "--format", "text")
    assert code == 0 and out.startswith("cyclohodge ") and "tower_dim=2" in out


def test_out_path(tmp_path, capsys):
    target = tmp_path / "report.json"
    code, out, _ = invoke(capsys, "center", "--p", "5", "--r", "1", "--n", "2", "--out", str(target))
    assert code == 0 and out == ""
    assert json.loads(target.read_text())["rows"][0]["tower_dim"] == 2


def test_only_exact_values_in_json(capsys):
    for argv in (["classnum", "--p-max", "31"], ["table", "--p-max", "5", "--r-max", "2",
                                                "--n-max", "4"], ["gauss", "--q", "9"]):
        _, out, _ = invoke(capsys, *argv)
        assert floats_outside_numeric(json.loads(out)) == []


def test_deterministic_and_jobs_independent(capsys):
    argv = ["table", "--p-max", "5", "--r-max", "2", "--n-max", "5"]
    _, a, _ = invoke(capsys, *argv)
    _, b, _ = invoke(capsys, *argv)
    _, c, _ = invoke(capsys, *argv, "--jobs", "3")
    assert a == b == c


def test_timings_flag_records_wall_time(capsys):
    _, out, _ = invoke(capsys, "center", "--p", "5", "--r", "1", "--n", "2", "--timings")
    assert json.loads(out)["checks"][0]["wall_time"] >= 0


@pytest.mark.parametrize("argv", [
    ["center", "--p", "4", "--r", "1", "--n", "3"],
    ["center", "--p", "3", "--r", "2", "--n", "3"],
    ["center", "--p", "3", "--r", "0", "--n", "2"],
    ["classnum", "--p-max", "20", "--n", "0"],
    ["characters", "--q", "12"],
])
def test_bad_values_exit_2(capsys, argv):
    code, out, err = invoke(capsys, *argv)
    assert code == 2 and out == "" and "error" in err


def test_bad_flags_exit_2(capsys):
    with pytest.raises(SystemExit) as info:
        main(["center", "--p", "3"])
    assert info.value.code == 2
    with pytest.raises(SystemExit) as info:
        main(["--format", "xml", "center", "--p", "3", "--r", "1", "--n", "2"])
    assert info.value.code == 2


def test_failure_exit_1_with_witness(capsys, monkeypatch):
    def broken(n, q, strict=True):
        raise IdentityViolation("shoulder", {"n": n, "q": q, "chi": "chi_5[1]"})

    monkeypatch.setattr(runner, "verify_shoulder", broken)
    code, out, _ = invoke(capsys, "verify-fourier", "--p", "5", "--r", "1", "--n-max", "3")
    data = json.loads(out)
    failed = [c for c in data["checks"] if c["status"] == "fail"]
    assert code == 1 and failed and failed[0]["witness"]["chi"] == "chi_5[1]"
    assert data["summary"]["fail"] == len(failed)


def test_report_invariants():
    with pytest.raises(ValueError):
        CheckRecord("x", {}, "fail")
    with pytest.raises(ValueError):
        CheckRecord("x", {}, "maybe")
    rep = VerificationReport({}, [CheckRecord("a", {}, "pass"), CheckRecord("b", {}, "skipped")])
    assert rep.summary == {"pass": 1, "fail": 0, "skipped": 1, "total": 2} and rep.exit_code == 0
    with pytest.raises(ValueError):
        RunConfig("center", format="yaml")


def test_console_entry_point():
    out = subprocess.run([sys.executable, "-m", "cyclohodge", "center", "--p", "5", "--r", "1",
                          "--n", "3", "--format", "text"], capture_output=True, text=True)
    assert out.returncode == 0 and "tower_dim=2" in out.stdout
