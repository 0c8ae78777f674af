from __future__ import annotations

import json
import subprocess
import sys
from pathlib import Path

import pytest

from csdilog.cli import JobConfig, main, run

GOLDEN = Path(__file__).parent / "golden"
A11 = ["--B", "[[0,-2],[2,0]]", "--delta", "2,2"]
B2 = ["--B", "[[0,-1],[2,0]]", "--delta", "1,2"]


def test_build_a11_matches_golden(tmp_path):
    out = tmp_path / "a11.json"
    assert main(["build", *A11, "--level", "8", "-o", str(out)]) == 0
    assert out.read_text() == (GOLDEN / "a11_level8.json").read_text()


def test_build_is_deterministic(tmp_path, capsys):
    assert main(["build", *B2, "--level", "5"]) == 0
    first = capsys.readouterr().out
    assert main(["build", *B2, "--level", "5"]) == 0
    assert capsys.readouterr().out == first


def test_di_level1_passes_with_zero_residual(capsys):
    assert main(["di", *A11, "--level", "1", "--symbolic"]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["pass"] and rep["symbolic"]["symbolic_zero"]


def test_check_passes_on_golden_and_fails_on_edited_file(tmp_path, capsys):
    assert main(["check", "--csd", str(GOLDEN / "a11_level8.json")]) == 0
    obj = json.loads((GOLDEN / "a11_level8.json").read_text())
    ray = next(w for w in obj["walls"] if w["normal"] == [2, 1])
    ray["factors"][0]["s"] = 2
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(obj))
    capsys.readouterr()
    assert main(["check", "--csd", str(bad)]) == 1
    assert json.loads(capsys.readouterr().out)["consistent"] is False


def test_check_reports_json(tmp_path, capsys):
    obj = json.loads((GOLDEN / "b2_level12.json").read_text())
    obj["walls"] = [w for w in obj["walls"] if w["normal"] != [1, 1]]
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(obj))
    assert main(["check", "--csd", str(bad)]) == 1
    assert json.loads(capsys.readouterr().out)["consistent"] is False


def test_di_numeric_and_scale_check(capsys):
    assert main(["di", *B2, "--level", "12", "--numeric", "--samples", "100", "--seed", "3"]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["numeric"]["max_residual"] < 1e-10
    assert main(["di", *A11, "--level", "3", "--scale-check", "--samples", "10", "--scale-grid", "1e-3,1e-1,9"]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert 3.7 <= rep["scaling"]["slope"] <= 4.3


def test_di_numeric_fails_for_truncated_affine(capsys):
    assert main(["di", *A11, "--level", "3", "--numeric", "--samples", "5"]) == 1
    assert json.loads(capsys.readouterr().out)["pass"] is False


def test_di_from_stored_csd(capsys):
    assert main(["di", "--csd", str(GOLDEN / "b2_level12.json")]) == 0
    assert json.loads(capsys.readouterr().out)["pass"]


def test_trace_b2(tmp_path):
    out = tmp_path / "trace.json"
    assert main(["trace", *B2, "--max-level", "12", "-o", str(out)]) == 0
    obj = json.loads(out.read_text())
    assert obj["pass"] and len(obj["stages"]) == 4
    assert obj["di_terms_per_step"][0] == 2


def test_trace_with_input_product(tmp_path, capsys):
    prod = tmp_path / "p.json"
    prod.write_text(json.dumps([{"m": [0, 1], "c": "1"}, {"m": [1, 0], "c": "1"}]))
    assert main(["trace", "--B", "[[0,-1],[1,0]]", "--delta", "1,1", "--max-level", "4", "--product", str(prod)]) == 0
    obj = json.loads(capsys.readouterr().out)
    assert [f["m"] for f in obj["ordered"]] == [[1, 0], [1, 1], [0, 1]]


@pytest.mark.parametrize(
    "argv",
    [
        ["build", "--B", "[[0,-2],[1,0]]", "--delta", "2,2", "--level", "3"],
        ["build", *A11, "--level", "0"],
        ["build", *A11],
        ["check", "--csd", "/nonexistent/file.json"],
        ["di", "--B", "[[0,0,0],[0,0,0],[0,0,0]]", "--delta", "1,1,1", "--level", "2"],
    ],
)
def test_invalid_input_exits_2(argv, capsys):
    assert main(argv) == 2
    assert "error:" in capsys.readouterr().err


def test_argparse_errors_exit_2():
    with pytest.raises(SystemExit) as exc:
        main(["build", "--B", "not json"])
    assert exc.value.code == 2


def test_run_with_config_object(tmp_path):
    cfg = JobConfig(command="build", B=[[0, -1], [4, 0]], delta=[1, 4], level=8, output=str(tmp_path / "a22.json"))
    assert run(cfg) == 0
    assert (tmp_path / "a22.json").read_text() == (GOLDEN / "a22_level8.json").read_text()


def _run_module(log_level, *argv):
    env = {"CSD_LOG": log_level, "PATH": "/usr/bin:/bin", "PYTHONPATH": str(Path(__file__).parents[1] / "src")}
    return subprocess.run([sys.executable, "-m", "csdilog", *argv], capture_output=True, text=True, env=env)


def test_module_entry_point_honours_log_level():
    proc = _run_module("info", "check", "--csd", str(GOLDEN / "b2_level12.json"))
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["consistent"] is True
    assert "INFO" in proc.stderr


def test_unknown_log_level_falls_back_quietly():
    proc = _run_module("chatty", "build", *B2, "--level", "3")
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["level"] == 3
    assert proc.stderr == ""
