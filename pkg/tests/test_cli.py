import io
import json
import os
import subprocess
import sys

import pytest

from cfineq.cli import EXIT_FAILED, EXIT_OK, EXIT_USAGE, render, run_command

from conftest import GOLDEN

CASES = json.loads((GOLDEN / "cases.json").read_text())


def run(argv, env=None):
    out, err = io.StringIO(), io.StringIO()
    old = dict(os.environ)
    try:
        if env:
            os.environ.update(env)
        code = run_command(argv, stdout=out, stderr=err)
    finally:
        os.environ.clear()
        os.environ.update(old)
    return code, out.getvalue(), err.getvalue()


@pytest.mark.parametrize("case", CASES, ids=[c["name"] for c in CASES])
def test_golden(case):
    code, out, err = run(case["argv"])
    assert code == case["exit"]
    assert out == (GOLDEN / f"{case['name']}.out").read_text()
    if code == EXIT_USAGE:
        assert out == "" and err.strip()


def test_exit_codes_cover_contract():
    codes = {c["exit"] for c in CASES}
    assert codes == {EXIT_OK, EXIT_USAGE, EXIT_FAILED}


def test_young_json_schema():
    code, out, _ = run(["young", "--a", "4", "--b", "1", "--lambda", "0.5", "--json"])
    record = json.loads(out)
    assert code == 0
    assert (record["lower"], record["middle"], record["upper"]) == (0.28125, 0.5, 1.125)
    for key in ("slack_lower", "slack_upper", "lower_ok", "upper_ok"):
        assert key in record


def test_failure_report_pinpoints_inputs():
    code, out, _ = run(["arith-scan", "--n-max", "12", "--variant", "as-printed", "--json"])
    record = json.loads(out)
    assert code == EXIT_FAILED and record["failures"] > 0
    assert {"n", "k", "family"} <= set(record["examples"][0])


def test_seed_from_environment():
    argv = ["verify", "--suite", "sums", "--trials", "20", "--json"]
    _, env_out, _ = run(argv, env={"CFINEQ_SEED": "99"})
    _, flag_out, _ = run(argv + ["--seed", "99"])
    _, other_out, _ = run(argv + ["--seed", "98"])
    assert env_out == flag_out != other_out
    code, _, err = run(argv, env={"CFINEQ_SEED": "abc"})
    assert code == EXIT_USAGE and "CFINEQ_SEED" in err


def test_subprocess_runs_are_byte_identical():
    argv = [sys.executable, "-m", "cfineq", "verify", "--suite", "matrix", "--trials", "4",
            "--seed", "11", "--dims", "2,3", "--json"]
    first = subprocess.run(argv, capture_output=True, check=False)
    second = subprocess.run(argv, capture_output=True, check=False)
    assert first.returncode == 0
    assert first.stdout == second.stdout and first.stdout


def test_subprocess_exit_two():
    argv = [sys.executable, "-m", "cfineq", "arith", "--n", "6", "--k", "1",
            "--variant", "as-printed"]
    assert subprocess.run(argv, capture_output=True, check=False).returncode == EXIT_FAILED


def test_nonfinite_values_render_as_strings():
    out = render({"upper": float("inf")}, "json")
    assert json.loads(out) == {"upper": "inf"}


def test_floats_round_trip():
    value = 0.1 + 0.2
    assert json.loads(render({"x": value}, "json"))["x"] == value


def test_tol_flag_changes_tolerance():
    _, out, _ = run(["young", "--a", "4", "--b", "1", "--lambda", "0.5", "--tol", "1e-6",
                     "--json"])
    assert json.loads(out)["tol"] == pytest.approx(1.625e-6)


def test_help_exits_zero():
    code, out, _ = run(["--help"])
    assert code == EXIT_OK and "verify" in out
