from __future__ import annotations

import json
import subprocess
import sys

import pytest

from fodlab.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_fwd(capsys):
    code, out, _ = run_cli(capsys, "fwd", "--map", "[x0^2] : 1 -> 1")
    assert code == 0
    assert "fib:  [2*x0*x1] : 2 -> 1" in out


def test_rev(capsys):
    code, out, _ = run_cli(capsys, "rev", "--map", "[x0*x1] : 2 -> 1")
    assert code == 0
    assert "[x1*x2; x0*x2] : 3 -> 2" in out


def test_rdc2cdc_verify(capsys):
    code, out, _ = run_cli(capsys, "rdc2cdc", "--map", "[x0*x1] : 2 -> 1", "--verify")
    assert code == 0
    assert out.count("[x0*x3 + x1*x2] : 4 -> 1") == 3
    assert out.strip().endswith("equal")


def test_linearity(capsys):
    code, out, _ = run_cli(capsys, "linearity", "--map", "[3*x0] : 1 -> 1")
    assert (code, out.strip()) == (0, "linear")
    code, out, _ = run_cli(capsys, "linearity", "--map", "[x0^2] : 1 -> 1")
    assert out.startswith("not linear")
    assert "[x0^2; 2*x0*x1] : 2 -> 2" in out and "[x0^2; x1^2] : 2 -> 2" in out
    code, out, _ = run_cli(capsys, "linearity", "--map", "[x0 + x1; x1] : 2 -> 2",
                           "--triv-a", "1,1; 0,1", "--triv-b", "1,1; 0,1")
    assert out.strip() == "linear"


def test_parse_error_exit_code(capsys):
    code, _, err = run_cli(capsys, "fwd", "--map", "[x0 +] : 1 -> 1")
    assert code == 2 and "byte" in err


def test_singular_trivialization(capsys):
    code, _, err = run_cli(capsys, "linearity", "--map", "[x0] : 1 -> 1", "--triv-a", "0")
    assert code == 2 and "singular" in err


def test_unknown_suite(capsys):
    code, _, err = run_cli(capsys, "check", "--suite", "bogus")
    assert code == 2 and "unknown suite" in err


def test_check_text_and_exit_status(capsys):
    code, out, _ = run_cli(capsys, "check", "--suite", "cdc", "--trials", "5")
    assert code == 0 and "cdc: passed" in out
    code, out, _ = run_cli(capsys, "check", "--suite", "mutant-cdc", "--trials", "20")
    assert code == 1 and "[FAIL]" in out


def test_check_json_determinism_and_seed_env(capsys, monkeypatch):
    args = ("check", "--suite", "rdc", "--trials", "10", "--format", "json")
    _, a, _ = run_cli(capsys, *args, "--seed", "3")
    _, b, _ = run_cli(capsys, *args, "--seed", "3")
    assert a == b
    doc = json.loads(a)
    assert doc["passed"] and "wall_time" not in doc["suites"][0]
    monkeypatch.setenv("FODLAB_SEED", "3")
    _, c, _ = run_cli(capsys, *args, "--seed", "99")
    assert c == a


def test_timing_flag(capsys):
    _, out, _ = run_cli(capsys, "check", "--suite", "cdc", "--trials", "2", "--format", "json", "--timing")
    assert "wall_time" in json.loads(out)["suites"][0]


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "fodlab", "fwd", "--map", "[x0] : 1 -> 1"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and "[x1] : 2 -> 1" in proc.stdout


def test_help_lists_subcommands(capsys):
    with pytest.raises(SystemExit):
        main(["--help"])
    out, _ = capsys.readouterr()
    for cmd in ("fwd", "rev", "rdc2cdc", "linearity", "check"):
        assert cmd in out
