"""Command-line behavior: reports, exit codes, determinism."""

import numpy as np
import pytest

from hamrc import CNOT_MATRIX, distance, evaluate_schedule, parse_hamfile, parse_schedule
from hamrc.cli import main

DRIFT = "qubits 2\n1 0:Z\n2 0:X 1:Z\n1 0:Z 1:Z\n"
ZZ = "qubits 2\n1 0:Z 1:Z\n"
CHAIN = (
    "qubits 4\n"
    "1 0:X 1:X\n0.8 1:X 2:X\n1.2 2:X 3:X\n"
    "0.3 0:Z\n-0.4 1:Z\n0.5 2:Z\n0.2 3:Z\n"
)
ISOLATED = "qubits 3\n1 0:X 1:X\n0.5 2:Z\n"


@pytest.fixture
def files(tmp_path):
    paths = {}
    for name, text in [
        ("drift", DRIFT), ("zz", ZZ), ("chain", CHAIN), ("iso", ISOLATED)
    ]:
        p = tmp_path / f"{name}.ham"
        p.write_text(text)
        paths[name] = str(p)
    paths["tmp"] = tmp_path
    return paths


def test_check_reports_connectivity(files, capsys):
    assert main(["check", files["drift"]]) == 0
    out = capsys.readouterr().out
    assert "entangling yes" in out
    assert "edges 0:1" in out
    assert "components 0,1" in out


def test_check_flags_disconnected_registers(files, capsys):
    assert main(["check", files["iso"]]) == 3
    out = capsys.readouterr().out
    assert "entangling no" in out
    assert "components 0,1|2" in out


def test_parse_errors_exit_2(files, capsys, tmp_path):
    bad = tmp_path / "bad.ham"
    bad.write_text("qubits 2\n1 0:Q\n")
    assert main(["check", str(bad)]) == 2
    err = capsys.readouterr().err
    assert "line 2" in err
    assert main(["check", str(tmp_path / "missing.ham")]) == 2


def test_compile_cnot_writes_schedule_and_verifies(files, capsys):
    out_path = str(files["tmp"] / "cnot.hrs")
    code = main([
        "compile", files["drift"], "--gate", "cnot",
        "--epsilon", "1e-3", "--out", out_path,
    ])
    assert code == 0
    summary = capsys.readouterr().out
    assert "steps 16" in summary
    assert "raw_drift_periods 112" in summary

    sched = parse_schedule(open(out_path).read())
    drift = parse_hamfile(DRIFT)
    assert distance(CNOT_MATRIX, evaluate_schedule(sched, drift)) < 1e-3

    assert main(["verify", files["drift"], out_path, "--gate", "cnot"]) == 0
    report = capsys.readouterr().out
    assert "pass yes" in report


def test_compile_without_out_prints_the_schedule(files, capsys):
    code = main([
        "compile", files["drift"], "--gate", "cnot", "--steps", "4",
    ])
    assert code == 0
    out = capsys.readouterr().out
    assert out.startswith("qubits 2\n")
    assert "drift" in out


def test_compile_output_is_deterministic(files, capsys):
    argv = ["compile", files["drift"], "--target", files["zz"],
            "--t", "1.0", "--epsilon", "1e-2"]
    assert main(argv) == 0
    first = capsys.readouterr().out
    assert main(argv) == 0
    second = capsys.readouterr().out
    assert first == second


def test_compile_pair_routes_when_not_adjacent(files, capsys):
    code = main([
        "compile", files["chain"], "--target", files["zz"],
        "--t", "0.5", "--epsilon", "1e-2", "--pair", "0", "3",
        "--out", str(files["tmp"] / "remote.hrs"),
    ])
    assert code == 0
    assert "predicted_error" in capsys.readouterr().out
    code = main([
        "verify", files["chain"], str(files["tmp"] / "remote.hrs"),
        "--target", files["zz"], "--t", "0.5", "--pair", "0", "3",
    ])
    assert code == 0


def test_routing_requires_a_path(files, capsys):
    split = files["tmp"] / "split.ham"
    split.write_text("qubits 4\n1 0:X 1:X\n1 2:X 3:X\n")
    code = main([
        "compile", str(split), "--target", files["zz"],
        "--t", "0.5", "--epsilon", "1e-2", "--pair", "0", "3",
    ])
    assert code == 3
    assert "no coupling path" in capsys.readouterr().err


def test_verify_failure_exits_5(files, capsys):
    out_path = str(files["tmp"] / "rough.hrs")
    main(["compile", files["drift"], "--gate", "cnot", "--steps", "2",
          "--out", out_path])
    capsys.readouterr()
    code = main([
        "verify", files["drift"], out_path, "--gate", "cnot",
        "--tolerance", "1e-8",
    ])
    assert code == 5
    captured = capsys.readouterr()
    assert "pass no" in captured.out
    assert "exceeds tolerance" in captured.err


def test_verify_needs_some_tolerance(files, capsys):
    out_path = str(files["tmp"] / "steps.hrs")
    main(["compile", files["drift"], "--gate", "cnot", "--steps", "4",
          "--out", out_path])
    capsys.readouterr()
    # a steps-only schedule carries no budget, so --tolerance is required
    code = main(["verify", files["drift"], out_path, "--gate", "cnot"])
    assert code == 2


def test_bound_command_prints_plan(files, capsys):
    assert main(["bound", files["drift"], "--gate", "cnot",
                 "--epsilon", "1e-3"]) == 0
    out = capsys.readouterr().out
    assert "bound second_order_cnot" in out
    assert "steps 16" in out

    assert main(["bound", files["drift"], "--target", files["zz"],
                 "--t", "1.0", "--epsilon", "1e-2"]) == 0
    out = capsys.readouterr().out
    assert "bound chained" in out

    assert main(["bound", files["drift"], "--target", files["zz"],
                 "--t", "1.0", "--epsilon", "1e-2", "--bound", "global"]) == 0
    out = capsys.readouterr().out
    assert "bound global" in out
    assert "D 1" in out


def test_infeasible_budget_exits_4(files, capsys):
    code = main(["bound", files["drift"], "--gate", "cnot",
                 "--epsilon", "1e-30"])
    assert code == 4
    assert "steps" in capsys.readouterr().err


def test_dense_cap_env_override(files, capsys, monkeypatch):
    out_path = str(files["tmp"] / "cap.hrs")
    main(["compile", files["drift"], "--gate", "cnot", "--steps", "4",
          "--out", out_path])
    capsys.readouterr()
    monkeypatch.setenv("HAMRC_DENSE_CAP", "1")
    code = main(["verify", files["drift"], out_path, "--gate", "cnot",
                 "--tolerance", "0.1"])
    assert code == 4
    assert "dense cap" in capsys.readouterr().err


def test_gate_rejects_time_flag(files, capsys):
    code = main(["compile", files["drift"], "--gate", "cnot",
                 "--steps", "4", "--t", "1.0"])
    assert code == 2
    code = main(["compile", files["drift"], "--target", files["zz"],
                 "--steps", "4"])
    assert code == 2


def test_reports_can_go_to_files(files, tmp_path):
    report = tmp_path / "check.txt"
    assert main(["check", files["drift"], "--report", str(report)]) == 0
    assert "entangling yes" in report.read_text()
