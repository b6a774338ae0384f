import json
from importlib import resources


from jetstress.cli import run_cli


def shipped(name):
    return str(resources.files("jetstress") / "scenarios" / f"{name}.json")


def test_verify_first_worked(capsys):
    assert run_cli(["verify-first", "--scenario", shipped("worked_first_order")]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload[0]["identities"][0]["abs_residual"] <= 1e-15


def test_verify_second_seed():
    assert run_cli(["verify-second", "--seed", "7", "--tol", "1e-9"]) == 0


def test_missing_scenario_is_invalid(capsys):
    assert run_cli(["verify-first", "--scenario", "missing.json"]) == 2
    assert "invalid input" in capsys.readouterr().err


def test_unknown_flag_prints_usage(capsys):
    assert run_cli(["verify-first", "--seed", "1", "--frobnicate"]) == 2
    assert "usage" in capsys.readouterr().err


def test_no_subcommand():
    assert run_cli([]) == 2


def test_residual_failure_exit_code():
    assert run_cli(["verify-second", "--seed", "3", "--tol", "1e-30"]) == 1


def test_mode_mismatch_is_invalid():
    assert run_cli(["verify-first", "--scenario", shipped("worked_second_order")]) == 2


def test_bad_quad_order():
    assert run_cli(["verify-first", "--seed", "1", "--quad-order", "0"]) == 2


def test_edge_cancel_dim_one_is_invalid():
    assert run_cli(["edge-cancel", "--seed", "1", "--dim", "1"]) == 2


def test_report_file_csv(tmp_path, capsys):
    out = tmp_path / "r.csv"
    assert run_cli(["edge-cancel", "--seed", "4", "--dim", "3", "--report", str(out), "--format", "csv"]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "scenario,identity,terms,abs_residual,rel_residual,pass"
    assert capsys.readouterr().out.startswith("PASS")


def test_suite_runs_everything(tmp_path):
    out = tmp_path / "suite.json"
    assert run_cli(["suite", "--report", str(out)]) == 0
    assert len(json.loads(out.read_text())) == 42


def test_fd_flag(capsys):
    assert run_cli(["verify-first", "--scenario", shipped("worked_first_order"), "--fd"]) == 0
    assert json.loads(capsys.readouterr().out)[0]["fd"] is True


def test_unwritable_report():
    assert run_cli(["verify-first", "--seed", "1", "--report", "/nonexistent/dir/r.json"]) == 2


def test_help_exits_cleanly(capsys):
    assert run_cli(["--help"]) == 0
