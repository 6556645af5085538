import json
from pathlib import Path

import pytest

from coechelon.cli import RunConfig, CliError, main

EXAMPLES = Path(__file__).resolve().parents[1] / "examples"


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_classify_phi_file(capsys):
    code, out, _ = run(capsys, "classify", str(EXAMPLES / "phi.kf"), "--p", "1")
    assert code == 0
    assert "topologically_amenable  Fails" in out


def test_classify_grid_json(capsys):
    code, out, _ = run(capsys, "classify", "grid.kf", "--p", "inf", "--json")
    assert code == 0
    d = json.loads(out)
    assert d["properties"]["contractible"]["outcome"] == "Fails"


def test_classify_missing_file(capsys):
    code, _, err = run(capsys, "classify", "missing.kf")
    assert code == 1 and "no such file" in err


def test_classify_user_file(tmp_path, capsys):
    f = tmp_path / "mine.kf"
    f.write_text("family mine { kind = dps; R = 0; alpha(j) = j; r(n) = 1/3^n }\n")
    code, out, _ = run(capsys, "classify", str(f), "--p", "2")
    assert code == 0 and "contractible            Holds" in out
    f.write_text("family mine { v(n,j) = ( }\n")
    code, _, err = run(capsys, "classify", str(f))
    assert code == 1 and "line 1, column" in err


def test_unknown_exit_code(capsys):
    code, _, _ = run(capsys, "classify", "builtin:bounded", "--p", "1")
    assert code == 2


def test_verify_suites(capsys):
    assert run(capsys, "verify", "rademacher", "--J", "8", "--count", "20")[0] == 0
    code, out, _ = run(capsys, "verify", "approx", "--family", "grid", "--eps", "1/10",
                       "--count", "20")
    assert code == 0 and "dropped over 20 runs" in out
    assert run(capsys, "verify", "bogus")[0] == 1
    assert run(capsys, "verify", "section", "--count", "50")[0] == 0
    assert run(capsys, "verify", "witnesses", "-L", "6")[0] == 0
    assert run(capsys, "verify", "projection-bound", "--count", "5", "--J", "5")[0] == 0


def test_witness_commands(capsys):
    code, out, _ = run(capsys, "witness", "grid.kf", "nosplit", "--S", "diagonal")
    assert code == 0
    d = json.loads(out)
    assert d["verified"] and d["R"][:2] == [[1, 2], [2, 1]]
    code, _, err = run(capsys, "witness", "bounded.kf", "unbounded")
    assert code == 1 and "eventually bounded" in err
    code, out, _ = run(capsys, "witness", "unboundedrow.kf", "unbounded", "--p", "1", "-L", "5")
    assert code == 0 and len(json.loads(out)["indices"]) == 5
    code, out, _ = run(capsys, "witness", "grid.kf", "approx", "--eps", "1/100", "--seed", "3")
    assert code == 0 and json.loads(out)["verified"]


def test_check_command(capsys):
    code, out, _ = run(capsys, "check", "grid.kf", "banach", "--S", "row(1)")
    assert code == 0 and "Fails" in out
    code, out, _ = run(capsys, "check", "grid.kf", "w3", "--json")
    assert json.loads(out)["outcome"] == "Holds"


def test_bad_arguments_exit_1(capsys):
    assert run(capsys, "classify", "grid.kf", "--p", "1/2")[0] == 1
    assert run(capsys, "classify", "grid.kf", "--levels", "0")[0] == 1
    assert run(capsys, "verify", "rademacher", "--J", "25")[0] == 1


def test_run_config_invariants():
    with pytest.raises(CliError):
        RunConfig(horizon=0)
    with pytest.raises(CliError):
        RunConfig(tol=0)
    assert RunConfig(J_max=24).J_max == 24


def test_output_is_deterministic(capsys):
    for argv in (["classify", "grid.kf", "--json"], ["verify", "section", "--count", "30",
                                                     "--seed", "7"]):
        first = run(capsys, *argv)
        assert run(capsys, *argv) == first
