"""Command line surface: text output, JSON schema, exit codes."""

import json
import subprocess
import sys
from pathlib import Path

from fairdag import models
from fairdag.cli import run_cli


def mpath(name: str) -> str:
    return str(models.model_path(name))


def run(capsys, *argv):
    code = run_cli(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv, "--json")
    assert code == 0, err
    return json.loads(out)


# -- happy paths ------------------------------------------------------------


def test_check(capsys):
    code, out, _ = run(capsys, "check", mpath("mentor"))
    assert code == 0
    assert "model mentor: 5 nodes, 4 edges" in out
    assert "interest X" in out and "outcome Y" in out

    payload = run_json(capsys, "check", mpath("jail"))
    assert payload["command"] == "check"
    assert payload["predictor"] == {
        "name": "Chat",
        "from": ["B", "J"],
        "deterministic": False,
    }


def test_paths(capsys):
    code, out, _ = run(capsys, "paths", mpath("mentor"))
    assert code == 0
    assert out.splitlines()[0] == "1 path(s) from X to Y"
    assert "X => A <- T -> Y" in out
    assert "[closed; blocked at A]" in out

    payload = run_json(capsys, "paths", mpath("mentor"), "--from", "M", "--to", "Y")
    assert payload["paths"][0]["nodes"] == ["M", "A", "T", "Y"]
    assert payload["paths"][0]["roles"] == ["collider", "confounder"]


def test_dsep(capsys):
    code, out, _ = run(capsys, "dsep", mpath("mentor"))
    assert code == 0
    assert out.splitlines()[0] == "d-separated"
    assert "conditioning set: (empty)" in out

    code, out, _ = run(capsys, "dsep", mpath("mentor"), "--x", "M", "--y", "Y", "--given", "A")
    assert code == 0
    assert out.splitlines()[0] == "d-connected"
    assert "open: M => A <- T -> Y" in out

    payload = run_json(capsys, "dsep", mpath("mentor"))
    assert set(payload) == {
        "command", "model", "x", "y", "given",
        "conditioning_set", "separated", "open_paths",
    }
    assert payload["separated"] is True


def test_bias(capsys):
    code, out, _ = run(capsys, "bias", mpath("definitions"))
    assert (code, out.strip()) == (0, "BIAS: no")
    code, out, _ = run(
        capsys, "bias", mpath("definitions"), "--x", "Gender", "--y", "Productivity"
    )
    assert (code, out.strip()) == (0, "BIAS: yes")


def test_disparity(capsys):
    code, out, _ = run(capsys, "disparity", mpath("definitions"))
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "DISPARITY: yes"
    assert lines[1] == "  Gender => Productivity -> FacultyPosition"

    payload = run_json(capsys, "disparity", mpath("definitions"))
    assert payload["present"] is True
    assert payload["witnesses"] == [
        {
            "nodes": ["Gender", "Productivity", "FacultyPosition"],
            "unjustified_edges": [["Gender", "Productivity"]],
        }
    ]


def test_unfair(capsys):
    code, out, _ = run(capsys, "unfair", mpath("definitions"))
    assert (code, out.strip()) == (0, "UNFAIR: FacultyPosition, Productivity")
    code, out, _ = run(capsys, "unfair", mpath("definitions"), "--x", "Impact")
    assert (code, out.strip()) == (0, "UNFAIR: none")


def test_fairness_report(capsys):
    code, out, _ = run(capsys, "fairness", mpath("fairness_f"))
    assert code == 0
    assert "independence: fails" in out
    assert "sufficiency (deterministic): holds" in out
    assert "disparity in outcome Y: yes" in out

    payload = run_json(capsys, "fairness", mpath("fairness_a"))
    assert payload["independence"] == "holds"
    assert payload["sufficiency_deterministic"] == "not-applicable"
    assert payload["disparity_in_prediction"] is False


def test_fairness_single_criterion(capsys):
    code, out, _ = run(
        capsys, "fairness", mpath("fairness_g"), "--criterion", "sufficiency"
    )
    assert code == 0
    assert "sufficiency: fails" in out
    assert "sufficiency (deterministic): fails" in out

    payload = run_json(
        capsys, "fairness", mpath("fairness_f"), "--criterion", "sufficiency"
    )
    assert payload["holds"] is False
    assert payload["deterministic_holds"] is True


def test_simulate_summary_and_test(capsys):
    code, out, _ = run(capsys, "simulate", mpath("mentor"), "--samples", "2000", "--seed", "3")
    assert code == 0
    assert out.splitlines()[0] == "sampled n=2000 nodes=5 seed=3"
    assert "Y: mean=" in out

    code, out, _ = run(
        capsys, "simulate", mpath("mentor"),
        "--samples", "20000", "--seed", "3",
        "--select", "A>0", "--test", "M,Y", "--alpha", "0.01",
    )
    assert code == 0
    assert "selected A > 0.0: kept" in out
    assert "corr(M, Y)" in out
    assert "dependent at alpha=0.01" in out


def test_simulate_with_coefficient_file(capsys):
    payload = run_json(
        capsys, "simulate", mpath("shooting"),
        "--samples", "5000", "--seed", "1",
        "--coeffs", mpath("shooting.coef"),
        "--select", "S top 0.5", "--test", "X,Y",
    )
    assert payload["selection"]["kept"] == 2500
    assert payload["test"]["r"] < 0


def test_export(capsys):
    golden = Path(__file__).parent / "golden" / "mentor.dot"
    code, out, _ = run(capsys, "export", mpath("mentor"), "--format", "dot")
    assert code == 0
    assert out == golden.read_text()

    code, out, _ = run(capsys, "export", mpath("mentor"), "--format", "cg")
    assert code == 0
    assert out.startswith("model mentor\n")

    payload = run_json(capsys, "export", mpath("mentor"), "--format", "dot")
    assert payload["content"].startswith("digraph mentor {")


# -- failure modes ----------------------------------------------------------


def test_exit_1_missing_file(capsys):
    code, out, err = run(capsys, "check", "nosuch.cg")
    assert code == 1
    assert out == ""
    assert err.startswith("error:")


def test_exit_1_unknown_node(capsys):
    code, _, err = run(capsys, "dsep", mpath("mentor"), "--x", "Nope")
    assert code == 1
    assert "Nope" in err


def test_exit_1_parse_error(capsys, tmp_path):
    bad = tmp_path / "bad.cg"
    bad.write_text("node A\n")
    code, _, err = run(capsys, "check", str(bad))
    assert code == 1
    assert "line 1" in err


def test_exit_1_undeclared_role(capsys):
    # example_simple declares no predictor and none is passed
    code, _, err = run(capsys, "fairness", mpath("example_simple"))
    assert code == 1
    assert "predictor" in err


def test_exit_1_bad_alpha(capsys):
    code, _, err = run(
        capsys, "simulate", mpath("mentor"),
        "--samples", "100", "--seed", "1", "--test", "M,Y", "--alpha", "1.5",
    )
    assert code == 1
    assert "alpha" in err


def test_exit_1_empty_selection(capsys):
    code, _, err = run(
        capsys, "simulate", mpath("mentor"),
        "--samples", "100", "--seed", "1", "--select", "A>1e9",
    )
    assert code == 1
    assert "selection" in err


def test_exit_2_usage_errors(capsys):
    assert run(capsys, )[0] == 2  # no subcommand
    assert run(capsys, "wobble", mpath("mentor"))[0] == 2
    assert run(capsys, "dsep", mpath("mentor"), "--bogus")[0] == 2
    assert run(capsys, "simulate", mpath("mentor"), "--samples", "ten", "--seed", "1")[0] == 2
    assert run(capsys, "simulate", mpath("mentor"), "--seed", "1")[0] == 2  # --samples required
    assert run(capsys, "simulate", mpath("mentor"), "--samples", "10", "--seed", "1",
               "--select", "A>>3")[0] == 2
    assert run(capsys, "simulate", mpath("mentor"), "--samples", "10", "--seed", "1",
               "--test", "onlyone")[0] == 2
    assert run(capsys, "export", mpath("mentor"), "--format", "svg")[0] == 2


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "fairdag.cli", "dsep", mpath("mentor")],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[0] == "d-separated"
