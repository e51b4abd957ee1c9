"""Integration tests for the ``pebble`` command-line front end.

These run ``main`` in-process on the files under ``pebble/samples`` and check
the printed report together with the exit code.
"""

import json
from pathlib import Path

import pytest

import pebble
from pebble.cli import main
from pebble.corpus import machine_source
from pebble.minsky import parse_machine
from pebble.model import parse_model
from pebble.parser import parse_formula_file
from pebble.translate import translate_machine

pytestmark = pytest.mark.integration

SAMPLES = Path(pebble.__file__).parent / "samples"


def sample(name: str) -> str:
    """Path of a file under pebble/samples."""
    return str(SAMPLES / name)


def run_json(capsys, *argv: str) -> tuple[int, dict]:
    """Run ``main`` with JSON output and return the exit code and parsed report."""
    code = main([*argv, "--format", "json"])
    return code, json.loads(capsys.readouterr().out)


def test_parse_prints_the_formula(capsys):
    """Test that parse prints the formula and its diagnostics."""
    code = main(["parse", sample("same.ltl")])
    out = capsys.readouterr().out
    assert code == 0
    assert "<x. <y. x = y>(a)>(b)" in out
    assert "diagnostics" in out


def test_eval_on_a_lasso(capsys):
    """Test the eval subcommand on a looping model.

    This test verifies that:
    1. The mode defaults to lasso for a model with a loop
    2. The verdict line names the mode and position
    3. A definite False exits with 1
    """
    assert main(["eval", sample("same.mdl"), sample("same.ltl")]) == 0
    assert capsys.readouterr().out == "True  [mode=lasso position=0]\n"
    assert main(["eval", sample("same.mdl"), sample("same.ltl"), "--at", "1"]) == 1
    assert capsys.readouterr().out == "False  [mode=lasso position=1]\n"


def test_eval_forwarding_scenario(capsys):
    """Test the forwarding observation and its mutant in bounded mode."""
    assert main(["eval", sample("forwarding.mdl"), sample("forwarding.ltl")]) == 0
    assert capsys.readouterr().out == "Unknown  [mode=bounded position=0]\n"
    code, body = run_json(
        capsys, "eval", sample("forwarding_mutant.mdl"), sample("forwarding.ltl")
    )
    assert code == 1
    assert body == {"verdict": "False", "mode": "bounded", "position": 0}


def test_eval_rejects_a_bad_assignment(capsys):
    """Test that a malformed --assign exits with 2."""
    code = main(["eval", sample("same.mdl"), sample("same.ltl"), "--assign", "x"])
    assert code == 2
    assert "var=element" in capsys.readouterr().err


def test_equiv_samples(capsys):
    """Test that the sample models are equivalent over two moments."""
    code, body = run_json(
        capsys, "equiv", sample("equiv_left.mdl"), sample("equiv_right.mdl")
    )
    assert code == 0
    assert body == {"equivalent": True, "bounded": False, "moments_checked": 2}


def test_equiv_reports_a_witness(capsys):
    """Test the witness reported for two prefixes that differ."""
    code, body = run_json(capsys, "equiv", sample("same.mdl"), sample("same.mdl"))
    assert code == 0
    code, body = run_json(
        capsys,
        "equiv",
        sample("forwarding.mdl"),
        sample("forwarding_mutant.mdl"),
        "--horizon",
        "6",
    )
    assert code == 1
    assert body["witness_moment"] == 3
    assert body["witness_symbol"] == "m"


def test_minsky_run(capsys):
    """Test the run report of a non-halting machine."""
    assert main(["minsky-run", sample("ping_pong.mm"), "--steps", "5"]) == 0
    out = capsys.readouterr().out
    assert "halted  : False\n" in out
    assert "states  : 5\n" in out
    assert "run:\n" in out
    assert "instruction" in out


def test_translate_lists_rules(capsys):
    """Test the rule listing and the formula file of a translation.

    This test verifies that:
    1. --rules lists the initial parts and the rules of each instruction
    2. The formula file declares the constants and the bound variables
    3. The formula file parses back to the translation
    """
    assert main(["translate", sample("add_stop.mm"), "--rules"]) == 0
    out = capsys.readouterr().out
    assert "chi0.initial" in out
    assert "l1.A5" in out
    assert main(["translate", sample("add_stop.mm")]) == 0
    out = capsys.readouterr().out
    assert "consts: a1, a2, b1, b2, d, e0, e1, e2, f\n" in out
    alphabet, f = parse_formula_file(out)
    assert {"x", "y"} <= alphabet.variables
    assert f == translate_machine(parse_machine(machine_source("add_stop")))


def test_certify_add_stop(capsys):
    """Test the JSON certification report of add_stop."""
    code, body = run_json(capsys, "certify", sample("add_stop.mm"), "--horizon", "4")
    assert code == 0
    assert body["machine"] == "add_stop"
    assert body["q_stop_seen_at"] == 2
    assert body["overall"] == "Unknown"
    assert body["counter_mismatches"] == 0


def test_certify_emits_model_formula_and_matrix(tmp_path, capsys):
    """Test the files written by certify.

    This test verifies that:
    1. The canonical model file parses back as a prefix model
    2. Evaluating the emitted translation on it gives the certified verdict
    3. The rule matrices of several machines land in one CSV
    """
    model, formula = tmp_path / "canonical.mdl", tmp_path / "translation.ltl"
    code = main(
        [
            "certify",
            sample("add_stop.mm"),
            "--horizon",
            "4",
            "--emit-model",
            str(model),
            "--emit-formula",
            str(formula),
        ]
    )
    assert code == 0
    assert not parse_model(model.read_text()).is_lasso
    capsys.readouterr()
    assert main(["eval", str(model), str(formula)]) == 0
    assert capsys.readouterr().out == "Unknown  [mode=bounded position=0]\n"

    matrix = tmp_path / "matrix.csv"
    code = main(
        [
            "certify",
            sample("add_stop.mm"),
            sample("ping_pong.mm"),
            "--emit-matrix",
            str(matrix),
        ]
    )
    assert code == 0
    lines = matrix.read_text().splitlines()
    assert lines[0].startswith("machine,rule,0,1,2")
    assert lines[1].startswith("add_stop,chi0.initial,T")
    assert any(line.startswith("ping_pong,") for line in lines)


def test_certify_emit_needs_a_single_machine(tmp_path, capsys):
    """Test that the emit options refuse several machines."""
    code = main(
        [
            "certify",
            sample("add_stop.mm"),
            sample("ping_pong.mm"),
            "--emit-model",
            str(tmp_path / "m.mdl"),
        ]
    )
    assert code == 2
    assert "single machine" in capsys.readouterr().err


@pytest.mark.parametrize(
    "query, formula, expected_code, found",
    [
        ("--sat", "same.ltl", 0, True),
        ("--sat", "always_new.ltl", 1, False),
        ("--valid", "reflexive.ltl", 0, False),
        ("--valid", "same.ltl", 1, True),
    ],
)
def test_search(capsys, query, formula, expected_code, found):
    """Test the exit codes and reports of satisfiability and validity searches."""
    code, body = run_json(
        capsys,
        "search",
        query,
        sample(formula),
        "--domain",
        "2",
        "--prefix",
        "1",
        "--period",
        "2",
    )
    assert code == expected_code
    assert body["found"] is found
    if query == "--valid" and found:
        assert "counterexample" in body
    if not found:
        assert "not a proof" in body["note"] or "evidence" in body["note"]


def test_missing_file_exits_with_2(capsys):
    """Test that an unreadable input exits with 2."""
    assert main(["parse", "no/such/file.ltl"]) == 2
    assert "ValidationError: cannot read" in capsys.readouterr().err


def test_parse_error_exits_with_2(tmp_path, capsys):
    """Test that a syntax error exits with 2."""
    bad = tmp_path / "bad.ltl"
    bad.write_text("<x. x = x>(\n")
    assert main(["parse", str(bad)]) == 2
    assert "ParseError: " in capsys.readouterr().err


def test_malformed_machine_exits_with_2(tmp_path, capsys):
    """Test that a malformed machine file exits with 2."""
    bad = tmp_path / "bad.mm"
    bad.write_text("1: JUMP 2\n2: STOP\n")
    assert main(["minsky-run", str(bad)]) == 2
    assert "unknown instruction" in capsys.readouterr().err
