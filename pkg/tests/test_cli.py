import json
import subprocess
import sys

import jsonschema
import pytest

from heyting.cli import main, schema

CASES = [
    (["prove", "-n", "2", "x1 & x2 -> x1"], 0),
    (["prove", "-n", "2", "((x1 -> x2) -> x1) -> x1"], 1),
    (["equiv", "-n", "1", "~~~x1", "~x1"], 0),
    (["decompose", "-n", "2", "x1 | x2"], 0),
    (["mintype", "-n", "2", "x1 | x2"], 1),
    (["mintype", "-n", "2", "x1 -> x2"], 0),
    (["classify", "-n", "2", "x1"], 0),
    (["kenum", "-n", "2", "x1", "--levels", "4"], 0),
    (["model", "leaves", "-n", "2"], 0),
    (["model", "level", "-n", "3", "--level", "2", "--count-only"], 0),
    (["dejongh", "-n", "2", "--node", "4", "--verify"], 0),
    (["triplets", "-n", "2"], 0),
    (["triplets", "-n", "2", "--formula", "x1", "--mintype", "--levels", "4"], 0),
    (["j2build", "-n", "2", "--extra", "4"], 0),
    (["extend", "--scenario", "bottom"], 0),
    (["rn", "--depth", "3", "--table"], 0),
    (["oracle", "-n", "2", "x1 | x2", "x1"], 0),
]


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


@pytest.mark.parametrize("argv,code", CASES, ids=[" ".join(c[0][:2]) for c in CASES])
def test_verb_exit_codes_and_schema(argv, code, capsys):
    got, out, _ = run(argv + ["--format", "json"], capsys)
    assert got == code
    report = json.loads(out)
    jsonschema.validate(report, schema())
    assert report["verb"] == argv[0]
    assert report["status"] == ("ok" if code == 0 else "no")


@pytest.mark.parametrize("argv", [c[0] for c in CASES[:8]])
def test_output_is_deterministic(argv, capsys):
    first = run(argv + ["--format", "json"], capsys)
    second = run(argv + ["--format", "json"], capsys)
    assert first == second


def test_errors(capsys):
    code, _, err = run(["frobnicate"], capsys)
    assert code == 64
    code, out, _ = run(["prove", "x1 &"], capsys)
    assert code == 2 and "ParseError" in out
    code, out, _ = run(["prove", "-n", "1", "x2", "--format", "json"], capsys)
    assert code == 2
    jsonschema.validate(json.loads(out), schema())
    assert run(["prove", "-n", "17", "T"], capsys)[0] == 64


def test_countermodel_report(capsys):
    code, out, _ = run(["prove", "-n", "1", "x1 | ~x1", "--format", "json"], capsys)
    rep = json.loads(out)
    assert code == 1 and rep["verdict"] == "invalid"
    from heyting.formula import parse
    from heyting.semantics import KripkeModel, force
    model = KripkeModel.from_json(rep["countermodel"])
    assert not force(model, parse("x1 | ~x1", 1)).forces(0)


def test_text_and_dot_outputs(capsys, tmp_path):
    code, out, _ = run(["prove", "-n", "2", "x1 -> x1"], capsys)
    assert code == 0 and out.strip() == "valid"
    target = tmp_path / "k.dot"
    assert run(["model", "export", "-n", "1", "--levels", "3", "--format", "dot",
                "--out", str(target)], capsys)[0] == 0
    assert target.read_text().startswith("digraph")


def test_budget_flag_is_honoured(capsys):
    code, out, _ = run(["kenum", "-n", "2", "x1", "--budget-node-count", "5"], capsys)
    rep = json.loads(out)
    assert rep["budget"]["node_count"] == 5
    assert code in (0, 2)


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "heyting.cli", "rn", "--depth", "1"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and "phi1" in proc.stdout
