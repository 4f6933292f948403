import json
import random
import subprocess
import sys

import pytest

from teamcheck import reductions
from teamcheck.cli import main
from teamcheck.formula import render_formula
from teamcheck.kripke import save_model
from teamcheck.sampling import random_formula, random_model


@pytest.fixture
def single_world(tmp_path):
    path = tmp_path / "m.json"
    path.write_text('{"worlds": ["w"], "relation": [], "valuation": {"w": ["p"]}}')
    return str(path)


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_check_true_and_false(capsys, single_world):
    code, out, _ = run(capsys, "check", "--model", single_world, "--team", "w", "--formula", "p")
    assert code == 0 and out.splitlines()[0] == "true"
    code, out, _ = run(capsys, "check", "--model", single_world, "--team", "w", "--formula", "~p")
    assert code == 1 and out.splitlines()[0] == "false"


def test_check_json_output(capsys, single_world):
    code, out, _ = run(capsys, "check", "--model", single_world, "--team", "w", "--formula", "box p",
                       "--format", "json")
    report = json.loads(out)
    assert code == 0 and report["value"] is True and report["path"] == "box_fast"
    assert report["stats"]["successor_team_sets"] == 0


@pytest.mark.parametrize(
    "argv",
    [
        ["check", "--model", "{model}", "--formula", "dia ("],
        ["check", "--model", "{model}", "--formula", "p", "--team", "nope"],
        ["check", "--model", "/does/not/exist.json", "--formula", "p"],
        ["check", "--model", "{model}", "--formula", "dia p", "--engine", "fast"],
        ["check", "--model", "{model}"],
        ["frobnicate"],
    ],
)
def test_input_errors_exit_2(capsys, single_world, argv):
    argv = [a.replace("{model}", single_world) for a in argv]
    code, _, _ = run(capsys, *argv)
    assert code == 2


def test_engines_agree_on_random_instances(capsys, tmp_path):
    rng = random.Random(100)
    for i in range(100):
        n = rng.randint(1, 4)
        model = random_model(rng, n)
        path = tmp_path / f"m{i}.json"
        path.write_bytes(save_model(model))
        phi = render_formula(random_formula(rng, 4))
        team = ",".join(w for w in model.worlds if rng.random() < 0.5)
        codes = {
            engine: main(["check", "--model", str(path), "--team", team, "--formula", phi, "--engine", engine])
            for engine in ("auto", "reference")
        }
        assert codes["auto"] == codes["reference"] in (0, 1)
    capsys.readouterr()


def test_classify(capsys, tmp_path):
    code, out, _ = run(capsys, "classify", "--formula", "dia dep(p,q)")
    assert "clone: ID" in out and "NP-complete" in out
    code, out, _ = run(capsys, "classify", "--formula", "box dep(p,q) ^ p", "--format", "json")
    report = json.loads(out)
    assert report == {"clone": "L", "uses_box": True, "uses_diamond": False, "uses_dep": True,
                      "complexity": "NL-complete"}
    fns = tmp_path / "f.json"
    fns.write_text('{"nand": {"arity": 2, "table": [1, 1, 1, 0]}}')
    code, out, _ = run(capsys, "classify", "--functions", str(fns))
    assert code == 0 and "clone: BF" in out
    code, _, _ = run(capsys, "classify")
    assert code == 2


def test_generate_sat(capsys, tmp_path):
    src = tmp_path / "psi.cnf"
    src.write_text("p cnf 2 1\n1 2 0\n")
    prefix = str(tmp_path / "out")
    code, _, _ = run(capsys, "generate", "sat", "--input", str(src), "--mode", "sat", "--out-prefix", prefix)
    assert code == 0
    assert json.loads((tmp_path / "out.expected.json").read_text())["expected"] is True
    formula = (tmp_path / "out.formula.txt").read_text().strip()
    team = (tmp_path / "out.team.txt").read_text().strip()
    code, out, _ = run(capsys, "check", "--model", prefix + ".model.json", "--team", team, "--formula", formula)
    assert code == 0


def test_generate_fig4(capsys, tmp_path):
    src = tmp_path / "fig4.qdimacs"
    src.write_text("p cnf 3 2\ne 1 0\na 2 0\ne 3 0\n1 -2 -3 0\n1 2 3 0\n")
    prefix = str(tmp_path / "fig4")
    code, _, _ = run(capsys, "generate", "qbf", "--input", str(src), "--out-prefix", prefix)
    assert code == 0
    model = json.loads((tmp_path / "fig4.model.json").read_text())
    worlds = model["worlds"]
    assert sum(w.startswith("d_") for w in worlds) == 6
    assert sum(w.startswith("c_") for w in worlds) == 8
    assert sum("^" not in w for w in worlds) == 6
    team = (tmp_path / "fig4.team.txt").read_text().strip()
    formula = (tmp_path / "fig4.formula.txt").read_text().strip()
    code, _, _ = run(capsys, "check", "--model", prefix + ".model.json", "--team", team, "--formula", formula)
    assert code == 0


def test_generate_degenerate_reach_warns(capsys, tmp_path):
    src = tmp_path / "g.txt"
    src.write_text("s=a t=a\n")
    code, _, err = run(capsys, "generate", "reach", "--input", str(src), "--out-prefix", str(tmp_path / "g"))
    assert code == 0 and "degenerate" in err
    assert json.loads((tmp_path / "g.expected.json").read_text())["degenerate"] is True


def test_generate_bad_input(capsys, tmp_path):
    src = tmp_path / "bad.cnf"
    src.write_text("p cnf 1 1\n2 0\n")
    code, _, _ = run(capsys, "generate", "sat", "--input", str(src), "--mode", "sat", "--out-prefix", "x")
    assert code == 2
    code, _, _ = run(capsys, "generate", "qbf", "--input", str(src), "--mode", "sat", "--out-prefix", "x")
    assert code == 2


def test_verify_exit_codes(capsys, tmp_path, monkeypatch):
    code, _, _ = run(capsys, "verify", "reach", "--count", "200", "--max-nodes", "8", "--seed", "7")
    assert code == 0
    code, _, _ = run(capsys, "verify", "sat", "--exhaustive", "--max-vars", "2", "--max-clauses", "2")
    assert code == 0
    # a broken checker must make verify fail
    monkeypatch.setattr(reductions, "check", lambda m, t, phi: True)
    report = tmp_path / "r.json"
    code, _, _ = run(capsys, "verify", "sat", "--count", "5", "--report", str(report))
    assert code == 1
    assert json.loads(report.read_text())["counterexamples"]


def test_verify_same_seed_same_report(capsys):
    _, a, _ = run(capsys, "verify", "qbf", "--count", "10", "--seed", "5", "--format", "json")
    _, b, _ = run(capsys, "verify", "qbf", "--count", "10", "--seed", "5", "--format", "json")
    assert a == b


def test_bench(capsys):
    code, out, _ = run(capsys, "bench", "none")
    assert code == 0 and json.loads(out)["results"] == []
    code, out, _ = run(capsys, "bench", "box", "--worlds", "200", "--depth", "10")
    results = json.loads(out)["results"]
    auto = [r for r in results if r["engine"] == "auto"]
    assert auto and all(r["stats"]["path"] == "box_fast" for r in auto)
    ref = [r for r in results if r["engine"] == "reference"]
    assert [r["value"] for r in auto] == [r["value"] for r in ref]
    code, out, _ = run(capsys, "bench", "dia", "--clauses", "6")
    results = json.loads(out)["results"]
    assert len({r["value"] for r in results if r["instance"].startswith("sat/sat")}) == 1


def test_closure(capsys):
    code, out, _ = run(capsys, "closure", "--builtin", "xor", "--max-arity", "2", "--format", "json")
    report = json.loads(out)
    assert code == 0 and report["counts"] == {"0": 2, "1": 4, "2": 8} and report["clone"] == "L"
    code, _, _ = run(capsys, "closure", "--builtin", "nope")
    assert code == 2


def test_module_entry_point(single_world):
    proc = subprocess.run(
        [sys.executable, "-m", "teamcheck", "check", "--model", single_world, "--team", "w", "--formula", "p"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0 and proc.stdout.startswith("true")
