import io
import json
import subprocess
import sys

import pytest

from cigames import claims, presets
from cigames.cli import render_structured, render_table, run_cli
from cigames.core import KnowledgeState, expected_payoff
from cigames.io import load, preset_document
from cigames.norms import classify
from cigames.notation import parse_profile
from cigames.staged import solve


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run_cli(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_eval_privacy():
    assert run("eval", "-g", "privacy", "-p", "⟨a?T:B,c?L:R⟩") == (0, "4/1 4/1\n", "")
    assert run("eval", "-g", "privacy", "-p", "<a?T:B,c?L:R>")[1] == "4/1 4/1\n"


def test_eval_with_extra_knowledge_matches_library():
    code, out, _ = run("eval", "-g", "noisy(1/4)", "-p", "<a?T:B,a?N:F,ã?L:R>", "--know", "Bob=a", "--know", "Carol=ã")
    g = presets.noisy_channel_script("1/4").game
    k = KnowledgeState.initial(g).learn("Bob", "a").learn("Carol", "ã")
    want = expected_payoff(g, k, parse_profile(g, "<a?T:B,a?N:F,ã?L:R>"))
    assert code == 0
    assert out.split() == [f"{x.numerator}/{x.denominator}" for x in want]


def test_eval_variant():
    code, out, _ = run("eval", "-g", "fiduciary", "--variant", "collaborative", "--know", "Bob=a",
                       "--know", "Carol=a", "--know", "Alice=c", "-p", "<c?T:B,b?N:F,c?L:R>")
    assert (code, out) == (0, "25/2 7/2 9/1\n")


def test_dominant_confidentiality():
    code, out, _ = run("dominant", "-g", "confidentiality")
    assert code == 0
    lines = out.strip().splitlines()
    assert len(lines) == 1
    assert lines[0].endswith("9/1 5/1 12/1  [class of 8]")


def test_nash_listing():
    code, out, _ = run("nash", "-g", "privacy")
    assert out.splitlines()[0] == "5 equilibria"
    code, out, _ = run("nash", "-g", "privacy", "--quotient")
    assert out.splitlines()[0] == "2 equilibria"


def test_solve_matches_library():
    code, out, _ = run("solve", "-g", "fiduciary")
    assert out == solve(presets.fiduciary_script()).render() + "\n"


def test_classify_matches_library():
    code, out, _ = run("classify", "--norm", "control", "-g", "control")
    assert code == 0
    assert out == classify(presets.control_script(), "control").render() + "\n"
    code, out, _ = run("classify", "--norm", "ownership", "-g", "ownership")
    assert out.startswith("ownership: yes")


def test_classify_override():
    code, out, _ = run("classify", "--norm", "secrecy", "-g", "confidentiality", "--arg", "counterparty=Bob")
    assert out.startswith("secrecy: no")


def test_mechanism_writes_document(tmp_path):
    target = tmp_path / "out.json"
    code, out, _ = run("mechanism", "--apply", "transfer", "-g", "ownership", "--out", str(target))
    assert code == 0
    doc = load(target)
    assert doc.game == presets.ownership_transfer_script().game
    code, out, _ = run("solve", "-g", str(target))
    assert out.splitlines()[0] == "value (7, 5, 2)"


def test_reproduce_single_claim():
    code, out, _ = run("reproduce", "--claims", "privacy-5-NE")
    assert code == 0
    assert out.splitlines()[0].startswith("PASS ")
    assert sum(line.startswith(("PASS", "MISMATCH")) for line in out.splitlines()) == 1


def test_reproduce_structured_reparses():
    code, out, _ = run("reproduce", "--claims", "privacy-5-NE", "confidentiality-dominant", "--format", "structured")
    data = json.loads(out)
    records, summary = claims.reproduce(["privacy-5-NE", "confidentiality-dominant"])
    assert data["claims"] == [r.as_dict() for r in records]
    assert out == render_structured(records, summary) + "\n"


def test_reproduce_core_failure_exit_code():
    code, out, _ = run("reproduce", "--claims", "noisy-equilibrium")
    assert code == 3
    assert "MISMATCH" in out


def test_usage_errors_exit_1():
    assert run()[0] == 1
    assert run("eval", "-g", "privacy")[0] == 1
    assert run("frobnicate")[0] == 1
    assert run("classify", "--norm", "nope", "-g", "privacy")[0] == 1


def test_input_errors_exit_2(tmp_path):
    assert run("eval", "-g", "nosuchgame", "-p", "<M,C>")[0] == 2
    assert run("eval", "-g", "privacy", "-p", "<M,Q>")[0] == 2
    assert run("eval", "-g", "privacy", "-p", "<a?T:B,a?L:R>")[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{ nope", encoding="utf-8")
    code, _, err = run("nash", "-g", str(bad))
    assert code == 2 and "line 1" in err
    assert run("reproduce", "--claims", "no-such-claim")[0] == 2
    assert run("classify", "--norm", "respect", "-g", "privacy")[0] == 2


def test_console_script_entry_point():
    proc = subprocess.run([sys.executable, "-m", "cigames.cli", "eval", "-g", "privacy", "-p", "<M,C>"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout == "2/1 2/1\n"
