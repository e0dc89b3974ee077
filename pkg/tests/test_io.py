import itertools
import json
from fractions import Fraction
from pathlib import Path

import pytest

from cigames import presets
from cigames.core import KnowledgeState, expected_payoff, strategy_space
from cigames.errors import DocumentError
from cigames.io import (InteractiveBlock, NoisyBlock, apply_block, document_for, dump, load, loads,
                        preset_document)
from cigames.mechanisms import NoisyChannel
from cigames.staged import solve

DATA = Path(__file__).parent / "data"
NAMES = ["privacy", "confidentiality", "mandatory", "fiduciary", "control", "notification", "ownership",
         "ownership-transfer", "ownership-tax", "interactive", "interactive-channel", "noisy", "noisy(1/8)",
         "bandwidth(2,1/4)"]


@pytest.mark.parametrize("name", NAMES)
def test_round_trip(name):
    doc = preset_document(name)
    text = dump(doc)
    again = loads(text)
    assert again == doc
    assert dump(again) == text


def test_rationals_are_strings():
    text = dump(presets.noisy_channel_script(Fraction(1, 8)))
    data = json.loads(text)
    assert data["bits"][-1]["fidelity"] == "1/8"
    assert all(isinstance(x, str) for c in data["contexts"] for line in c["cells"] for cell in line for x in cell)


def test_hand_written_document_matches_preset():
    doc = load(DATA / "confidentiality.json")
    g, h = doc.game, presets.confidentiality_game()
    k = KnowledgeState.initial(g)
    spaces = [strategy_space(g, k, p) for p in g.player_names]
    for prof in itertools.product(*spaces):
        p = dict(zip(g.player_names, prof))
        assert expected_payoff(g, k, p) == expected_payoff(h, k, p)
    assert solve(doc.script).value == solve(presets.confidentiality_script()).value


def mutate(fn, name="fiduciary"):
    data = json.loads(dump(preset_document(name)))
    fn(data)
    return json.dumps(data)


def test_prior_sum_rejected():
    def thirds(d):
        for v in d["variants"]:
            v["prior"] = "1/3"
    with pytest.raises(DocumentError, match="priors sum"):
        loads(mutate(thirds))


@pytest.mark.parametrize("edit,message", [
    (lambda d: d["bits"][0].update(owner="Zed"), r"bits\[0\]\.owner"),
    (lambda d: d["contexts"][0]["pair"].__setitem__(0, "Zed"), r"contexts\[0\]\.pair"),
    (lambda d: d["contexts"][-1].update(variant="nowhere"), r"contexts\[\d+\]\.variant"),
    (lambda d: d["script"][1].update(recipient="Zed"), "script: stage 1: unknown player"),
    (lambda d: d["knowledge"].update(Alice=["zz"]), "knowledge.Alice"),
    (lambda d: d.update(extra=1), "unknown field 'extra'"),
    (lambda d: d["contexts"][0]["cells"][0][0].__setitem__(0, 0.5), r"contexts\[0\]\.cells\[0\]\[0\]"),
    (lambda d: d["mechanisms"].append({"type": "teleport"}), "unknown mechanism"),
    (lambda d: d.update({"format-version": 9}), "format-version"),
])
def test_schema_errors_name_the_field(edit, message):
    with pytest.raises(DocumentError, match=message):
        loads(mutate(edit))


def test_json_errors_carry_line_numbers():
    with pytest.raises(DocumentError, match="line 3"):
        loads('{\n  "format-version": 1,\n  "players": ]\n}')


def test_apply_blocks():
    doc = preset_document("ownership")
    assert len(doc.mechanisms) == 2
    t = apply_block(doc, "transfer")
    assert t.game == presets.ownership_transfer_script().game
    assert len(t.mechanisms) == 1
    tax = apply_block(doc, 1)
    assert tax.game == presets.ownership_tax_script().game
    inter = apply_block(preset_document("interactive"), "interactive")
    assert inter.script.stages == presets.interactive_channel_script().stages
    noisy = apply_block(preset_document("noisy"), "noisy")
    assert noisy.script == presets.noisy_channel_script(Fraction(1, 4))
    bw = apply_block(preset_document("noisy"), "bandwidth")
    assert bw.game == presets.bandwidth_model(4, Fraction(1, 4)).game
    with pytest.raises(DocumentError):
        apply_block(doc, "noisy")


def test_mechanism_blocks_round_trip():
    doc = document_for(presets.interactive_script(),
                       [InteractiveBlock("Bob", "Carol", "a"), NoisyBlock(NoisyChannel("a", "ã", Fraction(1, 3)), "Bob", "Carol")])
    assert loads(dump(doc)) == doc
