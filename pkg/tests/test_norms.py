from fractions import Fraction

import pytest

from cigames import presets
from cigames.errors import ScriptError
from cigames.norms import (check_confidentiality, check_control, check_fiduciary, check_mandatory,
                           check_notification, check_ownership, check_respect, check_secrecy, classify,
                           infer_arguments)

F = Fraction


def test_secrecy_and_respect():
    v = check_secrecy(presets.privacy_script(), "Alice", "a", "Carol")
    assert v.holds == "yes"
    assert v.witness == {"Alice keep-value": 4, "Alice share-value": 2}
    r = check_respect(presets.privacy_script(observe=True), "Carol", "a")
    assert r.holds == "yes"
    assert (r.witness["Carol respect-value"], r.witness["Carol observe-value"]) == (4, 2)


def test_confidentiality_versus_mandatory():
    c = presets.confidentiality_script()
    assert check_confidentiality(c, "Bob", "a", "Carol").holds == "yes"
    assert check_mandatory(c, "Bob", "a", "Carol").holds == "no"
    m = presets.mandatory_script()
    assert check_mandatory(m, "Bob", "a", "Carol").holds == "yes"
    assert check_confidentiality(m, "Bob", "a", "Carol").holds == "no"
    assert check_secrecy(c, "Alice", "a", "Bob").holds == "no"


def test_mandatory_observation_leaves_recipient_indifferent():
    v = check_respect(presets.mandatory_script(observe=True), "Carol", "a")
    assert v.witness["Carol respect-value"] == v.witness["Carol observe-value"] == 3
    assert v.holds == "yes"
    assert any("indifferent" in n for n in v.notes)


def test_fiduciary():
    sc = presets.fiduciary_script()
    v = check_fiduciary(sc, "Bob", "a", "Carol", "Alice")
    assert v.holds == "yes"
    assert v.witness["competitive: Alice keep-value"] == 5
    assert v.witness["competitive: Alice share-value"] == 2
    assert v.witness["collaborative: Alice share-value"] == F(25, 2)
    swapped = check_fiduciary(sc, "Bob", "a", "Carol", "Alice",
                              given={2: {"competitive": "share", "collaborative": "keep"}})
    assert swapped.holds == "no"


def test_control():
    assert check_control(presets.control_script(), "Alice", "a", "Bob", "Carol").holds == "yes"
    blind = presets.control_script(informed=())
    assert check_control(blind, "Alice", "a", "Bob", "Carol").holds == "no"
    both = check_control(presets.control_script(informed=("Alice", "Bob")), "Alice", "a", "Bob", "Carol")
    assert both.holds == "yes"
    assert any("redundant" in n for n in both.notes)


def test_notification():
    v = check_notification(presets.notification_script(), "Bob", "Alice", "a")
    assert v.holds == "yes"
    w = v.witness
    assert (w["collaborative: share&signal1"], w["collaborative: share&signal0"]) == (6, 4)
    assert (w["plain: keep&signal0"], w["plain: keep&signal1"]) == (4, 0)
    plain_only = check_notification(presets.notification_script(prior=1), "Bob", "Alice", "a")
    assert plain_only.holds == "yes"


def test_ownership():
    v = check_ownership(presets.ownership_script(), "Bob", "Alice", presets.OWNERSHIP_TRANSFER)
    assert v.holds == "yes"
    assert v.witness["Alice share-value"] == v.witness["Alice keep-value"] == 7
    assert (v.witness["Bob value without mechanism"], v.witness["Bob value with mechanism"]) == (1, 5)
    from cigames.mechanisms import TransferRule
    zero = TransferRule("Bob", "Alice", 0, (("I", "M"),))
    assert check_ownership(presets.ownership_script(), "Bob", "Alice", zero).holds == "no"


def test_inferred_arguments():
    assert infer_arguments(presets.confidentiality_script(), "confidentiality") == \
        {"sender": "Bob", "bit": "a", "recipient": "Carol"}
    assert infer_arguments(presets.control_script(), "control") == \
        {"subject": "Alice", "bit": "a", "sender": "Bob", "recipient": "Carol"}
    assert infer_arguments(presets.notification_script(), "notification") == \
        {"sender": "Bob", "subject": "Alice", "bit": "a"}
    assert classify(presets.privacy_script(), "secrecy").holds == "yes"


def test_classify_errors():
    with pytest.raises(ScriptError):
        classify(presets.privacy_script(), "respect")
    with pytest.raises(ScriptError):
        classify(presets.privacy_script(), "nonsense")
    with pytest.raises(ScriptError):
        classify(presets.ownership_script(), "ownership")


def test_render():
    text = check_secrecy(presets.privacy_script(), "Alice", "a", "Carol").render()
    assert text.splitlines() == ["secrecy: yes", "  Alice keep-value = 4", "  Alice share-value = 2"]
