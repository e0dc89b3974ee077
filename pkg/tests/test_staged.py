from fractions import Fraction

import pytest

from cigames import presets
from cigames.core import KnowledgeState
from cigames.errors import ScriptError, SelectionFailure
from cigames.staged import (Commit, NatureDraw, Observe, Play, Reveal, ScenarioScript, Share, Signal,
                            continuation, continuation_value, solve)

F = Fraction


def test_privacy_keeps():
    tree = solve(presets.privacy_script())
    assert tree.value == (4, 4)
    assert tree.actions(0) == {None: "keep"}
    assert continuation_value(presets.privacy_script(), 0, "share") == (2, 2)


def test_privacy_observe():
    sc = presets.privacy_script(observe=True)
    assert solve(sc).actions(0) == {None: "respect"}
    assert continuation_value(sc, 0, "observe") == (2, 2)


def test_confidentiality():
    sc = presets.confidentiality_script()
    tree = solve(sc)
    assert tree.value == (10, 6, 12)
    assert tree.actions(0) == {None: "share"}
    assert tree.actions(1) == {None: "keep"}
    assert continuation_value(sc, 0, "keep") == (9, 5, 12)
    assert continuation_value(sc, 1, "share", {0: "share"})[1] == 4


def test_mandatory_uses_subject_fallback():
    sc = presets.mandatory_script()
    assert continuation_value(sc, 0, "keep") == (5, 0, 3)
    assert continuation_value(sc, 0, "share") == (3, 2, 3)
    assert solve(sc).actions(0) == {None: "share"}
    leaf = continuation(sc, 0, "keep").leaves[0]
    assert "subject" in leaf.note


def test_abort_fallback_raises():
    sc = presets.mandatory_script()
    sc = sc.replace(stages=sc.stages[:-1] + (Play("abort"),))
    with pytest.raises(SelectionFailure):
        continuation(sc, 0, "keep")


def test_fiduciary_tree():
    sc = presets.fiduciary_script()
    tree = solve(sc)
    assert tree.value == (F(35, 4), F(13, 4), F(11, 2))
    assert tree.actions(2) == {"competitive": "keep", "collaborative": "share"}
    assert tree.branch_values == {"competitive": (5, 3, 2), "collaborative": (F(25, 2), F(7, 2), 9)}
    rec = tree.decision(2)
    assert rec.decider == "Bob"
    assert rec.chosen() == {"competitive": "keep", "collaborative": "share"}


def test_fiduciary_forced_policy_by_variant():
    sc = presets.fiduciary_script()
    swapped = {2: {"competitive": "share", "collaborative": "keep"}}
    pinned = solve(sc, {1: "share", **swapped})
    assert pinned.branch_values["competitive"][0] == 2
    assert pinned.branch_values["collaborative"][0] == 5
    # left free, Alice answers the swapped policy by keeping her secret
    free = solve(sc, swapped)
    assert free.actions(1) == {"competitive": "keep", "collaborative": "keep"}
    assert free.value == (F(9, 2), F(5, 2), 2)


def test_control_signal_policy():
    tree = solve(presets.control_script())
    assert tree.actions(2) == {"competitive": 0, "collaborative": 1}
    assert tree.decision(3).chosen() == {"s=0": "keep", "s=1": "share"}
    assert len(tree.decision(2).ties) == 2


def test_notification_tree():
    tree = solve(presets.notification_script())
    rec = tree.decision(2)
    assert len(rec.ties) == 4
    assert rec.policy == ("keep", "keep")
    assert rec.value == (F(7, 2), 5, 3)
    assert tree.actions(3) == {"plain": 0, "collaborative": 1}


def test_ownership_and_interactive_roots():
    assert solve(presets.ownership_transfer_script()).value == (7, 5, 2)
    assert solve(presets.interactive_script()).value == (9, 5, 12)
    tree = solve(presets.interactive_channel_script())
    assert tree.value == (10, 6, 12)
    forced = continuation(presets.interactive_channel_script(), 1, "share")
    assert forced.actions(2) == {None: "refuse"}


def test_noisy_roots():
    assert solve(presets.noisy_script()).value == (10, 2, 8)
    assert continuation_value(presets.noisy_script(), 0, "keep") == (9, 1, 8)
    assert continuation_value(presets.noisy_script(), 1, "share", {0: "share"}) == (4, 0, 4)


def test_histories_record_stage_indices():
    tree = solve(presets.fiduciary_script())
    for hist in tree.histories.values():
        assert [k for k, _, _ in hist] == sorted(k for k, _, _ in hist)


def test_render_is_deterministic():
    sc = presets.control_script()
    assert solve(sc).render() == solve(sc).render()


def test_script_validation():
    g = presets.privacy_game()
    with pytest.raises(ScriptError):
        ScenarioScript(g, (Share("Alice", "a", "Carol"),))
    with pytest.raises(ScriptError):
        ScenarioScript(g, (Play(), Play()))
    with pytest.raises(ScriptError):
        ScenarioScript(g, (Share("Alice", "a", "Zed"), Play()))
    with pytest.raises(ScriptError):
        ScenarioScript(g, (Share("Alice", "q", "Carol"), Play()))
    with pytest.raises(ScriptError):
        ScenarioScript(g, (Signal("Alice", "Carol", "a"), Play()))
    with pytest.raises(ScriptError):
        Play("sometimes")


def test_single_mixed_leaf_when_nobody_sees_the_variant():
    sc = ScenarioScript(presets.fiduciary_game(), (Share("Alice", "a", "Bob"), Play("subject")))
    tree = solve(sc)
    assert len(tree.leaves) == 1
    assert tree.leaves[0].variants == ("competitive", "collaborative")
    assert tree.value == (5, 3, 2)


def test_inconsistent_branches_rejected():
    g = presets.fiduciary_game()
    sc = ScenarioScript(g, (NatureDraw(("Bob",)), Share("Bob", "b", "Carol"), Play("subject")))
    with pytest.raises(ScriptError):
        solve(sc, {1: {"competitive": "share", "collaborative": "keep"}})
