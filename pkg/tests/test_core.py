from fractions import Fraction

import pytest

import oracle
from cigames import presets
from cigames.core import (Bit, Context, Game, KnowledgeState, Player, Strategy, Variant,
                          expected_payoff, strategy_space, threshold_message, total_payoff)
from cigames.errors import GameError, InvalidChoice, KnowledgeViolation
from cigames.notation import parse_profile


def two_player(cells):
    return Game((Player("Alice", "subject"), Player("Carol", "recipient")),
                (Bit("a", "secret", "Alice"),),
                (Context.from_rows("Alice", "Carol", cells),))


def test_privacy_profile_gain():
    g = presets.privacy_game()
    k = KnowledgeState.initial(g)
    assert expected_payoff(g, k, parse_profile(g, "⟨a?T:B,c?L:R⟩")) == (4, 4)
    assert expected_payoff(g, k, parse_profile(g, "<M,C>")) == (2, 2)


def test_payoffs_match_oracle_on_every_preset_profile_sample():
    for make in presets.GAMES.values():
        g = make()
        k = KnowledgeState.initial(g)
        spaces = {p: strategy_space(g, k, p) for p in g.player_names}
        for i in range(5):
            prof = {p: s[(7 * i + len(p)) % len(s)] for p, s in spaces.items()}
            assert expected_payoff(g, k, prof) == oracle.payoff(g, prof)


def test_world_weights_sum_to_one():
    for make in presets.GAMES.values():
        assert sum(w.weight for w in make().worlds) == 1
    g = presets.noisy_channel_script(Fraction(1, 8)).game
    assert sum(w.weight for w in g.worlds) == 1


def test_noisy_bit_copies_with_given_fidelity():
    g = presets.noisy_channel_script(Fraction(1, 4)).game
    names = g.bit_names
    same = sum(w.weight for w in g.worlds
               if w.values[names.index("a")] == w.values[names.index("ã")])
    assert same == Fraction(3, 4)


def test_threshold_message():
    assert threshold_message([0, 0, 0, 1], Fraction(1, 4), 1) == 1  # 1/4 is inside the band
    assert threshold_message([0, 0, 0, 0], Fraction(1, 4), 1) == 0
    assert threshold_message([1, 1, 1, 1], Fraction(1, 4), 0) == 1
    assert threshold_message([1, 1, 1, 0], Fraction(1, 4), 0) == 0
    with pytest.raises(ValueError):
        threshold_message([0, 1], Fraction(1, 2), 0)


def test_floats_rejected():
    with pytest.raises(TypeError):
        Context.from_rows("Alice", "Carol", [[(0.5, 1), (0, 0), (0, 0)]] * 3)


def test_context_shape_checked():
    with pytest.raises(GameError):
        two_player([[(0, 0), (0, 0)]] * 3)


def test_variant_priors_must_sum_to_one():
    base = presets.fiduciary_game()
    v = base.variants
    with pytest.raises(GameError):
        base.replace(variants=(Variant(v[0].name, Fraction(1, 3), v[0].contexts),
                               Variant(v[1].name, Fraction(1, 3), v[1].contexts)))


def test_knowledge_violation():
    g = presets.privacy_game()
    k = KnowledgeState.initial(g)
    with pytest.raises(KnowledgeViolation):
        expected_payoff(g, k, parse_profile(g, "<a?T:B,a?L:R>"))
    assert expected_payoff(g, k.learn("Carol", "a"), parse_profile(g, "<a?T:B,a?L:R>")) == (0, 8)


def test_invalid_choice():
    g = presets.privacy_game()
    with pytest.raises(InvalidChoice):
        total_payoff(g, None, {"Alice": "X", "Carol": "L"})


def test_strategy_space_sizes():
    g = presets.confidentiality_game()
    k = KnowledgeState.initial(g)
    assert all(len(strategy_space(g, k, p)) == 9 for p in g.player_names)
    assert len(strategy_space(g, k.learn("Bob", "a"), "Bob")) == 81


def test_strategy_normalisation():
    s = Strategy.make("Alice", ("a",), ("T", "T"))
    assert s == Strategy.constant("Alice", "T")
    t = Strategy.make("Alice", ("b", "a"), ("T", "B", "T", "B"))
    assert t.deps == ("a",)


def test_context_order_irrelevant():
    g = presets.confidentiality_game()
    choices = {"Alice": "T", "Bob": "I", "Carol": "R"}
    base = total_payoff(g, None, choices)
    for order in ([2, 1, 0], [1, 0, 2], [0, 2, 1]):
        assert total_payoff(g, None, choices, order) == base


def test_restrict_variant_merges_contexts():
    g = presets.fiduciary_game()
    for name in g.variant_names:
        r = g.restrict_variant(name)
        assert not r.variants
        assert len(r.contexts) == 3


def test_noisy_template_unshared_profile():
    # by hand: Alice-Bob match with probability 1/2 (1, 1); Alice-Carol averages
    # four corner cells (8, 8); Bob-Carol averages 6, -6, -6, 6 to (0, 0)
    g = presets.noisy_game()
    k = KnowledgeState.initial(g)
    assert expected_payoff(g, k, parse_profile(g, "<a?T:B,b?N:F,c?L:R>")) == (9, 1, 8)
