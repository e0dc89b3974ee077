import pytest

from cigames import presets
from cigames.core import KnowledgeState, Strategy, strategy_space
from cigames.errors import GameError, ParseError
from cigames.notation import format_profile, format_strategy, parse_for, parse_profile


def test_both_bracket_forms():
    g = presets.privacy_game()
    assert parse_profile(g, "⟨a?T:B,c?L:R⟩") == parse_profile(g, "< a ? T : B , c?L:R >")


def test_nested_and_variant_strategies():
    g = presets.fiduciary_game()
    s = parse_for(g, "Bob", "a?b?N:I:F")
    assert s.choose({"a": 1, "b": 1}) == "N"
    assert s.choose({"a": 1, "b": 0}) == "I"
    assert s.choose({"a": 0, "b": 1}) == "F"
    v = parse_for(g, "Bob", "@collaborative?N:F")
    assert v.choose({}, g.variant_names.index("collaborative")) == "N"
    assert v.choose({}, g.variant_names.index("competitive")) == "F"


@pytest.mark.parametrize("text", ["<a?T:B", "<a?T>", "<a?T:B,c?L:R,x>", "<a?Q:B,c?L:R>", "<a??T:B,C>", ""])
def test_bad_profiles(text):
    g = presets.privacy_game()
    with pytest.raises(GameError):
        parse_profile(g, text)


def test_parse_error_position():
    with pytest.raises(ParseError) as exc:
        parse_profile(presets.privacy_game(), "<a?T:B,c?L>")
    assert exc.value.position is not None


def test_round_trip_profiles():
    g = presets.privacy_game()
    for text in ("⟨a?T:B,c?L:R⟩", "⟨M,C⟩", "⟨a?B:T,c?R:L⟩"):
        prof = parse_profile(g, text)
        assert format_profile(prof, g.player_names) == text
        assert parse_profile(g, format_profile(prof, g.player_names)) == prof


def test_round_trip_two_bit_space():
    g = presets.confidentiality_game()
    k = KnowledgeState.initial(g).learn("Bob", "a")
    for s in strategy_space(g, k, "Bob"):
        assert parse_for(g, "Bob", format_strategy(s)) == s
