from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

import oracle
from cigames import presets
from cigames.core import (Bit, Context, Game, KnowledgeState, Player, Strategy, context_payoffs,
                          expected_payoff, strategy_space)
from cigames.equilibria import enumerate_nash
from cigames.mechanisms import (NoisyChannel, TaxRule, TransferRule, apply_distributional, apply_noisy,
                                attainable_bits)
from cigames.notation import format_strategy, parse_for

PLAYERS = (Player("Alice", "subject"), Player("Bob", "sender"), Player("Carol", "recipient"))
BITS = (Bit("a", "secret", "Alice"), Bit("b", "secret", "Bob"), Bit("c", "secret", "Carol"))
PAIRS = (("Alice", "Carol"), ("Alice", "Bob"), ("Bob", "Carol"))

payoff = st.integers(-10, 10)
matrix = st.lists(st.lists(st.tuples(payoff, payoff), min_size=3, max_size=3), min_size=3, max_size=3)


@st.composite
def games(draw):
    mats = [draw(matrix) for _ in PAIRS]
    return Game(PLAYERS, BITS, tuple(Context.from_rows(r, c, m) for (r, c), m in zip(PAIRS, mats)))


@st.composite
def setting(draw):
    """A random game, a knowledge state with up to two bits each, and a profile."""
    g = draw(games())
    k = KnowledgeState.initial(g)
    for p in g.player_names:
        extra = draw(st.sets(st.sampled_from(g.bit_names), max_size=1))
        k = k.learn(p, *extra)
    prof = {p: draw(st.sampled_from(strategy_space(g, k, p))) for p in g.player_names}
    return g, k, prof


@settings(max_examples=60, deadline=None)
@given(setting(), st.fractions(min_value=-5, max_value=5, max_denominator=7))
def test_payoffs_scale_linearly(s, factor):
    g, k, prof = s
    assert expected_payoff(g.scaled(factor), k, prof) == tuple(factor * x for x in expected_payoff(g, k, prof))


@settings(max_examples=60, deadline=None)
@given(setting(), setting())
def test_payoffs_add_across_games(s1, s2):
    g1, k, prof = s1
    g2 = s2[0]
    summed = g1.replace(contexts=tuple(
        Context(c.row, c.col, tuple(tuple((x[0] + y[0], x[1] + y[1]) for x, y in zip(l1, l2))
                                    for l1, l2 in zip(c.cells, d.cells)))
        for c, d in zip(g1.contexts, g2.contexts)))
    want = tuple(x + y for x, y in zip(expected_payoff(g1, k, prof), expected_payoff(g2, k, prof)))
    assert expected_payoff(summed, k, prof) == want


@settings(max_examples=60, deadline=None)
@given(setting(), st.sampled_from(["a", "b", "c"]))
def test_branch_swap_invariance(s, bit):
    g, k, prof = s
    swapped = {p: strat.swapped(bit) for p, strat in prof.items()}
    assert expected_payoff(g, k, swapped) == expected_payoff(g, k, prof)


@settings(max_examples=60, deadline=None)
@given(setting())
def test_decomposition_additivity(s):
    g, k, prof = s
    parts = context_payoffs(g, k, prof)
    totals = {p: Fraction(0) for p in g.player_names}
    for share in parts.values():
        for p, v in share.items():
            totals[p] += v
    assert tuple(totals[p] for p in g.player_names) == expected_payoff(g, k, prof)


@settings(max_examples=60, deadline=None)
@given(setting())
def test_fast_payoffs_match_oracle(s):
    g, k, prof = s
    assert expected_payoff(g, k, prof) == oracle.payoff(g, prof)


@settings(max_examples=25, deadline=None)
@given(games())
def test_enumeration_matches_oracle_on_random_games(g):
    k = KnowledgeState.initial(g)
    spaces = {p: strategy_space(g, k, p) for p in g.player_names}
    want = sorted((tuple(str(s[p]) for p in g.player_names), v) for s, v in oracle.nash(g, spaces))
    got = sorted((tuple(str(s[p]) for p in g.player_names), v) for s, v in enumerate_nash(g, k))
    assert got == want


TWO_BIT = KnowledgeState.initial(presets.confidentiality_game()).learn("Bob", "a").learn("Alice", "b")


@given(st.sampled_from(["Alice", "Bob"]), st.data())
def test_parser_round_trip_two_bit_strategies(player, data):
    g = presets.confidentiality_game()
    s = data.draw(st.sampled_from(strategy_space(g, TWO_BIT, player)))
    text = format_strategy(s)
    assert parse_for(g, player, text) == s


@settings(max_examples=60, deadline=None)
@given(games(), st.integers(0, 10), st.sets(st.tuples(st.sampled_from("NIF"), st.sampled_from("TMB")), max_size=4))
def test_transfer_conserves_every_cell(g, amount, when):
    rule = TransferRule("Bob", "Alice", amount, tuple(sorted(when)))
    t = apply_distributional(g, [rule])
    for c, d in zip(g.contexts, t.contexts):
        for l1, l2 in zip(c.cells, d.cells):
            for x, y in zip(l1, l2):
                assert x[0] + x[1] == y[0] + y[1]


@settings(max_examples=40, deadline=None)
@given(setting(), st.integers(0, 5), st.integers(0, 5), st.sets(st.sampled_from("TMB"), max_size=2))
def test_tax_is_monotone(s, low, extra, exempt):
    g, k, prof = s
    small = apply_distributional(g, [TaxRule("Alice", low, tuple(sorted(exempt)))])
    large = apply_distributional(g, [TaxRule("Alice", low + extra, tuple(sorted(exempt)))])
    u, v = expected_payoff(small, k, prof), expected_payoff(large, k, prof)
    assert v[0] <= u[0]
    assert v[1:] == u[1:]


@given(st.fractions(min_value=0, max_value=Fraction(1, 2), max_denominator=64))
def test_channel_degrades_what_the_recipient_can_hold(delta):
    base = presets.noisy_script()
    noisy = apply_noisy(base, NoisyChannel("a", "ã", delta), "Bob", "Carol")
    assert attainable_bits(noisy, "Carol") - {"ã"} <= attainable_bits(base, "Carol")
    assert "a" not in attainable_bits(noisy, "Carol")
    assert attainable_bits(noisy, "Alice") == attainable_bits(base, "Alice")


@settings(max_examples=40, deadline=None)
@given(st.fractions(min_value=0, max_value=Fraction(1, 2), max_denominator=64))
def test_noisy_profile_follows_affine_law(delta):
    g = presets.noisy_channel_script(delta).game
    k = KnowledgeState.initial(g).learn("Bob", "a").learn("Carol", "ã")
    prof = {p: parse_for(g, p, t) for p, t in zip(g.player_names, ("a?T:B", "a?N:F", "ã?L:R"))}
    assert expected_payoff(g, k, prof) == (10 - 16 * delta, 2 + 12 * delta, 8 + 28 * delta)


@settings(max_examples=40, deadline=None)
@given(st.fractions(min_value=0, max_value=Fraction(1, 2), max_denominator=64), st.data())
def test_any_profile_is_affine_in_fidelity(delta, data):
    def value(d):
        g = presets.noisy_channel_script(d).game
        k = KnowledgeState.initial(g).learn("Bob", "a").learn("Carol", "ã")
        return g, k

    g, k = value(delta)
    prof = {p: data.draw(st.sampled_from(strategy_space(g, k, p))) for p in g.player_names}
    at = {d: expected_payoff(*value(d), prof) for d in (Fraction(0), Fraction(1, 2))}
    got = expected_payoff(g, k, prof)
    assert got == tuple(x + 2 * delta * (y - x) for x, y in zip(at[0], at[Fraction(1, 2)]))
