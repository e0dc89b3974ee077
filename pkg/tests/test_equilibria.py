from fractions import Fraction

import pytest

import oracle
from cigames import presets
from cigames.core import KnowledgeState, strategy_space
from cigames.equilibria import (EquilibriumSet, best_response, dominates, enumerate_nash, is_nash,
                                pareto_frontier, payoff_dominant)
from cigames.errors import BudgetExceeded
from cigames.notation import format_profile, parse_for, parse_profile

SETTINGS = [(name, {}) for name in presets.GAMES] + [
    ("privacy", {"Carol": "a"}),
    ("confidentiality", {"Bob": "a"}),
    ("confidentiality", {"Bob": "a", "Carol": "a"}),
    ("mandatory", {"Bob": "a", "Carol": "a"}),
    ("noisy", {"Bob": "a"}),
]


def knowledge(game, extra):
    k = KnowledgeState.initial(game)
    for p, bits in extra.items():
        k = k.learn(p, *bits)
    return k


@pytest.mark.parametrize("name,extra", SETTINGS)
def test_enumeration_matches_oracle(name, extra):
    g = presets.GAMES[name]()
    k = knowledge(g, extra)
    spaces = {p: strategy_space(g, k, p) for p in g.player_names}
    want = sorted((format_profile(p, g.player_names), v) for p, v in oracle.nash(g, spaces))
    got = sorted(enumerate_nash(g, k).formatted())
    assert got == want


def test_privacy_five_equilibria():
    g = presets.privacy_game()
    eqs = enumerate_nash(g, KnowledgeState.initial(g))
    assert sorted(eqs.payoffs) == [(2, 2)] + [(4, 4)] * 4


@pytest.mark.parametrize("name,extra", SETTINGS)
def test_quotient_partitions_the_equilibria(name, extra):
    g = presets.GAMES[name]()
    k = knowledge(g, extra)
    full = enumerate_nash(g, k)
    q = enumerate_nash(g, k, quotient=True)
    assert sum(q.class_sizes) == len(full)
    assert set(q.payoffs) == set(full.payoffs)


def test_privacy_quotient_two_classes():
    g = presets.privacy_game()
    q = enumerate_nash(g, KnowledgeState.initial(g), quotient=True)
    assert sorted(zip(q.payoffs, q.class_sizes)) == [((2, 2), 1), ((4, 4), 4)]


def test_shared_secret_leaves_only_m_c():
    g = presets.privacy_game()
    q = enumerate_nash(g, knowledge(g, {"Carol": "a"}), quotient=True)
    assert q.formatted() == [("⟨M,C⟩", (2, 2))]


def test_confidentiality_dominant_values():
    g = presets.confidentiality_game()
    dom = payoff_dominant(enumerate_nash(g, KnowledgeState.initial(g), quotient=True))
    assert set(dom.payoffs) == {(9, 5, 12)}
    assert parse_profile(g, "<a?T:B,b?N:F,c?L:R>") in enumerate_nash(g, KnowledgeState.initial(g)).profiles
    dom = payoff_dominant(enumerate_nash(g, knowledge(g, {"Bob": "a"}), quotient=True))
    assert set(dom.payoffs) == {(10, 6, 12)}


def naive_dominant(eqs, idx):
    return [k for k, u in enumerate(eqs.payoffs) if all(dominates(u, v, idx) for v in eqs.payoffs)]


@pytest.mark.parametrize("name,extra", SETTINGS)
def test_payoff_dominant_matches_pairwise_definition(name, extra):
    g = presets.GAMES[name]()
    eqs = enumerate_nash(g, knowledge(g, extra))
    idx = list(range(len(g.players)))
    assert payoff_dominant(eqs).profiles == eqs.subset(naive_dominant(eqs, idx)).profiles
    sub = g.player_names[:2]
    assert payoff_dominant(eqs, sub).profiles == eqs.subset(naive_dominant(eqs, [0, 1])).profiles


def test_empty_dominant_set_and_frontier():
    g = presets.mandatory_game()
    eqs = enumerate_nash(g, KnowledgeState.initial(g), quotient=True)
    assert len(payoff_dominant(eqs)) == 0
    front = pareto_frontier(eqs)
    assert len(front) >= 2
    for u in front.payoffs:
        assert not any(dominates(v, u) and v != u for v in eqs.payoffs)


def test_payoff_dominant_of_empty_set():
    empty = EquilibriumSet(("A",), [], [])
    assert len(payoff_dominant(empty)) == 0


def test_is_nash_and_best_response():
    g = presets.privacy_game()
    k = KnowledgeState.initial(g)
    assert is_nash(g, k, parse_profile(g, "<a?T:B,c?L:R>"))
    assert not is_nash(g, k, parse_profile(g, "<T,C>"))
    value, best = best_response(g, k, "Carol", {"Alice": parse_for(g, "Alice", "a?T:B")})
    assert value == 4
    assert parse_for(g, "Carol", "c?L:R") in best


def test_is_nash_menu_restricts_deviations():
    sc = presets.noisy_channel_script(Fraction(1, 4))
    g = sc.game
    k = KnowledgeState.initial(g).learn("Bob", "a").learn("Carol", "ã")
    prof = parse_profile(g, "<a?T:B,a?N:F,ã?L:R>")
    assert not is_nash(g, k, prof)
    menu = {"Alice": [parse_for(g, "Alice", "M")]}
    assert is_nash(g, k, prof, players=["Alice"], menu=menu)


def test_fixed_players_are_not_checked():
    g = presets.notification_game()
    k = KnowledgeState.initial(g)
    fixed = {"Alice": parse_for(g, "Alice", "T")}
    eqs = enumerate_nash(g, k, fixed=fixed)
    assert all(p["Alice"] == fixed["Alice"] for p in eqs.profiles)


def test_budget():
    g = presets.confidentiality_game()
    with pytest.raises(BudgetExceeded) as exc:
        enumerate_nash(g, KnowledgeState.initial(g), budget=100)
    assert exc.value.required == 729
