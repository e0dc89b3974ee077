"""Brute-force Nash equilibria over secret-conditional strategy spaces.

Expected payoffs are linear in the context matrices, so each player's payoff
splits into pairwise tables ``A[i][j][s_i, s_j]``.  The tables are computed
once, in integers scaled by a common denominator, which keeps enumeration
fast and exact.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from .core import (Game, KnowledgeState, Strategy, observationally_equivalent,
                   strategy_space)
from .errors import BudgetExceeded, GameError

DEFAULT_BUDGET = 10 ** 8


def _lcm(values):
    out = 1
    for v in values:
        out = out * v // math.gcd(out, v)
    return out


class PayoffModel:
    """Pairwise expected-payoff tables for fixed per-player strategy lists."""

    def __init__(self, game: Game, knowledge: KnowledgeState, spaces: Mapping[str, Sequence[Strategy]]):
        self.game = game
        self.players = game.player_names
        self.spaces = {p: list(spaces[p]) for p in self.players}
        for p, space in self.spaces.items():
            for s in space:
                s.check(game, knowledge)
        worlds = game.worlds
        wscale = _lcm(w.weight.denominator for w in worlds)
        cells = [x for vi in range(max(len(game.variants), 1)) for c in game.contexts_for(vi)
                 for line in c.cells for pair in line for x in pair]
        cscale = _lcm(x.denominator for x in cells) if cells else 1
        self.scale = wscale * cscale
        wint = [int(w.weight * wscale) for w in worlds]
        bound = max((abs(x) for x in cells), default=0) * cscale * wscale * max(len(worlds), 1)
        dtype = np.int64 if bound * 4 * len(self.players) < 2 ** 62 else object
        self.dtype = dtype

        bit_names = game.bit_names
        choice_idx = {}
        for p in self.players:
            player = game.player(p)
            rows = []
            for s in self.spaces[p]:
                rows.append([player.index_of(s.choose(dict(zip(bit_names, w.values)), w.variant))
                             for w in worlds])
            choice_idx[p] = np.array(rows, dtype=np.int64).reshape(len(self.spaces[p]), len(worlds))

        self.tables: dict[tuple[str, str], np.ndarray] = {}
        for vi in range(max(len(game.variants), 1)):
            members = [k for k, w in enumerate(worlds) if w.variant == vi]
            for c in game.contexts_for(vi):
                row = np.array([[int(a * cscale) for a, _ in line] for line in c.cells], dtype=dtype)
                col = np.array([[int(b * cscale) for _, b in line] for line in c.cells], dtype=dtype)
                xr, xc = choice_idx[c.row], choice_idx[c.col]
                tr = self.tables.setdefault((c.row, c.col), np.zeros((len(xr), len(xc)), dtype=dtype))
                tc = self.tables.setdefault((c.col, c.row), np.zeros((len(xc), len(xr)), dtype=dtype))
                for k in members:
                    r_ix, c_ix = xr[:, k], xc[:, k]
                    tr += wint[k] * row[np.ix_(r_ix, c_ix)]
                    tc += wint[k] * col[np.ix_(r_ix, c_ix)].T

    def sizes(self) -> tuple[int, ...]:
        return tuple(len(self.spaces[p]) for p in self.players)

    def utility_tensor(self, player: str) -> np.ndarray:
        """Scaled payoff of ``player`` for every joint index, shape = :meth:`sizes`."""
        n = len(self.players)
        i = self.players.index(player)
        out = np.zeros(self.sizes(), dtype=self.dtype)
        for j, other in enumerate(self.players):
            t = self.tables.get((player, other))
            if t is None:
                continue
            shape = [1] * n
            if i > j:
                t = t.T
            shape[min(i, j)], shape[max(i, j)] = t.shape
            out = out + t.reshape(shape)
        return out

    def payoff(self, index: Sequence[int]) -> tuple[Fraction, ...]:
        out = []
        for i, p in enumerate(self.players):
            total = 0
            for j, q in enumerate(self.players):
                t = self.tables.get((p, q))
                if t is not None:
                    total += int(t[index[i], index[j]])
            out.append(Fraction(total, self.scale))
        return tuple(out)

    def deviation_values(self, player: str, index: Sequence[int]) -> list[Fraction]:
        """Payoff of ``player`` for each of her strategies, others held at ``index``."""
        i = self.players.index(player)
        acc = np.zeros(len(self.spaces[player]), dtype=self.dtype)
        for j, q in enumerate(self.players):
            t = self.tables.get((player, q))
            if t is not None:
                acc = acc + t[:, index[j]]
        return [Fraction(int(v), self.scale) for v in acc]


@dataclass
class EquilibriumSet:
    players: tuple[str, ...]
    profiles: list[dict]
    payoffs: list[tuple[Fraction, ...]]
    quotiented: bool = False
    class_sizes: list[int] = field(default_factory=list)

    def __len__(self):
        return len(self.profiles)

    def __iter__(self):
        return iter(zip(self.profiles, self.payoffs))

    def subset(self, keep: Sequence[int]) -> "EquilibriumSet":
        return EquilibriumSet(
            self.players, [self.profiles[k] for k in keep], [self.payoffs[k] for k in keep],
            self.quotiented, [self.class_sizes[k] for k in keep] if self.class_sizes else [])

    def formatted(self) -> list[tuple[str, tuple[Fraction, ...]]]:
        from .notation import format_profile

        return [(format_profile(p, self.players), v) for p, v in self]


def _spaces(game, knowledge, fixed):
    fixed = dict(fixed or {})
    return {p: [fixed[p]] if p in fixed else strategy_space(game, knowledge, p)
            for p in game.player_names}


def best_response(game: Game, knowledge: KnowledgeState, player: str,
                  others: Mapping[str, Strategy], candidates: Sequence[Strategy] | None = None):
    """Best value for ``player`` against fixed ``others`` and all strategies attaining it.

    ``candidates`` restricts the deviation space (a "menu"); by default every
    strategy her knowledge allows is tried.
    """
    spaces = {p: [others[p]] for p in game.player_names if p != player}
    spaces[player] = list(candidates) if candidates is not None else \
        strategy_space(game, knowledge, player)
    model = PayoffModel(game, knowledge, spaces)
    index = [0] * len(game.player_names)
    values = model.deviation_values(player, index)
    best = max(values)
    return best, [s for s, v in zip(spaces[player], values) if v == best]


def is_nash(game: Game, knowledge: KnowledgeState, profile: Mapping[str, Strategy],
            players: Sequence[str] | None = None, menu: Mapping[str, Sequence[Strategy]] | None = None) -> bool:
    """True when no listed player (default: all) gains by a unilateral deviation."""
    from .core import expected_payoff

    current = expected_payoff(game, knowledge, profile)
    names = game.player_names
    for p in (players or names):
        others = {q: profile[q] for q in names if q != p}
        cands = None
        if menu is not None and p in menu:
            cands = list(menu[p]) + [profile[p]]
        value, _ = best_response(game, knowledge, p, others, cands)
        if value > current[names.index(p)]:
            return False
    return True


def _correlated_sources(game: Game) -> set[str]:
    """Bits that feed some non-free bit (their values are not independent coins)."""
    out = set()
    for b in game.bits:
        if not b.is_free:
            out.update(b.source)
    changed = True
    while changed:
        changed = False
        for b in game.bits:
            if b.name in out:
                for s in b.source:
                    if s not in out:
                        out.add(s)
                        changed = True
    return out


def _observer_bits(game, knowledge, player, linked):
    seen = set()
    for q in game.player_names:
        if q != player:
            seen |= knowledge.bits_of(q)
    # a hidden bit that feeds an observed bit is effectively observed
    for b in game.bits:
        if b.name in seen:
            stack = list(b.source)
            while stack:
                s = stack.pop()
                if s not in seen:
                    seen.add(s)
                    stack.extend(game.bit(s).source)
    return seen


def joint_class_keys(game: Game, knowledge: KnowledgeState, spaces, players):
    """Key function mapping a joint strategy index to its equivalence-class key.

    Two profiles share a key when one becomes the other by relabelling the
    values of independent secret bits and by replacing each strategy with one
    the other players cannot tell apart.
    """
    linked = _correlated_sources(game)
    class_ids = []
    for p in players:
        obs = _observer_bits(game, knowledge, p, linked)
        reps: list[Strategy] = []
        ids = []
        for s in spaces[p]:
            for k, r in enumerate(reps):
                if observationally_equivalent(r, s, obs):
                    ids.append(k)
                    break
            else:
                reps.append(s)
                ids.append(len(reps) - 1)
        class_ids.append(ids)
    flippable = [b.name for b in game.bits if b.is_free and b.name not in linked]
    lookups = [{s: k for k, s in enumerate(spaces[p])} for p in players]
    group = []
    for r in range(len(flippable) + 1):
        for subset in itertools.combinations(flippable, r):
            perms = []
            for pi, p in enumerate(players):
                perm = []
                for s in spaces[p]:
                    t = s
                    for bit in subset:
                        t = t.swapped(bit)
                    perm.append(lookups[pi].get(t, None))
                perms.append(perm)
            if all(None not in perm for perm in perms):
                group.append(perms)

    def key(index):
        best = None
        for perms in group:
            cand = tuple(class_ids[i][perms[i][index[i]]] for i in range(len(players)))
            if best is None or cand < best:
                best = cand
        return best

    return key


def enumerate_nash(game: Game, knowledge: KnowledgeState, quotient: bool = False,
                   fixed: Mapping[str, Strategy] | None = None,
                   budget: int = DEFAULT_BUDGET) -> EquilibriumSet:
    """Every pure Nash profile, in canonical (lexicographic index) order.

    Players listed in ``fixed`` are committed: they keep the given strategy and
    are not checked for deviations.  With ``quotient`` one representative per
    joint-equivalence class is returned, with class sizes.
    """
    spaces = _spaces(game, knowledge, fixed)
    players = game.player_names
    required = math.prod(len(spaces[p]) for p in players)
    if required > budget:
        raise BudgetExceeded(required, budget)
    model = PayoffModel(game, knowledge, spaces)
    mask = np.ones(model.sizes(), dtype=bool)
    for i, p in enumerate(players):
        if fixed and p in fixed:
            continue
        u = model.utility_tensor(p)
        mask &= u == u.max(axis=i, keepdims=True)
    indices = [tuple(int(x) for x in ix) for ix in np.argwhere(mask)]
    profiles = [{p: spaces[p][ix[i]] for i, p in enumerate(players)} for ix in indices]
    payoffs = [model.payoff(ix) for ix in indices]
    result = EquilibriumSet(players, profiles, payoffs)
    if not quotient:
        return result
    key = joint_class_keys(game, knowledge, spaces, players)
    order, sizes = [], {}
    first = {}
    for k, ix in enumerate(indices):
        kk = key(ix)
        if kk not in first:
            first[kk] = k
            order.append(kk)
        sizes[kk] = sizes.get(kk, 0) + 1
    keep = [first[kk] for kk in order]
    out = result.subset(keep)
    out.quotiented = True
    out.class_sizes = [sizes[kk] for kk in order]
    return out


def dominates(u: Sequence[Fraction], v: Sequence[Fraction], players: Sequence[int] | None = None) -> bool:
    idx = range(len(u)) if players is None else players
    return all(u[i] >= v[i] for i in idx)


def payoff_dominant(eqs: EquilibriumSet, players: Sequence[str] | None = None) -> EquilibriumSet:
    """Equilibria whose payoffs weakly dominate every equilibrium's payoffs.

    ``players`` limits the comparison to some components (e.g. the players not
    committed to a strategy).  The result may be empty.
    """
    idx = list(range(len(eqs.players))) if players is None else [eqs.players.index(p) for p in players]
    if not len(eqs):
        return eqs.subset([])
    # a weakly dominant vector must attain the best value in every component
    top = [max(u[i] for u in eqs.payoffs) for i in idx]
    keep = [k for k, u in enumerate(eqs.payoffs) if [u[i] for i in idx] == top]
    return eqs.subset(keep)


def pareto_frontier(eqs: EquilibriumSet, players: Sequence[str] | None = None) -> EquilibriumSet:
    idx = None if players is None else [eqs.players.index(p) for p in players]
    comp = idx if idx is not None else range(len(eqs.players))

    def strictly(u, v):
        return dominates(u, v, idx) and any(u[i] > v[i] for i in comp)

    distinct = set(eqs.payoffs)
    keep = [k for k, u in enumerate(eqs.payoffs)
            if not any(strictly(v, u) for v in distinct)]
    return eqs.subset(keep)
