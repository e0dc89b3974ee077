"""Decomposed games with secrets: players, bits, contexts, worlds and payoffs.

A game is a set of simultaneous two-player *contexts*; a player's payoff is
the sum of her cells over every context she takes part in.  Uncertainty comes
from secret bits (independent fair coins), optional noisy copies of bits,
bits computed by a deterministic rule, and an optional prior over *variants*
that replace some of the contexts.  All arithmetic is exact
(:class:`fractions.Fraction`).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from .errors import GameError, InvalidChoice, KnowledgeViolation

ROLES = ("subject", "sender", "recipient", "replica-subject")
BIT_KINDS = ("secret", "signal", "channel-output")
DEFAULT_CHOICES = {
    "subject": ("T", "M", "B"),
    "sender": ("N", "I", "F"),
    "recipient": ("L", "C", "R"),
    "replica-subject": ("T", "M", "B"),
}
HALF = Fraction(1, 2)


def rational(value) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a Fraction.

    Floats are rejected so that no binary rounding leaks into payoffs.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, float):
        raise TypeError(f"refusing float {value!r}; pass a Fraction or 'p/q' string")
    return Fraction(value)


def threshold_message(values: Sequence[int], alpha, fallback: int) -> int:
    """One-bit summary of ``values``: 0 below ``alpha``, 1 above ``1 - alpha``.

    Inside the closed band the sender's own bit ``fallback`` is sent instead.
    """
    alpha = rational(alpha)
    if not 0 < alpha < HALF:
        raise ValueError("alpha must lie strictly between 0 and 1/2")
    frac = Fraction(sum(values), len(values))
    if frac < alpha:
        return 0
    if frac > 1 - alpha:
        return 1
    return int(fallback)


def _threshold_rule(inputs, params):
    *values, fallback = inputs
    return threshold_message(values, params[0], fallback)


# deterministic bit rules; the last source of "threshold" is the fallback bit
RULES = {"threshold": _threshold_rule}


@dataclass(frozen=True)
class Player:
    name: str
    role: str
    choices: tuple[str, ...] = ()

    def __post_init__(self):
        if self.role not in ROLES:
            raise GameError(f"unknown role {self.role!r}")
        if not self.choices:
            object.__setattr__(self, "choices", DEFAULT_CHOICES[self.role])
        if len(self.choices) < 2 or len(set(self.choices)) != len(self.choices):
            raise GameError(f"{self.name}: need at least two distinct choices")

    def index_of(self, label: str) -> int:
        try:
            return self.choices.index(label)
        except ValueError:
            raise InvalidChoice(f"{label!r} is not a choice of {self.name}") from None


@dataclass(frozen=True)
class Bit:
    """A binary random variable of the game.

    ``secret`` bits are fair coins.  A ``channel-output`` bit either copies
    ``source[0]`` with probability ``1/2 + fidelity`` or, with a ``rule``, is a
    deterministic function of ``source``.  ``value`` pins a bit to a constant
    (used for signals once the stage that sets them has been resolved).
    """

    name: str
    kind: str = "secret"
    owner: str | None = None
    source: tuple[str, ...] = ()
    fidelity: Fraction | None = None
    rule: str | None = None
    params: tuple = ()
    value: int | None = None

    def __post_init__(self):
        if self.kind not in BIT_KINDS:
            raise GameError(f"unknown bit kind {self.kind!r}")
        if self.kind == "secret" and self.owner is None:
            raise GameError(f"secret {self.name!r} needs an owner")
        if self.fidelity is not None:
            object.__setattr__(self, "fidelity", rational(self.fidelity))
            if not 0 <= self.fidelity <= HALF:
                raise GameError("fidelity must lie in [0, 1/2]")
            if len(self.source) != 1:
                raise GameError("a noisy bit copies exactly one source bit")
        if self.rule is not None and self.rule not in RULES:
            raise GameError(f"unknown bit rule {self.rule!r}")
        if self.value not in (None, 0, 1):
            raise GameError("pinned value must be 0 or 1")

    @property
    def is_free(self) -> bool:
        """True for coin-flip bits that nothing else determines."""
        return self.value is None and self.fidelity is None and self.rule is None

    def pinned(self, value: int) -> "Bit":
        return Bit(self.name, self.kind, self.owner, value=int(value))


@dataclass(frozen=True)
class Context:
    """Two-player context; ``cells[i][j]`` is (row payoff, column payoff)."""

    row: str
    col: str
    cells: tuple[tuple[tuple[Fraction, Fraction], ...], ...]

    def __post_init__(self):
        if self.row == self.col:
            raise GameError("a context needs two distinct players")
        cells = tuple(
            tuple((rational(a), rational(b)) for a, b in line) for line in self.cells
        )
        object.__setattr__(self, "cells", cells)

    @classmethod
    def from_rows(cls, row: str, col: str, rows) -> "Context":
        return cls(row, col, tuple(tuple(tuple(c) for c in line) for line in rows))

    @property
    def pair(self) -> frozenset:
        return frozenset((self.row, self.col))

    def scaled(self, factor) -> "Context":
        f = rational(factor)
        return Context(self.row, self.col, tuple(
            tuple((a * f, b * f) for a, b in line) for line in self.cells))


@dataclass(frozen=True)
class Variant:
    name: str
    prior: Fraction
    contexts: tuple[Context, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "prior", rational(self.prior))
        if not 0 <= self.prior <= 1:
            raise GameError("variant prior must lie in [0, 1]")


@dataclass(frozen=True)
class World:
    weight: Fraction
    values: tuple[int, ...]
    variant: int


@dataclass(frozen=True)
class Game:
    players: tuple[Player, ...]
    bits: tuple[Bit, ...] = ()
    contexts: tuple[Context, ...] = ()
    variants: tuple[Variant, ...] = ()

    def __post_init__(self):
        for name in ("players", "bits", "contexts", "variants"):
            object.__setattr__(self, name, tuple(getattr(self, name)))
        names = [p.name for p in self.players]
        if len(set(names)) != len(names):
            raise GameError("player names must be unique")
        bit_names = [b.name for b in self.bits]
        if len(set(bit_names)) != len(bit_names):
            raise GameError("bit names must be unique")
        seen = set()
        for bit in self.bits:
            if bit.owner is not None and bit.owner not in names:
                raise GameError(f"bit {bit.name!r} owned by unknown player {bit.owner!r}")
            for src in bit.source:
                if src not in seen:
                    raise GameError(f"bit {bit.name!r}: source {src!r} must be declared earlier")
            seen.add(bit.name)
        self._check_contexts(self.contexts)
        if self.variants:
            total = sum(v.prior for v in self.variants)
            if total != 1:
                raise GameError(f"variant priors sum to {total}, not 1")
            pairs = {frozenset(c.pair for c in v.contexts) for v in self.variants}
            if len(pairs) != 1:
                raise GameError("every variant must override the same player pairs")
            for v in self.variants:
                self._check_contexts(v.contexts)

    def _check_contexts(self, contexts):
        pairs = [c.pair for c in contexts]
        if len(set(pairs)) != len(pairs):
            raise GameError("at most one context per player pair")
        for c in contexts:
            rp, cp = self.player(c.row), self.player(c.col)
            if len(c.cells) != len(rp.choices) or any(
                len(line) != len(cp.choices) for line in c.cells
            ):
                raise GameError(f"context {c.row}-{c.col} has the wrong shape")

    # lookups -------------------------------------------------------------
    def player(self, name: str) -> Player:
        for p in self.players:
            if p.name == name:
                return p
        raise GameError(f"unknown player {name!r}")

    @cached_property
    def player_names(self) -> tuple[str, ...]:
        return tuple(p.name for p in self.players)

    def bit(self, name: str) -> Bit:
        for b in self.bits:
            if b.name == name:
                return b
        raise GameError(f"unknown bit {name!r}")

    @cached_property
    def bit_names(self) -> tuple[str, ...]:
        return tuple(b.name for b in self.bits)

    @cached_property
    def variant_names(self) -> tuple[str, ...]:
        return tuple(v.name for v in self.variants)

    def contexts_for(self, variant: int | None = None) -> tuple[Context, ...]:
        """Contexts in force in ``variant`` (base contexts if the game has none)."""
        if not self.variants:
            return self.contexts
        over = self.variants[variant or 0].contexts
        pairs = {c.pair for c in over}
        return tuple(c for c in self.contexts if c.pair not in pairs) + over

    # derived games -------------------------------------------------------
    def replace(self, **changes) -> "Game":
        fields = dict(players=self.players, bits=self.bits,
                      contexts=self.contexts, variants=self.variants)
        fields.update(changes)
        return Game(**fields)

    def restrict_variant(self, name: str) -> "Game":
        """Single-variant game with ``name``'s contexts merged into the base."""
        idx = self.variant_names.index(name)
        return Game(self.players, self.bits, self.contexts_for(idx), ())

    def with_bit(self, bit: Bit) -> "Game":
        return self.replace(bits=self.bits + (bit,))

    def pin(self, values: Mapping[str, int]) -> "Game":
        bits = tuple(b.pinned(values[b.name]) if b.name in values else b for b in self.bits)
        return self.replace(bits=bits)

    def scaled(self, factor) -> "Game":
        return self.replace(
            contexts=tuple(c.scaled(factor) for c in self.contexts),
            variants=tuple(Variant(v.name, v.prior, tuple(c.scaled(factor) for c in v.contexts))
                           for v in self.variants),
        )

    # sample space --------------------------------------------------------
    @cached_property
    def worlds(self) -> tuple[World, ...]:
        """Every (bit valuation, variant) with positive probability, in a fixed order."""
        variants = [(i, v.prior) for i, v in enumerate(self.variants)] or [(0, Fraction(1))]
        index = {b.name: i for i, b in enumerate(self.bits)}
        partial = [((), Fraction(1))]
        for bit in self.bits:
            nxt = []
            for values, w in partial:
                if bit.value is not None:
                    nxt.append((values + (bit.value,), w))
                elif bit.rule is not None:
                    inputs = [values[index[s]] for s in bit.source]
                    nxt.append((values + (RULES[bit.rule](inputs, bit.params),), w))
                elif bit.fidelity is not None:
                    src = values[index[bit.source[0]]]
                    same = HALF + bit.fidelity
                    for val, p in ((0, same if src == 0 else 1 - same),
                                   (1, same if src == 1 else 1 - same)):
                        if p:
                            nxt.append((values + (val,), w * p))
                else:
                    nxt.extend(((values + (0,), w * HALF), (values + (1,), w * HALF)))
            partial = nxt
        return tuple(World(w * pv, values, vi) for vi, pv in variants if pv
                     for values, w in partial)


@dataclass(frozen=True)
class KnowledgeState:
    """Which bits each player may condition on, and who knows the variant."""

    known: tuple[tuple[str, frozenset], ...]
    variant_known: frozenset = frozenset()

    @classmethod
    def build(cls, known: Mapping[str, Iterable[str]], variant_known: Iterable[str] = ()):
        return cls(tuple(sorted((p, frozenset(b)) for p, b in known.items())),
                   frozenset(variant_known))

    @classmethod
    def initial(cls, game: Game, variant_known: Iterable[str] = ()) -> "KnowledgeState":
        """Owners know their own bits; nobody else knows anything."""
        known = {p.name: set() for p in game.players}
        for b in game.bits:
            if b.owner is not None:
                known[b.owner].add(b.name)
        return cls.build(known, variant_known)

    def bits_of(self, player: str) -> frozenset:
        for p, bits in self.known:
            if p == player:
                return bits
        return frozenset()

    def knows(self, player: str, bit: str) -> bool:
        return bit in self.bits_of(player)

    def knows_variant(self, player: str) -> bool:
        return player in self.variant_known

    def as_dict(self) -> dict:
        return {p: set(b) for p, b in self.known}

    def learn(self, player: str, *bits: str) -> "KnowledgeState":
        known = self.as_dict()
        known.setdefault(player, set()).update(bits)
        return KnowledgeState.build(known, self.variant_known)

    def learn_variant(self, *players: str) -> "KnowledgeState":
        return KnowledgeState(self.known, self.variant_known | frozenset(players))

    def includes(self, other: "KnowledgeState") -> bool:
        """True when this state knows at least everything ``other`` knows."""
        return all(bits <= self.bits_of(p) for p, bits in other.known) and \
            other.variant_known <= self.variant_known

    def check_game(self, game: Game):
        for bit in game.bits:
            if bit.owner is not None and not self.knows(bit.owner, bit.name):
                raise KnowledgeViolation(f"{bit.owner} must know own bit {bit.name!r}")


def _valuation_index(deps, values, position) -> int:
    idx = 0
    for d in deps:
        idx = 2 * idx + values[position[d]]
    return idx


@dataclass(frozen=True)
class Strategy:
    """A total map from valuations of ``deps`` (and optionally the variant) to a choice.

    ``table`` is indexed variant-major, then by the valuation read as a binary
    number with ``deps[0]`` most significant.  Instances built through
    :meth:`make` are normalised: dependencies that never change the choice are
    dropped, so equal behaviour means equal objects.
    """

    player: str
    deps: tuple[str, ...]
    table: tuple[str, ...]
    variants: tuple[str, ...] = ()

    @classmethod
    def constant(cls, player: str, label: str) -> "Strategy":
        return cls(player, (), (label,))

    @classmethod
    def make(cls, player, deps, table, variants=()) -> "Strategy":
        deps = tuple(deps)
        order = sorted(range(len(deps)), key=lambda i: deps[i])
        table = tuple(table)
        nv = max(len(variants), 1)
        if len(table) != nv * 2 ** len(deps):
            raise GameError("strategy table has the wrong size")
        if order != list(range(len(deps))):
            table = _permute_table(table, len(deps), order, nv)
            deps = tuple(deps[i] for i in order)
        while True:
            drop = next((i for i in range(len(deps)) if _irrelevant(table, len(deps), i, nv)), None)
            if drop is None:
                break
            table = _marginal(table, len(deps), drop, nv)
            deps = deps[:drop] + deps[drop + 1:]
        if variants and all(table[v * 2 ** len(deps):(v + 1) * 2 ** len(deps)]
                            == table[:2 ** len(deps)] for v in range(nv)):
            table, variants = table[:2 ** len(deps)], ()
        return cls(player, deps, table, tuple(variants))

    def choose(self, values: Mapping[str, int], variant: int = 0) -> str:
        idx = 0
        for d in self.deps:
            idx = 2 * idx + values[d]
        if self.variants:
            idx += variant * 2 ** len(self.deps)
        return self.table[idx]

    def expand(self, deps: Sequence[str], variants: Sequence[str] = ()) -> tuple[str, ...]:
        """Table of this strategy re-expressed over a superset of dependencies."""
        deps = tuple(deps)
        missing = set(self.deps) - set(deps)
        if missing:
            raise KnowledgeViolation(f"{self.player} cannot condition on {sorted(missing)}")
        if self.variants and tuple(variants) != self.variants:
            raise KnowledgeViolation(f"{self.player} conditions on the variant")
        out = []
        for v in range(max(len(variants), 1)):
            for val in itertools.product((0, 1), repeat=len(deps)):
                out.append(self.choose(dict(zip(deps, val)), v))
        return tuple(out)

    def check(self, game: Game, knowledge: KnowledgeState):
        player = game.player(self.player)
        for label in set(self.table):
            player.index_of(label)
        unknown = set(self.deps) - knowledge.bits_of(self.player)
        if unknown:
            raise KnowledgeViolation(
                f"{self.player} conditions on unknown bit(s) {sorted(unknown)}")
        if self.variants:
            if not knowledge.knows_variant(self.player):
                raise KnowledgeViolation(f"{self.player} does not know the variant")
            if self.variants != game.variant_names:
                raise GameError("variant-dependent strategy names the wrong variants")

    def swapped(self, bit: str) -> "Strategy":
        """The strategy with the two branches on ``bit`` exchanged."""
        if bit not in self.deps:
            return self
        pos = self.deps.index(bit)
        n = len(self.deps)
        table = list(self.table)
        block = 2 ** n
        for start in range(0, len(table), block):
            for val in range(block):
                table[start + val] = self.table[start + (val ^ (1 << (n - 1 - pos)))]
        return Strategy.make(self.player, self.deps, table, self.variants)

    def __str__(self):
        from .notation import format_strategy

        return format_strategy(self)


def _permute_table(table, n, order, nv):
    out = []
    block = 2 ** n
    for v in range(nv):
        for val in itertools.product((0, 1), repeat=n):
            # val is over the new order; map back to the old bit positions
            old = [0] * n
            for new_pos, old_pos in enumerate(order):
                old[old_pos] = val[new_pos]
            idx = 0
            for b in old:
                idx = 2 * idx + b
            out.append(table[v * block + idx])
    return tuple(out)


def _irrelevant(table, n, pos, nv):
    shift = 1 << (n - 1 - pos)
    return all(table[i] == table[i ^ shift] for i in range(nv * 2 ** n))


def _marginal(table, n, pos, nv):
    shift = 1 << (n - 1 - pos)
    return tuple(table[i] for i in range(nv * 2 ** n) if not i & shift)


def enumerate_strategies(choice_count: int, known_bit_count: int) -> list[tuple[int, ...]]:
    """All ``choice_count ** (2 ** known_bit_count)`` tables of choice indices, lexicographically."""
    if choice_count < 1 or known_bit_count < 0:
        raise ValueError("need choice_count >= 1 and known_bit_count >= 0")
    return list(itertools.product(range(choice_count), repeat=2 ** known_bit_count))


def strategy_space(game: Game, knowledge: KnowledgeState, player: str) -> list[Strategy]:
    """Every knowledge-respecting strategy of ``player`` in canonical order.

    Pinned bits carry no information and are left out of the dependency list.
    """
    p = game.player(player)
    deps = tuple(sorted(b for b in knowledge.bits_of(player)
                        if game.bit(b).value is None))
    variants = game.variant_names if (
        len(game.variants) > 1 and knowledge.knows_variant(player)) else ()
    cells = max(len(variants), 1) * 2 ** len(deps)
    return [Strategy.make(player, deps, [p.choices[i] for i in tab], variants)
            for tab in itertools.product(range(len(p.choices)), repeat=cells)]


Profile = Mapping[str, Strategy]


def total_payoff(game: Game, world: World | None, choices: Mapping[str, str],
                 order: Sequence[int] | None = None) -> tuple[Fraction, ...]:
    """Payoff vector (in player order) for pure ``choices`` in ``world``.

    ``order`` permutes the summation order of contexts; the result never depends
    on it, which the test-suite checks.
    """
    idx = {name: game.player(name).index_of(choices[name]) for name in game.player_names}
    variant = world.variant if world is not None else 0
    ctxs = game.contexts_for(variant)
    if order is not None:
        ctxs = [ctxs[i] for i in order]
    totals = dict.fromkeys(game.player_names, Fraction(0))
    for c in ctxs:
        a, b = c.cells[idx[c.row]][idx[c.col]]
        totals[c.row] += a
        totals[c.col] += b
    return tuple(totals[n] for n in game.player_names)


def _check_profile(game, knowledge, profile):
    for name in game.player_names:
        if name not in profile:
            raise GameError(f"profile has no strategy for {name}")
        if profile[name].player != name:
            raise GameError(f"strategy for {profile[name].player} given to {name}")
        profile[name].check(game, knowledge)


def expected_payoff(game: Game, knowledge: KnowledgeState, profile: Profile) -> tuple[Fraction, ...]:
    """Exact expectation of :func:`total_payoff` over all worlds."""
    _check_profile(game, knowledge, profile)
    totals = [Fraction(0)] * len(game.players)
    for world in game.worlds:
        values = dict(zip(game.bit_names, world.values))
        choices = {n: s.choose(values, world.variant) for n, s in profile.items()
                   if n in game.player_names}
        for i, v in enumerate(total_payoff(game, world, choices)):
            totals[i] += world.weight * v
    return tuple(totals)


def context_payoffs(game: Game, knowledge: KnowledgeState, profile: Profile) -> dict:
    """Expected payoff contributed by each player pair, summed context by context.

    Keys are ``(row, col)``; values map both players to their expected share.
    """
    _check_profile(game, knowledge, profile)
    out: dict = {}
    for world in game.worlds:
        values = dict(zip(game.bit_names, world.values))
        for c in game.contexts_for(world.variant):
            r = game.player(c.row).index_of(profile[c.row].choose(values, world.variant))
            k = game.player(c.col).index_of(profile[c.col].choose(values, world.variant))
            a, b = c.cells[r][k]
            acc = out.setdefault((c.row, c.col), {c.row: Fraction(0), c.col: Fraction(0)})
            acc[c.row] += world.weight * a
            acc[c.col] += world.weight * b
    return out


def observationally_equivalent(s1: Strategy, s2: Strategy, observer_known: Iterable[str]) -> bool:
    """Whether an observer knowing ``observer_known`` sees the same choice distribution.

    For every valuation of the observed bits, the multiset of choices each
    strategy makes over the unobserved bits must coincide.
    """
    if s1.player != s2.player:
        raise GameError("equivalence is defined between strategies of one player")
    if s1 == s2:
        return True
    if s1.variants != s2.variants and s1.variants and s2.variants:
        return False
    variants = s1.variants or s2.variants
    deps = tuple(sorted(set(s1.deps) | set(s2.deps)))
    seen = set(observer_known)
    observed = [d for d in deps if d in seen]
    hidden = [d for d in deps if d not in seen]
    for v in range(max(len(variants), 1)):
        for ov in itertools.product((0, 1), repeat=len(observed)):
            base = dict(zip(observed, ov))
            bags = []
            for s in (s1, s2):
                bag = sorted(s.choose({**base, **dict(zip(hidden, hv))}, v if s.variants else 0)
                             for hv in itertools.product((0, 1), repeat=len(hidden)))
                bags.append(bag)
            if bags[0] != bags[1]:
                return False
    return True


def equivalence_classes(strategies: Sequence[Strategy], observer_known: Iterable[str]) -> list[list[Strategy]]:
    """Partition ``strategies`` under observational equivalence.

    Classes keep the input order and each class's first element (the
    canonical-least one when the input is canonical) is its representative.
    """
    observer_known = set(observer_known)
    classes: list[list[Strategy]] = []
    for s in strategies:
        for cls in classes:
            if observationally_equivalent(cls[0], s, observer_known):
                cls.append(s)
                break
        else:
            classes.append([s])
    return classes
