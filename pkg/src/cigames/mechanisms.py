"""Mechanisms: payoff redistribution and changes to how information travels.

Distributional rules rewrite context cells and never raise the total payoff
of any outcome.  Communication mechanisms rewrite a script: an interactive
channel lets the recipient refuse, a noisy channel delivers a garbled copy,
and a bandwidth limit replays the game against many subjects while one bit
crosses the channel.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .core import (HALF, Bit, Context, Game, KnowledgeState, Player, Strategy, Variant,
                   expected_payoff, rational, strategy_space, threshold_message)
from .equilibria import is_nash
from .errors import GameError, InvalidMechanism, ScriptError
from .notation import parse_for
from .staged import Accept, Play, ScenarioScript, Share, solve

__all__ = [
    "TransferRule", "TaxRule", "NoisyChannel", "BandwidthPolicy", "BandwidthModel",
    "apply_distributional", "apply_interactive", "apply_noisy", "build_bandwidth",
    "threshold_message", "prob_informative", "welfare_delta",
]


@dataclass(frozen=True)
class TransferRule:
    """``payer`` hands ``amount`` to ``payee`` whenever their pair plays one of ``when``.

    ``when`` lists (payer choice, payee choice) combinations.
    """

    payer: str
    payee: str
    amount: Fraction
    when: tuple[tuple[str, str], ...]

    def __post_init__(self):
        object.__setattr__(self, "amount", rational(self.amount))
        object.__setattr__(self, "when", tuple(tuple(w) for w in self.when))


@dataclass(frozen=True)
class TaxRule:
    """``player`` loses ``amount`` whenever her choice is not in ``exempt``."""

    player: str
    amount: Fraction
    exempt: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "amount", rational(self.amount))
        object.__setattr__(self, "exempt", tuple(self.exempt))


def _contexts_for_pair(game: Game, pair: frozenset):
    """(location, context) for the base context on ``pair`` and every variant override."""
    found = []
    for i, c in enumerate(game.contexts):
        if c.pair == pair:
            found.append((("base", i), c))
    for vi, v in enumerate(game.variants):
        for i, c in enumerate(v.contexts):
            if c.pair == pair:
                found.append(((vi, i), c))
    return found


def _rewrite(game: Game, edits: dict) -> Game:
    base = list(game.contexts)
    variants = [list(v.contexts) for v in game.variants]
    for (where, i), ctx in edits.items():
        if where == "base":
            base[i] = ctx
        else:
            variants[where][i] = ctx
    return game.replace(
        contexts=tuple(base),
        variants=tuple(Variant(v.name, v.prior, tuple(cs)) for v, cs in zip(game.variants, variants)))


def _edit_cells(ctx: Context, fn) -> Context:
    rows = []
    for i, line in enumerate(ctx.cells):
        rows.append(tuple(fn(i, j, cell) for j, cell in enumerate(line)))
    return Context(ctx.row, ctx.col, tuple(rows))


def _apply_transfer(game: Game, rule: TransferRule) -> Game:
    payer, payee = game.player(rule.payer), game.player(rule.payee)
    for a, b in rule.when:
        payer.index_of(a)
        payee.index_of(b)
    targets = _contexts_for_pair(game, frozenset((rule.payer, rule.payee)))
    if not targets:
        raise InvalidMechanism(f"no context between {rule.payer} and {rule.payee}")
    edits = {}
    for loc, ctx in targets:
        payer_is_row = ctx.row == rule.payer
        rp, cp = game.player(ctx.row), game.player(ctx.col)

        def fn(i, j, cell, payer_is_row=payer_is_row, rp=rp, cp=cp):
            mine, theirs = (rp.choices[i], cp.choices[j]) if payer_is_row else (cp.choices[j], rp.choices[i])
            if (mine, theirs) not in rule.when:
                return cell
            r, c = cell
            if payer_is_row:
                return (r - rule.amount, c + rule.amount)
            return (r + rule.amount, c - rule.amount)

        edits[loc] = _edit_cells(ctx, fn)
    return _rewrite(game, edits)


def _apply_tax(game: Game, rule: TaxRule) -> Game:
    player = game.player(rule.player)
    for x in rule.exempt:
        player.index_of(x)
    # charge once per outcome: on the first pair this player takes part in
    pairs = [c.pair for c in game.contexts] + [c.pair for v in game.variants[:1] for c in v.contexts]
    pair = next((p for p in pairs if rule.player in p), None)
    if pair is None:
        raise InvalidMechanism(f"{rule.player} takes part in no context")
    edits = {}
    for loc, ctx in _contexts_for_pair(game, pair):
        is_row = ctx.row == rule.player
        rp, cp = game.player(ctx.row), game.player(ctx.col)

        def fn(i, j, cell, is_row=is_row, rp=rp, cp=cp):
            choice = rp.choices[i] if is_row else cp.choices[j]
            if choice in rule.exempt:
                return cell
            r, c = cell
            return (r - rule.amount, c) if is_row else (r, c - rule.amount)

        edits[loc] = _edit_cells(ctx, fn)
    return _rewrite(game, edits)


def _pair_cells(game: Game):
    for c in game.contexts:
        yield ("base", c.row, c.col), c
    for v in game.variants:
        for c in v.contexts:
            yield (v.name, c.row, c.col), c


def apply_distributional(game: Game, rules: Sequence) -> Game:
    """Apply transfers and taxes in order, checking no cell total ever rises."""
    out = game
    for rule in rules:
        if rule.amount < 0:
            raise InvalidMechanism(f"negative amount in {rule!r}")
        if isinstance(rule, TransferRule):
            out = _apply_transfer(out, rule)
        elif isinstance(rule, TaxRule):
            out = _apply_tax(out, rule)
        else:
            raise InvalidMechanism(f"not a distributional rule: {rule!r}")
    before = dict(_pair_cells(game))
    for key, ctx in _pair_cells(out):
        old = before[key]
        for line_new, line_old in zip(ctx.cells, old.cells):
            for new, prev in zip(line_new, line_old):
                if sum(new) > sum(prev):
                    raise InvalidMechanism(f"mechanism raises a payoff total in {key}")
    return out


# communication mechanisms -------------------------------------------------

def _matching_shares(script: ScenarioScript, sender: str, recipient: str, bit: str | None):
    found = [k for k, s in enumerate(script.stages)
             if isinstance(s, Share) and s.decider == sender and s.recipient == recipient
             and (bit is None or s.bit == bit)]
    if not found:
        raise ScriptError(f"no Share stage from {sender} to {recipient}")
    return found


def apply_interactive(script: ScenarioScript, sender: str, recipient: str,
                      bit: str | None = None) -> ScenarioScript:
    """Let ``recipient`` accept or refuse what ``sender`` offers."""
    found = set(_matching_shares(script, sender, recipient, bit))
    stages = []
    for k, st in enumerate(script.stages):
        if k in found:
            stages.append(Share(st.decider, st.bit, st.recipient, st.requires, True, st.deliver))
            stages.append(Accept(st.recipient, st.deliver or st.bit))
        else:
            stages.append(st)
    return script.replace(stages=tuple(stages))


@dataclass(frozen=True)
class NoisyChannel:
    """Copies ``source`` into ``output`` correctly with probability ``1/2 + fidelity``."""

    source: str
    output: str
    fidelity: Fraction

    def __post_init__(self):
        object.__setattr__(self, "fidelity", rational(self.fidelity))
        if not 0 <= self.fidelity <= HALF:
            raise InvalidMechanism("channel fidelity must lie in [0, 1/2]")


def apply_noisy(script: ScenarioScript, channel: NoisyChannel, sender: str, recipient: str) -> ScenarioScript:
    """Route ``sender``'s share of the source bit to ``recipient`` through ``channel``."""
    found = set(_matching_shares(script, sender, recipient, channel.source))
    game = script.game.with_bit(Bit(channel.output, "channel-output", None,
                                    (channel.source,), channel.fidelity))
    stages = tuple(
        Share(s.decider, s.bit, s.recipient, s.requires, s.gated, channel.output) if k in found else s
        for k, s in enumerate(script.stages))
    return ScenarioScript(game, stages, script.initial, script.subject)


def attainable_bits(script: ScenarioScript, player: str) -> set[str]:
    """Bits ``player`` could hold at play time under some choice of actions."""
    bits = set(script.initial.bits_of(player))
    for st in script.stages:
        if isinstance(st, Share) and st.recipient == player:
            bits.add(st.deliver or st.bit)
        elif getattr(st, "observer", None) == player:
            bits.add(st.bit)
        elif getattr(st, "receiver", None) == player:
            bits.add(st.bit)
    return bits


# bandwidth limitation -----------------------------------------------------

@dataclass(frozen=True)
class BandwidthPolicy:
    k: int
    alpha: Fraction
    message: str = "f"

    def __post_init__(self):
        object.__setattr__(self, "alpha", rational(self.alpha))
        if self.k < 1:
            raise InvalidMechanism("need at least one replica")
        if not 0 < self.alpha < HALF:
            raise InvalidMechanism("alpha must lie strictly between 0 and 1/2")


def prob_informative(k: int, alpha) -> Fraction:
    """Exact probability that the share of ones among ``k`` fair bits lies in ``[alpha, 1 - alpha]``."""
    alpha = rational(alpha)
    hits = sum(math.comb(k, m) for m in range(k + 1) if alpha <= Fraction(m, k) <= 1 - alpha)
    return Fraction(hits, 2 ** k)


_PLACEHOLDER = "_i"


@dataclass
class BandwidthModel:
    """The template replayed against ``k`` subjects.

    Seat ``i`` holds ``Subject_i``, ``Sender_i`` and ``Recipient_i``; the
    sender and recipient agents are the sums of their seats.  Every sender
    seat knows all the subject secrets and the sender's own bit, every
    recipient seat knows only the message bit and its own secret.
    """

    template: Game
    policy: BandwidthPolicy
    game: Game
    script: ScenarioScript
    roles: dict
    secrets: dict

    @property
    def knowledge(self) -> KnowledgeState:
        return self.script.initial

    def seats(self, role: str) -> list[str]:
        base = self.roles[role]
        return [f"{base}_{i}" for i in range(1, self.policy.k + 1)]

    def instantiate(self, texts: Mapping[str, str]) -> dict:
        """Per-seat strategies from role templates such as ``{"subject": "a_i?T:B"}``.

        ``a_i`` in a template stands for the seat's own subject secret.
        """
        a = self.secrets["subject"]
        token = re.compile(r"(?<![^\s?:@<>⟨⟩,])" + re.escape(a + _PLACEHOLDER) + r"(?![^\s?:@<>⟨⟩,])")
        profile = {}
        for role, text in texts.items():
            for i, seat in enumerate(self.seats(role), 1):
                profile[seat] = parse_for(self.game, seat, token.sub(f"{a}_{i}", text))
        return profile

    def payoffs(self, profile) -> dict:
        values = expected_payoff(self.game, self.knowledge, profile)
        return dict(zip(self.game.player_names, values))

    def agent_payoffs(self, profile) -> dict:
        seat = self.payoffs(profile)
        return {role: sum(seat[s] for s in self.seats(role)) for role in self.roles}

    def conditional_payoffs(self, profile, event) -> dict:
        """Expected seat payoffs given ``event(values: dict) -> bool`` over bit values."""
        from .core import total_payoff

        names = self.game.bit_names
        weight, acc = Fraction(0), [Fraction(0)] * len(self.game.players)
        for w in self.game.worlds:
            values = dict(zip(names, w.values))
            if not event(values):
                continue
            choices = {p: s.choose(values, w.variant) for p, s in profile.items()}
            for i, u in enumerate(total_payoff(self.game, w, choices)):
                acc[i] += w.weight * u
            weight += w.weight
        if not weight:
            raise GameError("conditioning event has probability zero")
        return dict(zip(self.game.player_names, (x / weight for x in acc)))

    def menu(self, seat: str, profile) -> list[Strategy]:
        """Constants, single-bit conditionals and the profile's own strategies."""
        player = self.game.player(seat)
        bits = sorted(self.knowledge.bits_of(seat))
        out = [Strategy.constant(seat, x) for x in player.choices]
        for b in bits:
            for x in player.choices:
                for y in player.choices:
                    if x != y:
                        out.append(Strategy.make(seat, (b,), (y, x)))
        out.extend(profile[s] for s in self.game.player_names
                   if s.rsplit("_", 1)[0] == seat.rsplit("_", 1)[0] and
                   set(profile[s].deps) <= set(bits))
        return out

    def is_nash(self, profile, full: bool = False) -> bool:
        """Equilibrium check; with ``full`` every seat tries its whole strategy space."""
        menu = None if full else {s: self.menu(s, profile) for s in self.game.player_names}
        return is_nash(self.game, self.knowledge, profile, menu=menu)

    def deviation_count(self, full: bool = True, profile=None) -> int:
        """Number of strategies tried by the equilibrium check."""
        if full:
            return sum(len(strategy_space(self.game, self.knowledge, p)) for p in self.game.player_names)
        return sum(len(self.menu(p, profile)) + 1 for p in self.game.player_names)


def build_bandwidth(template: Game, policy: BandwidthPolicy) -> BandwidthModel:
    """Replicate ``template`` ``policy.k`` times behind a one-bit channel."""
    roles = {}
    for role in ("subject", "sender", "recipient"):
        found = [p for p in template.players if p.role == role]
        if len(found) != 1:
            raise GameError(f"template needs exactly one {role}")
        roles[role] = found[0].name
    secrets = {}
    for role, name in roles.items():
        owned = [b.name for b in template.bits if b.owner == name and b.kind == "secret"]
        if len(owned) != 1:
            raise GameError(f"{name} must own exactly one secret")
        secrets[role] = owned[0]
    k = policy.k
    seats = range(1, k + 1)
    subj, send, recv = roles["subject"], roles["sender"], roles["recipient"]
    players = []
    for i in seats:
        base = {p.name: p for p in template.players}
        players.append(Player(f"{subj}_{i}", "replica-subject", base[subj].choices))
        players.append(Player(f"{send}_{i}", "sender", base[send].choices))
        players.append(Player(f"{recv}_{i}", "recipient", base[recv].choices))
    a, b, c = secrets["subject"], secrets["sender"], secrets["recipient"]
    replicas = [f"{a}_{i}" for i in seats]
    bits = [Bit(r, "secret", f"{subj}_{i}") for i, r in zip(seats, replicas)]
    bits.append(Bit(b, "secret", f"{send}_1"))
    bits.append(Bit(c, "secret", f"{recv}_1"))
    bits.append(Bit(policy.message, "channel-output", None, tuple(replicas) + (b,),
                    rule="threshold", params=(policy.alpha,)))
    contexts = []
    for i in seats:
        names = {subj: f"{subj}_{i}", send: f"{send}_{i}", recv: f"{recv}_{i}"}
        for ctx in template.contexts:
            contexts.append(Context(names[ctx.row], names[ctx.col], ctx.cells))
    if template.variants:
        raise GameError("bandwidth replication needs a template without variants")
    game = Game(tuple(players), tuple(bits), tuple(contexts))
    known = {}
    for i in seats:
        known[f"{subj}_{i}"] = {f"{a}_{i}"}
        known[f"{send}_{i}"] = set(replicas) | {b}
        known[f"{recv}_{i}"] = {policy.message, c}
    script = ScenarioScript(game, (Play("subject"),), KnowledgeState.build(known))
    return BandwidthModel(template, policy, game, script, roles, secrets)


# welfare ------------------------------------------------------------------

def _as_script(x) -> ScenarioScript:
    if isinstance(x, ScenarioScript):
        return x
    if isinstance(x, Game):
        return ScenarioScript(x, (Play("subject"),))
    raise TypeError(f"expected a Game or ScenarioScript, got {type(x).__name__}")


def welfare_delta(before, after, fallback: str | None = None):
    """(total before, total after, per-player deltas) of the solved outcomes."""
    scripts = [_as_script(before), _as_script(after)]
    if fallback is not None:
        scripts = [s.replace(stages=s.stages[:-1] + (Play(fallback),)) for s in scripts]
    v0, v1 = (solve(s).value for s in scripts)
    return sum(v0), sum(v1), tuple(y - x for x, y in zip(v0, v1))
