"""Staged games: pre-play information decisions followed by simultaneous play.

A script is a list of stages.  Nature picks a variant up front (one *branch*
per variant); pre-play stages change who knows what, and the final
:class:`Play` stage is solved by equilibrium enumeration and payoff-dominant
selection.

Deciders move in script order and commit: each one picks a *policy* (an
action for every information view she may be in) maximising her ex-ante
expected payoff, anticipating that later deciders best-respond to it.  Ties go
to the first option of a stage (keep, respect, accept, signal 0).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Mapping, Sequence

from .core import Game, KnowledgeState, Strategy
from .equilibria import (DEFAULT_BUDGET, EquilibriumSet, enumerate_nash,
                         pareto_frontier, payoff_dominant)
from .errors import GameError, ScriptError, SelectionFailure
from .notation import format_profile, parse_for

FALLBACKS = ("abort", "subject")


@dataclass(frozen=True)
class NatureDraw:
    observers: tuple[str, ...] = ()
    options = (None,)


@dataclass(frozen=True)
class Share:
    """``decider`` may pass ``bit`` to ``recipient``.

    ``requires`` lists (player, bit) facts that must hold for the option to
    exist.  ``gated`` offers are held until an :class:`Accept` stage resolves
    them; ``deliver`` names the bit the recipient actually receives (a noisy
    copy, say).
    """

    decider: str
    bit: str
    recipient: str
    requires: tuple[tuple[str, str], ...] = ()
    gated: bool = False
    deliver: str | None = None
    options = ("keep", "share")


@dataclass(frozen=True)
class Observe:
    observer: str
    bit: str
    options = ("respect", "observe")

    @property
    def decider(self):
        return self.observer


@dataclass(frozen=True)
class Accept:
    recipient: str
    bit: str
    options = ("accept", "refuse")

    @property
    def decider(self):
        return self.recipient


@dataclass(frozen=True)
class Signal:
    sender: str
    receiver: str
    bit: str
    options = (0, 1)

    @property
    def decider(self):
        return self.sender


@dataclass(frozen=True)
class Reveal:
    players: tuple[str, ...] = ()
    options = (None,)


@dataclass(frozen=True)
class Commit:
    """``player`` is bound to ``strategy`` at the play stage."""

    player: str
    strategy: str
    options = (None,)


@dataclass(frozen=True)
class Play:
    fallback: str = "abort"

    def __post_init__(self):
        if self.fallback not in FALLBACKS:
            raise ScriptError(f"unknown fallback {self.fallback!r}")


DECISIONS = (Share, Observe, Accept, Signal)


@dataclass(frozen=True)
class ScenarioScript:
    game: Game
    stages: tuple
    initial: KnowledgeState | None = None
    subject: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "stages", tuple(self.stages))
        if self.initial is None:
            object.__setattr__(self, "initial", KnowledgeState.initial(self.game))
        self.validate()

    @property
    def play(self) -> Play:
        return self.stages[-1]

    def validate(self):
        g = self.game
        if not self.stages or not isinstance(self.stages[-1], Play):
            raise ScriptError("a script ends with exactly one Play stage")
        if sum(isinstance(s, Play) for s in self.stages) != 1:
            raise ScriptError("a script ends with exactly one Play stage")
        names = set(g.player_names)
        self.initial.check_game(g)
        for k, st in enumerate(self.stages):
            players = []
            bits = []
            if isinstance(st, Share):
                players += [st.decider, st.recipient] + [p for p, _ in st.requires]
                bits += [st.bit] + [b for _, b in st.requires] + ([st.deliver] if st.deliver else [])
            elif isinstance(st, (Observe, Accept)):
                players.append(st.decider)
                bits.append(st.bit)
            elif isinstance(st, Signal):
                players += [st.sender, st.receiver]
                bits.append(st.bit)
                if g.bit(st.bit).kind != "signal":
                    raise ScriptError(f"stage {k}: {st.bit!r} is not a signal bit")
            elif isinstance(st, (NatureDraw, Reveal)):
                players += list(getattr(st, "observers", ()) or getattr(st, "players", ()))
            elif isinstance(st, Commit):
                players.append(st.player)
            for p in players:
                if p not in names:
                    raise ScriptError(f"stage {k}: unknown player {p!r}")
            for b in bits:
                if b not in g.bit_names:
                    raise ScriptError(f"stage {k}: unknown bit {b!r}")

    def replace(self, **changes) -> "ScenarioScript":
        return replace(self, **changes)

    def decision_stages(self) -> list[int]:
        return [k for k, s in enumerate(self.stages) if isinstance(s, DECISIONS)]


@dataclass(frozen=True)
class Branch:
    variant: int
    weight: Fraction
    knowledge: KnowledgeState
    signals: tuple = ()
    pending: frozenset = frozenset()
    history: tuple = ()
    fixed: tuple = ()

    def signal_dict(self):
        return dict(self.signals)


@dataclass
class LeafSolution:
    variants: tuple[str, ...]
    knowledge: KnowledgeState
    signals: dict
    equilibria: EquilibriumSet
    selected: dict
    value: tuple[Fraction, ...]
    note: str = ""

    def describe(self) -> str:
        return format_profile(self.selected, self.equilibria.players)


@dataclass
class DecisionRecord:
    stage: int
    decider: str
    views: list
    policy: tuple
    value: tuple[Fraction, ...]
    alternatives: list  # (policy, value vector) for every policy tried
    ties: list

    def chosen(self) -> dict:
        return dict(zip(self.views, self.policy))


@dataclass
class SolutionTree:
    value: tuple[Fraction, ...]
    players: tuple[str, ...]
    decisions: list[DecisionRecord]
    leaves: list[LeafSolution]
    branch_values: dict
    histories: dict = field(default_factory=dict)

    def decision(self, stage: int) -> DecisionRecord:
        for d in self.decisions:
            if d.stage == stage:
                return d
        raise KeyError(stage)

    def value_of(self, player: str, variant: str | None = None) -> Fraction:
        vec = self.value if variant is None else self.branch_values[variant]
        return vec[self.players.index(player)]

    def actions(self, stage: int) -> dict:
        """Action taken at ``stage`` on the solution path, keyed by variant name."""
        return {b: dict((k, a) for k, _, a in h).get(stage) for b, h in self.histories.items()}

    def render(self) -> str:
        def vec(v):
            return "(" + ", ".join(str(x) for x in v) + ")"

        lines = [f"value {vec(self.value)}"]
        for d in self.decisions:
            policy = ", ".join(f"{view} -> {act}" for view, act in d.chosen().items())
            lines.append(f"stage {d.stage} {d.decider}: {policy}; value {vec(d.value)}"
                         + (f"; {len(d.ties)} tied policies" if len(d.ties) > 1 else ""))
        for b, hist in self.histories.items():
            path = ", ".join(f"{k}:{who}={act}" for k, who, act in hist) or "no decisions"
            lines.append(f"{b or 'outcome'}: {path}; value {vec(self.branch_values[b])}")
        for leaf in self.leaves:
            label = ",".join(leaf.variants) if leaf.variants else "leaf"
            note = f" [{leaf.note}]" if leaf.note else ""
            lines.append(f"  {label}: {leaf.describe()} {vec(leaf.value)}{note}")
        return "\n".join(lines)


class Solver:
    def __init__(self, script: ScenarioScript, forced: Mapping | None = None,
                 budget: int = DEFAULT_BUDGET):
        self.script = script
        self.game = script.game
        self.forced = dict(forced or {})
        self.budget = budget
        self._leaves: dict = {}
        self.players = self.game.player_names

    # branch bookkeeping ---------------------------------------------------
    def initial_branches(self) -> list[Branch]:
        g = self.game
        if not g.variants:
            return [Branch(0, Fraction(1), self.script.initial)]
        return [Branch(i, v.prior, self.script.initial) for i, v in enumerate(g.variants) if v.prior]

    def variant_name(self, branch: Branch):
        return self.game.variant_names[branch.variant] if self.game.variants else None

    def view(self, branch: Branch, player: str):
        k = branch.knowledge
        variant = self.variant_name(branch) if k.knows_variant(player) else None
        signals = tuple((b, v) for b, v in branch.signals if k.knows(player, b))
        own = tuple(a for (_, p, a) in branch.history if p == player)
        return (variant, signals, k, own)

    def applicable(self, stage, branch: Branch) -> bool:
        k = branch.knowledge
        if isinstance(stage, Share):
            target = stage.deliver or stage.bit
            if not k.knows(stage.decider, stage.bit) or k.knows(stage.recipient, target):
                return False
            return all(k.knows(p, b) for p, b in stage.requires)
        if isinstance(stage, Observe):
            return not k.knows(stage.observer, stage.bit)
        return True

    def apply(self, stage, branch: Branch, action, index: int = -1) -> Branch:
        k = branch.knowledge
        if isinstance(stage, NatureDraw):
            return replace(branch, knowledge=k.learn_variant(*stage.observers))
        if isinstance(stage, Reveal):
            return replace(branch, knowledge=k.learn_variant(*(stage.players or self.players)))
        if isinstance(stage, Commit):
            return replace(branch, fixed=branch.fixed + ((stage.player, stage.strategy),))
        hist = branch.history + ((index, stage.decider, action),)
        if isinstance(stage, Share):
            if action == "share":
                target = stage.deliver or stage.bit
                if stage.gated:
                    return replace(branch, pending=branch.pending | {(stage.recipient, target)},
                                   history=hist)
                return replace(branch, knowledge=k.learn(stage.recipient, target), history=hist)
        elif isinstance(stage, Observe):
            if action == "observe":
                return replace(branch, knowledge=k.learn(stage.observer, stage.bit), history=hist)
        elif isinstance(stage, Accept):
            offers = {o for o in branch.pending if o[0] == stage.recipient and o[1] == stage.bit}
            if action == "accept":
                for _, b in offers:
                    k = k.learn(stage.recipient, b)
            return replace(branch, knowledge=k, pending=branch.pending - offers, history=hist)
        elif isinstance(stage, Signal):
            k = k.learn(stage.receiver, stage.bit)
            return replace(branch, knowledge=k, signals=branch.signals + ((stage.bit, action),),
                           history=hist)
        return replace(branch, history=hist)

    # policies ---------------------------------------------------------------
    def _forced_policy(self, index, stage, views, view_branches):
        spec = self.forced[index]
        policy = []
        for v in views:
            if isinstance(spec, Mapping) and self._view_label(v) in spec:
                action = spec[self._view_label(v)]
            elif isinstance(spec, Mapping):
                keyed = [spec[self.variant_name(b)] for b in view_branches[v]
                         if self.variant_name(b) in spec]
                if not keyed:
                    raise ScriptError(f"forced action for stage {index} does not cover view {v[0]}")
                if len(set(keyed)) != 1:
                    raise ScriptError(f"stage {index}: decider cannot tell the forced variants apart")
                action = keyed[0]
            else:
                action = spec
            if action not in stage.options:
                raise ScriptError(f"stage {index}: {action!r} is not one of {stage.options}")
            policy.append(action)
        return tuple(policy)

    def solve_from(self, index: int, branches: list[Branch]):
        stages = self.script.stages
        stage = stages[index]
        if isinstance(stage, Play):
            return self.solve_leaves(branches)
        if not isinstance(stage, DECISIONS):
            return self.solve_from(index + 1, [self.apply(stage, b, None, index) for b in branches])

        views, view_branches = [], {}
        for b in branches:
            v = self.view(b, stage.decider)
            if v not in view_branches:
                views.append(v)
                view_branches[v] = []
            view_branches[v].append(b)
        option_sets = []
        for v in views:
            live = any(self.applicable(stage, b) for b in view_branches[v])
            option_sets.append(stage.options if live else stage.options[:1])
        if index in self.forced:
            candidates = [self._forced_policy(index, stage, views, view_branches)]
        else:
            candidates = list(itertools.product(*option_sets))

        me = self.players.index(stage.decider)
        best = None
        alternatives = []
        for policy in candidates:
            act = dict(zip(views, policy))
            nxt = []
            for b in branches:
                a = act[self.view(b, stage.decider)]
                if self.applicable(stage, b):
                    nxt.append(self.apply(stage, b, a, index))
                else:
                    nxt.append(replace(b, history=b.history + ((index, stage.decider, a),)))
            sub = self.solve_from(index + 1, nxt)
            alternatives.append((policy, sub[0]))
            if best is None or sub[0][me] > best[1][0][me]:
                best = (policy, sub)
        policy, (value, records, leaves, bvalues, hist) = best
        ties = [p for p, v in alternatives if v[me] == value[me]]
        record = DecisionRecord(index, stage.decider, [self._view_label(v) for v in views],
                                policy, value, alternatives, ties)
        return value, [record] + records, leaves, bvalues, hist

    def _view_label(self, view):
        variant, signals, _, own = view
        parts = []
        if variant is not None:
            parts.append(variant)
        parts += [f"{b}={v}" for b, v in signals]
        parts += [f"did:{a}" for a in own]
        return ",".join(parts) or "*"

    # leaves -----------------------------------------------------------------
    def solve_leaves(self, branches: list[Branch]):
        g = self.game
        fixed_players = {p for b in branches for p, _ in b.fixed}
        free = [p for p in self.players if p not in fixed_players]
        per_variant = bool(g.variants) and all(
            b.knowledge.knows_variant(p) for b in branches for p in free)
        groups = []
        if per_variant or len(branches) == 1:
            groups = [[b] for b in branches]
        else:
            keys = {(b.knowledge, b.signals, b.fixed) for b in branches}
            if len(keys) != 1:
                raise ScriptError(
                    "play-stage information differs across variants that some player cannot tell apart")
            groups = [branches]
        total = [Fraction(0)] * len(self.players)
        leaves, bvalues, hist = [], {}, {}
        for group in groups:
            leaf = self.solve_leaf(group, per_variant or len(group) == 1 and bool(g.variants))
            mass = sum(b.weight for b in group)
            for i, v in enumerate(leaf.value):
                total[i] += mass * v
            leaves.append(leaf)
            for b in group:
                bvalues[self.variant_name(b)] = leaf.value
                hist[self.variant_name(b)] = b.history
        return tuple(total), [], leaves, bvalues, hist

    def solve_leaf(self, group: list[Branch], restrict: bool) -> LeafSolution:
        b0 = group[0]
        key = (tuple(b.variant for b in group) if restrict else None, b0.knowledge, b0.signals, b0.fixed)
        if key in self._leaves:
            return self._leaves[key]
        g = self.game
        if restrict and g.variants:
            leaf_game = g.restrict_variant(g.variant_names[b0.variant])
            names = (g.variant_names[b0.variant],)
        else:
            leaf_game = g
            names = g.variant_names
        signals = dict(b0.signals)
        if signals:
            leaf_game = leaf_game.pin(signals)
        fixed = {p: parse_for(leaf_game, p, text) for p, text in b0.fixed}
        eqs = enumerate_nash(leaf_game, b0.knowledge, quotient=True, fixed=fixed, budget=self.budget)
        free = [p for p in self.players if p not in fixed]
        chosen, note = self.select(eqs, free, names, b0)
        leaf = LeafSolution(names, b0.knowledge, signals, chosen, chosen.profiles[0],
                            chosen.payoffs[0], note)
        self._leaves[key] = leaf
        return leaf

    def select(self, eqs: EquilibriumSet, free, names, branch):
        where = f"leaf {names or ''} knowledge={branch.knowledge.as_dict()} signals={dict(branch.signals)}"
        if not len(eqs):
            raise SelectionFailure(f"no pure equilibrium at {where}", where, eqs)
        dom = payoff_dominant(eqs, free)
        if len(dom):
            return dom, ""
        if self.script.play.fallback == "abort":
            raise SelectionFailure(f"no payoff-dominant equilibrium at {where}", where, eqs)
        subject = self.script.subject or next(
            (p.name for p in self.game.players if p.role == "subject"), self.players[0])
        front = pareto_frontier(eqs, free)
        si = eqs.players.index(subject)
        best = max(u[si] for u in front.payoffs)
        keep = [k for k, u in enumerate(front.payoffs) if u[si] == best]
        top = max(sum(front.payoffs[k]) for k in keep)
        keep = [k for k in keep if sum(front.payoffs[k]) == top]
        return front.subset(keep), f"no dominant equilibrium; subject-preferred Pareto choice among {len(front)}"


def solve(script: ScenarioScript, forced: Mapping | None = None, budget: int = DEFAULT_BUDGET) -> SolutionTree:
    """Backward-induction solution of ``script``.

    ``forced`` maps a stage index to an action (or ``{variant: action}``) that
    replaces the decider's optimisation at that stage.
    """
    solver = Solver(script, forced, budget)
    value, records, leaves, bvalues, hist = solver.solve_from(0, solver.initial_branches())
    return SolutionTree(value, solver.players, records, leaves, bvalues, hist)


signaling_solve = solve


def continuation(script: ScenarioScript, stage: int, action, given: Mapping | None = None,
                 budget: int = DEFAULT_BUDGET) -> SolutionTree:
    """Solution after taking ``action`` at ``stage``.

    Earlier deciders keep the policies of the unconstrained solution (or the
    ones listed in ``given``); later ones still best-respond.
    """
    if not isinstance(script.stages[stage], DECISIONS):
        raise ScriptError(f"stage {stage} is not a decision")
    given = dict(given or {})
    base = solve(script, given, budget=budget)
    forced = {}
    for d in base.decisions:
        if d.stage < stage:
            forced[d.stage] = given.get(d.stage, _policy_spec(script, d))
    forced[stage] = action
    return solve(script, forced, budget)


def continuation_value(script: ScenarioScript, stage: int, action, given: Mapping | None = None,
                       budget: int = DEFAULT_BUDGET) -> tuple:
    return continuation(script, stage, action, given, budget).value


def _policy_spec(script, record):
    if len(record.policy) == 1:
        return record.policy[0]
    return record.chosen()
