"""Built-in games and staged scenarios.

Cells are transcribed from the published tables.  Every scenario is a plain
:class:`~cigames.staged.ScenarioScript`, so the same solver and classifiers
handle built-ins and user documents alike.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .core import Bit, Context, Game, KnowledgeState, Player, Variant, rational
from .errors import GameError
from .mechanisms import (BandwidthModel, BandwidthPolicy, NoisyChannel, TaxRule, TransferRule,
                         apply_distributional, apply_interactive, apply_noisy, build_bandwidth)
from .staged import (Commit, NatureDraw, Observe, Play, Reveal, ScenarioScript,
                     Share, Signal)

ALICE = Player("Alice", "subject")
BOB = Player("Bob", "sender")
CAROL = Player("Carol", "recipient")


def _ctx(row, col, rows):
    return Context.from_rows(row, col, [[tuple(rational(x) for x in cell) for cell in line]
                                        for line in rows])


def _secret(name, owner):
    return Bit(name, "secret", owner)


def _three(ac, ab, bc, variants=()):
    return Game(
        (ALICE, BOB, CAROL),
        (_secret("a", "Alice"), _secret("b", "Bob"), _secret("c", "Carol")),
        tuple(c for c in (_ctx("Alice", "Carol", ac) if ac else None,
                          _ctx("Alice", "Bob", ab) if ab else None,
                          _ctx("Bob", "Carol", bc) if bc else None) if c is not None),
        variants,
    )


PRIVACY_AC = [[(0, 8), (0, 2), (8, 0)],
              [(2, 0), (2, 2), (2, 0)],
              [(8, 0), (0, 2), (0, 8)]]

CONFIDENTIALITY_AC = [[(0, 16), (0, 4), (16, 0)],
                      [(4, 0), (4, 4), (4, 0)],
                      [(16, 0), (0, 4), (0, 16)]]
CONFIDENTIALITY_AB = [[(2, 2), (0, 0), (0, 0)],
                      [(0, 0), (2, 2), (0, 0)],
                      [(0, 0), (0, 0), (2, 2)]]
CONFIDENTIALITY_BC = [[(0, 8), (0, 2), (8, 0)],
                      [(2, 0), (2, 2), (2, 0)],
                      [(8, 0), (0, 2), (0, 8)]]

MANDATORY_AC = [[(0, 6), (0, 2), (10, 0)],
                [(2, 0), (2, 2), (2, 0)],
                [(10, 0), (0, 2), (0, 6)]]
MANDATORY_AB = [[(0, 0), (0, 0), (0, 0)],
                [(0, 0), (1, 1), (0, 0)],
                [(0, 0), (0, 0), (0, 0)]]
MANDATORY_BC = [[(0, 0), (0, 0), (0, 0)],
                [(0, 0), (1, 1), (0, 0)],
                [(0, 0), (0, 0), (0, 0)]]

FIDUCIARY_AC_COMPETITIVE = [[(-8, 8), (0, 2), (8, -8)],
                            [(2, 0), (2, 2), (2, 0)],
                            [(8, -8), (0, 2), (-8, 8)]]
FIDUCIARY_AC_COLLABORATIVE = [[(8, 8), (0, 2), (-8, -8)],
                              [(2, 0), (2, 2), (2, 0)],
                              [(-8, -8), (0, 2), (8, 8)]]
FIDUCIARY_AB = [[(5, 3), (0, 0), (4, 2)],
                [(0, 0), (0, 0), (0, 0)],
                [(4, 2), (0, 0), (5, 3)]]
FIDUCIARY_BC = [[(-15, 17), (0, 0), (17, -15)],
                [(0, 0), (0, 0), (0, 0)],
                [(17, -15), (0, 0), (-15, 17)]]

NOTIFICATION_AC = [[(4, -8), (0, 0), (-8, -8)],
                   [(2, 0), (1, 0), (2, 0)],
                   [(-8, -8), (0, 0), (4, -8)]]
NOTIFICATION_AB = [[(4, 4), (0, 0), (-8, -8)],
                   [(1, 0), (1, 0), (1, 0)],
                   [(-8, -8), (0, 0), (4, 4)]]
NOTIFICATION_BC_PLAIN = [[(0, 0)] * 3] * 3
NOTIFICATION_BC_COLLABORATIVE = [[(-6, -6), (0, 0), (6, 6)],
                                 [(0, 0), (0, 0), (0, 0)],
                                 [(6, 6), (0, 0), (-6, -6)]]

OWNERSHIP_AC = [[(10, 0), (0, 2), (0, 10)],
                [(2, 0), (2, 2), (2, 0)],
                [(0, 10), (0, 2), (10, 0)]]
OWNERSHIP_BC = [[(0, 0), (0, 0), (0, 0)],
                [(0, 0), (10, 0), (0, 0)],
                [(0, 0), (0, 0), (0, 0)]]
OWNERSHIP_AB = [[(2, 2), (0, 0), (0, 0)],
                [(0, 0), (0, 0), (0, 0)],
                [(0, 0), (0, 0), (2, 2)]]

INTERACTIVE_BC = [[(0, 8), (0, 2), (8, 0)],
                  [(2, 0), (5, 2), (2, 0)],
                  [(8, 0), (0, 2), (0, 8)]]

NOISY_AB = [[(2, 2), (0, 0), (0, 0)],
            [(0, 0), (0, 0), (0, 0)],
            [(0, 0), (0, 0), (2, 2)]]
NOISY_BC = [[(6, 6), (0, 0), (-6, -6)],
            [(0, 0), (0, 0), (0, 0)],
            [(-6, -6), (0, 0), (6, 6)]]


def privacy_game() -> Game:
    """Two-player Game of Privacy between Alice and Carol."""
    return Game((ALICE, CAROL), (_secret("a", "Alice"), _secret("c", "Carol")),
                (_ctx("Alice", "Carol", PRIVACY_AC),))


def confidentiality_game() -> Game:
    return _three(CONFIDENTIALITY_AC, CONFIDENTIALITY_AB, CONFIDENTIALITY_BC)


def mandatory_game() -> Game:
    return _three(MANDATORY_AC, MANDATORY_AB, MANDATORY_BC)


def fiduciary_game(prior=Fraction(1, 2)) -> Game:
    prior = rational(prior)
    variants = (
        Variant("competitive", prior, (_ctx("Alice", "Carol", FIDUCIARY_AC_COMPETITIVE),)),
        Variant("collaborative", 1 - prior, (_ctx("Alice", "Carol", FIDUCIARY_AC_COLLABORATIVE),)),
    )
    return _three(None, FIDUCIARY_AB, FIDUCIARY_BC, variants)


def notification_game(prior=Fraction(1, 2)) -> Game:
    prior = rational(prior)
    variants = (
        Variant("plain", prior, (_ctx("Bob", "Carol", NOTIFICATION_BC_PLAIN),)),
        Variant("collaborative", 1 - prior, (_ctx("Bob", "Carol", NOTIFICATION_BC_COLLABORATIVE),)),
    )
    return _three(NOTIFICATION_AC, NOTIFICATION_AB, None, variants)


def ownership_game() -> Game:
    return _three(OWNERSHIP_AC, OWNERSHIP_AB, OWNERSHIP_BC)


def interactive_game() -> Game:
    return _three(CONFIDENTIALITY_AC, CONFIDENTIALITY_AB, INTERACTIVE_BC)


def noisy_game() -> Game:
    return _three(CONFIDENTIALITY_AC, NOISY_AB, NOISY_BC)


def _signal_bit(name, owner):
    return Bit(name, "signal", owner)


def privacy_script(observe: bool = False) -> ScenarioScript:
    """Alice may share ``a`` with Carol; with ``observe`` Carol may look instead."""
    stage = Observe("Carol", "a") if observe else Share("Alice", "a", "Carol")
    return ScenarioScript(privacy_game(), (stage, Play("subject")), subject="Alice")


def confidentiality_script() -> ScenarioScript:
    return ScenarioScript(confidentiality_game(),
                          (Share("Alice", "a", "Bob"), Share("Bob", "a", "Carol"), Play("subject")),
                          subject="Alice")


def mandatory_script(observe: bool = False) -> ScenarioScript:
    """Bob already holds ``a``; he may pass it on (or Carol may observe it)."""
    g = mandatory_game()
    start = KnowledgeState.initial(g).learn("Bob", "a")
    stage = Observe("Carol", "a") if observe else Share("Bob", "a", "Carol")
    return ScenarioScript(g, (stage, Play("subject")), initial=start, subject="Alice")


def _carol_returns():
    # Carol only passes ``c`` back once she holds ``a``
    return Share("Carol", "c", "Alice", requires=(("Carol", "a"),))


def fiduciary_script(prior=Fraction(1, 2)) -> ScenarioScript:
    return ScenarioScript(
        fiduciary_game(prior),
        (NatureDraw(("Bob",)), Share("Alice", "a", "Bob"), Share("Bob", "a", "Carol"),
         Reveal(), _carol_returns(), Play("subject")),
        subject="Alice")


def control_script(prior=Fraction(1, 2), informed=("Alice",)) -> ScenarioScript:
    """Players in ``informed`` see the variant; Alice signals ``s`` to Bob before he acts."""
    g = fiduciary_game(prior).with_bit(_signal_bit("s", "Alice"))
    return ScenarioScript(
        g,
        (Share("Alice", "a", "Bob"), NatureDraw(tuple(informed)),
         Signal("Alice", "Bob", "s"), Share("Bob", "a", "Carol"), Reveal(),
         _carol_returns(), Play("subject")),
        subject="Alice")


NOTIFICATION_RULE = "s?M:a?T:B"


def notification_script(prior=Fraction(1, 2)) -> ScenarioScript:
    """Bob holds ``a``; he may pass it to Carol and then signals Alice, who follows a fixed rule."""
    g = notification_game(prior).with_bit(_signal_bit("s", "Bob"))
    start = KnowledgeState.initial(g).learn("Bob", "a")
    return ScenarioScript(
        g,
        (Commit("Alice", NOTIFICATION_RULE), NatureDraw(("Bob", "Carol")),
         Share("Bob", "a", "Carol"), Signal("Bob", "Alice", "s"), Play("subject")),
        initial=start, subject="Alice")


def ownership_script() -> ScenarioScript:
    return ScenarioScript(ownership_game(),
                          (Share("Alice", "a", "Bob"), Share("Bob", "a", "Carol"), Play("subject")),
                          subject="Alice")


def interactive_script() -> ScenarioScript:
    return ScenarioScript(interactive_game(),
                          (Share("Alice", "a", "Bob"), Share("Bob", "a", "Carol"), Play("subject")),
                          subject="Alice")


def noisy_script() -> ScenarioScript:
    """Noise-free baseline; see :func:`cigames.mechanisms.apply_noisy`."""
    return ScenarioScript(noisy_game(),
                          (Share("Alice", "a", "Bob"), Share("Bob", "a", "Carol"), Play("subject")),
                          subject="Alice")


OWNERSHIP_TRANSFER = TransferRule("Bob", "Alice", 5, (("I", "M"),))
OWNERSHIP_TAX = TaxRule("Alice", 5, ("M",))


def ownership_transfer_script(amount=5) -> ScenarioScript:
    """Bob pays Alice ``amount`` whenever their pair plays (M, I)."""
    base = ownership_script()
    rule = TransferRule("Bob", "Alice", amount, (("I", "M"),))
    return base.replace(game=apply_distributional(base.game, [rule]))


def ownership_tax_script(amount=5) -> ScenarioScript:
    """Alice pays ``amount`` whenever she plays anything but M."""
    base = ownership_script()
    return base.replace(game=apply_distributional(base.game, [TaxRule("Alice", amount, ("M",))]))


def interactive_channel_script() -> ScenarioScript:
    return apply_interactive(interactive_script(), "Bob", "Carol")


def noisy_channel_script(delta=0) -> ScenarioScript:
    """Bob's share of ``a`` reaches Carol as ``ã``, correct with probability 1/2 + delta."""
    return apply_noisy(noisy_script(), NoisyChannel("a", "ã", delta), "Bob", "Carol")


def bandwidth_model(k=4, alpha=Fraction(1, 4)) -> BandwidthModel:
    return build_bandwidth(noisy_game(), BandwidthPolicy(int(k), alpha))


BANDWIDTH_PROFILE = {"subject": "a_i?T:B", "sender": "a_i?N:F", "recipient": "f?L:R"}

SCRIPTS = {
    "privacy": privacy_script,
    "confidentiality": confidentiality_script,
    "mandatory": mandatory_script,
    "fiduciary": fiduciary_script,
    "control": control_script,
    "notification": notification_script,
    "ownership": ownership_script,
    "ownership-transfer": ownership_transfer_script,
    "ownership-tax": ownership_tax_script,
    "interactive": interactive_script,
    "interactive-channel": interactive_channel_script,
    "noisy": None,
    "bandwidth": bandwidth_model,
}

_CALL = re.compile(r"^\s*([a-z][a-z-]*)\s*(?:\((.*)\))?\s*$")


def _arg(text):
    text = text.strip()
    if "=" in text:
        text = text.split("=", 1)[1].strip()
    try:
        return Fraction(text)  # decimal strings convert exactly
    except ValueError:
        return None


def preset(name: str):
    """Script for a preset name such as ``"fiduciary"``, ``"noisy(1/4)"`` or ``"bandwidth(8, 1/4)"``.

    ``bandwidth`` returns a :class:`~cigames.mechanisms.BandwidthModel`,
    whose ``script`` attribute holds the replicated game.
    """
    m = _CALL.match(name)
    if not m or m.group(1) not in SCRIPTS:
        raise GameError(f"unknown preset {name!r}")
    key, raw = m.groups()
    args = []
    if raw is not None and raw.strip():
        for part in raw.split(","):
            value = _arg(part)
            if value is None:
                raise GameError(f"bad preset argument {part.strip()!r}")
            args.append(value)
    if key == "noisy":
        return noisy_channel_script(*args) if raw is not None else noisy_script()
    if key == "bandwidth":
        if args:
            if args[0].denominator != 1:
                raise GameError("replica count must be an integer")
            args[0] = int(args[0])
        return bandwidth_model(*args)
    return SCRIPTS[key](*args)


GAMES = {
    "privacy": privacy_game,
    "confidentiality": confidentiality_game,
    "mandatory": mandatory_game,
    "fiduciary": fiduciary_game,
    "control": fiduciary_game,
    "ownership-transfer": lambda: ownership_transfer_script().game,
    "ownership-tax": lambda: ownership_tax_script().game,
    "notification": notification_game,
    "ownership": ownership_game,
    "interactive": interactive_game,
    "noisy": noisy_game,
}


def game(name: str) -> Game:
    try:
        return GAMES[name]()
    except KeyError:
        raise GameError(f"unknown preset {name!r}") from None
