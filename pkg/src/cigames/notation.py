"""The ``bit?then:else`` strategy notation.

Grammar (whitespace-insensitive)::

    expr    := LABEL | BIT '?' expr ':' expr | '@' VARIANT '?' expr ':' expr
    profile := ('⟨' | '<') expr (',' expr)* ('⟩' | '>')

``@name?x:y`` means "x if the variant is ``name``, otherwise y".  Names are
any run of characters other than whitespace and ``?:,@<>⟨⟩``, so ``ã`` works.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from .core import Game, KnowledgeState, Strategy
from .errors import ParseError

_TOKEN = re.compile(r"\s*(?:([?:@])|([^\s?:,@<>⟨⟩]+))")


@dataclass(frozen=True)
class _Leaf:
    label: str


@dataclass(frozen=True)
class _Cond:
    bit: str
    then: object
    other: object
    on_variant: bool = False


def _tokenize(text):
    pos, out = 0, []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            if text[pos:].strip() == "":
                break
            raise ParseError("unexpected character", pos, text)
        out.append((m.group(1) or m.group(2), m.start(1) if m.group(1) else m.start(2)))
        pos = m.end()
    return out


class _Parser:
    def __init__(self, text, labels, bits, variants):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0
        self.labels, self.bits, self.variants = labels, bits, variants

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else (None, len(self.text))

    def take(self, expected=None):
        tok, pos = self.peek()
        if tok is None:
            raise ParseError("unexpected end of strategy", pos, self.text)
        if expected is not None and tok != expected:
            raise ParseError(f"expected {expected!r}, found {tok!r}", pos, self.text)
        self.i += 1
        return tok, pos

    def expr(self):
        tok, pos = self.take()
        on_variant = tok == "@"
        if on_variant:
            tok, pos = self.take()
        if self.peek()[0] == "?":
            pool = self.variants if on_variant else self.bits
            if tok not in pool:
                kind = "variant" if on_variant else "bit"
                raise ParseError(f"unknown {kind} {tok!r}", pos, self.text)
            self.take("?")
            then = self.expr()
            self.take(":")
            return _Cond(tok, then, self.expr(), on_variant)
        if on_variant:
            raise ParseError("'@variant' must be followed by '?'", pos, self.text)
        if tok in ("?", ":"):
            raise ParseError(f"unexpected {tok!r}", pos, self.text)
        if tok not in self.labels:
            raise ParseError(f"unknown choice {tok!r}", pos, self.text)
        return _Leaf(tok)

    def parse(self):
        tree = self.expr()
        tok, pos = self.peek()
        if tok is not None:
            raise ParseError(f"trailing input {tok!r}", pos, self.text)
        return tree


def _collect(tree, bits, variants):
    if isinstance(tree, _Cond):
        (variants if tree.on_variant else bits).add(tree.bit)
        _collect(tree.then, bits, variants)
        _collect(tree.other, bits, variants)


def _evaluate(tree, values, variant):
    while isinstance(tree, _Cond):
        hit = (variant == tree.bit) if tree.on_variant else values[tree.bit] == 1
        tree = tree.then if hit else tree.other
    return tree.label


def parse_strategy(text: str, player: str, labels: Sequence[str],
                   bits: Sequence[str] = (), variants: Sequence[str] = ()) -> Strategy:
    """Compile ``text`` into a flat strategy table for ``player``."""
    tree = _Parser(text, set(labels), set(bits), tuple(variants)).parse()
    used_bits, used_variants = set(), set()
    _collect(tree, used_bits, used_variants)
    deps = tuple(sorted(used_bits))
    vlist = tuple(variants) if used_variants else ()
    table = []
    for v in (vlist or (None,)):
        for val in itertools.product((0, 1), repeat=len(deps)):
            table.append(_evaluate(tree, dict(zip(deps, val)), v))
    return Strategy.make(player, deps, table, vlist)


def parse_for(game: Game, player: str, text: str) -> Strategy:
    """Parse ``text`` against the labels, bits and variants of ``game``."""
    return parse_strategy(text, player, game.player(player).choices,
                          game.bit_names, game.variant_names)


def split_profile(text: str) -> list[str]:
    body = text.strip()
    if body[:1] in "⟨<" and body[-1:] in "⟩>":
        body = body[1:-1]
    elif body[:1] in "⟨<" or body[-1:] in "⟩>":
        raise ParseError("unbalanced profile brackets", 0, text)
    parts = [p.strip() for p in body.split(",")]
    if any(not p for p in parts):
        raise ParseError("empty strategy in profile", 0, text)
    return parts


def parse_profile(game: Game, text: str, players: Sequence[str] | None = None) -> dict:
    """Parse ``⟨s1,s2,…⟩`` (or ``<…>``) into a player → Strategy mapping."""
    players = list(players or game.player_names)
    parts = split_profile(text)
    if len(parts) != len(players):
        raise ParseError(f"profile has {len(parts)} strategies for {len(players)} players", 0, text)
    return {p: parse_for(game, p, s) for p, s in zip(players, parts)}


def _format_table(deps, table):
    @lru_cache(maxsize=None)
    def best(assigned):
        # assigned: tuple of (dep, value) pairs already fixed
        fixed = dict(assigned)
        free = [d for d in deps if d not in fixed]
        outs = set()
        for val in itertools.product((0, 1), repeat=len(free)):
            full = {**fixed, **dict(zip(free, val))}
            idx = 0
            for d in deps:
                idx = 2 * idx + full[d]
            outs.add(table[idx])
        if len(outs) == 1:
            return outs.pop()
        options = []
        for d in free:
            then = best(tuple(sorted(assigned + ((d, 1),))))
            other = best(tuple(sorted(assigned + ((d, 0),))))
            options.append(f"{d}?{then}:{other}")
        return min(options, key=len)

    return best(())


def format_strategy(strategy: Strategy) -> str:
    """Shortest ``?:`` expression for ``strategy`` (ties broken by dependency order)."""
    block = 2 ** len(strategy.deps)
    if not strategy.variants:
        return _format_table(strategy.deps, strategy.table)
    parts = [_format_table(strategy.deps, strategy.table[i * block:(i + 1) * block])
             for i in range(len(strategy.variants))]
    text = parts[-1]
    for name, part in zip(reversed(strategy.variants[:-1]), reversed(parts[:-1])):
        text = f"@{name}?{part}:{text}"
    return text


def format_profile(profile, players: Sequence[str]) -> str:
    return "⟨" + ",".join(format_strategy(profile[p]) for p in players) + "⟩"
