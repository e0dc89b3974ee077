"""JSON documents holding a game, its script and pending mechanisms.

Rationals are written as ``"numerator/denominator"`` strings so a round trip
never passes through floating point.  :func:`dump` is canonical: dumping a
loaded document reproduces the same text.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .core import Bit, Context, Game, KnowledgeState, Player, Variant
from .errors import DocumentError, GameError
from .mechanisms import (BandwidthModel, BandwidthPolicy, NoisyChannel, TaxRule, TransferRule,
                         apply_distributional, apply_interactive, apply_noisy, build_bandwidth)
from .staged import (Accept, Commit, NatureDraw, Observe, Play, Reveal, ScenarioScript, Share,
                     Signal)

FORMAT_VERSION = 1

STAGES = {"nature": NatureDraw, "share": Share, "observe": Observe, "accept": Accept,
          "signal": Signal, "reveal": Reveal, "commit": Commit, "play": Play}
STAGE_NAMES = {cls: name for name, cls in STAGES.items()}


@dataclass(frozen=True)
class InteractiveBlock:
    sender: str
    recipient: str
    bit: str | None = None


@dataclass(frozen=True)
class NoisyBlock:
    channel: NoisyChannel
    sender: str
    recipient: str


MECHANISMS = {"transfer": TransferRule, "tax": TaxRule, "interactive": InteractiveBlock,
              "noisy": NoisyBlock, "bandwidth": BandwidthPolicy}
MECHANISM_NAMES = {cls: name for name, cls in MECHANISMS.items()}


@dataclass(frozen=True)
class GameDocument:
    script: ScenarioScript
    mechanisms: tuple = ()

    @property
    def game(self) -> Game:
        return self.script.game


def document_for(obj, mechanisms=()) -> GameDocument:
    """Wrap a game, script or bandwidth model in a document."""
    if isinstance(obj, GameDocument):
        return obj
    if isinstance(obj, BandwidthModel):
        obj = obj.script
    if isinstance(obj, Game):
        obj = ScenarioScript(obj, (Play("subject"),))
    if not isinstance(obj, ScenarioScript):
        raise TypeError(f"cannot make a document from {type(obj).__name__}")
    return GameDocument(obj, tuple(mechanisms))


# encoding -----------------------------------------------------------------

def rat(x) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def _encode_context(ctx: Context, variant: str | None = None) -> dict:
    out = {"pair": [ctx.row, ctx.col]}
    if variant is not None:
        out["variant"] = variant
    out["cells"] = [[[rat(a), rat(b)] for a, b in line] for line in ctx.cells]
    return out


def _encode_bit(bit: Bit) -> dict:
    out = {"name": bit.name, "kind": bit.kind}
    if bit.owner is not None:
        out["owner"] = bit.owner
    if bit.source:
        out["source"] = list(bit.source)
    if bit.fidelity is not None:
        out["fidelity"] = rat(bit.fidelity)
    if bit.rule is not None:
        out["rule"] = bit.rule
        out["params"] = [rat(p) for p in bit.params]
    if bit.value is not None:
        out["value"] = bit.value
    return out


def _plain(value):
    if isinstance(value, Fraction):
        return rat(value)
    if isinstance(value, (tuple, list)):
        return [_plain(v) for v in value]
    return value


def _encode_stage(stage) -> dict:
    out = {"stage": STAGE_NAMES[type(stage)]}
    for f in dataclasses.fields(stage):
        value = getattr(stage, f.name)
        if value != f.default:
            out[f.name] = _plain(value)
    return out


def _encode_mechanism(block) -> dict:
    out = {"type": MECHANISM_NAMES[type(block)]}
    if isinstance(block, NoisyBlock):
        out.update(source=block.channel.source, output=block.channel.output,
                   fidelity=rat(block.channel.fidelity), sender=block.sender,
                   recipient=block.recipient)
        return out
    for f in dataclasses.fields(block):
        value = getattr(block, f.name)
        if f.name in ("amount", "alpha"):
            value = rat(value)
        out[f.name] = _plain(value)
    return out


def to_data(doc: GameDocument) -> dict:
    game, script = doc.game, doc.script
    contexts = [_encode_context(c) for c in game.contexts]
    for v in game.variants:
        contexts += [_encode_context(c, v.name) for c in v.contexts]
    data = {
        "format-version": FORMAT_VERSION,
        "players": [{"name": p.name, "role": p.role, "choices": list(p.choices)} for p in game.players],
        "bits": [_encode_bit(b) for b in game.bits],
        "variants": [{"name": v.name, "prior": rat(v.prior)} for v in game.variants],
        "contexts": contexts,
        "knowledge": {p: sorted(script.initial.bits_of(p)) for p in game.player_names},
        "variant-known": sorted(script.initial.variant_known),
    }
    if script.subject is not None:
        data["subject"] = script.subject
    data["script"] = [_encode_stage(s) for s in script.stages]
    data["mechanisms"] = [_encode_mechanism(m) for m in doc.mechanisms]
    return data


def dump(doc) -> str:
    return json.dumps(to_data(document_for(doc)), indent=2, ensure_ascii=False) + "\n"


def save(doc, path) -> None:
    Path(path).write_text(dump(doc), encoding="utf-8")


# decoding -----------------------------------------------------------------

def _fields(obj, path, required=(), optional=()):
    if not isinstance(obj, dict):
        raise DocumentError(f"{path}: expected an object")
    missing = [k for k in required if k not in obj]
    if missing:
        raise DocumentError(f"{path}: missing field {missing[0]!r}")
    extra = sorted(set(obj) - set(required) - set(optional))
    if extra:
        raise DocumentError(f"{path}: unknown field {extra[0]!r}")
    return obj


def _list(obj, path):
    if not isinstance(obj, list):
        raise DocumentError(f"{path}: expected a list")
    return obj


def _str(obj, path):
    if not isinstance(obj, str):
        raise DocumentError(f"{path}: expected a string")
    return obj


def _rational(obj, path) -> Fraction:
    if isinstance(obj, bool) or not isinstance(obj, (str, int)):
        raise DocumentError(f"{path}: expected a rational string such as \"1/2\"")
    try:
        return Fraction(obj)
    except (ValueError, ZeroDivisionError):
        raise DocumentError(f"{path}: bad rational {obj!r}") from None


def _build(path, fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except DocumentError:
        raise
    except (GameError, TypeError, ValueError) as exc:
        raise DocumentError(f"{path}: {exc}") from None


def _decode_context(obj, path):
    _fields(obj, path, ("pair", "cells"), ("variant",))
    pair = _list(obj["pair"], f"{path}.pair")
    if len(pair) != 2:
        raise DocumentError(f"{path}.pair: expected two players")
    cells = []
    for i, line in enumerate(_list(obj["cells"], f"{path}.cells")):
        row = []
        for j, cell in enumerate(_list(line, f"{path}.cells[{i}]")):
            where = f"{path}.cells[{i}][{j}]"
            if not isinstance(cell, list) or len(cell) != 2:
                raise DocumentError(f"{where}: expected a pair of payoffs")
            row.append((_rational(cell[0], where), _rational(cell[1], where)))
        cells.append(tuple(row))
    ctx = _build(path, Context, _str(pair[0], path), _str(pair[1], path), tuple(cells))
    return ctx, obj.get("variant")


def _decode_bit(obj, path):
    _fields(obj, path, ("name", "kind"), ("owner", "source", "fidelity", "rule", "params", "value"))
    kwargs = dict(name=_str(obj["name"], path), kind=_str(obj["kind"], path), owner=obj.get("owner"),
                  source=tuple(_list(obj.get("source", []), f"{path}.source")),
                  rule=obj.get("rule"), value=obj.get("value"))
    if "fidelity" in obj:
        kwargs["fidelity"] = _rational(obj["fidelity"], f"{path}.fidelity")
    kwargs["params"] = tuple(_rational(p, f"{path}.params")
                             for p in _list(obj.get("params", []), f"{path}.params"))
    return _build(path, Bit, **kwargs)


def _tuplify(value):
    if isinstance(value, list):
        return tuple(_tuplify(v) for v in value)
    return value


def _decode_stage(obj, path):
    if not isinstance(obj, dict) or "stage" not in obj:
        raise DocumentError(f"{path}: expected an object with a 'stage' field")
    cls = STAGES.get(obj["stage"])
    if cls is None:
        raise DocumentError(f"{path}: unknown stage {obj['stage']!r}")
    names = [f.name for f in dataclasses.fields(cls)]
    _fields(obj, path, ("stage",), names)
    kwargs = {k: _tuplify(v) for k, v in obj.items() if k != "stage"}
    return _build(path, cls, **kwargs)


def _decode_mechanism(obj, path):
    if not isinstance(obj, dict) or "type" not in obj:
        raise DocumentError(f"{path}: expected an object with a 'type' field")
    kind = obj["type"]
    if kind not in MECHANISMS:
        raise DocumentError(f"{path}: unknown mechanism {kind!r}")
    if kind == "noisy":
        _fields(obj, path, ("type", "source", "output", "fidelity", "sender", "recipient"))
        channel = _build(path, NoisyChannel, obj["source"], obj["output"],
                         _rational(obj["fidelity"], f"{path}.fidelity"))
        return NoisyBlock(channel, obj["sender"], obj["recipient"])
    cls = MECHANISMS[kind]
    names = [f.name for f in dataclasses.fields(cls)]
    required = [f.name for f in dataclasses.fields(cls) if f.default is dataclasses.MISSING]
    _fields(obj, path, ["type"] + required, names)
    kwargs = {k: _tuplify(v) for k, v in obj.items() if k != "type"}
    for key in ("amount", "alpha"):
        if key in kwargs:
            kwargs[key] = _rational(kwargs[key], f"{path}.{key}")
    return _build(path, cls, **kwargs)


def from_data(data) -> GameDocument:
    _fields(data, "document", ("format-version", "players", "contexts"),
            ("bits", "variants", "knowledge", "variant-known", "subject", "script", "mechanisms"))
    if data["format-version"] != FORMAT_VERSION:
        raise DocumentError(f"format-version: unsupported version {data['format-version']!r}")
    players = []
    for i, p in enumerate(_list(data["players"], "players")):
        path = f"players[{i}]"
        _fields(p, path, ("name", "role"), ("choices",))
        players.append(_build(path, Player, _str(p["name"], path), _str(p["role"], path),
                              tuple(_list(p.get("choices", []), f"{path}.choices"))))
    names = {p.name for p in players}
    bits = [_decode_bit(b, f"bits[{i}]") for i, b in enumerate(_list(data.get("bits", []), "bits"))]
    for i, b in enumerate(bits):
        if b.owner is not None and b.owner not in names:
            raise DocumentError(f"bits[{i}].owner: unknown player {b.owner!r}")
    variants = []
    for i, v in enumerate(_list(data.get("variants", []), "variants")):
        path = f"variants[{i}]"
        _fields(v, path, ("name", "prior"))
        variants.append((_str(v["name"], path), _rational(v["prior"], f"{path}.prior")))
    if variants:
        total = sum(p for _, p in variants)
        if total != 1:
            raise DocumentError(f"variants: priors sum to {total}, not 1")
    base, over = [], {name: [] for name, _ in variants}
    for i, c in enumerate(_list(data["contexts"], "contexts")):
        path = f"contexts[{i}]"
        ctx, variant = _decode_context(c, path)
        for who in (ctx.row, ctx.col):
            if who not in names:
                raise DocumentError(f"{path}.pair: unknown player {who!r}")
        if variant is None:
            base.append(ctx)
        elif variant in over:
            over[variant].append(ctx)
        else:
            raise DocumentError(f"{path}.variant: unknown variant {variant!r}")
    game = _build("game", Game, tuple(players), tuple(bits), tuple(base),
                  tuple(Variant(n, p, tuple(over[n])) for n, p in variants))
    knowledge = _fields(data.get("knowledge", {}), "knowledge", (), sorted(names))
    known = {p: set(_list(knowledge.get(p, []), f"knowledge.{p}")) for p in game.player_names}
    for p, bs in known.items():
        for b in sorted(bs):
            if b not in game.bit_names:
                raise DocumentError(f"knowledge.{p}: unknown bit {b!r}")
    if "knowledge" not in data:
        initial = KnowledgeState.initial(game)
    else:
        vk = _list(data.get("variant-known", []), "variant-known")
        for p in vk:
            if p not in names:
                raise DocumentError(f"variant-known: unknown player {p!r}")
        initial = _build("knowledge", KnowledgeState.build, known, vk)
    stages = tuple(_decode_stage(s, f"script[{i}]")
                   for i, s in enumerate(_list(data.get("script", [{"stage": "play", "fallback": "subject"}]),
                                                "script")))
    subject = data.get("subject")
    if subject is not None and subject not in names:
        raise DocumentError(f"subject: unknown player {subject!r}")
    script = _build("script", ScenarioScript, game, stages, initial, subject)
    mechanisms = tuple(_decode_mechanism(m, f"mechanisms[{i}]")
                       for i, m in enumerate(_list(data.get("mechanisms", []), "mechanisms")))
    return GameDocument(script, mechanisms)


def loads(text: str) -> GameDocument:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    return from_data(data)


def load(path) -> GameDocument:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise DocumentError(f"{path}: {exc}") from None
    return loads(text)


# mechanisms ---------------------------------------------------------------

def _find_block(doc: GameDocument, selector) -> int:
    text = str(selector)
    if text.isdigit():
        idx = int(text)
        if idx >= len(doc.mechanisms):
            raise DocumentError(f"mechanisms: no block {idx}")
        return idx
    for i, block in enumerate(doc.mechanisms):
        if MECHANISM_NAMES[type(block)] == text:
            return i
    raise DocumentError(f"mechanisms: no {text!r} block")


def apply_block(doc: GameDocument, selector) -> GameDocument:
    """Apply one pending mechanism (by index or type name) and drop it from the list."""
    idx = _find_block(doc, selector)
    block = doc.mechanisms[idx]
    script = doc.script
    path = f"mechanisms[{idx}]"
    if isinstance(block, (TransferRule, TaxRule)):
        game = _build(path, apply_distributional, script.game, [block])
        script = ScenarioScript(game, script.stages, script.initial, script.subject)
    elif isinstance(block, InteractiveBlock):
        script = _build(path, apply_interactive, script, block.sender, block.recipient, block.bit)
    elif isinstance(block, NoisyBlock):
        script = _build(path, apply_noisy, script, block.channel, block.sender, block.recipient)
    else:
        script = _build(path, build_bandwidth, script.game, block).script
    return GameDocument(script, doc.mechanisms[:idx] + doc.mechanisms[idx + 1:])


def pending_for(name: str) -> tuple:
    """Mechanism blocks that a preset document carries unapplied."""
    from . import presets

    if name == "ownership":
        return (presets.OWNERSHIP_TRANSFER, presets.OWNERSHIP_TAX)
    if name == "interactive":
        return (InteractiveBlock("Bob", "Carol"),)
    if name == "noisy":
        return (NoisyBlock(NoisyChannel("a", "ã", Fraction(1, 4)), "Bob", "Carol"),
                BandwidthPolicy(4, Fraction(1, 4)))
    return ()


def preset_document(name: str) -> GameDocument:
    from . import presets

    return document_for(presets.preset(name), pending_for(name.strip()))
