"""Command-line front end: ``cigames COMMAND -g GAME ...``.

``GAME`` is either a JSON document or a preset name such as ``privacy`` or
``noisy(1/4)``.  Exit codes: 0 success, 1 usage error, 2 bad input, 3 a
reproduction whose core claims failed.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import claims
from .core import KnowledgeState, expected_payoff
from .equilibria import enumerate_nash, payoff_dominant
from .errors import GameError
from .io import GameDocument, apply_block, load, preset_document, rat, save
from .notation import parse_profile
from .norms import NORMS, classify
from .staged import solve

EXIT_OK, EXIT_USAGE, EXIT_INPUT, EXIT_REPRODUCE = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def open_game(spec: str) -> GameDocument:
    """Load a document from a path, or build one from a preset name."""
    if Path(spec).is_file():
        return load(spec)
    return preset_document(spec)


def _setting(doc: GameDocument, variant=None, know=()):
    game, knowledge = doc.game, doc.script.initial
    for item in know:
        player, _, bits = item.partition("=")
        if not bits:
            raise GameError(f"--know expects PLAYER=BIT[,BIT...], got {item!r}")
        game.player(player)
        for b in bits.split(","):
            game.bit(b)
        knowledge = knowledge.learn(player, *bits.split(","))
    if variant is not None:
        if variant not in game.variant_names:
            raise GameError(f"unknown variant {variant!r}")
        game = game.restrict_variant(variant)
    return game, knowledge


def values_line(values) -> str:
    return " ".join(rat(v) for v in values)


def _equilibria_lines(eqs) -> list[str]:
    lines = []
    for i, (text, values) in enumerate(eqs.formatted()):
        size = f"  [class of {eqs.class_sizes[i]}]" if eqs.quotiented else ""
        lines.append(f"{text}  {values_line(values)}{size}")
    return lines


def cmd_eval(args) -> str:
    game, knowledge = _setting(open_game(args.game), args.variant, args.know)
    return values_line(expected_payoff(game, knowledge, parse_profile(game, args.profile)))


def cmd_nash(args) -> str:
    game, knowledge = _setting(open_game(args.game), args.variant, args.know)
    eqs = enumerate_nash(game, knowledge, quotient=args.quotient)
    return "\n".join([f"{len(eqs)} equilibria"] + _equilibria_lines(eqs))


def cmd_dominant(args) -> str:
    game, knowledge = _setting(open_game(args.game), args.variant, args.know)
    dom = payoff_dominant(enumerate_nash(game, knowledge, quotient=True))
    if not len(dom):
        return "no payoff-dominant equilibrium"
    return "\n".join(_equilibria_lines(dom))


def cmd_solve(args) -> str:
    return solve(open_game(args.game).script).render()


def cmd_classify(args) -> str:
    doc = open_game(args.game)
    overrides = {}
    for item in args.arg:
        key, _, value = item.partition("=")
        if not value:
            raise UsageError(f"--arg expects KEY=VALUE, got {item!r}")
        overrides[key] = value
    mechanism = next((m for m in doc.mechanisms if type(m).__name__ in ("TransferRule", "TaxRule")), None)
    try:
        verdict = classify(doc.script, args.norm, mechanism, **overrides)
    except TypeError as exc:
        raise UsageError(str(exc)) from None
    return verdict.render()


def cmd_mechanism(args) -> str:
    doc = apply_block(open_game(args.game), args.apply)
    save(doc, args.out)
    return f"wrote {args.out}"


def render_table(records, summary) -> str:
    lines = []
    for r in records:
        lines.append(f"{r.verdict:<16} {r.id}  [{r.kind}{', core' if r.core else ''}] {r.location}")
        lines.append(f"    claimed:  {r.claimed}")
        lines.append(f"    computed: {r.computed}")
        if r.note:
            lines.append(f"    note:     {r.note}")
    lines.append(f"{summary.passed}/{summary.total} claims pass; "
                 f"{summary.core_total - len(summary.core_failed)}/{summary.core_total} core claims pass")
    if summary.core_failed:
        lines.append("core failures: " + ", ".join(summary.core_failed))
    return "\n".join(lines)


def render_structured(records, summary) -> str:
    data = {"claims": [r.as_dict() for r in records],
            "summary": {"total": summary.total, "passed": summary.passed,
                        "mismatched": summary.mismatched, "core-total": summary.core_total,
                        "core-failed": summary.core_failed}}
    return json.dumps(data, indent=2, ensure_ascii=False)


def cmd_reproduce(args):
    ids = [c for part in args.claims for c in part.split(",") if c] if args.claims else None
    try:
        records, summary = claims.reproduce(ids)
    except KeyError as exc:
        raise GameError(exc.args[0]) from None
    render = render_structured if args.format == "structured" else render_table
    return render(records, summary), EXIT_OK if summary.core_ok else EXIT_REPRODUCE


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="cigames", description="Exact solver for information-sharing games.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    def game_command(name, fn, help):
        p = sub.add_parser(name, help=help)
        p.add_argument("-g", "--game", required=True, help="document path or preset name")
        p.set_defaults(fn=fn)
        return p

    def setting(p):
        p.add_argument("--variant", help="restrict to one variant")
        p.add_argument("--know", action="append", default=[], metavar="PLAYER=BITS",
                       help="extra bits a player knows (repeatable)")

    p = game_command("eval", cmd_eval, "expected payoff of a strategy profile")
    p.add_argument("-p", "--profile", required=True, help="profile such as '<a?T:B,c?L:R>'")
    setting(p)
    p = game_command("nash", cmd_nash, "list Nash equilibria")
    p.add_argument("--quotient", action="store_true", help="one representative per equivalence class")
    setting(p)
    setting(game_command("dominant", cmd_dominant, "payoff-dominant equilibrium classes"))
    game_command("solve", cmd_solve, "solve the staged script")
    p = game_command("classify", cmd_classify, "check an information-flow norm")
    p.add_argument("--norm", required=True, choices=sorted(NORMS))
    p.add_argument("--arg", action="append", default=[], metavar="KEY=VALUE",
                   help="override an inferred norm argument (repeatable)")
    p = game_command("mechanism", cmd_mechanism, "apply a pending mechanism block")
    p.add_argument("--apply", required=True, metavar="BLOCK", help="block index or type name")
    p.add_argument("--out", required=True, help="output document path")
    p = sub.add_parser("reproduce", help="recompute the published results")
    p.add_argument("--claims", nargs="+", metavar="ID", help="claim ids (default: all)")
    p.add_argument("--format", choices=("table", "structured"), default="table")
    p.set_defaults(fn=cmd_reproduce)
    return parser


def run_cli(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError(parser.format_usage().strip())
        result = args.fn(args)
    except UsageError as exc:
        print(exc, file=err)
        return EXIT_USAGE
    except GameError as exc:
        print(f"error: {exc}", file=err)
        return EXIT_INPUT
    code = EXIT_OK
    if isinstance(result, tuple):
        result, code = result
    print(result, file=out)
    return code


def main(argv=None) -> int:
    return run_cli(argv)


if __name__ == "__main__":
    sys.exit(main())
