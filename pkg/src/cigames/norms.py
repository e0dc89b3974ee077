"""Classifiers for information-flow norms.

Each check locates the relevant pre-play decision in a script, forces each
option in turn and compares the resulting continuation values.  Every number
in a witness comes from :func:`cigames.staged.continuation`; nothing here
computes payoffs on its own.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from .errors import ScriptError, SelectionFailure
from .staged import (Observe, ScenarioScript, Share, Signal, continuation, solve)

YES, NO, AMBIGUOUS = "yes", "no", "ambiguous"


@dataclass
class NormVerdict:
    norm: str
    holds: str
    witness: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)

    def __bool__(self):
        return self.holds == YES

    def render(self) -> str:
        lines = [f"{self.norm}: {self.holds}"]
        for key, value in self.witness.items():
            lines.append(f"  {key} = {_show(value)}")
        lines += [f"  note: {n}" for n in self.notes]
        return "\n".join(lines)


def _show(value):
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, (tuple, list)):
        return "(" + ", ".join(_show(v) for v in value) + ")"
    return str(value)


def _find(script: ScenarioScript, kind, **attrs) -> int:
    for k, st in enumerate(script.stages):
        if isinstance(st, kind) and all(getattr(st, a) == v for a, v in attrs.items()):
            return k
    desc = ", ".join(f"{a}={v}" for a, v in attrs.items())
    raise ScriptError(f"no {kind.__name__} stage with {desc}")


def _upstream_shares(script: ScenarioScript, stage: int, bit: str, holder: str) -> dict:
    """Force every earlier share of ``bit`` towards ``holder`` to happen."""
    return {k: "share" for k, st in enumerate(script.stages[:stage])
            if isinstance(st, Share) and st.bit == bit and st.recipient == holder}


def _compare(norm, script, stage, player, options, given=None):
    """Continuation trees and ``player``'s value for each option at ``stage``."""
    trees, values, notes = {}, {}, []
    idx = script.game.player_names.index(player)
    for opt in options:
        try:
            trees[opt] = continuation(script, stage, opt, given)
        except SelectionFailure as exc:
            notes.append(f"{opt}: {exc}")
            continue
        values[opt] = trees[opt].value[idx]
    return trees, values, notes


def _strict(norm, values, notes, better, worse, witness):
    if better not in values or worse not in values:
        return NormVerdict(norm, AMBIGUOUS, witness, notes + ["selection failed"])
    if values[better] > values[worse]:
        return NormVerdict(norm, YES, witness, notes)
    if values[better] == values[worse]:
        return NormVerdict(norm, AMBIGUOUS, witness, notes + ["tie"])
    return NormVerdict(norm, NO, witness, notes)


def check_secrecy(script: ScenarioScript, owner: str, bit: str, counterparty: str) -> NormVerdict:
    """The owner strictly prefers keeping ``bit`` from ``counterparty``."""
    k = _find(script, Share, decider=owner, bit=bit, recipient=counterparty)
    _, values, notes = _compare("secrecy", script, k, owner, ("keep", "share"))
    witness = {f"{owner} keep-value": values.get("keep"), f"{owner} share-value": values.get("share")}
    return _strict("secrecy", values, notes, "keep", "share", witness)


def check_respect(script: ScenarioScript, observer: str, bit: str) -> NormVerdict:
    """The observer does not gain by looking, and looking does not help the subject either."""
    k = _find(script, Observe, observer=observer, bit=bit)
    trees, values, notes = _compare("respect", script, k, observer, ("respect", "observe"))
    owner = script.game.bit(bit).owner
    oi = script.game.player_names.index(owner)
    sub = {opt: t.value[oi] for opt, t in trees.items()}
    witness = {f"{observer} respect-value": values.get("respect"),
               f"{observer} observe-value": values.get("observe"),
               f"{owner} respect-value": sub.get("respect"),
               f"{owner} observe-value": sub.get("observe")}
    if len(values) < 2:
        return NormVerdict("respect", AMBIGUOUS, witness, notes + ["selection failed"])
    if values["respect"] == values["observe"] and sub["respect"] == sub["observe"]:
        return NormVerdict("respect", AMBIGUOUS, witness, notes + ["tie"])
    if values["respect"] >= values["observe"] and sub["observe"] <= sub["respect"]:
        if values["respect"] == values["observe"]:
            notes.append(f"{observer} is indifferent")
        return NormVerdict("respect", YES, witness, notes)
    return NormVerdict("respect", NO, witness, notes)


def _sender_values(norm, script, sender, bit, recipient):
    k = _find(script, Share, decider=sender, bit=bit, recipient=recipient)
    given = _upstream_shares(script, k, bit, sender)
    _, values, notes = _compare(norm, script, k, sender, ("keep", "share"), given)
    witness = {f"{sender} keep-value": values.get("keep"), f"{sender} share-value": values.get("share")}
    return values, notes, witness


def check_confidentiality(script: ScenarioScript, sender: str, bit: str, recipient: str) -> NormVerdict:
    """Once holding ``bit``, the sender strictly prefers to keep it from ``recipient``."""
    values, notes, witness = _sender_values("confidentiality", script, sender, bit, recipient)
    return _strict("confidentiality", values, notes, "keep", "share", witness)


def check_mandatory(script: ScenarioScript, sender: str, bit: str, recipient: str) -> NormVerdict:
    """Once holding ``bit``, the sender strictly prefers to pass it to ``recipient``."""
    values, notes, witness = _sender_values("mandatory", script, sender, bit, recipient)
    return _strict("mandatory", values, notes, "share", "keep", witness)


def _variants(script):
    return script.game.variant_names or (None,)


def check_fiduciary(script: ScenarioScript, sender: str, bit: str, recipient: str, subject: str,
                    given: Mapping | None = None) -> NormVerdict:
    """In every variant the sender shares exactly when sharing strictly helps the subject.

    ``given`` pins decisions (stage index to action) before solving, e.g.
    to test a sender told to act against the subject.
    """
    k = _find(script, Share, decider=sender, bit=bit, recipient=recipient)
    forced = {**_upstream_shares(script, k, bit, sender), **dict(given or {})}
    si = script.game.player_names.index(subject)
    notes = ["sharing must strictly raise the subject's payoff"]
    try:
        chosen = solve(script, forced).actions(k)
        trees = {opt: continuation(script, k, opt, forced) for opt in ("keep", "share")}
    except SelectionFailure as exc:
        return NormVerdict("fiduciary", AMBIGUOUS, {}, notes + [str(exc)])
    witness, holds = {}, YES
    for v in trees["keep"].branch_values:
        keep = trees["keep"].branch_values[v][si]
        share = trees["share"].branch_values[v][si]
        label = v or "game"
        witness[f"{label}: {subject} keep-value"] = keep
        witness[f"{label}: {subject} share-value"] = share
        witness[f"{label}: {sender} action"] = chosen[v]
        if keep == share:
            holds = AMBIGUOUS if holds == YES else holds
            notes.append(f"{label}: tie")
        elif (share > keep) != (chosen[v] == "share"):
            holds = NO
    return NormVerdict("fiduciary", holds, witness, notes)


def check_control(script: ScenarioScript, subject: str, bit: str, sender: str, recipient: str) -> NormVerdict:
    """The subject signals the variant and the sender shares exactly when told to."""
    ks = _find(script, Signal, sender=subject, receiver=sender)
    kb = _find(script, Share, decider=sender, bit=bit, recipient=recipient)
    if ks > kb:
        raise ScriptError("the subject's signal must precede the sender's decision")
    forced = _upstream_shares(script, ks, bit, sender)
    signal_bit = script.stages[ks].bit
    notes = []
    try:
        base = solve(script, forced)
    except SelectionFailure as exc:
        return NormVerdict("control", AMBIGUOUS, {}, [str(exc)])
    record = base.decision(ks)
    witness = {}
    found = None
    for policy in record.ties:
        trial = {**forced, ks: dict(zip(record.views, policy))}
        tree = solve(script, trial)
        signals = tree.actions(ks)
        shares = tree.actions(kb)
        informative = len(set(signals.values())) > 1
        follows = all((shares[v] == "share") == (signals[v] == 1) for v in signals)
        if informative and follows:
            found = (policy, tree, signals, shares)
            break
    if found is None:
        signals, shares = base.actions(ks), base.actions(kb)
        witness.update({f"{v}: {signal_bit}": s for v, s in signals.items()})
        witness.update({f"{v}: {sender} action": a for v, a in shares.items()})
        notes.append("no optimal signalling policy is both informative and followed")
        return NormVerdict("control", NO, witness, notes)
    policy, tree, signals, shares = found
    if policy != record.policy:
        notes.append("informative policy chosen among tied optimal policies")
    if len(record.ties) > 1:
        notes.append(f"{len(record.ties)} signalling policies tie for {subject}")
    witness.update({f"{v}: {signal_bit}": s for v, s in signals.items()})
    witness.update({f"{v}: {sender} action": a for v, a in shares.items()})
    witness.update({f"{v}: value": val for v, val in tree.branch_values.items()})
    sender_knows = any(d.stage == kb and any(lbl.split(",")[0] in script.game.variant_names
                                             for lbl in d.views) for d in tree.decisions)
    if sender_knows:
        notes.append(f"{sender} observes the variant himself; the signal is redundant")
    return NormVerdict("control", YES, witness, notes)


def check_notification(script: ScenarioScript, sender: str, subject: str, bit: str) -> NormVerdict:
    """The sender's best signal to the subject truthfully reports whether he shared."""
    kb = _find(script, Share, decider=sender, bit=bit)
    ks = _find(script, Signal, sender=sender, receiver=subject)
    si = script.game.player_names.index(sender)
    try:
        base = solve(script)
    except SelectionFailure as exc:
        return NormVerdict("notification", AMBIGUOUS, {}, [str(exc)])
    values = {}
    for action in ("keep", "share"):
        for s in (0, 1):
            tree = solve(script, {kb: action, ks: s})
            for v, vec in tree.branch_values.items():
                values[(v, action, s)] = vec[si]
    witness = {f"{v + ': ' if v else ''}{a}&signal{s}": x for (v, a, s), x in values.items()}
    record = base.decision(kb)
    variants = list(base.branch_values)
    best = NO
    for policy in record.ties:
        trial = solve(script, {kb: dict(zip(record.views, policy))})
        acts = trial.actions(kb)
        status = YES
        for v in variants:
            a = acts[v]
            truthful = 1 if a == "share" else 0
            gap = values[(v, a, truthful)] - values[(v, a, 1 - truthful)]
            if gap < 0:
                status = NO
                break
            if gap == 0:
                status = AMBIGUOUS
        if status == YES:
            best = YES
            chosen = acts
            break
        if status == AMBIGUOUS:
            best = AMBIGUOUS
            chosen = acts
    notes = []
    if best != NO:
        witness.update({f"{v}: {sender} action": a for v, a in chosen.items()})
    if best == AMBIGUOUS:
        notes.append("signal values tie")
    if len(record.ties) > 1:
        notes.append(f"{len(record.ties)} share policies tie for {sender}")
    return NormVerdict("notification", best, witness, notes)


def check_ownership(script: ScenarioScript, sender: str, subject: str, mechanism) -> NormVerdict:
    """With the mechanism the subject does not lose by sharing and the sender is better off."""
    from .mechanisms import apply_distributional

    rules = list(mechanism) if isinstance(mechanism, (list, tuple)) else [mechanism]
    modified = script.replace(game=apply_distributional(script.game, rules))
    subject_bits = [b.name for b in script.game.bits if b.owner == subject and b.kind == "secret"]
    k = next((i for i, st in enumerate(script.stages)
              if isinstance(st, Share) and st.decider == subject and st.recipient == sender
              and st.bit in subject_bits), None)
    if k is None:
        raise ScriptError(f"no share from {subject} to {sender}")
    _, values, notes = _compare("ownership", modified, k, subject, ("keep", "share"))
    pi = script.game.player_names.index(sender)
    try:
        before = solve(script).value[pi]
        after = solve(modified).value[pi]
    except SelectionFailure as exc:
        return NormVerdict("ownership", AMBIGUOUS, {}, notes + [str(exc)])
    witness = {f"{subject} keep-value": values.get("keep"),
               f"{subject} share-value": values.get("share"),
               f"{sender} value without mechanism": before,
               f"{sender} value with mechanism": after}
    if len(values) < 2:
        return NormVerdict("ownership", AMBIGUOUS, witness, notes + ["selection failed"])
    ok = values["share"] >= values["keep"] and after > before
    if values["share"] == values["keep"]:
        notes.append(f"{subject} is indifferent between keeping and sharing")
    return NormVerdict("ownership", YES if ok else NO, witness, notes)


NORMS = {
    "secrecy": check_secrecy,
    "respect": check_respect,
    "confidentiality": check_confidentiality,
    "mandatory": check_mandatory,
    "fiduciary": check_fiduciary,
    "control": check_control,
    "notification": check_notification,
    "ownership": check_ownership,
}


def _owner(script, bit):
    return script.game.bit(bit).owner


def _relay(script: ScenarioScript) -> Share:
    """Last share made by someone other than the bit's owner."""
    found = [st for st in script.stages if isinstance(st, Share) and st.decider != _owner(script, st.bit)]
    if not found:
        raise ScriptError("no share by a non-owner in this script")
    return found[-1]


def _first(script, kind, message):
    for st in script.stages:
        if isinstance(st, kind):
            return st
    raise ScriptError(message)


def infer_arguments(script: ScenarioScript, norm: str) -> dict:
    """Default arguments for ``norm`` read off the script's stages."""
    if norm == "secrecy":
        st = next((s for s in script.stages if isinstance(s, Share) and s.decider == _owner(script, s.bit)),
                  None)
        if st is None:
            raise ScriptError("no share by a bit's owner in this script")
        return dict(owner=st.decider, bit=st.bit, counterparty=st.recipient)
    if norm == "respect":
        st = _first(script, Observe, "no observe stage in this script")
        return dict(observer=st.observer, bit=st.bit)
    if norm in ("confidentiality", "mandatory"):
        st = _relay(script)
        return dict(sender=st.decider, bit=st.bit, recipient=st.recipient)
    if norm == "fiduciary":
        st = _relay(script)
        return dict(sender=st.decider, bit=st.bit, recipient=st.recipient,
                    subject=script.subject or _owner(script, st.bit))
    if norm == "control":
        sig = _first(script, Signal, "no signal stage in this script")
        st = next((s for s in script.stages if isinstance(s, Share) and s.decider == sig.receiver), None)
        if st is None:
            raise ScriptError(f"no share by {sig.receiver} in this script")
        return dict(subject=sig.sender, bit=st.bit, sender=sig.receiver, recipient=st.recipient)
    if norm == "notification":
        sig = _first(script, Signal, "no signal stage in this script")
        st = next((s for s in script.stages if isinstance(s, Share) and s.decider == sig.sender), None)
        if st is None:
            raise ScriptError(f"no share by {sig.sender} in this script")
        return dict(sender=sig.sender, subject=sig.receiver, bit=st.bit)
    if norm == "ownership":
        st = _relay(script)
        return dict(sender=st.decider, subject=_owner(script, st.bit))
    raise ScriptError(f"unknown norm {norm!r}")


def classify(script: ScenarioScript, norm: str, mechanism=None, **overrides) -> NormVerdict:
    """Run ``norm`` with arguments inferred from the script, overridden by ``overrides``."""
    if norm not in NORMS:
        raise ScriptError(f"unknown norm {norm!r}; choose from {', '.join(NORMS)}")
    args = {**infer_arguments(script, norm), **overrides}
    if norm == "ownership":
        if mechanism is None:
            raise ScriptError("the ownership norm needs a transfer or tax mechanism")
        args["mechanism"] = mechanism
    return NORMS[norm](script, **args)
