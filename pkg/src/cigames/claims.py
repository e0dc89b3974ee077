"""Ledger of published results, each recomputed from the presets.

Every claim pairs the printed value with a fresh computation.  Exact claims
pass only on equality; qualitative claims pass when the stated conclusion
holds on the computed values, whatever the printed numbers were.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Callable, Iterable

from . import presets
from .core import KnowledgeState, expected_payoff
from .equilibria import enumerate_nash, is_nash, payoff_dominant
from .mechanisms import prob_informative, welfare_delta
from .norms import (check_confidentiality, check_control, check_fiduciary, check_mandatory,
                    check_notification, check_ownership, check_respect, check_secrecy)
from .notation import format_profile, parse_profile
from .staged import continuation, solve

PASS, PASS_QUALITATIVE, MISMATCH = "PASS", "PASS-QUALITATIVE", "MISMATCH"


@dataclass
class ClaimRecord:
    id: str
    location: str
    claimed: str
    computed: str
    kind: str
    verdict: str
    core: bool = False
    note: str = ""

    def as_dict(self) -> dict:
        return asdict(self)


@dataclass
class Summary:
    total: int
    passed: int
    mismatched: int
    core_total: int
    core_failed: list

    @property
    def core_ok(self) -> bool:
        return not self.core_failed


def vec(text: str) -> tuple:
    return tuple(Fraction(x.strip()) for x in text.split(","))


def show(values) -> str:
    if isinstance(values, Fraction):
        return str(values)
    return "(" + ", ".join(str(Fraction(v)) for v in values) + ")"


_CLAIMS: dict[str, tuple[str, str, bool, Callable]] = {}


def claim(cid: str, location: str, kind: str = "exact", core: bool = False):
    def wrap(fn):
        _CLAIMS[cid] = (location, kind, core, fn)
        return fn
    return wrap


def claim_ids() -> list[str]:
    return sorted(_CLAIMS)


def core_ids() -> list[str]:
    return sorted(c for c, (_, _, core, _) in _CLAIMS.items() if core)


def _value(game, known, text, variant=None):
    g = game.restrict_variant(variant) if variant else game
    k = known if isinstance(known, KnowledgeState) else _know(g, known)
    return expected_payoff(g, k, parse_profile(g, text))


def _know(game, shares):
    """Initial knowledge plus ``{"Bob": "a", ...}`` style extra bits."""
    k = KnowledgeState.initial(game)
    for player, bits in shares.items():
        k = k.learn(player, *bits)
    return k


def _nash(game, shares, text, variant=None):
    g = game.restrict_variant(variant) if variant else game
    k = _know(g, shares)
    return is_nash(g, k, parse_profile(g, text))


def _dominant_values(game, shares, variant=None):
    g = game.restrict_variant(variant) if variant else game
    dom = payoff_dominant(enumerate_nash(g, _know(g, shares), quotient=True))
    return sorted(set(dom.payoffs))


def _per_component(claimed, computed, names=("Alice", "Bob", "Carol")):
    return ", ".join(f"{n} {'ok' if a == b else f'{a} vs {b}'}"
                     for n, a, b in zip(names, claimed, computed))


# privacy ------------------------------------------------------------------

@claim("privacy-5-NE", "privacy game, nothing shared")
def _privacy_5():
    g = presets.privacy_game()
    eqs = enumerate_nash(g, KnowledgeState.initial(g))
    counts = {}
    for u in eqs.payoffs:
        counts[u] = counts.get(u, 0) + 1
    got = "; ".join(f"{show(u)} x{n}" for u, n in sorted(counts.items()))
    ok = counts == {vec("2,2"): 1, vec("4,4"): 4}
    return "(2, 2) x1; (4, 4) x4", got, ok, ""


@claim("privacy-profile-gain", "privacy game, nothing shared")
def _privacy_gain():
    v = _value(presets.privacy_game(), {}, "<a?T:B,c?L:R>")
    return "(4, 4)", show(v), v == vec("4,4"), ""


@claim("privacy-recipient-deviation", "privacy game, a shared with Carol")
def _privacy_dev():
    g = presets.privacy_game()
    before = _value(g, {"Carol": "a"}, "<a?T:B,c?L:R>")[1]
    after = _value(g, {"Carol": "a"}, "<a?T:B,a?L:R>")[1]
    return "Carol 4 -> 8", f"Carol {before} -> {after}", (before, after) == (4, 8), ""


@claim("privacy-shared-unique", "privacy game, a shared with Carol")
def _privacy_unique():
    g = presets.privacy_game()
    eqs = enumerate_nash(g, _know(g, {"Carol": "a"}), quotient=True)
    got = "; ".join(f"{p} {show(u)}" for p, u in eqs.formatted())
    return "⟨M,C⟩ (2, 2) only", got, got == "⟨M,C⟩ (2, 2)", ""


@claim("secrecy-keep-dominant", "privacy game, owner's share decision", "qualitative", core=True)
def _secrecy():
    v = check_secrecy(presets.privacy_script(), "Alice", "a", "Carol")
    w = list(v.witness.values())
    return "keeping is dominant", f"{v.holds}: keep {w[0]} vs share {w[1]}", v.holds == "yes", ""


@claim("respect-dominant", "privacy game, recipient's observe decision", "qualitative", core=True)
def _respect():
    v = check_respect(presets.privacy_script(observe=True), "Carol", "a")
    w = list(v.witness.values())
    return "respecting is dominant", f"{v.holds}: respect {w[0]} vs observe {w[1]}", v.holds == "yes", ""


# confidentiality ----------------------------------------------------------

@claim("confidentiality-dominant", "confidentiality game")
def _conf_dom():
    g = presets.confidentiality_game()
    none = _dominant_values(g, {})
    shared = _dominant_values(g, {"Bob": "a"})
    v = check_confidentiality(presets.confidentiality_script(), "Bob", "a", "Carol")
    keep, share = v.witness["Bob keep-value"], v.witness["Bob share-value"]
    got = f"{' '.join(map(show, none))} / {' '.join(map(show, shared))}; keep {keep} > share {share}"
    ok = none == [vec("9,5,12")] and shared == [vec("10,6,12")] and (keep, share) == (6, 4)
    return "(9, 5, 12) / (10, 6, 12); keep 6 > share 4", got, ok, ""


@claim("confidentiality-recipient-knows", "confidentiality game, a known to Bob and Carol")
def _conf_after():
    g = presets.confidentiality_game()
    eqs = enumerate_nash(g, _know(g, {"Bob": "a", "Carol": "a"}), quotient=True)
    got = "; ".join(f"{p} {show(u)}" for p, u in eqs.formatted())
    other = _value(g, {"Bob": "a", "Carol": "a"}, "<M,b?N:F,c?L:R>")
    other_ne = _nash(g, {"Bob": "a", "Carol": "a"}, "<M,b?N:F,c?L:R>")
    note = f"⟨M,b?N:F,c?L:R⟩ pays {show(other)} and is {'' if other_ne else 'not '}an equilibrium"
    ok = other_ne and all(u[1] == 4 for u in eqs.payoffs)
    return "⟨M,b?N:F,c?L:R⟩ and ⟨M,I,C⟩ are equilibria, both pay Bob 4", got, ok, note


@claim("confidentiality-keep", "confidentiality game, sender's share decision", "qualitative", core=True)
def _conf_keep():
    v = check_confidentiality(presets.confidentiality_script(), "Bob", "a", "Carol")
    return "Bob keeps a from Carol", f"{v.holds}: keep {v.witness['Bob keep-value']} vs share {v.witness['Bob share-value']}", v.holds == "yes", ""


# mandatory transfer -------------------------------------------------------

@claim("mandatory-unshared", "mandatory-transfer game, nothing shared")
def _mand_unshared():
    g = presets.mandatory_game()
    v = _value(g, {}, "<a?T:B,I,c?L:R>")
    claimed = vec("5,1,3")
    dom = _dominant_values(g, {})
    note = f"{_per_component(claimed, v)}; dominant set {'empty' if not dom else ' '.join(map(show, dom))}"
    return "⟨a?T:B,I,c?L:R⟩ (5, 1, 3), payoff dominant", show(v), v == claimed and dom == [claimed], note


@claim("mandatory-recipient-knows", "mandatory-transfer game, a known to Carol")
def _mand_carol():
    g = presets.mandatory_game()
    eqs = enumerate_nash(g, _know(g, {"Bob": "a", "Carol": "a"}), quotient=True)
    got = "; ".join(f"{p} {show(u)}" for p, u in eqs.formatted())
    claimed = vec("3,3,3")
    ok = eqs.payoffs == [claimed]
    note = _per_component(claimed, eqs.payoffs[0]) if len(eqs) == 1 else ""
    return "⟨M,I,C⟩ (3, 3, 3) only", got, ok, note


@claim("mandatory-sender-values", "mandatory-transfer game, sender's share decision")
def _mand_values():
    v = check_mandatory(presets.mandatory_script(), "Bob", "a", "Carol")
    keep, share = v.witness["Bob keep-value"], v.witness["Bob share-value"]
    return "keep 1, share 3", f"keep {keep}, share {share}", (keep, share) == (1, 3), \
        "keep-value uses the subject-preferred choice among incomparable equilibria"


@claim("mandatory-share", "mandatory-transfer game, sender's share decision", "qualitative", core=True)
def _mand_share():
    v = check_mandatory(presets.mandatory_script(), "Bob", "a", "Carol")
    return "Bob shares a with Carol", f"{v.holds}: share {v.witness['Bob share-value']} vs keep {v.witness['Bob keep-value']}", v.holds == "yes", ""


# fiduciary transfer -------------------------------------------------------

def _row(shares, text, claimed):
    g = presets.fiduciary_game()
    got = {v: _value(g, shares, text, v) for v in g.variant_names}
    return got, all(x == claimed for x in got.values())


@claim("fiduciary-row-I", "fiduciary game, nothing shared")
def _fid_1():
    got, ok = _row({}, "<a?T:B,b?N:F,C>", vec("4.5,2.5,2"))
    return "(9/2, 5/2, 2) in both variants", "; ".join(f"{v} {show(x)}" for v, x in got.items()), ok, ""


@claim("fiduciary-row-II", "fiduciary game, a shared with Bob")
def _fid_2():
    claimed = vec("5,3,2")
    printed, ok = _row({"Bob": "a"}, "<a?T:B,a?N:F,c?L:R>", claimed)
    alt, alt_ok = _row({"Bob": "a"}, "<a?T:B,a?N:F,C>", claimed)
    g = presets.fiduciary_game()
    ne = all(_nash(g, {"Bob": "a"}, "<a?T:B,a?N:F,c?L:R>", v) for v in g.variant_names)
    got = "; ".join(f"{v} {show(x)}" for v, x in printed.items())
    note = (f"printed profile is {'' if ne else 'not '}an equilibrium; "
            f"⟨a?T:B,a?N:F,C⟩ gives {show(next(iter(alt.values())))}"
            f"{' and matches' if alt_ok else ''}")
    return "⟨a?T:B,a?N:F,c?L:R⟩ (5, 3, 2)", got, ok, note


@claim("fiduciary-row-III", "fiduciary game, a known to Bob and Carol")
def _fid_3():
    got, ok = _row({"Bob": "a", "Carol": "a"}, "<M,I,C>", vec("2,0,2"))
    return "(2, 0, 2) in both variants", "; ".join(f"{v} {show(x)}" for v, x in got.items()), ok, ""


@claim("fiduciary-row-IV", "fiduciary game, a known to Bob and Carol, c shared with Alice")
def _fid_4():
    g = presets.fiduciary_game()
    shares = {"Bob": "a", "Carol": "a", "Alice": "c"}
    comp = _value(g, shares, "<M,I,C>", "competitive")
    coll = _value(g, shares, "<c?T:B,b?N:F,c?L:R>", "collaborative")
    ok = comp == vec("2,0,2") and coll == vec("12.5,3.5,9")
    return "competitive (2, 0, 2); collaborative (25/2, 7/2, 9)", \
        f"competitive {show(comp)}; collaborative {show(coll)}", ok, ""


@claim("fiduciary-sender-effects", "fiduciary game, sender's share decision")
def _fid_effects():
    sc = presets.fiduciary_script()
    keep = continuation(sc, 2, "keep", {1: "share"}).branch_values
    share = continuation(sc, 2, "share", {1: "share"}).branch_values
    got = "; ".join(f"{v}: Alice {keep[v][0]} -> {share[v][0]}, Bob {keep[v][1]} -> {share[v][1]}"
                    for v in keep)
    ok = (keep["competitive"][:2], share["competitive"][:2]) == ((5, 3), (2, 0)) and \
        (keep["collaborative"][:2], share["collaborative"][:2]) == ((5, 3), (Fraction(25, 2), Fraction(7, 2)))
    return "competitive: Alice 5 -> 2, Bob 3 -> 0; collaborative: Alice 5 -> 25/2, Bob 3 -> 7/2", got, ok, ""


@claim("fiduciary-share-iff-collaborative", "fiduciary game, sender's share decision", "qualitative", core=True)
def _fid_norm():
    v = check_fiduciary(presets.fiduciary_script(), "Bob", "a", "Carol", "Alice")
    acts = {k.split(":")[0]: x for k, x in v.witness.items() if k.endswith("action")}
    return "Bob shares only when it benefits Alice", f"{v.holds}: {acts}", v.holds == "yes", ""


# control ------------------------------------------------------------------

@claim("control-follow-signal", "control game, signal then share", "qualitative", core=True)
def _control():
    v = check_control(presets.control_script(), "Alice", "a", "Bob", "Carol")
    keys = [k for k in v.witness if k.endswith(": s") or k.endswith("action")]
    return "Alice signals 1 iff collaborative; Bob shares iff s=1", \
        f"{v.holds}: " + ", ".join(f"{k}={v.witness[k]}" for k in keys), v.holds == "yes", "; ".join(v.notes)


# notification -------------------------------------------------------------

@claim("notification-unshared", "notification game, nothing shared")
def _notif_none():
    g = presets.notification_game()
    vals = {v: _value(g, {}, "<M,I,C>", v) for v in g.variant_names}
    ne = all(_nash(g, {}, "<M,I,C>", v) for v in g.variant_names)
    others = {v: len(enumerate_nash(g.restrict_variant(v), KnowledgeState.initial(g.restrict_variant(v)),
                                    quotient=True)) for v in g.variant_names}
    ok = ne and all(x == vec("2,0,0") for x in vals.values())
    note = "equilibrium classes per variant: " + ", ".join(f"{v} {n}" for v, n in others.items())
    return "⟨M,I,C⟩ (2, 0, 0)", "; ".join(f"{v} {show(x)}" for v, x in vals.items()), ok, note


@claim("notification-coordination", "notification game, a known to Bob")
def _notif_coord():
    g = presets.notification_game()
    vals = {v: _value(g, {"Bob": "a"}, "<a?T:B,a?N:F,C>", v) for v in g.variant_names}
    ok = all(x == vec("5,4,0") for x in vals.values())
    return "⟨a?T:B,a?N:F,M⟩ (5, 4, 0)", "; ".join(f"{v} {show(x)}" for v, x in vals.items()), ok, \
        "Carol's middle choice is C"


@claim("notification-collaborative", "notification game, collaborative, a known to all")
def _notif_coll():
    g = presets.notification_game()
    shares = {"Bob": "a", "Carol": "a"}
    v = _value(g, shares, "<M,a?N:F,a?R:L>", "collaborative")
    ne = _nash(g, shares, "<M,a?N:F,a?R:L>", "collaborative")
    return "⟨M,a?N:F,a?R:L⟩ (3, 6, 6)", show(v) + ("" if ne else " (not an equilibrium)"), \
        ne and v == vec("3,6,6"), ""


@claim("notification-truthful", "notification game, share then signal", "qualitative", core=True)
def _notif_truth():
    v = check_notification(presets.notification_script(), "Bob", "Alice", "a")
    w = v.witness
    got = (f"{v.holds}: collaborative share&signal1 {w['collaborative: share&signal1']} vs "
           f"share&signal0 {w['collaborative: share&signal0']}; plain keep&signal0 "
           f"{w['plain: keep&signal0']} vs keep&signal1 {w['plain: keep&signal1']}")
    return "Bob signals 1 exactly when he shares", got, v.holds == "yes", "; ".join(v.notes)


# information ownership and taxation ---------------------------------------

@claim("ownership-unshared", "ownership game, nothing shared")
def _own_none():
    v = _value(presets.ownership_game(), {}, "<a?T:B,b?N:F,c?L:R>")
    claimed = vec("6,1,6")
    return "(6, 1, 6)", show(v), v == claimed, _per_component(claimed, v)


@claim("ownership-shared", "ownership game, a shared with Bob")
def _own_bob():
    v = _value(presets.ownership_game(), {"Bob": "a"}, "<a?T:B,a?N:F,c?L:R>")
    claimed = vec("7,2,6")
    return "(7, 2, 6)", show(v), v == claimed, _per_component(claimed, v)


@claim("ownership-sender-forces", "ownership game, sender's share decision")
def _own_force():
    sc = presets.ownership_script()
    keep = continuation(sc, 0, "keep").value
    share = continuation(sc, 0, "share").value
    got = f"Alice {keep[0]} -> {share[0]}; Bob under ⟨M,I,C⟩ {share[1]}"
    return "Alice 6 -> 2 if she shares; ⟨M,I,C⟩ gives Bob 10", got, \
        (keep[0], share[0], share[1]) == (6, 2, 10), ""


@claim("ownership-transfer-gain", "ownership game with a transfer of 5 on (M, I)")
def _own_transfer():
    g = presets.ownership_transfer_script().game
    m = _value(g, {"Bob": "a", "Carol": "a"}, "<M,I,C>")
    o = _value(g, {}, "<a?T:B,b?N:F,c?L:R>")
    got = f"Alice {m[0]} vs {o[0]}; Bob {m[1]} vs {o[1]}"
    return "Alice 7 vs 6; Bob 5 vs 1", got, (m[0], o[0], m[1], o[1]) == (7, 6, 5, 1), ""


@claim("ownership-transfer-totals", "ownership game with a transfer of 5 on (M, I)")
def _own_totals():
    g = presets.ownership_transfer_script().game
    m = sum(_value(g, {"Bob": "a", "Carol": "a"}, "<M,I,C>"))
    o = sum(_value(g, {}, "<a?T:B,b?N:F,c?L:R>"))
    before, after, delta = welfare_delta(presets.ownership_script(), presets.ownership_transfer_script())
    note = f"solved totals {before} -> {after}, deltas {show(delta)}"
    return "⟨M,I,C⟩ total 12 vs 11", f"⟨M,I,C⟩ total {m} vs {o}", (m, o) == (12, 11), note


@claim("ownership-transfer-flip", "ownership game with a transfer of 5 on (M, I)", "qualitative", core=True)
def _own_flip():
    before = check_secrecy(presets.ownership_script(), "Alice", "a", "Bob")
    v = check_ownership(presets.ownership_script(), "Bob", "Alice", presets.OWNERSHIP_TRANSFER)
    w = v.witness
    got = (f"without: {before.holds} secrecy; with: ownership {v.holds}, Alice share {w['Alice share-value']} "
           f">= keep {w['Alice keep-value']}, Bob {w['Bob value without mechanism']} -> {w['Bob value with mechanism']}")
    return "the transfer makes Alice willing to share", got, before.holds == "yes" and v.holds == "yes", ""


@claim("ownership-tax-values", "ownership game with a flat tax of 5 unless M")
def _tax_values():
    g = presets.ownership_tax_script().game
    m = _value(g, {"Bob": "a", "Carol": "a"}, "<M,I,C>")[0]
    o = _value(g, {}, "<a?T:B,b?N:F,c?L:R>")[0]
    return "Alice 2 under ⟨M,I,C⟩, 1 otherwise", f"Alice {m} vs {o}", (m, o) == (2, 1), ""


@claim("ownership-tax-flip", "ownership game with a flat tax of 5 unless M", "qualitative", core=True)
def _tax_flip():
    g = presets.ownership_tax_script().game
    m = _value(g, {"Bob": "a", "Carol": "a"}, "<M,I,C>")
    o = _value(g, {}, "<a?T:B,b?N:F,c?L:R>")
    untaxed = _value(presets.ownership_game(), {}, "<a?T:B,b?N:F,c?L:R>")[0]
    ok = untaxed > m[0] > o[0] and sum(m) > sum(o)
    got = (f"untaxed Alice {untaxed} > {m[0]}; taxed Alice {m[0]} > {o[0]}; "
           f"totals {sum(m)} > {sum(o)}")
    return "the tax makes Alice prefer ⟨M,I,C⟩, which has the higher total", got, ok, ""


# interactive channel ------------------------------------------------------

@claim("interactive-profiles", "interactive-channel game")
def _inter_profiles():
    g = presets.interactive_game()
    a = _value(g, {"Bob": "a", "Carol": "a"}, "<M,I,C>")
    b = _value(g, {}, "<a?T:B,b?N:F,c?L:R>")
    c = _value(g, {"Bob": "a"}, "<a?T:B,a?N:F,c?L:R>")
    ok = (a, b, c) == (vec("6,7,6"), vec("9,5,12"), vec("10,6,12"))
    return "(6, 7, 6), (9, 5, 12), (10, 6, 12)", f"{show(a)}, {show(b)}, {show(c)}", ok, ""


@claim("interactive-refusal", "interactive-channel game with recipient consent")
def _inter_refuse():
    sc = presets.interactive_channel_script()
    tree = continuation(sc, 1, "share")
    refuse = tree.actions(2)[None]
    return "Carol refuses; (10, 6, 12)", f"Carol {refuse}s; {show(tree.value)}", \
        refuse == "refuse" and tree.value == vec("10,6,12"), ""


@claim("interactive-welfare", "interactive-channel game with recipient consent")
def _inter_welfare():
    before, after, _ = welfare_delta(presets.interactive_script(), presets.interactive_channel_script())
    return "26 -> 28", f"{before} -> {after}", (before, after) == (26, 28), ""


@claim("interactive-welfare-rises", "interactive-channel game with recipient consent", "qualitative", core=True)
def _inter_rises():
    before, after, _ = welfare_delta(presets.interactive_script(), presets.interactive_channel_script())
    return "the mechanism raises total payoff", f"{before} -> {after}", after > before, ""


# noisy channel ------------------------------------------------------------

NOISY = "<a?T:B,a?N:F,ã?L:R>"


def _noisy_point(delta):
    sc = presets.noisy_channel_script(delta)
    k = _know(sc.game, {"Bob": "a", "Carol": "ã"})
    prof = parse_profile(sc.game, NOISY)
    return sc.game, k, prof


@claim("noisy-baseline", "noisy-channel game without noise")
def _noisy_base():
    g = presets.noisy_game()
    none = _dominant_values(g, {})
    shared = _dominant_values(g, {"Bob": "a"})
    full = _dominant_values(g, {"Bob": "a", "Carol": "a"})
    got = f"Alice {none[0][0]} -> {shared[0][0]}; Bob {shared[0][1]} -> {full[0][1]}"
    ok = (none[0][0], shared[0][0], shared[0][1], full[0][1]) == (9, 10, 2, 0)
    return "Alice 9 -> 10 by sharing; Bob 2 -> 0 if he shares", got, ok, \
        f"dominant vectors {show(none[0])}, {show(shared[0])}, {show(full[0])}"


@claim("noisy-baseline-total", "noisy-channel game without noise")
def _noisy_total():
    v = _value(presets.noisy_game(), {"Bob": "a"}, "<a?T:B,a?N:F,c?L:R>")
    return "total 18", f"total {sum(v)} {show(v)}", sum(v) == 18, ""


@claim("noisy-affine", "noisy-channel game")
def _noisy_affine():
    rows, ok = [], True
    for d in (Fraction(0), Fraction(1, 8), Fraction(1, 4), Fraction(3, 8), Fraction(1, 2)):
        g, k, prof = _noisy_point(d)
        v = expected_payoff(g, k, prof)
        want = (10 - 16 * d, 2 + 12 * d, 8 + 28 * d)
        ok &= v == want and sum(v) == 20 + 24 * d
        rows.append(f"δ={d}: {show(v)}")
    return "(10-16δ, 2+12δ, 8+28δ), total 20+24δ", "; ".join(rows), ok, ""


@claim("noisy-fallback", "noisy-channel game")
def _noisy_fallback():
    sc = presets.noisy_channel_script(Fraction(1, 4))
    k = _know(sc.game, {"Bob": "a", "Carol": "ã"})
    v = expected_payoff(sc.game, k, parse_profile(sc.game, "<M,a?N:F,ã?L:R>"))[0]
    return "Alice 4 with M", f"Alice {v} with M", v == 4, ""


@claim("noisy-equilibrium", "noisy-channel game", "qualitative", core=True)
def _noisy_ne():
    grid = [Fraction(0), Fraction(1, 16), Fraction(1, 8), Fraction(1, 4), Fraction(5, 16), Fraction(11, 32)]
    bad = []
    for d in grid:
        g, k, prof = _noisy_point(d)
        if not is_nash(g, k, prof):
            bad.append(d)
    got = "equilibrium at all tested δ" if not bad else \
        "not an equilibrium at δ = " + ", ".join(map(str, bad))
    note = "Alice's deviation to a?B:T pays 8+16δ against 10-16δ"
    return "equilibrium for every δ < 3/8", got, not bad, note


# bandwidth limitation -----------------------------------------------------

@claim("bandwidth-full-sharing", "bandwidth game template, all secrets reaching Carol")
def _bw_full():
    g = presets.noisy_game()
    shares = {"Bob": "a", "Carol": "a"}
    v = _value(g, shares, "<M,a?N:F,a?L:R>")
    ne = _nash(g, shares, "<M,a?N:F,a?L:R>")
    return "Bob 6 per round instead of 2; Alice 4", f"Bob {v[1]}, Alice {v[0]}", \
        (v[1], v[0]) == (6, 4), f"profile is {'' if ne else 'not '}an equilibrium"


@claim("bandwidth-informative-band", "bandwidth limitation, α = 1/4", "qualitative")
def _bw_band():
    vals = {k: prob_informative(k, Fraction(1, 4)) for k in (4, 8, 16, 32)}
    got = ", ".join(f"k={k}: {p}" for k, p in vals.items())
    return "f = b with probability about 68%", got, all(p >= Fraction(68, 100) for p in vals.values()), \
        "exact binomial values; they approach 1 as k grows"


@claim("bandwidth-beats-fallback", "bandwidth limitation, k = 8, α = 1/4", "qualitative", core=True)
def _bw_beats():
    m = presets.bandwidth_model(8, Fraction(1, 4))
    pay = m.payoffs(m.instantiate(presets.BANDWIDTH_PROFILE))
    seats = [pay[s] for s in m.seats("subject")]
    m_pay = m.payoffs(m.instantiate({**presets.BANDWIDTH_PROFILE, "subject": "M"}))[m.seats("subject")[0]]
    return "every Alice gets more than her M payoff", f"Alice_i {seats[0]} (all equal: {len(set(seats)) == 1}) vs M {m_pay}", \
        all(x > m_pay for x in seats), ""


@claim("bandwidth-equilibrium", "bandwidth limitation, k = 8, α = 1/4", "qualitative")
def _bw_ne():
    m = presets.bandwidth_model(8, Fraction(1, 4))
    prof = m.instantiate(presets.BANDWIDTH_PROFILE)
    ok = m.is_nash(prof)
    return "an equilibrium for large k and small α", f"menu check: {'equilibrium' if ok else 'not an equilibrium'}", ok, \
        "menu: constants, single-bit conditionals and the profile's own strategies"


@claim("bandwidth-welfare", "bandwidth limitation, k = 8, α = 1/4", "qualitative")
def _bw_welfare():
    m = presets.bandwidth_model(8, Fraction(1, 4))
    agents = m.agent_payoffs(m.instantiate(presets.BANDWIDTH_PROFILE))
    total = sum(agents.values())
    base = sum(solve(presets.noisy_script()).value) * m.policy.k
    return "total payoff above the unmodified game", f"{total} vs {base}", total > base, ""


def reproduce(selection: Iterable[str] | None = None) -> tuple[list[ClaimRecord], Summary]:
    ids = claim_ids() if not selection else list(selection)
    unknown = [c for c in ids if c not in _CLAIMS]
    if unknown:
        raise KeyError(f"unknown claim ids: {', '.join(unknown)}")
    records = []
    for cid in sorted(ids):
        location, kind, core, fn = _CLAIMS[cid]
        claimed, computed, ok, note = fn()
        if ok:
            verdict = PASS if kind == "exact" else PASS_QUALITATIVE
        else:
            verdict = MISMATCH
        records.append(ClaimRecord(cid, location, claimed, computed, kind, verdict, core, note))
    failed = [r.id for r in records if r.core and r.verdict == MISMATCH]
    summary = Summary(len(records), sum(r.verdict != MISMATCH for r in records),
                      sum(r.verdict == MISMATCH for r in records),
                      sum(r.core for r in records), failed)
    return records, summary
