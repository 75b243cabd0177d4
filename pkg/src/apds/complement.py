"""Canonical-conclusion instantiation, complementation and negation as failure.

``tilde`` instantiates every neutral and elimination rule at ``eps`` and at
each stack symbol, so that every conclusion is ``P(eps)`` or ``P(g x)``.
``complement_rules`` then builds, per canonical conclusion, one negated rule
for each way of choosing a single premise from every rule concluding it.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Container

from .core import AUTOMATON, SMALL_STEP, APDSError, Atom, Provenance, Rule, RuleKind, System


def canonical_conclusions(s: System, negative: bool = False) -> list[Atom]:
    """The set C: ``P(eps)`` and ``P(g x)`` for every state and stack symbol."""
    out = []
    for p in s.states:
        out.append(Atom(p, (), False, negative))
        out.extend(Atom(p, (g,), True, negative) for g in s.stack)
    return out


def in_canonical_form(a: Atom) -> bool:
    return (a.closed and not a.prefix) or (a.open and len(a.prefix) == 1)


def tilde(s: System) -> System:
    """Replace neutral and elimination rules by their ``eps`` and ``g x`` instances."""
    rules = []
    for r in s.rules:
        kind = r.kind
        if r.negative or kind not in SMALL_STEP:
            raise APDSError(f"tilde needs a positive small-step system; rule {r.id} is {kind.value}")
        if kind in AUTOMATON:
            rules.append(r)
            continue
        prov = Provenance("tilde", parents=(r.id,))
        for suffix, word, open_ in [("eps", (), False)] + [(g, (g,), True) for g in s.stack]:
            concl, prem = r.instance((word, open_))
            rules.append(Rule(f"{r.id}.{suffix}", tuple(prem), concl, prov))
    return s.with_rules(rules, name=f"{s.name}_tilde")


def _conclusion_key(b: Atom) -> str:
    return f"{b.state}.{b.prefix[0] if b.prefix else 'eps'}"


def complement_rules(t: System) -> list[Rule]:
    """Negated complementation rules of a system whose conclusions all lie in C."""
    groups: dict[Atom, list[Rule]] = {}
    for r in t.rules:
        if r.negative:
            continue
        if not in_canonical_form(r.conclusion):
            raise APDSError(f"rule {r.id}: conclusion {r.conclusion} is outside the canonical set")
        groups.setdefault(r.conclusion, []).append(r)

    out = []
    for b in canonical_conclusions(t):
        # premise set -> first choice vector producing it; folding rule by rule
        # keeps the table at the number of distinct sets, not the product size
        table: dict[frozenset[Atom], tuple[int, ...]] = {frozenset(): ()}
        for r in groups.get(b, ()):
            nxt: dict[frozenset[Atom], tuple[int, ...]] = {}
            for chosen, vec in table.items():
                for j, a in enumerate(r.premises, 1):
                    nxt.setdefault(chosen | {a}, vec + (j,))
            table = nxt
        for chosen, vec in table.items():
            rid = f"{_conclusion_key(b)}~{'.'.join(map(str, vec))}"
            out.append(Rule(rid, tuple(a.negate() for a in chosen), b.negate(),
                            Provenance("complementation", choice=vec)))
    return out


@dataclass(frozen=True)
class NegationSystem:
    """A positive system extended with negated complement rules.

    ``flavor`` is ``"I_neg"`` when built from the tilde system (premises may
    be longer than the conclusion), ``"I'_neg"`` when built from a
    multi-automaton (every negative premise has an empty prefix).
    """

    system: System
    flavor: str

    @cached_property
    def negative_rules(self) -> list[Rule]:
        return [r for r in self.system.rules if r.negative]

    @cached_property
    def positive_rules(self) -> list[Rule]:
        return [r for r in self.system.rules if not r.negative]

    @property
    def negative_system(self) -> System:
        return self.system.with_rules(self.negative_rules)


def build_negation_extension(s: System) -> NegationSystem:
    if not s.small_step:
        raise APDSError("negation extension needs a small-step system")
    negs = complement_rules(tilde(s))
    return NegationSystem(s.with_rules([*s.rules, *negs], name=f"{s.name}_neg"), "I_neg")


def negate_automaton(m: System) -> NegationSystem:
    for r in m.rules:
        if r.negative or r.kind not in AUTOMATON:
            raise APDSError(f"rule {r.id} is not an introduction rule")
    negs = complement_rules(m)
    return NegationSystem(m.with_rules([*m.rules, *negs], name=f"{m.name}_neg"), "I'_neg")


class Complement:
    """Intensional complement of a finite set of configurations.

    An atom belongs to it iff its positive form is not in ``X``, so negated
    premises ``!A`` can be tested against the configurations ``A`` of ``X``.
    """

    def __init__(self, excluded: Container[Atom]):
        self.excluded = excluded

    def __contains__(self, a: Atom) -> bool:
        return a.positive() not in self.excluded


def one_step(s: System, X: Container[Atom], L: int) -> set[Atom]:
    """Configurations of length <= L derivable by one rule instance with premises in X.

    ``X`` only needs ``in``; pass a :class:`Complement` for co-finite sets.
    """
    words = list(s.words(L))
    out = set()
    for r in s.rules:
        c = r.conclusion
        if c.closed:
            if len(c.prefix) <= L and all(p in X for p in r.premises):
                out.add(c)
            continue
        room = L - len(c.prefix)
        for w in words:
            if len(w) > room:
                break
            concl, prem = r.instance((w, False))
            if all(p in X for p in prem):
                out.add(concl)
    return out
