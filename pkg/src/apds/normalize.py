"""Conservative small-step normalization and erasure of proofs back to the input."""

from __future__ import annotations

from dataclasses import dataclass, field

from .core import SMALL_STEP, APDSError, Atom, Provenance, Rule, RuleKind, System, Word, format_atom
from .proof import Continuation, Hypothesis, Node, ProofTree


@dataclass(frozen=True)
class ErasureMap:
    """Fresh state ``P#a.b`` -> ``(P, ('a', 'b'))``; identity elsewhere."""

    fresh: dict[str, tuple[str, Word]] = field(default_factory=dict)
    # residual neutral rule id -> original general rule id
    residues: dict[str, str] = field(default_factory=dict)
    # ids of the added intro/elim chain rules
    chains: frozenset[str] = frozenset()

    @property
    def identity(self) -> bool:
        return not self.fresh

    def erase(self, a: Atom) -> Atom:
        if a.state not in self.fresh:
            return a
        p, prefix = self.fresh[a.state]
        return Atom(p, prefix + a.prefix, a.open, a.negative)

    def lines(self) -> list[str]:
        return [f"{q} = {format_atom(Atom(p, w, False))}" for q, (p, w) in self.fresh.items()]


def to_small_step(s: System) -> tuple[System, ErasureMap]:
    """Split every general rule into a small-step residue plus shared push/pop chains.

    Premises with a non-empty prefix are replaced by fresh states reached via
    elimination chains; a conclusion prefix longer than one symbol is replaced
    by a fresh state rebuilt via introduction chains.  Each split atom gets
    both chains, and fresh states are shared across rules by (state, prefix).
    """
    general = [r for r in s.rules if r.kind is RuleKind.GENERAL]
    if not general:
        return s, ErasureMap()
    for r in general:
        if any(not a.open for a in (*r.premises, r.conclusion)):
            raise APDSError(f"rule {r.id}: closed atoms cannot be normalized")

    taken = set(s.states) | set(s.stack)
    ids = {r.id for r in s.rules}
    names: dict[tuple[str, Word], str] = {}
    fresh: dict[str, tuple[str, Word]] = {}
    new_states = list(s.states)
    added: list[Rule] = []
    chains: set[str] = set()
    residues: dict[str, str] = {}

    def unique_id(base: str) -> str:
        rid = base
        while rid in ids:
            rid += "_"
        ids.add(rid)
        return rid

    def state_for(p: str, w: Word) -> str:
        if not w:
            return p
        if (p, w) in names:
            return names[p, w]
        parent = state_for(p, w[:-1])
        name = f"{p}#{'.'.join(w)}"
        while name in taken:
            name += "_"
        taken.add(name)
        names[p, w] = name
        fresh[name] = (p, w)
        new_states.append(name)
        g = w[-1]
        prov = Provenance("normalization", parents=(name,))
        for rid, prem, concl in (
            (f"intro:{name}", Atom(name), Atom(parent, (g,))),
            (f"elim:{name}", Atom(parent, (g,)), Atom(name)),
        ):
            rid = unique_id(rid)
            chains.add(rid)
            added.append(Rule(rid, (prem,), concl, prov))
        return name

    def split(a: Atom) -> Atom:
        return Atom(state_for(a.state, a.prefix), (), True, a.negative)

    kept = [r for r in s.rules if r.kind in SMALL_STEP]
    for r in general:
        c = r.conclusion
        concl = c if len(c.prefix) <= 1 else split(c)
        rid = unique_id(f"n:{r.id}")
        residues[rid] = r.id
        added.append(Rule(rid, tuple(split(p) for p in r.premises), concl,
                          Provenance("normalization", parents=(r.id,))))

    out = System(s.name, tuple(new_states), s.stack, tuple(kept + added))
    return out, ErasureMap(fresh, residues, frozenset(chains))


def erase_proof(p: Node, m: ErasureMap) -> Node:
    """Map a proof over the normalized system back to the original system."""
    if p.atom.state in m.fresh:
        raise APDSError(f"root {format_atom(p.atom)} mentions a fresh state")
    if m.identity:
        return p

    def go(t: Node) -> Node:
        if isinstance(t, Hypothesis):
            return Hypothesis(m.erase(t.atom))
        if isinstance(t, Continuation):
            return Continuation(m.erase(t.atom), t.witness)
        if t.rule in m.chains:
            # push/pop steps erase to identities: P#a(b w) and P#a.b(w) both mean P(a b w)
            (child,) = t.children
            return go(child)
        return ProofTree(m.erase(t.atom), m.residues.get(t.rule, t.rule),
                         tuple(go(c) for c in t.children))

    return go(p)
