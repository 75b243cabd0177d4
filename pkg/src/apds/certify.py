"""Co-inductive counterexamples rebuilt from finite refutations.

A finite proof of ``!A`` in the negated multi-automaton is turned, one rule
at a time, into a proof of ``!A`` with the negated complement of the original
system.  That proof is usually infinite, so it is represented by an
:class:`ExpansionMap` and displayed through depth-bounded :func:`unfold`.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Hashable, Iterable, Sequence

from .complement import NegationSystem, build_negation_extension
from .core import APDSError, Atom, RuleKind, System, match
from .proof import Continuation, Hypothesis, Node, ProofTree, graft, substitute_tree


def hitting_index(families: Sequence[Sequence[Iterable[Hashable]]], S: Iterable[Hashable]) -> int:
    """Least 1-based ``l`` such that every set of family ``l`` meets ``S``.

    Requires every union that picks one set per family to meet ``S``;
    raises ``ValueError`` otherwise.
    """
    if not families:
        raise ValueError("need at least one family")
    S = set(S)
    fams = [[set(h) for h in fam] for fam in families]
    for pick in product(*fams):
        if not set().union(*pick) & S:
            raise ValueError(f"hypothesis violated: the union {pick} misses S")
    for l, fam in enumerate(fams, 1):
        if all(h & S for h in fam):
            return l
    raise AssertionError("no hitting family although every union meets S")


def _negative_index(system: System):
    intros: dict[tuple[str, str], list] = {}
    eps: dict[str, list] = {}
    for r in system.rules:
        if not r.negative:
            continue
        if r.kind is RuleKind.INTRO:
            intros.setdefault((r.conclusion.state, r.conclusion.prefix[0]), []).append(r)
        elif r.kind is RuleKind.EPS_INTRO:
            eps.setdefault(r.conclusion.state, []).append(r)
        else:
            raise APDSError(f"rule {r.id} does not shorten the word")
    return intros, eps


def schematic_provable(neg: NegationSystem | System, goal: Atom,
                       hyps: Iterable[Atom] = ()) -> Node | None:
    """Backward search for a skeleton of ``goal`` from ``hyps`` in a negated automaton.

    Every rule strips one symbol of the goal's prefix, so the search is
    bounded by the prefix length.
    """
    if not goal.negative:
        raise APDSError(f"goal {goal} must be negative")
    system = neg.system if isinstance(neg, NegationSystem) else neg
    intros, eps = _negative_index(system)
    hyps = set(hyps)
    word = goal.prefix
    memo: dict[tuple[str, int], Node | None] = {}

    def go(state: str, i: int) -> Node | None:
        if (state, i) in memo:
            return memo[state, i]
        atom = Atom(state, word[i:], goal.open, True)
        found = None
        if atom in hyps:
            found = Hypothesis(atom)
        elif i == len(word):
            if goal.closed and eps.get(state):
                found = ProofTree(atom, eps[state][0].id)
        else:
            for r in intros.get((state, word[i]), ()):
                kids = [go(p.state, i + 1) for p in r.premises]
                if all(k is not None for k in kids):
                    found = ProofTree(atom, r.id, tuple(kids))
                    break
        memo[state, i] = found
        return found

    return go(goal.state, 0)


@dataclass(frozen=True)
class Expansion:
    """How one rule of the negated automaton is simulated with the negated complement."""

    source: str                     # rule of I'_neg
    rule: str                       # chosen rule of I_neg, same conclusion
    skeletons: tuple[Node, ...]     # one per premise of ``rule``, in premise order


@dataclass(frozen=True)
class ExpansionMap:
    entries: dict[str, Expansion]
    automaton_negation: NegationSystem   # I'_neg
    negation: NegationSystem             # I_neg

    def __getitem__(self, rid: str) -> Expansion:
        return self.entries[rid]

    def __len__(self) -> int:
        return len(self.entries)

    def lines(self) -> list[str]:
        out = []
        for e in self.entries.values():
            out.append(f"{e.source} -> {e.rule}")
        return out


def build_expansion_map(s: System) -> ExpansionMap:
    from .decide import pipeline

    pl = pipeline(s)
    iprime = pl.negation
    ineg = build_negation_extension(pl.small)
    by_conclusion: dict[Atom, list] = {}
    for r in ineg.negative_rules:
        by_conclusion.setdefault(r.conclusion, []).append(r)

    entries = {}
    for rho in iprime.negative_rules:
        hyps = set(rho.premises) if rho.conclusion.open else set()
        for r in by_conclusion.get(rho.conclusion, ()):
            sks = [schematic_provable(iprime, c, hyps) for c in r.premises]
            if all(sk is not None for sk in sks):
                entries[rho.id] = Expansion(rho.id, r.id, tuple(sks))
                break
        else:
            raise APDSError(f"no expansion for {rho}; the saturation or complement is wrong")
    return ExpansionMap(entries, iprime, ineg)


def unfold(a: Atom, s: System, k: int) -> ProofTree | Continuation:
    """Depth-bounded prefix of the co-inductive proof of ``!a``.

    ``k`` counts tree levels including the frontier: nodes on level ``k``
    (the root is level 1) become :class:`Continuation` markers carrying their
    finite refutation.  ``k = 0`` behaves like ``k = 1``.
    """
    from .decide import decide, pipeline

    if k < 0:
        raise ValueError("depth must be non-negative")
    verdict = decide(s, a, want_negative_certificate=True)
    if verdict.provable:
        raise APDSError(f"{a} is provable; there is no counterexample")
    emap = pipeline(s).expansion_map
    ineg = emap.negation.system
    cutoff = max(k - 1, 0)

    def build(atom: Atom, witness: ProofTree, depth: int):
        if depth >= cutoff:
            return Continuation(atom, witness)
        e = emap[witness.rule]
        r = ineg.rule(e.rule)
        sub = match(r.conclusion, atom)
        # hypotheses of the skeletons are the premises of witness.rule,
        # instantiated here to the labels of the witness's children
        proved = {c.atom: c for c in witness.children}
        kids = []
        for prem, sk in zip(r.premises, e.skeletons):
            child = graft(substitute_tree(sk, *sub), proved)
            kids.append(build(prem.substitute(*sub), child, depth + 1))
        return ProofTree(atom, r.id, tuple(kids))

    return build(a.negate(), verdict.refutation, 0)
