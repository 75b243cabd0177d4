"""Saturation of small-step systems and extraction of the multi-automaton."""

from __future__ import annotations

from collections import defaultdict, deque
from itertools import product

from .core import (
    AUTOMATON, SMALL_STEP, APDSError, Atom, Provenance, Rule, RuleKind, System, head_premise,
)
from .proof import Hypothesis, Node, ProofTree, graft, substitute_tree


def saturate(s: System) -> System:
    """Close ``s`` under the intro/elim, neutral/intro and neutral/eps-intro cases.

    Generated rules are named ``sat1, sat2, ...`` in worklist order and carry
    saturation provenance.  Rules equal to an existing one up to naming are
    dropped.
    """
    for r in s.rules:
        if r.negative:
            raise APDSError(f"cannot saturate negative rule {r.id}")
        if r.kind not in SMALL_STEP:
            raise APDSError(f"rule {r.id} is not small-step; normalize first")

    rules = list(s.rules)
    keys = {r.key for r in rules}
    ids = {r.id for r in rules}
    counter = 0

    intros = defaultdict(list)        # (state, symbol) -> intro rules
    eps = defaultdict(list)           # state -> eps-intro rules
    elims = defaultdict(list)         # (state, symbol) of head premise -> elim rules
    neutrals = defaultdict(list)      # premise state -> neutral rules
    queue = deque(rules)

    def add(conclusion: Atom, premises, case: int, parents):
        nonlocal counter
        r = Rule("", tuple(premises), conclusion)
        if r.key in keys:
            return
        while True:
            counter += 1
            rid = f"sat{counter}"
            if rid not in ids:
                break
        r = Rule(rid, r.premises, conclusion, Provenance("saturation", case, tuple(parents)))
        keys.add(r.key)
        ids.add(rid)
        rules.append(r)
        queue.append(r)

    def elim_intro(intro: Rule, elim: Rule):
        head = head_premise(elim)
        rest = [p for p in elim.premises if p != head]
        add(elim.conclusion, [*intro.premises, *rest], 1, (elim.id, intro.id))

    def neutral_intro(n: Rule, gamma: str, fixed: Rule | None = None):
        slots = [[fixed] if fixed and p.state == fixed.conclusion.state else intros[p.state, gamma]
                 for p in n.premises]
        for combo in product(*slots):
            premises = [a for i in combo for a in i.premises]
            add(Atom(n.conclusion.state, (gamma,)), premises, 2, (n.id, *(i.id for i in combo)))

    def neutral_eps(n: Rule):
        if all(eps[p.state] for p in n.premises):
            add(Atom(n.conclusion.state, (), False), (), 3,
                (n.id, *(eps[p.state][0].id for p in n.premises)))

    while queue:
        r = queue.popleft()
        kind = r.kind
        if kind is RuleKind.INTRO:
            q, gamma = r.conclusion.state, r.conclusion.prefix[0]
            intros[q, gamma].append(r)
            for e in elims[q, gamma]:
                elim_intro(r, e)
            for n in neutrals[q]:
                neutral_intro(n, gamma, fixed=r)
        elif kind is RuleKind.EPS_INTRO:
            eps[r.conclusion.state].append(r)
            for n in neutrals[r.conclusion.state]:
                neutral_eps(n)
        elif kind is RuleKind.ELIM:
            h = head_premise(r)
            elims[h.state, h.prefix[0]].append(r)
            for i in intros[h.state, h.prefix[0]]:
                elim_intro(i, r)
        else:
            for p in r.premises:
                neutrals[p.state].append(r)
            for gamma in s.stack:
                neutral_intro(r, gamma)
            neutral_eps(r)

    return s.with_rules(rules)


def provenance_lines(s: System) -> list[str]:
    return [f"{r.id} <= {r.provenance}" for r in s.rules if r.provenance.origin == "saturation"]


def expand_saturated_rule(rid: str, s: System) -> Node:
    """Derivation skeleton of ``rid`` using only pre-saturation rules.

    Hypothesis leaves are the rule's premises and the root is its conclusion.
    Rules that were not produced by saturation expand to a single node.
    """
    memo: dict[str, Node] = {}

    def expand(rid: str) -> Node:
        if rid in memo:
            return memo[rid]
        r = s.rule(rid)
        prov = r.provenance
        if prov.origin != "saturation":
            sk = ProofTree(r.conclusion, r.id, tuple(Hypothesis(p) for p in r.premises))
        elif prov.case == 1:
            elim, intro = s.rule(prov.parents[0]), prov.parents[1]
            sk = graft(expand(elim.id), {head_premise(elim): expand(intro)})
        else:
            n = s.rule(prov.parents[0])
            if prov.case == 2:
                sub = (r.conclusion.prefix, True)
            else:
                sub = ((), False)
            base = substitute_tree(expand(n.id), *sub)
            parts = {p.substitute(*sub): expand(i) for p, i in zip(n.premises, prov.parents[1:])}
            sk = graft(base, parts)
        memo[rid] = sk
        return sk

    return expand(rid)


def extract_multi_automaton(s: System) -> System:
    """Keep exactly the intro and eps-intro rules."""
    return s.with_rules([r for r in s.rules if r.kind in AUTOMATON])
