"""Proof trees, checking, cut detection and cut elimination.

Trees are immutable.  A :class:`ProofTree` node applies a rule; open labels
(``P(a x)``) make it a derivation skeleton, whose open leaves are
:class:`Hypothesis` nodes.  :class:`Continuation` leaves mark the frontier of
a finitely unfolded co-inductive proof.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterator, NamedTuple, Union

from .core import APDSError, Atom, RuleKind, System, format_atom, head_premise, match, parse_atom


@dataclass(frozen=True)
class ProofTree:
    atom: Atom
    rule: str
    children: tuple[Node, ...] = ()

    def __str__(self) -> str:
        return "\n".join(render(self))


@dataclass(frozen=True)
class Hypothesis:
    atom: Atom


@dataclass(frozen=True)
class Continuation:
    atom: Atom
    witness: ProofTree | None = field(default=None, compare=False, repr=False)


Node = Union[ProofTree, Hypothesis, Continuation]
Position = tuple[int, ...]


def render(t: Node, indent: int = 0) -> list[str]:
    pad = "  " * indent
    if isinstance(t, Hypothesis):
        return [f"{pad}{format_atom(t.atom)}  [hyp]"]
    if isinstance(t, Continuation):
        return [f"{pad}{format_atom(t.atom)}  [...]"]
    lines = [f"{pad}{format_atom(t.atom)}  by {t.rule}"]
    for c in t.children:
        lines.extend(render(c, indent + 1))
    return lines


def walk(t: Node, pos: Position = ()) -> Iterator[tuple[Position, Node]]:
    """Pre-order traversal yielding ``(position, node)``."""
    yield pos, t
    if isinstance(t, ProofTree):
        for i, c in enumerate(t.children):
            yield from walk(c, pos + (i,))


def subtree(t: Node, pos: Position) -> Node:
    for i in pos:
        t = t.children[i]
    return t


def replace_at(t: Node, pos: Position, new: Node) -> Node:
    if not pos:
        return new
    i, rest = pos[0], pos[1:]
    kids = list(t.children)
    kids[i] = replace_at(kids[i], rest, new)
    return ProofTree(t.atom, t.rule, tuple(kids))


def substitute_tree(t: Node, word=(), open: bool = True) -> Node:
    """Apply ``x := word·x`` (or ``x := word`` when ``open`` is false) to every label."""
    a = t.atom.substitute(word, open)
    if isinstance(t, Hypothesis):
        return Hypothesis(a)
    if isinstance(t, Continuation):
        return Continuation(a, t.witness)
    return ProofTree(a, t.rule, tuple(substitute_tree(c, word, open) for c in t.children))


def graft(t: Node, subproofs: dict[Atom, Node]) -> Node:
    """Replace hypothesis leaves by the subproof carrying the same label."""
    if isinstance(t, Hypothesis):
        return subproofs.get(t.atom, t)
    if isinstance(t, Continuation):
        return t
    return ProofTree(t.atom, t.rule, tuple(graft(c, subproofs) for c in t.children))


def hypotheses(t: Node) -> list[Atom]:
    return [n.atom for _, n in walk(t) if isinstance(n, Hypothesis)]


def continuations(t: Node) -> list[Continuation]:
    return [n for _, n in walk(t) if isinstance(n, Continuation)]


def size(t: Node) -> int:
    return sum(1 for _ in walk(t))


def height(t: Node) -> int:
    if not isinstance(t, ProofTree) or not t.children:
        return 1
    return 1 + max(height(c) for c in t.children)


def rules_used(t: Node) -> set[str]:
    return {n.rule for _, n in walk(t) if isinstance(n, ProofTree)}


# ------------------------------------------------------------------- checking


def check_proof(s: System, p: Node, admit_hypotheses: bool = False,
                admit_markers: bool = False) -> list[str]:
    """Validate ``p`` against ``s``; returns the list of errors (empty = ok)."""
    errors = []
    for pos, node in walk(p):
        where = "/" + "/".join(map(str, pos))
        if isinstance(node, Hypothesis):
            if not admit_hypotheses:
                errors.append(f"{where}: hypothesis leaf {format_atom(node.atom)} not admitted")
            continue
        if isinstance(node, Continuation):
            if not admit_markers:
                errors.append(f"{where}: continuation marker {format_atom(node.atom)} not admitted")
            continue
        if node.rule not in s:
            errors.append(f"{where}: unknown rule id {node.rule}")
            continue
        r = s.rule(node.rule)
        sub = match(r.conclusion, node.atom)
        if sub is None:
            errors.append(f"{where}: label {format_atom(node.atom)} is not an instance of "
                          f"the conclusion of {r.id}")
            continue
        _, expected = r.instance(sub)
        got = sorted(c.atom for c in node.children)
        if got != sorted(expected):
            errors.append(f"{where}: children {[format_atom(a) for a in got]} do not match the "
                          f"premises {[format_atom(a) for a in sorted(expected)]} of {r.id}")
    return errors


def is_valid(s: System, p: Node, **kw) -> bool:
    return not check_proof(s, p, **kw)


# -------------------------------------------------------------- cut elimination


class Measure(NamedTuple):
    elims: int
    neutrals: int


def measure(p: Node, s: System) -> Measure:
    """Count Elim- and Neutral-kind rule nodes; compared lexicographically."""
    e = n = 0
    for _, node in walk(p):
        if isinstance(node, ProofTree):
            kind = s.rule(node.rule).kind
            e += kind is RuleKind.ELIM
            n += kind is RuleKind.NEUTRAL
    return Measure(e, n)


def _kind(s: System, node: Node) -> RuleKind | None:
    if isinstance(node, ProofTree) and node.rule in s:
        return s.rule(node.rule).kind
    return None


def _child_for(node: ProofTree, label: Atom) -> Node:
    for c in node.children:
        if c.atom == label:
            return c
    raise APDSError(f"no child labelled {format_atom(label)} under {node.rule}")


def cut_shape(node: Node, s: System) -> int | None:
    """1, 2 or 3 if ``node`` is the bottom of a cut, else None."""
    kind = _kind(s, node)
    if kind is RuleKind.ELIM:
        r = s.rule(node.rule)
        sub = match(r.conclusion, node.atom)
        head = head_premise(r).substitute(*sub)
        if _kind(s, _child_for(node, head)) is RuleKind.INTRO:
            return 1
    elif kind is RuleKind.NEUTRAL:
        if node.atom.prefix:
            if all(_kind(s, c) is RuleKind.INTRO for c in node.children):
                return 2
        elif node.atom.closed:
            if all(_kind(s, c) is RuleKind.EPS_INTRO for c in node.children):
                return 3
    return None


def find_cut(p: Node, s: System) -> Position | None:
    """Position of the leftmost-innermost cut, or None if ``p`` is cut-free."""

    def visit(t: Node, pos: Position):
        if not isinstance(t, ProofTree):
            return None
        for i, c in enumerate(t.children):
            hit = visit(c, pos + (i,))
            if hit is not None:
                return hit
        return pos if cut_shape(t, s) else None

    return visit(p, ())


def _lookup(s: System, conclusion: Atom, premises) -> str:
    r = s.by_key.get((conclusion, tuple(sorted(set(premises)))))
    if r is None:
        shown = ", ".join(format_atom(a) for a in sorted(set(premises)))
        raise APDSError(f"no rule {shown} => {format_atom(conclusion)}; system is not saturated")
    return r.id


def _rebuild(s: System, rid: str, label: Atom, pool: list[Node]) -> ProofTree:
    r = s.rule(rid)
    _, prem = r.instance(match(r.conclusion, label))
    by_label = {}
    for c in pool:
        by_label.setdefault(c.atom, c)
    return ProofTree(label, rid, tuple(by_label[a] for a in prem))


def reduce_cut(p: Node, pos: Position, s: System) -> Node:
    """Rewrite the cut at ``pos`` with the matching saturated rule."""
    node = subtree(p, pos)
    shape = cut_shape(node, s)
    if shape is None:
        raise APDSError(f"no cut at position {pos}")
    r = s.rule(node.rule)
    R = node.atom
    if shape == 1:
        head = head_premise(r)
        intro_node = _child_for(node, head.substitute(*match(r.conclusion, R)))
        intro = s.rule(intro_node.rule)
        rest = [c for c in node.children if c is not intro_node]
        concl = Atom(r.conclusion.state, (), True, r.negative)
        premises = set(intro.premises) | (set(r.premises) - {head})
        new = _rebuild(s, _lookup(s, concl, premises), R, list(intro_node.children) + rest)
    elif shape == 2:
        concl = Atom(r.conclusion.state, R.prefix[:1], True, r.negative)
        premises, pool = set(), []
        for c in node.children:
            premises |= set(s.rule(c.rule).premises)
            pool.extend(c.children)
        new = _rebuild(s, _lookup(s, concl, premises), R, pool)
    else:
        concl = Atom(r.conclusion.state, (), False, r.negative)
        new = ProofTree(R, _lookup(s, concl, ()))
    return replace_at(p, pos, new)


@dataclass(frozen=True)
class Step:
    position: Position
    shape: int
    rule: str
    before: Measure
    after: Measure


def eliminate_cuts(p: Node, s: System) -> tuple[Node, list[Step]]:
    trace: list[Step] = []
    m = measure(p, s)
    while (pos := find_cut(p, s)) is not None:
        shape = cut_shape(subtree(p, pos), s)
        p = reduce_cut(p, pos, s)
        m2 = measure(p, s)
        if not m2 < m:
            raise AssertionError(f"measure did not decrease: {m} -> {m2}")
        trace.append(Step(pos, shape, subtree(p, pos).rule, m, m2))
        m = m2
    return p, trace


def replay(p: Node, s: System) -> Node:
    """Expand saturation-generated rule nodes into pre-saturation derivations."""
    from .saturate import expand_saturated_rule

    cache: dict[str, Node] = {}

    def go(t: Node) -> Node:
        if not isinstance(t, ProofTree):
            return t
        kids = tuple(go(c) for c in t.children)
        r = s.rule(t.rule)
        if r.provenance.origin != "saturation":
            return ProofTree(t.atom, t.rule, kids)
        if r.id not in cache:
            cache[r.id] = expand_saturated_rule(r.id, s)
        sk = substitute_tree(cache[r.id], *match(r.conclusion, t.atom))
        return graft(sk, {c.atom: c for c in kids})

    return go(p)


# ----------------------------------------------------------------------- JSON


def to_json(t: Node) -> dict:
    if isinstance(t, Hypothesis):
        return {"hyp": format_atom(t.atom)}
    if isinstance(t, Continuation):
        return {"continue": format_atom(t.atom)}
    return {"atom": format_atom(t.atom), "rule": t.rule,
            "children": [to_json(c) for c in t.children]}


def from_json(d: dict) -> Node:
    if "hyp" in d:
        return Hypothesis(parse_atom(d["hyp"]))
    if "continue" in d:
        return Continuation(parse_atom(d["continue"]))
    try:
        return ProofTree(parse_atom(d["atom"]), d["rule"],
                         tuple(from_json(c) for c in d.get("children", ())))
    except (KeyError, TypeError) as e:
        raise APDSError(f"malformed proof node: {d!r}") from e


def dumps(t: Node) -> str:
    return json.dumps(to_json(t), indent=2) + "\n"


def loads(text: str) -> Node:
    try:
        return from_json(json.loads(text))
    except json.JSONDecodeError as e:
        raise APDSError(f"invalid proof JSON: {e}") from None
