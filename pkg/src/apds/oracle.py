"""Brute-force provers used to cross-check the decision procedure.

Both are exponential and deliberately naive: ``search`` is bounded top-down
proof search, ``kleene`` iterates the one-step operator to a fixpoint.
"""

from __future__ import annotations

from .complement import one_step
from .core import Atom, System
from .proof import ProofTree, height


def search(s: System, a: Atom, depth: int, word_bound: int) -> ProofTree | None:
    """Proof of ``a`` of height <= depth whose labels have words <= word_bound.

    Sound but incomplete: ``None`` only means nothing was found within bounds.
    """
    if len(a.prefix) > word_bound:
        return None
    found: dict[Atom, tuple[int, ProofTree]] = {}
    failed: dict[Atom, int] = {}

    def go(atom: Atom, d: int) -> ProofTree | None:
        if d <= 0:
            return None
        if atom in found and found[atom][0] <= d:
            return found[atom][1]
        if failed.get(atom, 0) >= d:
            return None
        for r, sub in s.matching(atom):
            _, prem = r.instance(sub)
            if any(len(p.prefix) > word_bound for p in prem):
                continue
            kids = []
            for p in prem:
                k = go(p, d - 1)
                if k is None:
                    break
                kids.append(k)
            else:
                t = ProofTree(atom, r.id, tuple(kids))
                found[atom] = (height(t), t)
                return t
        failed[atom] = max(failed.get(atom, 0), d)
        return None

    # iterative deepening keeps proofs shallow
    for d in range(1, depth + 1):
        t = go(a, d)
        if t is not None:
            return t
    return None


def kleene(s: System, word_bound: int) -> set[Atom]:
    """Least fixpoint of the one-step operator restricted to words <= word_bound."""
    X: set[Atom] = set()
    while True:
        nxt = one_step(s, X, word_bound)
        if nxt <= X:
            return X
        X |= nxt
