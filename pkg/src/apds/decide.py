"""Membership in multi-automata and the end-to-end decision procedure."""

from __future__ import annotations

import threading
from collections import defaultdict
from dataclasses import dataclass
from functools import cached_property

from .complement import NegationSystem, negate_automaton
from .core import APDSError, Atom, RuleKind, System, check_atom_symbols
from .normalize import ErasureMap, erase_proof, to_small_step
from .proof import ProofTree, replay
from .saturate import extract_multi_automaton, saturate


def _index(m: System, negative: bool):
    intros, eps = defaultdict(list), defaultdict(list)
    for r in m.rules:
        if r.negative != negative:
            continue
        kind = r.kind
        if kind is RuleKind.INTRO:
            intros[r.conclusion.state, r.conclusion.prefix[0]].append(r)
        elif kind is RuleKind.EPS_INTRO:
            eps[r.conclusion.state].append(r)
        else:
            raise APDSError(f"rule {r.id} is {kind.value}; membership needs introduction rules only")
    return intros, eps


def extract_cut_free_proof(m: System, a: Atom) -> ProofTree | None:
    """Bottom-up proof search in a multi-automaton (or a negative automaton fragment).

    Memoized on the suffix position, so linear in the word length.  Among
    applicable rules the one with the smallest id is used.
    """
    if a.open:
        raise APDSError(f"{a} is not a configuration")
    check_atom_symbols(a, m)
    intros, eps = _index(m, a.negative)
    word, n = a.prefix, len(a.prefix)
    memo: dict[tuple[str, int], ProofTree | None] = {}

    def prove(state: str, i: int) -> ProofTree | None:
        key = (state, i)
        if key in memo:
            return memo[key]
        atom = Atom(state, word[i:], False, a.negative)
        found = None
        if i == n:
            if eps[state]:
                found = ProofTree(atom, eps[state][0].id)
        else:
            for r in intros[state, word[i]]:
                kids = []
                for p in r.premises:
                    k = prove(p.state, i + 1)
                    if k is None:
                        break
                    kids.append(k)
                else:
                    found = ProofTree(atom, r.id, tuple(kids))
                    break
        memo[key] = found
        return found

    return prove(a.state, 0)


def member(m: System, a: Atom) -> bool:
    return extract_cut_free_proof(m, a) is not None


@dataclass(frozen=True)
class Pipeline:
    """All systems derived from one input, built once and shared."""

    source: System
    small: System
    erasure: ErasureMap
    saturated: System
    automaton: System

    @cached_property
    def negation(self) -> NegationSystem:
        return negate_automaton(self.automaton)

    @cached_property
    def expansion_map(self):
        from .certify import build_expansion_map

        return build_expansion_map(self.small)


_cache: dict = {}
_lock = threading.Lock()


def pipeline(s: System) -> Pipeline:
    # provenance is not part of rule equality but drives replay, so key on it too
    key = (s, tuple(r.provenance for r in s.rules))
    with _lock:
        hit = _cache.get(key)
        if hit is None:
            small, erasure = to_small_step(s)
            sat = saturate(small)
            hit = Pipeline(s, small, erasure, sat, extract_multi_automaton(sat))
            if len(_cache) > 256:
                _cache.clear()
            _cache[key] = hit
        return hit


@dataclass(frozen=True)
class Verdict:
    provable: bool
    certificate: ProofTree | None = None        # over the input system
    saturated_certificate: ProofTree | None = None  # cut-free, over the saturated system
    refutation: ProofTree | None = None         # proof of the negation over I'_neg


def decide(s: System, a: Atom, want_negative_certificate: bool = False) -> Verdict:
    if a.open or a.negative:
        raise APDSError(f"{a} is not a positive configuration")
    check_atom_symbols(a, s)
    pl = pipeline(s)
    proof = extract_cut_free_proof(pl.automaton, a)
    if proof is not None:
        cert = erase_proof(replay(proof, pl.saturated), pl.erasure)
        return Verdict(True, cert, proof)
    refutation = None
    if want_negative_certificate:
        refutation = extract_cut_free_proof(pl.negation.system, a.negate())
        if refutation is None:
            raise AssertionError(f"neither {a} nor its negation is provable")
    return Verdict(False, refutation=refutation)
