"""Acceptance criteria 1-11, one test each; every test prints a PASS/FAIL line."""

import random
import time

import pytest

from apds import check_proof, decide, eliminate_cuts, find_cut, measure, reduce_cut, saturate
from apds.certify import build_expansion_map, hitting_index, unfold
from apds.complement import (
    Complement, complement_rules, negate_automaton, one_step, tilde,
)
from apds.decide import member, pipeline
from apds.oracle import search
from apds.proof import Continuation, continuations
from helpers import A, cli_cases, example_proof, keys, node, population, rule
from test_certify import brute_hypothesis, random_instance
from test_cli import cli_bytes
from test_complement import R_BAR, R_TILDE, rules_of
from test_decide import LINEAR_RUN
from test_proof import pos_of
from test_saturate import ADDED, by_key


@pytest.fixture(scope="module")
def pop():
    return population(200)


@pytest.fixture
def report(capsys):
    def emit(n: int, ok: bool, detail: str = ""):
        with capsys.disabled():
            print(f"\ncriterion {n}: {'PASS' if ok else 'FAIL'}  {detail}".rstrip())
        assert ok, f"criterion {n} failed: {detail}"
    return emit


def test_c01_example1(e1, report):
    v = decide(e1, A("S(a b)"))
    ok = v.provable and v.certificate.atom == A("S(a b)") and check_proof(e1, v.certificate) == []
    missing = [c for c in LINEAR_RUN if not decide(e1, A(c)).provable]
    report(1, ok and not missing, f"S(a b) provable, certificate checks; linear run unprovable: {missing}")


def test_c02_example2(e1, report):
    sat = saturate(e1)
    expected = keys(rule(v) for v in ADDED.values())
    contained = expected <= keys(sat.rules)
    fix = saturate(sat).rules == sat.rules
    report(2, contained and fix, f"added {len(sat.rules) - len(e1.rules)} rules, "
                                 f"contains n3,i5-i11: {contained}, fixpoint: {fix}")


def test_c03_cut_elimination(e1s, report):
    p = example_proof()
    out, trace = eliminate_cuts(p, e1s)
    ok = (measure(p, e1s) == (1, 4) and trace[0].before == (1, 4)
          and all(s.after < s.before for s in trace)
          and find_cut(out, e1s) is None and out.atom == A("S(a b)")
          and check_proof(e1s, out) == [])
    # informative: the displayed order
    q = p
    for label in ["T(eps)", "T(b)", None, "Q(b)", "Q(a b)", None]:
        q = reduce_cut(q, () if label is None else pos_of(q, label), e1s)
    i5, i8, i9, i10 = (by_key(e1s, k).id for k in ("i5", "i8", "i9", "i10"))
    displayed = q == node("S(a b)", i8, node("Q(b)", i10, node("T(eps)", i5)), node("T(b)", i9))
    report(3, ok, f"{len(trace)} leftmost-innermost steps from (1,4), cut-free root S(a b); "
                  f"displayed 6-step order reaches i8/i10/i5/i9: {displayed}")


def test_c04_complement_example(rsys, report):
    t = tilde(rsys)
    ok_t = keys(t.rules) == rules_of(R_TILDE)
    negs = complement_rules(t)
    ok_c = len(negs) == 9 and keys(negs) == rules_of(R_BAR)
    ok_d = not decide(rsys, A("P(a)")).provable
    report(4, ok_t and ok_c and ok_d, f"tilde 7 rules: {ok_t}, complement 9 rules: {ok_c}, P(a) unprovable: {ok_d}")


def test_c05_negation_example(rsys, report):
    neg = negate_automaton(pipeline(rsys).automaton)
    ok_n = keys(neg.negative_rules) == rules_of(
        ["=> !P(eps)", "=> !P(a x)", "=> !Q(eps)", "=> !Q(a x)", "=> !R(eps)", "=> !S(eps)", "=> !S(a x)"])
    ref = decide(rsys, A("P(a)"), want_negative_certificate=True).refutation
    ok_r = ref is not None and ref.children == () and check_proof(neg.system, ref) == []
    u = unfold(A("P(a)"), rsys, 3)
    shape = (u.atom, [c.atom for c in u.children], u.children[0].children,
             u.children[1].children)
    ok_u = shape == (A("!P(a)"), [A("!Q(a)"), A("!S(a)")], (Continuation(A("!P(a a)")),), ())
    report(5, ok_n and ok_r and ok_u, f"7 axioms: {ok_n}, one-node refutation: {ok_r}, unfold prefix: {ok_u}")


def test_c06_oracle_equivalence(pop, report):
    bad, checked, found = [], 0, 0
    t0 = time.perf_counter()
    for i, s in enumerate(pop):
        negsys = pipeline(s).negation.system
        for a in s.configurations(3):
            checked += 1
            v = decide(s, a, want_negative_certificate=True)
            p = search(s, a, 8, 5)
            found += p is not None
            if p is not None and not v.provable:
                bad.append((i, str(a), "oracle proof but decided unprovable"))
            if v.provable and (v.certificate.atom != a or check_proof(s, v.certificate)):
                bad.append((i, str(a), "certificate fails"))
            if not v.provable and not (member(negsys, a.negate()) and v.refutation.atom == a.negate()
                                       and check_proof(negsys, v.refutation) == []):
                bad.append((i, str(a), "refutation fails"))
    report(6, not bad, f"{len(pop)} systems, {checked} configurations, {found} oracle proofs, "
                       f"{len(bad)} violations {bad[:3]} ({time.perf_counter() - t0:.1f}s)")


def test_c07_exclusivity(pop, report):
    bad, checked = [], 0
    for i, s in enumerate(pop):
        pl = pipeline(s)
        for a in s.configurations(4):
            checked += 1
            if member(pl.automaton, a) == member(pl.negation.system, a.negate()):
                bad.append((i, str(a)))
    report(7, not bad, f"{checked} configurations, {len(bad)} violations {bad[:3]}")


def test_c08_complement2(pop, report):
    rng = random.Random(8)
    L, bad, sets = 3, [], 0
    for i, s in enumerate(pop):
        t = tilde(s)
        negsys = t.with_rules(complement_rules(t))
        configs = list(s.configurations(L))
        for _ in range(2):
            sets += 1
            X = {c for c in configs if rng.random() < rng.choice([0.2, 0.5, 0.8])}
            pos = one_step(t, X, L)
            neg = one_step(negsys, Complement(X), L)
            bad += [(i, str(b)) for b in configs if (b.negate() in neg) == (b in pos)]
    report(8, not bad and sets >= 50, f"{sets} random sets X over {len(pop)} systems, {len(bad)} violations {bad[:3]}")


def test_c09_expansion_and_unfold(pop, report):
    bad, unfolded, markers = [], 0, 0
    for i, s in enumerate(pop):
        try:
            em = build_expansion_map(s)
        except Exception as e:  # totality is the property under test
            bad.append((i, f"expansion map: {e}"))
            continue
        negsys = pipeline(s).negation.system
        for a in s.configurations(3):
            if decide(s, a).provable:
                continue
            t = unfold(a, s, 4)
            unfolded += 1
            if check_proof(em.negation.system, t, admit_markers=True):
                bad.append((i, str(a), "prefix fails"))
            for c in continuations(t):
                markers += 1
                if not member(negsys, c.atom):
                    bad.append((i, str(a), f"marker {c.atom}"))
    report(9, not bad, f"{unfolded} unfoldings at depth 4, {markers} markers, {len(bad)} violations {bad[:3]}")


def test_c10_combinatorial(report):
    rng = random.Random(10)
    held = bad = 0
    while held < 600:
        fams, S = random_instance(rng)
        if not brute_hypothesis(fams, S):
            continue
        held += 1
        try:
            l = hitting_index(fams, S)
            ok = 1 <= l <= len(fams) and all(h & S for h in fams[l - 1])
        except ValueError:
            ok = False
        bad += not ok
    report(10, bad == 0, f"{held} instances satisfying the hypothesis, {bad} violations")


def test_c11_cli_determinism(tmp_path, report):
    diffs = []
    for name, argv in cli_cases(tmp_path).items():
        for extra in ([], ["--json"]):
            if cli_bytes(argv + extra, "1") != cli_bytes(argv + extra, "12345"):
                diffs.append(" ".join([name, *extra]))
    report(11, not diffs, f"18 command variants run twice with different hash seeds; differing: {diffs}")
