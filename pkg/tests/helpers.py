"""Shared fixtures data and random system generators for the test suite."""

from __future__ import annotations

import random
from pathlib import Path

from hypothesis import strategies as st

from apds import Atom, ProofTree, Rule, System, parse_system

DATA = Path(__file__).parent / "data"


def load(name: str) -> System:
    return parse_system((DATA / name).read_text())


def A(text: str) -> Atom:
    from apds import parse_atom

    return parse_atom(text)


def node(atom: str, rule: str, *children) -> ProofTree:
    return ProofTree(A(atom), rule, tuple(children))


def example_proof() -> ProofTree:
    """The hand-written proof of S(a b) in E1, using e1, n1 twice and n2 twice."""
    return node(
        "S(a b)", "e1",
        node("P(a a b)", "i1",
             node("Q(a b)", "n1",
                  node("P(a b)", "i1",
                       node("Q(b)", "n1",
                            node("P(b)", "i2", node("T(eps)", "n2")),
                            node("R(b)", "i4"))),
                  node("R(a b)", "i3", node("T(b)", "n2")))))


def keys(rules) -> set:
    return {r.key for r in rules}


def rule(text: str) -> Rule:
    from apds.core import parse_rule_line

    return parse_rule_line(text)


STATES = "PQRS"
STACK = "ab"


def _make_rule(i: int, kind: str, concl: str, gamma: str, head: str, prems: list[str]) -> Rule:
    if kind == "intro":
        return Rule(f"r{i}", tuple(Atom(p) for p in prems), Atom(concl, (gamma,)))
    if kind == "eps":
        return Rule(f"r{i}", (), Atom(concl, (), False))
    if kind == "elim":
        return Rule(f"r{i}", (Atom(head, (gamma,)), *(Atom(p) for p in prems)), Atom(concl))
    return Rule(f"r{i}", tuple(Atom(p) for p in prems), Atom(concl))


KINDS = ["intro", "intro", "eps", "elim", "elim", "neutral", "neutral"]


def random_system(rng: random.Random, max_states=4, max_stack=2, max_rules=6) -> System:
    """Random small-step system with at most 4 states, 2 stack symbols and 6 rules."""
    states = STATES[: rng.randint(1, max_states)]
    stack = STACK[: rng.randint(1, max_stack)]
    rules = []
    for i in range(rng.randint(1, max_rules)):
        kind = rng.choice(KINDS)
        prems = rng.sample(states, rng.randint(0, min(2, len(states))))
        rules.append(_make_rule(i, kind, rng.choice(states), rng.choice(stack),
                                rng.choice(states), prems))
    return System("rand", tuple(states), tuple(stack), tuple(rules))


def population(n: int = 200, seed: int = 20241017) -> list[System]:
    rng = random.Random(seed)
    return [random_system(rng) for _ in range(n)]


@st.composite
def systems(draw, max_states=4, max_stack=2, max_rules=6):
    states = STATES[: draw(st.integers(1, max_states))]
    stack = STACK[: draw(st.integers(1, max_stack))]
    n = draw(st.integers(1, max_rules))
    rules = []
    for i in range(n):
        kind = draw(st.sampled_from(KINDS))
        prems = draw(st.lists(st.sampled_from(states), max_size=2, unique=True))
        rules.append(_make_rule(i, kind, draw(st.sampled_from(states)), draw(st.sampled_from(stack)),
                                draw(st.sampled_from(states)), prems))
    return System("rand", tuple(states), tuple(stack), tuple(rules))


@st.composite
def general_systems(draw):
    """Systems mixing small-step rules with rules carrying longer prefixes."""
    states = STATES[: draw(st.integers(1, 3))]
    stack = STACK[: draw(st.integers(1, 2))]
    words = st.lists(st.sampled_from(stack), max_size=2).map(tuple)
    rules = []
    for i in range(draw(st.integers(1, 4))):
        prems = draw(st.lists(st.builds(Atom, st.sampled_from(states), words), max_size=2))
        concl = Atom(draw(st.sampled_from(states)), draw(words))
        rules.append(Rule(f"g{i}", tuple(prems), concl))
    if draw(st.booleans()):
        rules.append(Rule("ax", (), Atom(draw(st.sampled_from(states)), (), False)))
    return System("gen", tuple(states), tuple(stack), tuple(rules))


def cli_cases(tmp: Path) -> dict[str, list[str]]:
    """One invocation per subcommand, writing any side files under ``tmp``."""
    from apds.proof import dumps

    e1, r = str(DATA / "e1.apds"), str(DATA / "r.apds")
    proof = tmp / "proof.json"
    proof.write_text(dumps(example_proof()))
    gen = tmp / "g.apds"
    gen.write_text("system G\nstates P Q\nstack a b\nrule g: P(a b x) => Q(x)\nrule ax: => P(a b x)\n")
    from apds import saturate, serialize_system

    sat = tmp / "e1s.apds"
    sat.write_text(serialize_system(saturate(load("e1.apds"))))
    return {
        "check": ["check", e1, str(proof)],
        "normalize": ["normalize", str(gen)],
        "saturate": ["saturate", e1],
        "decide": ["decide", e1, "S(a b)"],
        "prove": ["prove", e1, "S(a b)"],
        "refute": ["refute", r, "P(a)", "--depth", "3"],
        "eliminate-cuts": ["eliminate-cuts", str(sat), str(proof)],
        "complement": ["complement", r],
        "oracle": ["oracle", e1, "S(a b)", "--depth", "12", "--word-bound", "4"],
    }
