"""
Refutations and co-inductive counterexamples
============================================

``P(a)`` has no proof in this system.  Negation as failure gives a one-node
refutation; the expansion map turns it into the beginning of an infinite
proof of ``!P(a)`` that only uses complement rules of the input.
"""

from pathlib import Path

from apds import decide, parse_atom, parse_system
from apds.certify import build_expansion_map, unfold
from apds.complement import build_negation_extension, tilde
from apds.core import serialize_system
from apds.proof import render

here = Path(__file__).parent
r = parse_system((here / "data" / "r.apds").read_text())

# Canonical instances, then the negated complement.
print(serialize_system(tilde(r)))
neg = build_negation_extension(r)
for rule in neg.negative_rules:
    print(rule)

v = decide(r, parse_atom("P(a)"), want_negative_certificate=True)
print("provable:", v.provable)
print("\n".join(render(v.refutation)))

emap = build_expansion_map(r)
print("\n".join(emap.lines()))

# Deeper unfoldings extend shallower ones; the words keep growing.
for k in (1, 3, 5):
    print(f"--- depth {k}")
    print("\n".join(render(unfold(parse_atom("P(a)"), r, k))))
