"""
Rules with long prefixes
========================

Rules may read or write several stack symbols at once.  They are split
into small steps through fresh states, and proofs found in the split
system are mapped back.
"""

from apds import check_proof, decide, parse_atom, parse_system
from apds.core import serialize_system
from apds.normalize import to_small_step

src = parse_system("""
system G
states P Q R
stack a b
rule g1: P(a b x) => Q(x)
rule g2: Q(x) => R(b a x)
rule ax: => P(a b x)
""")
print(src.klass)

small, erasure = to_small_step(src)
print(serialize_system(small))
print("\n".join(erasure.lines()))

for text in ["Q(eps)", "R(b a)", "R(a b)"]:
    v = decide(src, parse_atom(text))
    print(text, v.provable)
    if v.provable:
        assert check_proof(src, v.certificate) == []
