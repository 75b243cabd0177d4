"""
Deciding provability by saturation
==================================

A push/pop system where ``S(a b)`` can only be proved through an
elimination rule.  We saturate it, read a cut-free proof off the
introduction rules, and compare with rewriting a proof that uses the elimination rule.
"""

from pathlib import Path

from apds import decide, eliminate_cuts, measure, parse_atom, parse_system, saturate
from apds.proof import dumps, render
from apds.saturate import provenance_lines

here = Path(__file__).parent
e1 = parse_system((here / "data" / "e1.apds").read_text())
print(e1.klass, len(e1.rules), "rules")

# Saturation adds neutral and introduction rules until nothing new appears.
sat = saturate(e1)
for line in provenance_lines(sat):
    print(line)

# The introduction rules alone form a multi-automaton; membership is a
# walk down the word.
v = decide(e1, parse_atom("S(a b)"))
print("provable:", v.provable)
print("\n".join(render(v.saturated_certificate)))

# The same proof expressed with the original rules.
print("\n".join(render(v.certificate)))

# Replayed to the original rules the certificate contains a cut again.
# Rewriting it with the saturated rules removes it step by step.
proof = v.certificate
print("measure of the original-system proof:", measure(proof, e1))
cut_free, trace = eliminate_cuts(proof, sat)
for step in trace:
    print(step.position, "shape", step.shape, "->", step.rule, tuple(step.before), "->", tuple(step.after))
print(dumps(cut_free))
