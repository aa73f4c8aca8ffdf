"""
Finite spaces under the derived-set semantics
=============================================

Every finite space is determined by the minimal open neighbourhood of
each point.  Reading <> as the derived set turns a space into a relational
model in which each point sees its punctured neighbourhood.
"""

from modaltopo import dsem, topo
from modaltopo.formula import named_axiom, parse
from modaltopo.topo import indiscrete, sierpinski

X = indiscrete(2)
print("indiscrete 2-point space:", topo.classify(X).to_json())
print("  de{0} =", bin(topo.derived(X, 0b01)))
print("  2-resolvable:", topo.resolution(X, 2))
print("  openly irresolvable:", topo.openly_irresolvable(X))

# axiom 4 fails: the space is not T_D
print("  4 d-valid:", dsem.d_valid(X, named_axiom("4")))
print("  countermodel:", dsem.countermodel(X, named_axiom("4")).to_json())
# M holds although the space is not openly irresolvable
print("  M d-valid:", dsem.d_valid(X, named_axiom("M")))

S = sierpinski()
print("Sierpinski space opens:", sorted(S.opens))
print("  T_D:", topo.is_TD(S), " 4 d-valid:", dsem.d_valid(S, named_axiom("4")))

# T holds everywhere under the closure reading, never under the derived-set one
phi = parse("[]p -> p")
for name, Y in [("indiscrete", X), ("sierpinski", S)]:
    print(f"{name}: d-valid={dsem.d_valid(Y, phi)} C-valid={dsem.c_valid(Y, phi)}")
