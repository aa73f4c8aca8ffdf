"""
Frames, clusters and the circumference scheme
=============================================

A finite transitive frame splits into clusters.  The circumference is the
size of its largest non-degenerate cluster, and the circumference scheme
of index n is valid exactly when that size is at most n.
"""

from modaltopo.formula import named_axiom, scheme_C, to_text
from modaltopo.kripke import Frame, circumference, clusters, countermodel, valid_in_frame

# a reflexive 2-cluster {0, 1} sitting below an irreflexive point 2
frame = Frame.from_edges(3, [(0, 0), (0, 1), (1, 0), (1, 1), (0, 2), (1, 2)])
dec = clusters(frame)
for c, kind, final in zip(dec.clusters, dec.kinds, dec.final):
    print(f"cluster {bin(c)}: {kind.value}{' (final)' if final else ''}")
print("circumference:", circumference(frame))

print(to_text(scheme_C(1), sugar=True))
for n in range(4):
    print(f"index {n}: valid={valid_in_frame(frame, scheme_C(n))}")

# a falsifying valuation for the index-1 scheme
cm = countermodel(frame, scheme_C(1))
print("countermodel:", cm.to_json())

# Grz-box holds iff every cluster is a single point; not here
print("Grz valid:", valid_in_frame(frame, named_axiom("Grz")))
