"""
Gluing spaces along a frame
===========================

Each cluster of a transitive frame is replaced by a space split into one
cell per cluster member.  The glued space maps back onto the frame, and
the map is a d-morphism, so anything d-valid in the glued space is valid
in the frame.
"""
from modaltopo import dsem, topo
from modaltopo.formula import named_axiom, parse, scheme_C
from modaltopo.glue import default_assignment, glue
from modaltopo.kripke import Frame

frame = Frame.from_edges(3, [(0, 0), (0, 1), (1, 0), (1, 1), (0, 2), (1, 2)])
assignment = default_assignment(frame, cell_size=2)
g = glue(frame, assignment)

print("glued points:", g.space.n)
print("map onto the frame:", g.f)
print("minimal neighbourhoods:", [bin(u) for u in g.space.min_nbhd])

dm = dsem.DMorphism(g.f, g.space, frame)
print("d-morphism violation:", dsem.d_morphism_violation(dm))

print("T1:", topo.is_T1(g.space), " densely discrete:", topo.is_densely_discrete(g.space))

for phi in [named_axiom("4"), named_axiom("D"), named_axiom("Grz"), scheme_C(1), scheme_C(2),
            parse("<>p -> []<>p")]:
    v = dsem.validity_transfer_check(dm, phi)
    print(f"{str(phi)[:40]:40s} space={v.space_valid!s:5} frame={v.frame_valid!s:5} "
          f"truth preserved={v.truth_preserved}")
