"""
Countermodel search and the census
==================================

The search walks through frames (or spaces) in size order and stops at the
first one that falsifies the formula.  Finding nothing proves nothing
beyond the size bound.
"""

from modaltopo.formula import parse, scheme_C
from modaltopo.harness import SearchSpec, census, countermodel_search, run_property_suite
from modaltopo.kripke import FrameConstraints

res = countermodel_search(SearchSpec(scheme_C(1), 3, FrameConstraints(transitive=True)))
print(res.message, res.structure.to_json() if res.found else "")

res = countermodel_search(SearchSpec(scheme_C(1), 4,
                                     FrameConstraints(transitive=True, circumference_at_most=1)))
print(res.message)

res = countermodel_search(SearchSpec(parse("<>T"), 4, mode="space-d"))
print("D under the d-semantics:", res.message)

rows = census(3)
print(len(rows), "topologies on at most 3 points")
print("rows where T_D differs from d-validity of 4:",
      sum(r["TD"] != r["d:4"] for r in rows))
print("crowded and T_D:", sum(r["crowded"] and r["TD"] for r in rows))

for report in run_property_suite("crowded-oi-m", 4):
    print(report.line())
