"""
Extending a known walk
======================

Can the 28-step GR(5) walk be extended by a step at either end, or can any
walk one step longer contain it?  Step variables make "contains this
subpath" a constraint.
"""

from grwalks.driver import SolverSpec, solve_instance
from grwalks.encoding import build_instance
from grwalks.oracle import search_max

best = search_max(5).witnesses[0]
print("subpath:", best)

spec = SolverSpec.reference("cnf")
for n in (29, 30):
    inst = build_instance(5, n, subpath=best)
    out = solve_instance(inst, spec)
    print(f"{n} points: {out.result.status.value}", out.walk or "")
