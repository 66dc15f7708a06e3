"""
From instance to walk
=====================

Build the constraint system, write it as CNF or KNF, hand it to a solver
process, and decode the model.
"""

import tempfile
from pathlib import Path

from grwalks.driver import SolverSpec, solve_instance
from grwalks.encoding import build_instance
from grwalks.formats import dimacs_text, knf_text

inst = build_instance(5, 29)
print({g: len(cs) for g, cs in inst.groups.items()}, len(inst.cards), "line constraints")

cnf, knf = dimacs_text(inst), knf_text(inst)
print(cnf.splitlines()[0], "|", knf.splitlines()[0])
print("a klause:", next(line for line in knf.splitlines() if line.startswith("k")))

out = Path(tempfile.mkdtemp()) / "k5n29.knf"
out.write_text(knf)
print("wrote", out)

# the bundled solver runs as a separate process; any DIMACS solver works for CNF,
# e.g. SolverSpec("kissat --seed={seed} {cnf}")
for n in (29, 30):
    res = solve_instance(build_instance(5, n), SolverSpec.reference("knf" if n == 29 else "cnf"))
    print(n, res.result.status.value, res.walk or "")
