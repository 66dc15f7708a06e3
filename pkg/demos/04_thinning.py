"""
Dropping short lines
====================

Constraints on lines with few region points can be left out.  UNSAT answers
stay valid; a SAT model may break a dropped line, in which case those lines
are put back and the instance is solved again.
"""

from grwalks.driver import SolverSpec, solve_formula, solve_instance
from grwalks.encoding import build_instance
from grwalks.formats import decode_model
from grwalks.walk import validate

spec = SolverSpec.reference("cnf")
full = build_instance(4, 10)
thin = build_instance(4, 10, threshold=6)
print(len(full.cards), "line constraints in full,", len(thin.cards), "after thinning")

raw = solve_formula(thin, spec)
if raw.model is not None:
    walk = decode_model(raw.model, thin.n)
    print("thinned model:", walk, "->", validate(walk, 4))

out = solve_instance(thin, spec)
print("after", out.retries, "retries:", out.result.status.value,
      "with", out.instance.provenance.get("restored", 0), "lines restored")
