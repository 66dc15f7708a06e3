"""In-process SAT enumeration used as a cross-check that bypasses the driver."""

from pysat.solvers import Solver

from grwalks.encoding import num_point_vars
from grwalks.formats import decode_model, lower_instance


def sat_walks(instance, method="seqcounter"):
    low = lower_instance(instance, method)
    top = num_point_vars(instance.n)
    out = set()
    with Solver(name="cadical195", bootstrap_with=low.clauses) as s:
        while s.solve():
            model = [l for l in s.get_model() if 0 < l <= top]
            out.add(decode_model(model, instance.n))
            s.add_clause([-l for l in model])
    return out
