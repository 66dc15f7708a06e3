"""Stand-alone reference solver speaking the usual competition I/O conventions.

    python -m grwalks.refsolver FILE [--seed S] [--timeout T] [--backend NAME]

CNF files go to CaDiCaL (through PySAT); KNF files go to Minicard, which
propagates klauses natively as at-most constraints.  Prints ``s ...`` and
``v ...`` lines and exits 10 / 20 / 0 for SAT / UNSAT / UNKNOWN.  It runs as
its own process so the toolkit only ever talks to solvers through files.
"""

from __future__ import annotations

import argparse
import random
import sys
import threading

from .formats import parse_formula


def _emit(model):
    out = ["s SATISFIABLE"]
    line = "v"
    for lit in list(model) + [0]:
        tok = f" {lit}"
        if len(line) + len(tok) > 78:
            out.append(line)
            line = "v"
        line += tok
    out.append(line)
    return "\n".join(out)


def solve_text(text: str, seed: int = 0, timeout: float | None = None, backend: str = "cadical195"):
    from pysat.solvers import Minicard, Solver

    f = parse_formula(text)
    clauses = list(f.clauses)
    if seed:
        random.Random(seed).shuffle(clauses)
    if f.klauses:
        solver = Minicard(bootstrap_with=clauses)
        for bound, lits in f.klauses:
            # sum(l) >= b  <=>  sum(-l) <= len - b
            if bound > len(lits):
                solver.add_clause([])
            elif bound > 0:
                solver.add_atmost([-l for l in lits], len(lits) - bound)
    else:
        solver = Solver(name=backend, bootstrap_with=clauses)
    with solver:
        timer = None
        if timeout:
            timer = threading.Timer(timeout, solver.interrupt)
            timer.start()
            verdict = solver.solve_limited(expect_interrupt=True)
            timer.cancel()
        else:
            verdict = solver.solve()
        model = solver.get_model() if verdict else None
    if verdict is None:
        return "s UNKNOWN", 0
    if not verdict:
        return "s UNSATISFIABLE", 20
    present = set(abs(l) for l in model)
    full = list(model) + [-v for v in range(1, f.num_vars + 1) if v not in present]
    full.sort(key=abs)
    return _emit(full), 10


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(prog="python -m grwalks.refsolver")
    ap.add_argument("file")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--timeout", type=float, default=None)
    ap.add_argument("--backend", default="cadical195")
    args = ap.parse_args(argv)
    with open(args.file) as fh:
        text = fh.read()
    out, code = solve_text(text, args.seed, args.timeout, args.backend)
    print(out)
    sys.stdout.flush()
    return code


if __name__ == "__main__":
    sys.exit(main())
