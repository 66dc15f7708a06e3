"""
The reachability frontier
=========================

For each antidiagonal, how far north and how far east can a GR(k) walk
(starting north) get?  Verdicts go into a database that later instances use
to block unreachable points.
"""

import tempfile
from pathlib import Path

from grwalks.driver import SolverSpec, frontier_bounds
from grwalks.oracle import reachable
from grwalks.reachdb import REACHABLE, UNREACHABLE, ReachabilityDB

path = Path(tempfile.mkdtemp()) / "k5.db"
db = ReachabilityDB(5, path)

# the search oracle can stand in for the solver on small k
res = frontier_bounds(5, 29, db=db, decide=lambda p: (REACHABLE if reachable(5, p) else UNREACHABLE, 0.0))
print("upper:", res.upper)
print("lower:", res.lower)
print(res.solved, "points decided,", len(db.unreachable()), "unreachable on record")

# the same frontier with the solver, reusing the database: nothing left to solve
again = frontier_bounds(5, 29, SolverSpec.reference(), ReachabilityDB(5, path))
print("second pass solved", again.solved, "instances")
print(path.read_text().splitlines()[:4])
