"""
Splitting the search into cubes
===============================

Every walk crosses each antidiagonal x + y = c exactly once, so one cube per
point of that antidiagonal splits the solutions into disjoint pieces.  The
cubes run as independent jobs and every outcome lands in a ledger.
"""

import tempfile
from pathlib import Path

from grwalks.driver import SolverSpec, generate_antidiagonal_cubes, read_ledger, run_campaign
from grwalks.encoding import build_instance
from grwalks.formats import cubes_text

inst = build_instance(5, 29)
cubes = generate_antidiagonal_cubes(inst, 14)
print(len(cubes), "cubes on antidiagonal 14")
print(cubes_text(cubes[:3]), end="")

ledger = Path(tempfile.mkdtemp()) / "campaign.jsonl"
res = run_campaign([(inst, c) for c in cubes], SolverSpec.reference("cnf", width=4), seeds=[0], ledger=ledger)
for rec in read_ledger(ledger):
    print(rec["job"], rec["cube"], rec["status"], rec["normal_form"] or "")
print("walks found:", res.walks)
