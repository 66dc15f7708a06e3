"""
Where walks end
===============

Counting normal-form GR(5) walks by end point gives a picture of the
reachable region; the CSV is the input for any plotting tool.
"""

import tempfile
from pathlib import Path

import numpy as np

from grwalks.oracle import point_counts, write_heatmap_csv

pc = point_counts(5)
print("count(8,4) =", pc[(8, 4)], " count(9,4) =", pc[(9, 4)])

grid = np.zeros((15, 17), dtype=int)
for (x, y), c in pc.end.items():
    grid[x, y] = c
print("end-point counts, x down, y across:")
print(grid)

csv_path = Path(tempfile.mkdtemp()) / "k5_end.csv"
write_heatmap_csv(pc, csv_path)
print("wrote", csv_path)
