"""
Which lines need a constraint
=============================

Only lines with slope between 1/(k-2) and k-2 can hold k points of a GR(k)
walk; steeper or flatter lines would need a run of k-1 equal steps.
"""

from grwalks.geometry import enumerate_lines, line_size_histogram, prop1_slope_bounds

k, n = 5, 29
lo, hi = prop1_slope_bounds(k)
print(f"slopes kept for k={k}: [{lo}, {hi}]")

kept = enumerate_lines(k, n)
every = enumerate_lines(k, n, use_prop1=False)
print(f"{len(kept)} lines kept out of {len(every)} with at least {k} points")
for line, pts in list(kept.items())[:5]:
    print(f"  {line}: {pts}")

# counting lines at scale without building point lists
hist = line_size_histogram(7, 325, band=True)
total = sum(hist.values())
short = sum(c for size, c in hist.items() if size <= 16)
print(f"k=7, 325 points: {total} lines, {short / total:.1%} carry 16 points or fewer")
print("smallest sizes:", sorted(hist.items())[:5])
