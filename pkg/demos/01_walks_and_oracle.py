"""
Walks, symmetry and the exhaustive search
=========================================

A walk is a string of N and E steps from the origin.  A GR(k) walk has no
k of its points on one line.
"""

from grwalks.oracle import enumerate_all, search_max
from grwalks.walk import normal_form, orbit, steps_to_points, validate

# the four symmetric copies of a walk, and the one we keep
w = "ENNENNEN"
print(sorted(orbit(w)), "->", normal_form(w))

# a walk that fails, and the line that breaks it
print(validate("NENENE", 4))
print(steps_to_points("NENENE"))

# longest walks for k = 3, 4, 5; a(k) counts points, so steps = a(k) - 1
for k in (3, 4, 5):
    res = search_max(k)
    print(f"a({k}) = {res.a_lower}  ({res.nodes} nodes, {res.elapsed:.2f}s)")
    for walk in res.witnesses:
        print("   ", walk)

# every 8-step GR(4) walk, then the same set up to symmetry
walks = enumerate_all(4, 8)
print(len(walks), "walks of 8 steps;", len({normal_form(w) for w in walks}), "up to symmetry")
