"""North-east walks as strings over ``{N, E}``.

A walk always starts at the origin.  The symmetry group acting on walks is
``{identity, complement, reverse, complement o reverse}``; all four maps
preserve the GR(k) property.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Iterable, List, Set, Tuple

from .geometry import Line, Point

Walk = str

_COMPLEMENT = str.maketrans("NE", "EN")
_BITS = str.maketrans("NE", "01")


def check_walk(walk: Walk) -> Walk:
    if not set(walk) <= {"N", "E"}:
        raise ValueError(f"walk must be a string over N/E, got {walk!r}")
    return walk


def steps_to_points(walk: Walk) -> List[Point]:
    x = y = 0
    pts = [(0, 0)]
    for step in walk:
        if step == "E":
            x += 1
        elif step == "N":
            y += 1
        else:
            raise ValueError(f"bad step {step!r}")
        pts.append((x, y))
    return pts


def points_to_steps(points: List[Point]) -> Walk:
    steps = []
    for (x0, y0), (x1, y1) in zip(points, points[1:]):
        if (x1 - x0, y1 - y0) == (1, 0):
            steps.append("E")
        elif (x1 - x0, y1 - y0) == (0, 1):
            steps.append("N")
        else:
            raise ValueError(f"points {(x0, y0)} -> {(x1, y1)} are not one step apart")
    return "".join(steps)


def complement(walk: Walk) -> Walk:
    return walk.translate(_COMPLEMENT)


def reverse(walk: Walk) -> Walk:
    return walk[::-1]


def orbit(walk: Walk) -> Set[Walk]:
    r = reverse(walk)
    return {walk, complement(walk), r, complement(r)}


def encode_bits(walk: Walk) -> str:
    """N -> 0, E -> 1."""
    return check_walk(walk).translate(_BITS)


def normal_form(walk: Walk) -> Walk:
    """Orbit member whose N=0, E=1 bit string is lexicographically least."""
    return min(orbit(check_walk(walk)), key=encode_bits)


def dedup(walks: Iterable[Walk]) -> Set[Walk]:
    return {normal_form(w) for w in walks}


@dataclass
class ViolationReport:
    k: int
    violating_lines: List[Tuple[Line, int]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violating_lines

    def __bool__(self):
        # truthy when there is something to report
        return bool(self.violating_lines)

    def __str__(self) -> str:
        if self.ok:
            return f"GR({self.k}) walk"
        return "; ".join(f"{line}: {count} points" for line, count in self.violating_lines)


def collinear_groups(points: List[Point]) -> Dict[Line, Set[Point]]:
    """Every line through at least two of ``points`` with the points it carries."""
    groups: Dict[Line, Set[Point]] = {}
    for i, p in enumerate(points):
        for q in points[i + 1 :]:
            line = Line.through(p, q)
            s = groups.setdefault(line, set())
            s.add(p)
            s.add(q)
    return groups


def validate(walk: Walk, k: int) -> ViolationReport:
    """Report every line carrying ``k`` or more points of ``walk``."""
    if k < 3:
        raise ValueError(f"k must be at least 3, got {k}")
    groups = collinear_groups(steps_to_points(walk))
    bad = sorted((line, len(pts)) for line, pts in groups.items() if len(pts) >= k)
    return ViolationReport(k, bad)


def is_gr(walk: Walk, k: int) -> bool:
    return validate(walk, k).ok


def read_walks(path) -> List[Walk]:
    """Read a walk corpus: one walk per line, ``#`` starts a comment line."""
    walks = []
    for raw in Path(path).read_text().splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        walks.append(check_walk(line))
    return walks


def write_walks(path, walks: Iterable[Walk], header: str | None = None) -> None:
    lines = []
    if header:
        lines.extend(f"# {h}" for h in header.splitlines())
    lines.extend(walks)
    Path(path).write_text("".join(f"{line}\n" for line in lines))
