"""Lattice lines inside the triangular region ``{(x, y) : x, y >= 0, x + y <= n - 1}``.

Lines are kept in exact integer form ``y * run == rise * x + alpha`` with
``gcd(rise, run) == 1``.  Vertical lines use ``rise = 1, run = 0`` so that
``alpha = -x``; horizontal lines use ``rise = 0, run = 1``.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterator, List, Tuple

import numpy as np

Point = Tuple[int, int]


@dataclass(frozen=True, order=True)
class Line:
    rise: int
    run: int
    alpha: int

    def __post_init__(self):
        if self.run < 0 or (self.run == 0 and self.rise != 1):
            raise ValueError(f"non-canonical direction ({self.rise}, {self.run})")
        if math.gcd(self.rise, self.run) != 1:
            raise ValueError(f"direction ({self.rise}, {self.run}) not in lowest terms")

    @classmethod
    def through(cls, p: Point, q: Point) -> "Line":
        """The unique line through two distinct lattice points."""
        dx, dy = q[0] - p[0], q[1] - p[1]
        if dx == 0 and dy == 0:
            raise ValueError("points coincide")
        if dx < 0 or (dx == 0 and dy < 0):
            dx, dy = -dx, -dy
        g = math.gcd(dx, dy)
        run, rise = dx // g, dy // g
        return cls(rise, run, p[1] * run - rise * p[0])

    @property
    def is_vertical(self) -> bool:
        return self.run == 0

    @property
    def is_horizontal(self) -> bool:
        return self.rise == 0

    @property
    def slope(self) -> Fraction | None:
        return None if self.is_vertical else Fraction(self.rise, self.run)

    def contains(self, p: Point) -> bool:
        return p[1] * self.run == self.rise * p[0] + self.alpha

    def __str__(self) -> str:
        if self.is_vertical:
            return f"x={-self.alpha}"
        if self.is_horizontal:
            return f"y={self.alpha}"
        return f"{self.run}y={self.rise}x{self.alpha:+d}"


def in_region(p: Point, n: int) -> bool:
    return p[0] >= 0 and p[1] >= 0 and p[0] + p[1] <= n - 1


def region_points(n: int) -> Iterator[Point]:
    """Region points antidiagonal by antidiagonal, y ascending within each."""
    for c in range(n):
        for y in range(c + 1):
            yield (c - y, y)


def prop1_slope_bounds(k: int) -> Tuple[Fraction, Fraction]:
    """Slopes outside this closed interval never carry k points of a GR(k) walk."""
    if k < 3:
        raise ValueError(f"k must be at least 3, got {k}")
    return Fraction(1, k - 2), Fraction(k - 2)


def _slope_ok(rise: int, run: int, k: int) -> bool:
    return rise * (k - 2) >= run and rise <= (k - 2) * run


def in_extremal_band(p: Point, k: int) -> bool:
    """Strictly between ``y = (k-2)x + (k-1)`` and its mirror image.

    Points outside this band need k - 1 consecutive steps in one direction, so
    they lie on no GR(k) walk regardless of the first step.
    """
    x, y = p
    return y < (k - 2) * x + (k - 1) and x < (k - 2) * y + (k - 1)


def line_points(line: Line, n: int) -> List[Point]:
    """Region points on ``line``, sorted by x (by y for vertical lines)."""
    if line.is_vertical:
        x = -line.alpha
        return [(x, y) for y in range(n - x)] if 0 <= x < n else []
    if line.is_horizontal:
        y = line.alpha
        return [(x, y) for x in range(n - y)] if 0 <= y < n else []
    rise, run = line.rise, line.run
    x = next((x for x in range(run) if (rise * x + line.alpha) % run == 0), None)
    if x is None:
        return []
    y = (rise * x + line.alpha) // run
    if y < 0:
        t = -(y // rise)  # ceil(-y / rise)
        x, y = x + t * run, y + t * rise
    pts = []
    while x + y <= n - 1:
        pts.append((x, y))
        x, y = x + run, y + rise
    return pts


def _directions(k: int, n: int, use_prop1: bool, min_points: int) -> Iterator[Tuple[int, int]]:
    # consecutive points on a line differ by rise + run along x + y
    max_span = (n - 1) // (min_points - 1)
    for s in range(2, max_span + 1):
        for rise in range(1, s):
            run = s - rise
            if math.gcd(rise, run) != 1:
                continue
            if use_prop1 and not _slope_ok(rise, run, k):
                continue
            yield rise, run


def _start_points(rise: int, run: int, n: int) -> Iterator[Point]:
    for x in range(n):
        for y in range(n - x):
            if x < run or y < rise:
                yield (x, y)


def enumerate_lines(
    k: int,
    n: int,
    use_prop1: bool = True,
    min_points: int | None = None,
    band: bool = False,
) -> Dict[Line, Tuple[Point, ...]]:
    """All non-axis lines with at least ``min_points`` region points.

    Returns a mapping from each canonical line to its region points.  With
    ``band`` set, only points inside the extremal band are kept (and counted).
    Slopes are always positive: a north-east walk meets a line of negative
    slope at most once.
    """
    if k < 3:
        raise ValueError(f"k must be at least 3, got {k}")
    if min_points is None:
        min_points = k
    if min_points < 2:
        raise ValueError("min_points must be at least 2")
    lines: Dict[Line, Tuple[Point, ...]] = {}
    for rise, run in _directions(k, n, use_prop1, min_points):
        s = rise + run
        for x0, y0 in _start_points(rise, run, n):
            size = (n - 1 - x0 - y0) // s + 1
            if size < min_points:
                continue
            pts = [(x0 + j * run, y0 + j * rise) for j in range(size)]
            if band:
                pts = [p for p in pts if in_extremal_band(p, k)]
                if len(pts) < min_points:
                    continue
            lines[Line(rise, run, y0 * run - rise * x0)] = tuple(pts)
    return dict(sorted(lines.items()))


def _linear_window(c0, c1, lo, hi):
    """Clip the integer range ``[lo, hi]`` to ``j`` with ``c0 + j * c1 > 0``."""
    pos = c1 > 0
    neg = c1 < 0
    safe = np.where(c1 == 0, 1, c1)
    # c1 > 0: j > -c0/c1  ->  j >= floor(-c0/c1) + 1
    lo = np.where(pos, np.maximum(lo, np.floor_divide(-c0, safe) + 1), lo)
    # c1 < 0: j < c0/|c1|  ->  j <= ceil(c0/|c1|) - 1
    hi = np.where(neg, np.minimum(hi, -np.floor_divide(-c0, -safe) - 1), hi)
    hi = np.where((c1 == 0) & (c0 <= 0), lo - 1, hi)
    return lo, hi


def line_size_histogram(
    k: int, n: int, use_prop1: bool = True, band: bool = False, min_points: int | None = None
) -> Counter:
    """Histogram ``{points_on_line: number_of_lines}`` without materializing lines.

    Counts the same lines as :func:`enumerate_lines`; intended for large ``n``
    where holding every point list is wasteful.
    """
    if min_points is None:
        min_points = k
    hist: Counter = Counter()
    xs, ys = np.meshgrid(np.arange(n, dtype=np.int64), np.arange(n, dtype=np.int64), indexing="ij")
    inside = xs + ys <= n - 1
    for rise, run in _directions(k, n, use_prop1, min_points):
        sel = inside & ((xs < run) | (ys < rise))
        x0, y0 = xs[sel], ys[sel]
        hi = (n - 1 - x0 - y0) // (rise + run)
        lo = np.zeros_like(hi)
        if band:
            # y < (k-2)x + (k-1)  and  x < (k-2)y + (k-1), linear in the step index j
            lo, hi = _linear_window((k - 2) * x0 + (k - 1) - y0, (k - 2) * run - rise, lo, hi)
            lo, hi = _linear_window((k - 2) * y0 + (k - 1) - x0, (k - 2) * rise - run, lo, hi)
        sizes = np.maximum(hi - lo + 1, 0)
        sizes = sizes[sizes >= min_points]
        vals, counts = np.unique(sizes, return_counts=True)
        for v, c in zip(vals.tolist(), counts.tolist()):
            hist[v] += c
    return hist


@dataclass(frozen=True)
class TheoreticalBounds:
    """Known explicit bounds on walk length.

    ``upper_log2`` is the exact base-2 logarithm of the Gerver-Ramsey upper
    bound when ``k - 1`` is a power of two; otherwise the bound is
    ``upper_factor * 2 ** upper_exponent``.
    """

    k: int
    upper_factor: int
    upper_exponent: int
    upper_log2: int | None
    lower: float


def theoretical_bounds(k: int) -> TheoreticalBounds:
    if k < 3:
        raise ValueError(f"k must be at least 3, got {k}")
    factor = k - 1
    exponent = 2**13 * (k - 1) ** 4
    log2 = None
    if factor & (factor - 1) == 0:
        log2 = factor.bit_length() - 1 + exponent
    lower = (32 * (k - 1) ** (2 * math.log2(k - 1) - 7)) ** (1 / 18)
    return TheoreticalBounds(k, factor, exponent, log2, lower)
