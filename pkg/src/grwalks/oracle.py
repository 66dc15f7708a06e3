"""Exhaustive backtracking search over GR(k) walks, independent of any SAT solver.

Only lines with slope in the interval of :func:`geometry.prop1_slope_bounds`
are counted.  Axis-parallel lines are handled by capping runs of equal steps
at ``k - 2``; that cap is what makes the slope restriction exact.
"""

from __future__ import annotations

import csv
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import product
from math import gcd
from typing import Callable, Dict, Iterable, List, Optional, Tuple

from .geometry import Line, Point
from .walk import Walk, normal_form, steps_to_points

LineKey = Tuple[int, int, int]


class SearchState:
    """Walk prefix plus the number of prefix points on every tracked line.

    ``counts`` only holds lines with two or more prefix points.
    """

    def __init__(self, k: int):
        if k < 3:
            raise ValueError(f"k must be at least 3, got {k}")
        self.k = k
        self.steps: List[str] = []
        self.points: List[Point] = [(0, 0)]
        self.counts: Dict[LineKey, int] = {}
        self._run = 0
        self._undo: List[Tuple[List[LineKey], int]] = []
        self._dirs: Dict[Tuple[int, int], Optional[Tuple[int, int]]] = {}

    def _direction(self, dx: int, dy: int):
        try:
            return self._dirs[dx, dy]
        except KeyError:
            k = self.k
            d = None
            if dx and dy and dy * (k - 2) >= dx and dy <= (k - 2) * dx:
                g = gcd(dx, dy)
                d = (dy // g, dx // g)
            self._dirs[dx, dy] = d
            return d

    def lines_through(self, p: Point) -> Optional[Dict[LineKey, int]]:
        """Tracked lines through ``p`` and earlier points, with how many earlier points each.

        Returns None as soon as some line would reach k points.
        """
        x, y = p
        limit = self.k - 1
        tally: Dict[LineKey, int] = {}
        direction = self._direction
        for qx, qy in self.points:
            d = direction(x - qx, y - qy)
            if d is None:
                continue
            rise, run = d
            key = (rise, run, y * run - rise * x)
            c = tally.get(key, 0) + 1
            if c >= limit:
                return None
            tally[key] = c
        return tally

    def push(self, step: str) -> bool:
        """Append ``step`` if the walk stays GR(k); report whether it did."""
        same = bool(self.steps) and self.steps[-1] == step
        run = self._run + 1 if same else 1
        if run >= self.k - 1:
            return False
        x, y = self.points[-1]
        p = (x + 1, y) if step == "E" else (x, y + 1)
        tally = self.lines_through(p)
        if tally is None:
            return False
        for key, c in tally.items():
            self.counts[key] = c + 1
        self._undo.append((list(tally), self._run))
        self._run = run
        self.steps.append(step)
        self.points.append(p)
        return True

    def pop(self) -> None:
        keys, run = self._undo.pop()
        self.steps.pop()
        self.points.pop()
        for key in keys:
            c = self.counts[key] - 1
            if c < 2:
                del self.counts[key]
            else:
                self.counts[key] = c
        self._run = run

    @property
    def walk(self) -> Walk:
        return "".join(self.steps)

    def recount(self) -> Dict[LineKey, int]:
        """Line counts recomputed from scratch, for checking ``counts``."""
        fresh: Dict[LineKey, set] = {}
        pts = self.points
        for i, p in enumerate(pts):
            for q in pts[i + 1 :]:
                line = Line.through(p, q)
                if self._direction(q[0] - p[0], q[1] - p[1]) is None:
                    continue
                fresh.setdefault((line.rise, line.run, line.alpha), set()).update((p, q))
        return {key: len(s) for key, s in fresh.items()}


class BudgetExceeded(Exception):
    pass


def _dfs(
    k: int,
    max_steps: int,
    visit: Callable[[SearchState], bool],
    prefix: str = "",
    north_first: bool = False,
    allowed: Optional[Callable[[Point], bool]] = None,
    deadline: Optional[float] = None,
) -> bool:
    """Depth-first search from ``prefix``; ``visit`` is called on every GR(k) node.

    Returning False from ``visit`` prunes below that node.  Returns False if
    ``prefix`` itself is not a GR(k) walk.
    """
    state = SearchState(k)
    for step in prefix:
        if not state.push(step):
            return False
    counter = [0]

    def rec():
        counter[0] += 1
        if deadline is not None and counter[0] & 0xFFF == 0 and time.monotonic() > deadline:
            raise BudgetExceeded
        if not visit(state) or len(state.steps) >= max_steps:
            return
        for step in "NE":
            if not state.steps and north_first and step == "E":
                continue
            if allowed is not None:
                x, y = state.points[-1]
                if not allowed((x + 1, y) if step == "E" else (x, y + 1)):
                    continue
            if state.push(step):
                rec()
                state.pop()

    rec()
    return True


@dataclass
class SearchResult:
    k: int
    a_lower: int
    witnesses: List[Walk]
    exhausted: bool
    nodes: int = 0
    elapsed: float = 0.0

    @property
    def longest(self) -> int:
        return self.a_lower - 1


def search_max(k: int, step_budget: Optional[int] = None, time_budget: Optional[float] = None) -> SearchResult:
    """Find the longest GR(k) walks.

    When ``exhausted`` is true the whole tree was searched, so ``a_lower`` is
    exactly a(k) and ``witnesses`` are all maximal walks in normal form.
    """
    t0 = time.monotonic()
    cap = step_budget if step_budget is not None else 10**9
    best = [0]
    found: set = {""}
    nodes = [0]

    def visit(state):
        nodes[0] += 1
        d = len(state.steps)
        if d > best[0]:
            best[0] = d
            found.clear()
        if d == best[0]:
            found.add(normal_form(state.walk))
        return True

    deadline = t0 + time_budget if time_budget is not None else None
    exhausted = True
    try:
        _dfs(k, cap, visit, north_first=True, deadline=deadline)
    except BudgetExceeded:
        exhausted = False
    if best[0] >= cap:
        exhausted = False
    return SearchResult(k, best[0] + 1, sorted(found), exhausted, nodes[0], time.monotonic() - t0)


def enumerate_all(k: int, m: int, north_first: bool = False, prefix: str = "") -> List[Walk]:
    """Every ``m``-step GR(k) walk (extending ``prefix``), sorted."""
    if m < 0:
        raise ValueError("m must be nonnegative")
    out: List[Walk] = []

    def visit(state):
        if len(state.steps) == m:
            out.append(state.walk)
            return False
        return True

    if len(prefix) <= m:
        _dfs(k, m, visit, prefix=prefix, north_first=north_first)
    return sorted(out)


def _enumerate_job(args):
    k, m, prefix = args
    return enumerate_all(k, m, prefix=prefix)


def parallel_enumerate(k: int, m: int, split: int = 4, workers: Optional[int] = None) -> List[Walk]:
    """Same result as :func:`enumerate_all`, with the tree split on the first ``split`` steps."""
    split = min(split, m)
    jobs = [(k, m, "".join(p)) for p in product("NE", repeat=split)]
    if workers == 1:
        parts = map(_enumerate_job, jobs)
        return sorted(w for part in parts for w in part)
    with ProcessPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(_enumerate_job, jobs))
    return sorted(w for part in parts for w in part)


@dataclass
class PointCounts:
    k: int
    end: Counter = field(default_factory=Counter)
    passing: Counter = field(default_factory=Counter)

    def __getitem__(self, p: Point) -> int:
        return self.end.get(tuple(p), 0)


def point_counts(k: int, max_steps: Optional[int] = None) -> PointCounts:
    """Normal-form GR(k) walks counted by end point, over all lengths.

    ``passing`` counts, for every point, the normal-form walks (of any length)
    that visit it.
    """
    if k > 6 and max_steps is None:
        raise ValueError("exhaustive point counts are only feasible for k <= 6; pass max_steps")
    res = PointCounts(k)
    cap = max_steps if max_steps is not None else 10**9

    def visit(state):
        w = state.walk
        if normal_form(w) == w:
            res.end[state.points[-1]] += 1
            for p in state.points:
                res.passing[p] += 1
        return True

    _dfs(k, cap, visit, north_first=True)
    return res


def reachable(k: int, point: Point, north_first: bool = True) -> bool:
    """Whether some GR(k) walk of exactly ``x + y`` steps ends at ``point``."""
    px, py = point
    if px < 0 or py < 0:
        return False
    found = [False]

    def visit(state):
        if found[0]:
            return False
        if state.points[-1] == (px, py):
            found[0] = True
            return False
        return True

    _dfs(k, px + py, visit, north_first=north_first, allowed=lambda p: p[0] <= px and p[1] <= py)
    return found[0]


def reachability_map(k: int, max_steps: int, north_first: bool = True) -> Dict[Point, bool]:
    """Reachability of every point with ``x + y <= max_steps`` from one search."""
    seen = set()

    def visit(state):
        seen.add(state.points[-1])
        return True

    _dfs(k, max_steps, visit, north_first=north_first)
    return {(x, c - x): (x, c - x) in seen for c in range(max_steps + 1) for x in range(c + 1)}


def write_heatmap_csv(counts: PointCounts, path, which: str = "end") -> None:
    table = counts.end if which == "end" else counts.passing
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["x", "y", "count"])
        for (x, y), c in sorted(table.items()):
            w.writerow([x, y, c])


def gr_walks_through(walks: Iterable[Walk], point: Point) -> List[Walk]:
    return [w for w in walks if point in steps_to_points(w)]
