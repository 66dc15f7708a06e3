"""Abstract constraint system asserting an ``(n-1)``-step GR(k) walk.

Nothing here is format specific: clauses are tuples of signed variable ids
and cardinality constraints stay symbolic until :mod:`grwalks.formats`
lowers or serializes them.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .geometry import Line, Point, enumerate_lines, in_region, line_points, region_points
from .walk import check_walk

Clause = Tuple[int, ...]

# serialization order of clause groups; cardinality constraints go after "hv"
GROUP_ORDER = (
    "path",
    "symmetry",
    "extremal",
    "unreachability",
    "hv",
    "extension",
    "streamline",
    "pins",
    "blocking",
    "cube",
)

AT_MOST = "at-most"
AT_LEAST = "at-least"


def num_point_vars(n: int) -> int:
    return n * (n + 1) // 2


def var_id(x: int, y: int, n: int) -> int:
    if not in_region((x, y), n):
        raise ValueError(f"({x}, {y}) is outside the {n}-point region")
    c = x + y
    return c * (c + 1) // 2 + y + 1


def var_point(v: int, n: int) -> Point:
    if not 1 <= v <= num_point_vars(n):
        raise ValueError(f"{v} is not a point variable for n={n}")
    v -= 1
    c = 0
    while (c + 1) * (c + 2) // 2 <= v:
        c += 1
    y = v - c * (c + 1) // 2
    return (c - y, y)


@dataclass(frozen=True)
class VarMap:
    n: int

    @property
    def size(self) -> int:
        return num_point_vars(self.n)

    def __call__(self, x: int, y: int) -> int:
        return var_id(x, y, self.n)

    def point(self, v: int) -> Point:
        return var_point(v, self.n)

    def is_point_var(self, v: int) -> bool:
        return 1 <= abs(v) <= self.size


@dataclass(frozen=True)
class CardinalityConstraint:
    literals: Tuple[int, ...]
    bound: int
    sense: str = AT_MOST
    line: Optional[Line] = None

    def __post_init__(self):
        if self.sense not in (AT_MOST, AT_LEAST):
            raise ValueError(f"bad sense {self.sense!r}")
        if len(set(self.literals)) != len(self.literals):
            raise ValueError("duplicate literals in cardinality constraint")
        if not 0 <= self.bound:
            raise ValueError("negative bound")

    def as_at_most(self) -> "CardinalityConstraint":
        """``sum(l) >= b``  <=>  ``sum(-l) <= len - b``."""
        if self.sense == AT_MOST:
            return self
        neg = tuple(-l for l in self.literals)
        return CardinalityConstraint(neg, max(len(neg) - self.bound, 0), AT_MOST, self.line)

    def as_at_least(self) -> "CardinalityConstraint":
        if self.sense == AT_LEAST:
            return self
        neg = tuple(-l for l in self.literals)
        return CardinalityConstraint(neg, max(len(neg) - self.bound, 0), AT_LEAST, self.line)

    def satisfied(self, true_vars) -> bool:
        count = sum(1 for l in self.literals if (l > 0) == (abs(l) in true_vars))
        return count <= self.bound if self.sense == AT_MOST else count >= self.bound


@dataclass(frozen=True)
class ExtensionVars:
    """Step variables ``r_1..r_{n-1}`` (true = east) and placement variables ``s_i``."""

    subpath: str
    r: Dict[int, int]
    s: Dict[int, int]

    @property
    def count(self) -> int:
        return len(self.r) + len(self.s)


@dataclass
class Instance:
    k: int
    n: int
    varmap: VarMap
    groups: Dict[str, List[Clause]]
    cards: List[CardinalityConstraint]
    num_vars: int
    provenance: Dict[str, object] = field(default_factory=dict)
    extension: Optional[ExtensionVars] = None

    @property
    def aux_var_base(self) -> int:
        """First id free for cardinality-lowering auxiliaries."""
        return self.num_vars + 1

    @property
    def clauses(self) -> List[Clause]:
        return [c for g in GROUP_ORDER for c in self.groups.get(g, ())]

    def constrained_lines(self) -> set:
        return {c.line for c in self.cards if c.line is not None}

    def with_clauses(self, group: str, clauses: Iterable[Sequence[int]]) -> "Instance":
        """A copy with ``clauses`` appended to ``group``."""
        if group not in GROUP_ORDER:
            raise ValueError(f"unknown clause group {group!r}")
        new = [tuple(c) for c in clauses]
        _check_ids(new, self.num_vars)
        groups = {g: list(cs) for g, cs in self.groups.items()}
        groups.setdefault(group, []).extend(new)
        return replace(self, groups=groups, provenance=dict(self.provenance))

    def with_cards(self, cards: Iterable[CardinalityConstraint]) -> "Instance":
        cards = list(cards)
        _check_ids([c.literals for c in cards], self.num_vars)
        return replace(self, cards=self.cards + cards, provenance=dict(self.provenance))

    def is_satisfied_by(self, true_vars) -> bool:
        """Check an assignment given as the set of true ids (others false)."""
        true_vars = set(true_vars)
        for c in self.clauses:
            if not any((l > 0) == (abs(l) in true_vars) for l in c):
                return False
        return all(card.satisfied(true_vars) for card in self.cards)


def _check_ids(clauses, num_vars):
    for c in clauses:
        for l in c:
            if l == 0 or abs(l) > num_vars:
                raise ValueError(f"literal {l} references an undeclared variable (have {num_vars})")


def build_path_constraints(n: int) -> List[Clause]:
    if n < 1:
        raise ValueError("n must be positive")
    v = VarMap(n)
    m = n - 1
    out: List[Clause] = [(v(0, 0),)]
    for x, y in region_points(n):
        if x + y != m:
            out.append((-v(x, y), v(x + 1, y), v(x, y + 1)))
            out.append((-v(x + 1, y), -v(x, y + 1)))
    for x, y in region_points(n):
        if x >= 1 and y >= 1:
            out.append((-v(x, y), v(x - 1, y), v(x, y - 1)))
        elif x == 0 and y >= 1:
            out.append((-v(0, y), v(0, y - 1)))
        elif y == 0 and x >= 1:
            out.append((-v(x, 0), v(x - 1, 0)))
    return out


def build_hv_clauses(k: int, n: int) -> List[Clause]:
    """k points on an axis-parallel line need k - 1 consecutive equal steps."""
    v = VarMap(n)
    out = []
    for i in range(n):
        for j in range(n - i - k + 1):
            out.append((-v(i, j), -v(i, j + k - 1)))
    for j in range(n):
        for i in range(n - j - k + 1):
            out.append((-v(i, j), -v(i + k - 1, j)))
    return out


def build_noncollinearity(
    k: int,
    n: int,
    threshold: Optional[int] = None,
    use_prop1: bool = True,
    band: bool = False,
) -> Tuple[List[CardinalityConstraint], List[Clause]]:
    """At-most-(k-1) constraints for sloped lines plus axis-line binary clauses.

    ``threshold`` drops lines with ``threshold`` or fewer points.  This keeps
    UNSAT answers sound but SAT models must be re-validated.
    """
    if k < 3:
        raise ValueError(f"k must be at least 3, got {k}")
    if n < k:
        return [], []
    v = VarMap(n)
    min_points = k if threshold is None else max(k, threshold + 1)
    cards = [
        CardinalityConstraint(tuple(v(*p) for p in pts), k - 1, AT_MOST, line)
        for line, pts in enumerate_lines(k, n, use_prop1, min_points, band=band).items()
    ]
    return cards, build_hv_clauses(k, n)


def line_constraint(line: Line, k: int, n: int) -> CardinalityConstraint:
    v = VarMap(n)
    return CardinalityConstraint(tuple(v(*p) for p in line_points(line, n)), k - 1, AT_MOST, line)


def build_symmetry_breaking(n: int) -> List[Clause]:
    """First step north (breaks the complement symmetry)."""
    return [(var_id(0, 1, n),)] if n >= 2 else []


def extremal_points(k: int, n: int, north_first: bool = True) -> List[Point]:
    """Points a GR(k) walk can never visit, per the two extremal lines.

    The east-side line ``y = (x - 1)/(k - 2)`` assumes a north first step;
    without that assumption the mirror of the north-side line is used.
    """
    pts = []
    for x in range(n):
        if not x < n / (k - 1) - 1:
            break
        pts.append((x, (k - 2) * x + k - 1))
    for y in range(n):
        if north_first:
            if not y < (n - 1) / (k - 1):
                break
            pts.append(((k - 2) * y + 1, y))
        else:
            if not y < n / (k - 1) - 1:
                break
            pts.append(((k - 2) * y + k - 1, y))
    return [p for p in pts if in_region(p, n)]


def build_extremal_blocking(k: int, n: int, north_first: bool = True) -> List[Clause]:
    if k < 3:
        raise ValueError(f"k must be at least 3, got {k}")
    return [(-var_id(x, y, n),) for x, y in extremal_points(k, n, north_first)]


def build_unreachability(db, k: int, n: int, north_first: bool = True) -> Tuple[List[Clause], List[Clause]]:
    """Unit clauses for unreachable points and translated binary clauses.

    Binary clauses ``v(x0,y0) -> -v(x0+x, y0+y)`` are emitted only for points
    whose mirror is also unreachable, since the database follows the
    north-first convention.  For the same reason, without ``north_first``
    only those points get unit clauses.
    """
    if db.k != k:
        raise ValueError(f"reachability database is for k={db.k}, instance has k={k}")
    v = VarMap(n)
    blocked = db.unreachable() if north_first else db.mirror_complete()
    units = [(-v(x, y),) for x, y in blocked if x + y < n]
    binary = []
    for x, y in db.mirror_complete():
        if x + y >= n - 1:
            continue
        for x0, y0 in region_points(n - x - y):
            binary.append((-v(x0, y0), -v(x0 + x, y0 + y)))
    return units, binary


def band_offset(p: Point) -> int:
    """Whole lattice points between ``p`` and the line ``y = x + 1`` along p's antidiagonal."""
    return abs(p[1] - p[0] - 1) // 2


def build_streamline_band(n: int, width: int) -> List[Clause]:
    """Block points more than ``width`` lattice points off ``y = x + 1``.

    Distance is measured along each antidiagonal; on antidiagonals the
    midline misses, the two nearest points count as offset 0.
    """
    if width < 0:
        raise ValueError("band width must be nonnegative")
    return [(-var_id(x, y, n),) for x, y in region_points(n) if band_offset((x, y)) > width]


def pin_endpoint(x: int, y: int, n: int) -> List[Clause]:
    return [(var_id(x, y, n),)]


def build_subpath_extension(subpath: str, n: int, base: Optional[int] = None) -> Tuple[ExtensionVars, List[Clause]]:
    """Force ``subpath`` to occur as a contiguous run of steps.

    Step ``i`` (1-based) goes from antidiagonal ``i - 1`` to ``i``; ``s_i``
    means the subpath occupies steps ``i + 1 .. i + len(subpath)``.
    """
    check_walk(subpath)
    ell = len(subpath)
    if ell >= n:
        raise ValueError(f"subpath of {ell} steps does not fit in {n} points")
    v = VarMap(n)
    nxt = num_point_vars(n) + 1 if base is None else base
    r = {}
    for i in range(1, n):
        r[i] = nxt
        nxt += 1
    s = {}
    for i in range(n - ell):
        s[i] = nxt
        nxt += 1
    out: List[Clause] = []
    for x, y in region_points(n):
        if x > 0:
            out.append((-v(x - 1, y), -v(x, y), r[x + y]))
            out.append((-v(x, y), -r[x + y], v(x - 1, y)))
        if y > 0:
            out.append((-v(x, y - 1), -v(x, y), -r[x + y]))
            out.append((-v(x, y), r[x + y], v(x, y - 1)))
    for i, si in s.items():
        for j, step in enumerate(subpath):
            out.append((-si, r[i + j + 1] if step == "E" else -r[i + j + 1]))
    out.append(tuple(s.values()))
    return ExtensionVars(subpath, r, s), out


def assemble_instance(
    k: int,
    n: int,
    *,
    path: Sequence[Clause],
    symmetry: Sequence[Clause] = (),
    extremal: Sequence[Clause] = (),
    unreachability: Sequence[Clause] = (),
    hv: Sequence[Clause] = (),
    cards: Sequence[CardinalityConstraint] = (),
    extension: Optional[Tuple[ExtensionVars, Sequence[Clause]]] = None,
    streamline: Sequence[Clause] = (),
    pins: Sequence[Clause] = (),
    provenance: Optional[dict] = None,
) -> Instance:
    num_vars = num_point_vars(n)
    ext_vars = None
    groups: Dict[str, List[Clause]] = {
        "path": list(path),
        "symmetry": list(symmetry),
        "extremal": list(extremal),
        "unreachability": list(unreachability),
        "hv": list(hv),
        "extension": [],
        "streamline": list(streamline),
        "pins": list(pins),
    }
    if extension is not None:
        ext_vars, ext_clauses = extension
        ids = sorted(list(ext_vars.r.values()) + list(ext_vars.s.values()))
        if ids and ids != list(range(num_vars + 1, num_vars + 1 + len(ids))):
            raise ValueError("extension variables collide with point variables or leave gaps")
        num_vars += len(ids)
        groups["extension"] = list(ext_clauses)
    _check_ids([c for cs in groups.values() for c in cs], num_vars)
    _check_ids([c.literals for c in cards], num_vars)
    return Instance(k, n, VarMap(n), groups, list(cards), num_vars, dict(provenance or {}), ext_vars)


def default_threshold(k: int, n: int, final_unsat: bool = False) -> Optional[int]:
    """Constraint-removal threshold used in practice for each k."""
    if k <= 5:
        return None
    if k == 6:
        return 13 if final_unsat else None
    if k == 7 and n >= 150:
        return 16
    return None


def build_instance(
    k: int,
    n: int,
    *,
    symmetry: Optional[bool] = None,
    extremal: bool = True,
    use_prop1: bool = True,
    threshold: Optional[int] = None,
    band: bool = False,
    db=None,
    streamline: Optional[int] = None,
    pin: Optional[Point] = None,
    subpath: Optional[str] = None,
) -> Instance:
    """Assemble the standard instance for an ``n``-point GR(k) walk.

    ``symmetry`` defaults to on, except with a ``subpath``: the symmetries
    move the subpath too, so fixing the first step would lose walks.
    """
    if k < 3:
        raise ValueError(f"k must be at least 3, got {k}")
    if symmetry is None:
        symmetry = subpath is None
    cards, hv = build_noncollinearity(k, n, threshold, use_prop1, band)
    units, binary = build_unreachability(db, k, n, symmetry) if db is not None else ([], [])
    ext = build_subpath_extension(subpath, n) if subpath is not None else None
    prov = {
        "threshold": threshold,
        "prop1": use_prop1,
        "band": band,
        "symmetry": symmetry,
        "extremal": extremal,
        "streamline": streamline,
        "pin": pin,
        "subpath": subpath,
        "unreachable": len(units),
    }
    return assemble_instance(
        k,
        n,
        path=build_path_constraints(n),
        symmetry=build_symmetry_breaking(n) if symmetry else (),
        extremal=build_extremal_blocking(k, n, symmetry) if extremal else (),
        unreachability=units + binary,
        hv=hv,
        cards=cards,
        extension=ext,
        streamline=build_streamline_band(n, streamline) if streamline is not None else (),
        pins=pin_endpoint(pin[0], pin[1], n) if pin is not None else (),
        provenance=prov,
    )
