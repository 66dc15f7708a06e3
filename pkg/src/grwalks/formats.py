"""Cardinality lowering, DIMACS / KNF / cube serialization, solver output parsing."""

from __future__ import annotations

import enum
import io
import re
from contextlib import contextmanager
from dataclasses import dataclass
from pathlib import Path
from typing import FrozenSet, Iterable, List, Optional, Sequence, Tuple

from .encoding import GROUP_ORDER, CardinalityConstraint, Instance, num_point_vars, var_point
from .geometry import Point
from .walk import Walk, points_to_steps

SEQCOUNTER = "seqcounter"
TOTALIZER = "totalizer"
METHODS = (SEQCOUNTER, TOTALIZER)


class MalformedOutput(ValueError):
    pass


class DecodeError(ValueError):
    pass


# --- cardinality lowering ---------------------------------------------------


def _seqcounter(lits: Sequence[int], b: int, nxt: int) -> Tuple[List[Tuple[int, ...]], int]:
    # Sinz 2005: s[i][j] <=> at least j+1 of lits[0..i] are true
    s = len(lits)
    reg = [[nxt + i * b + j for j in range(b)] for i in range(s - 1)]
    out = [(-lits[0], reg[0][0])]
    out += [(-reg[0][j],) for j in range(1, b)]
    for i in range(1, s - 1):
        x = lits[i]
        out.append((-x, reg[i][0]))
        out.append((-reg[i - 1][0], reg[i][0]))
        for j in range(1, b):
            out.append((-x, -reg[i - 1][j - 1], reg[i][j]))
            out.append((-reg[i - 1][j], reg[i][j]))
        out.append((-x, -reg[i - 1][b - 1]))
    out.append((-lits[s - 1], -reg[s - 2][b - 1]))
    return out, (s - 1) * b


def _totalizer(lits: Sequence[int], b: int, nxt: int) -> Tuple[List[Tuple[int, ...]], int]:
    # unary counters merged bottom-up, each truncated at b + 1
    clauses: List[Tuple[int, ...]] = []
    start = nxt

    def build(chunk):
        nonlocal nxt
        if len(chunk) == 1:
            return [chunk[0]]
        mid = len(chunk) // 2
        left, right = build(chunk[:mid]), build(chunk[mid:])
        width = min(len(left) + len(right), b + 1)
        outs = list(range(nxt, nxt + width))
        nxt += width
        for i in range(len(left) + 1):
            for j in range(len(right) + 1):
                if i + j == 0:
                    continue
                body = []
                if i:
                    body.append(-left[i - 1])
                if j:
                    body.append(-right[j - 1])
                clauses.append(tuple(body) + (outs[min(i + j, width) - 1],))
        return outs

    root = build(list(lits))
    clauses.append((-root[b],))
    return clauses, nxt - start


def lower_cardinality(card: CardinalityConstraint, method: str = SEQCOUNTER, next_aux: int = 1):
    """Clauses equivalent (on the original literals) to ``card``.

    Returns ``(clauses, consumed_aux_count)``; auxiliaries are numbered from
    ``next_aux``.
    """
    card = card.as_at_most()
    lits, b = list(card.literals), card.bound
    if b >= len(lits):
        return [], 0
    if b == 0:
        return [(-l,) for l in lits], 0
    if method == SEQCOUNTER:
        return _seqcounter(lits, b, next_aux)
    if method == TOTALIZER:
        return _totalizer(lits, b, next_aux)
    raise ValueError(f"unknown cardinality encoding {method!r}")


@dataclass
class LoweredInstance:
    variable_count: int
    clauses: List[Tuple[int, ...]]
    method: str


def lower_instance(instance: Instance, method: str = SEQCOUNTER) -> LoweredInstance:
    """Plain CNF in the fixed group order, lowered cards right after ``hv``."""
    nxt = instance.aux_var_base
    clauses: List[Tuple[int, ...]] = []
    for group in GROUP_ORDER:
        clauses.extend(instance.groups.get(group, ()))
        if group == "hv":
            for card in instance.cards:
                cs, used = lower_cardinality(card, method, nxt)
                clauses.extend(cs)
                nxt += used
    return LoweredInstance(nxt - 1, clauses, method)


# --- writers ----------------------------------------------------------------


@contextmanager
def _sink(sink):
    if isinstance(sink, (str, Path)):
        with open(sink, "w") as fh:
            yield fh
    else:
        yield sink


def _clause_line(c) -> str:
    return " ".join(map(str, c)) + " 0\n"


def dimacs_text(instance: Instance, method: str = SEQCOUNTER) -> str:
    low = lower_instance(instance, method)
    buf = io.StringIO()
    buf.write(f"p cnf {low.variable_count} {len(low.clauses)}\n")
    buf.writelines(_clause_line(c) for c in low.clauses)
    return buf.getvalue()


def write_dimacs(instance: Instance, sink, method: str = SEQCOUNTER) -> None:
    text = dimacs_text(instance, method)
    with _sink(sink) as fh:
        fh.write(text)


def klause_line(card: CardinalityConstraint) -> str:
    card = card.as_at_least()
    return f"k {card.bound} " + " ".join(map(str, card.literals)) + " 0\n"


def knf_text(instance: Instance) -> str:
    lines = []
    for group in GROUP_ORDER:
        lines.extend(_clause_line(c) for c in instance.groups.get(group, ()))
        if group == "hv":
            lines.extend(klause_line(card) for card in instance.cards)
    return f"p knf {instance.num_vars} {len(lines)}\n" + "".join(lines)


def write_knf(instance: Instance, sink) -> None:
    text = knf_text(instance)
    with _sink(sink) as fh:
        fh.write(text)


def cubes_text(cubes: Sequence[Sequence[int]]) -> str:
    if not cubes:
        raise ValueError("no cubes to write")
    out = []
    for cube in cubes:
        lits = list(dict.fromkeys(cube))
        if any(-l in lits for l in lits):
            raise ValueError(f"contradictory cube {cube}")
        out.append("a " + " ".join(map(str, lits)) + " 0\n")
    return "".join(out)


def write_cubes(cubes: Sequence[Sequence[int]], sink) -> None:
    text = cubes_text(cubes)
    with _sink(sink) as fh:
        fh.write(text)


def read_cubes(path) -> List[List[int]]:
    cubes = []
    for raw in Path(path).read_text().splitlines():
        fields = raw.split()
        if not fields or fields[0] != "a":
            continue
        if fields[-1] != "0":
            raise MalformedOutput(f"cube line not 0-terminated: {raw!r}")
        cubes.append([int(f) for f in fields[1:-1]])
    return cubes


# --- readers ----------------------------------------------------------------


@dataclass
class Formula:
    """A parsed CNF or KNF file.  ``klauses`` holds ``(bound, literals)`` at-least pairs."""

    num_vars: int
    clauses: List[List[int]]
    klauses: List[Tuple[int, List[int]]]
    dialect: str


def parse_formula(text: str) -> Formula:
    header = None
    clauses: List[List[int]] = []
    klauses: List[Tuple[int, List[int]]] = []
    for raw in text.splitlines():
        fields = raw.split()
        if not fields or fields[0] == "c":
            continue
        if fields[0] == "p":
            if len(fields) != 4 or fields[1] not in ("cnf", "knf"):
                raise MalformedOutput(f"bad header {raw!r}")
            header = (fields[1], int(fields[2]), int(fields[3]))
            continue
        if header is None:
            raise MalformedOutput("clause before header")
        if fields[-1] != "0":
            raise MalformedOutput(f"line not 0-terminated: {raw!r}")
        if fields[0] == "k":
            if header[0] != "knf":
                raise MalformedOutput("klause in a cnf file")
            klauses.append((int(fields[1]), [int(f) for f in fields[2:-1]]))
        else:
            clauses.append([int(f) for f in fields[:-1]])
    if header is None:
        raise MalformedOutput("missing header")
    dialect, nv, nc = header
    if len(clauses) + len(klauses) != nc:
        raise MalformedOutput(f"header declares {nc} constraints, found {len(clauses) + len(klauses)}")
    return Formula(nv, clauses, klauses, dialect)


def knf_to_cnf(text: str, method: str = SEQCOUNTER) -> str:
    """Lower every klause of a KNF file, keeping ordinary clauses in place."""
    f = parse_formula(text)
    nxt = f.num_vars + 1
    out: List[Tuple[int, ...]] = []
    for line in text.splitlines():
        fields = line.split()
        if not fields or fields[0] in ("c", "p"):
            continue
        if fields[0] == "k":
            card = CardinalityConstraint(tuple(int(x) for x in fields[2:-1]), int(fields[1]), "at-least")
            cs, used = lower_cardinality(card, method, nxt)
            out.extend(cs)
            nxt += used
        else:
            out.append(tuple(int(x) for x in fields[:-1]))
    return f"p cnf {nxt - 1} {len(out)}\n" + "".join(_clause_line(c) for c in out)


# --- solver output ----------------------------------------------------------


class Status(str, enum.Enum):
    SAT = "SAT"
    UNSAT = "UNSAT"
    UNKNOWN = "UNKNOWN"


@dataclass
class SolverResult:
    status: Status
    model: Optional[FrozenSet[int]] = None
    wall_time: float = 0.0
    solver: str = ""
    seed: int = 0

    def __post_init__(self):
        if (self.model is not None) != (self.status == Status.SAT):
            raise ValueError("a model is present exactly when the status is SAT")


_STATUS_RE = re.compile(r"^s\s+(\S.*?)\s*$", re.M)


def parse_solver_output(text: str, solver: str = "", seed: int = 0, wall_time: float = 0.0) -> SolverResult:
    """Competition-format output: ``s`` status lines and ``v`` value lines."""
    seen = set()
    for m in _STATUS_RE.finditer(text):
        word = m.group(1).upper()
        if word == "SATISFIABLE":
            seen.add(Status.SAT)
        elif word == "UNSATISFIABLE":
            seen.add(Status.UNSAT)
        elif word in ("UNKNOWN", "INDETERMINATE"):
            seen.add(Status.UNKNOWN)
        else:
            raise MalformedOutput(f"unrecognized status line {m.group(0)!r}")
    if len(seen) > 1:
        raise MalformedOutput(f"contradictory status lines: {sorted(s.value for s in seen)}")
    status = seen.pop() if seen else Status.UNKNOWN
    model = None
    if status == Status.SAT:
        values = []
        for line in text.splitlines():
            if line.startswith("v"):
                try:
                    values.extend(int(tok) for tok in line[1:].split())
                except ValueError as exc:
                    raise MalformedOutput(f"bad value line {line!r}") from exc
        model = frozenset(v for v in values if v > 0)
    return SolverResult(status, model, wall_time, solver, seed)


def model_points(model: Iterable[int], n: int) -> List[Point]:
    top = num_point_vars(n)
    return sorted((var_point(v, n) for v in model if 0 < v <= top), key=lambda p: (p[0] + p[1], p[1]))


def decode_model(model: Iterable[int], n: int) -> Walk:
    """Turn the true point variables of a model into a walk.

    The points must form one monotone path from the origin, exactly one per
    antidiagonal up to the last point.
    """
    pts = model_points(model, n)
    if not pts or pts[0] != (0, 0):
        raise DecodeError("origin is not on the path")
    by_diag = {}
    for p in pts:
        c = p[0] + p[1]
        if c in by_diag:
            raise DecodeError(f"branching on antidiagonal {c}: {by_diag[c]} and {p}")
        by_diag[c] = p
    last = max(by_diag)
    if sorted(by_diag) != list(range(last + 1)):
        raise DecodeError("path skips an antidiagonal")
    if last != n - 1:
        raise DecodeError(f"path ends on antidiagonal {last}, expected {n - 1}")
    try:
        return points_to_steps([by_diag[c] for c in range(last + 1)])
    except ValueError as exc:
        raise DecodeError(str(exc)) from exc
