"""Persistent per-k reachability verdicts under the north-first-step convention.

File format, one record per line::

    k x y status [solver seed time]

Lines starting with ``#`` are comments.  Records are append-only so a crashed
campaign loses at most the record being written.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Iterator, List, Optional, Tuple

from .geometry import Point

REACHABLE = "reachable"
UNREACHABLE = "unreachable"
UNKNOWN = "unknown"
STATUSES = (REACHABLE, UNREACHABLE, UNKNOWN)


class ConflictingVerdict(ValueError):
    pass


@dataclass(frozen=True)
class Provenance:
    solver: str = "-"
    seed: int = 0
    time: float = 0.0


class ReachabilityDB:
    """Map ``point -> status`` for one k, optionally mirrored to a file."""

    convention = "north-first"

    def __init__(self, k: int, path=None):
        self.k = k
        self.path = Path(path) if path is not None else None
        self._status: Dict[Point, str] = {}
        self._prov: Dict[Point, Provenance] = {}
        self._lock = threading.Lock()
        if self.path is not None and self.path.exists():
            self._load()

    def _load(self):
        for raw in self.path.read_text().splitlines():
            fields = raw.split()
            if not fields or fields[0].startswith("#"):
                continue
            k, x, y, status = int(fields[0]), int(fields[1]), int(fields[2]), fields[3]
            if k != self.k:
                raise ValueError(f"{self.path}: record for k={k} in a k={self.k} database")
            prov = Provenance()
            if len(fields) >= 7:
                prov = Provenance(fields[4], int(fields[5]), float(fields[6]))
            self._set((x, y), status, prov)

    def _set(self, point, status, prov):
        if status not in STATUSES:
            raise ValueError(f"unknown status {status!r}")
        if point[0] < 0 or point[1] < 0:
            raise ValueError(f"{point} is not a lattice point of the quadrant")
        old = self._status.get(point, UNKNOWN)
        if status == UNKNOWN:
            if old == UNKNOWN:
                self._status[point] = UNKNOWN
                self._prov[point] = prov
            return False
        if old not in (UNKNOWN, status):
            raise ConflictingVerdict(f"{point}: already {old}, refusing {status}")
        changed = old != status
        self._status[point] = status
        self._prov[point] = prov
        return changed

    def update(self, point: Point, status: str, solver="-", seed=0, time=0.0) -> "ReachabilityDB":
        """Record a verdict; a settled verdict is never overwritten."""
        point = (int(point[0]), int(point[1]))
        prov = Provenance(str(solver).replace(" ", "_") or "-", int(seed), float(time))
        with self._lock:
            changed = self._set(point, status, prov)
            if changed and self.path is not None:
                with self.path.open("a") as fh:
                    fh.write(f"{self.k} {point[0]} {point[1]} {status} {prov.solver} {prov.seed} {prov.time:.3f}\n")
        return self

    def status(self, point: Point) -> str:
        return self._status.get(tuple(point), UNKNOWN)

    def provenance(self, point: Point) -> Optional[Provenance]:
        return self._prov.get(tuple(point))

    def items(self) -> Iterator[Tuple[Point, str]]:
        return iter(sorted(self._status.items()))

    def reachable(self) -> List[Point]:
        return sorted(p for p, s in self._status.items() if s == REACHABLE)

    def unreachable(self) -> List[Point]:
        return sorted(p for p, s in self._status.items() if s == UNREACHABLE)

    def mirror_complete(self) -> List[Point]:
        """Unreachable points whose mirror ``(y, x)`` is unreachable too.

        Only these are unreachable from the origin with either first step, so
        only these may be translated to other start points.
        """
        bad = set(self.unreachable())
        return sorted(p for p in bad if (p[1], p[0]) in bad)

    def __len__(self):
        return len(self._status)

    def __contains__(self, point):
        return self.status(point) != UNKNOWN
