"""External solver orchestration and the search procedures built on it.

Solvers are plain processes described by a :class:`SolverSpec` command
template with ``{cnf}``, ``{seed}`` and ``{timeout}`` placeholders (and an
optional ``{proof}`` for a DRAT file, which is never read here).
"""

from __future__ import annotations

import hashlib
import json
import os
import shlex
import subprocess
import sys
import tempfile
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from . import oracle
from .encoding import Instance, build_instance, line_constraint, var_id
from .formats import (
    SEQCOUNTER,
    DecodeError,
    SolverResult,
    Status,
    decode_model,
    dimacs_text,
    knf_text,
    parse_solver_output,
)
from .geometry import Point, line_points
from .reachdb import REACHABLE, UNKNOWN, UNREACHABLE, ReachabilityDB
from .walk import Walk, collinear_groups, normal_form, steps_to_points, validate

CNF = "cnf"
KNF = "knf"

# KNF when a model is expected, CNF when refutation is expected or nothing is known
DIALECT_POLICY = {"sat": KNF, "unsat": CNF, "unknown": CNF}


class SolverError(RuntimeError):
    pass


class InvalidModel(SolverError):
    pass


class RetryLimitExceeded(SolverError):
    pass


class Incomplete(SolverError):
    """A solve came back UNKNOWN; ``partial`` holds what was established so far."""

    def __init__(self, msg, partial=None):
        super().__init__(msg)
        self.partial = partial


def choose_dialect(expectation: str = "unknown") -> str:
    return DIALECT_POLICY[expectation]


@dataclass
class SolverSpec:
    command: str
    dialect: str = CNF
    width: int = 1
    timeout: float = 3600.0
    name: str = ""
    method: str = SEQCOUNTER
    verifier: Optional[str] = None

    def __post_init__(self):
        if self.width < 1:
            raise ValueError("width must be at least 1")
        if self.timeout <= 0:
            raise ValueError("timeout must be positive")
        if self.dialect not in (CNF, KNF):
            raise ValueError(f"unknown dialect {self.dialect!r}")
        if "{cnf}" not in self.command:
            raise ValueError("command template needs a {cnf} placeholder")
        if not self.name:
            self.name = os.path.basename(shlex.split(self.command)[0])

    @classmethod
    def reference(cls, dialect: str = CNF, **kw) -> "SolverSpec":
        """The bundled PySAT-backed solver, run as a separate process."""
        cmd = f"{shlex.quote(sys.executable)} -m grwalks.refsolver {{cnf}} --seed {{seed}} --timeout {{timeout}}"
        kw.setdefault("name", f"refsolver-{dialect}")
        return cls(cmd, dialect=dialect, **kw)

    def with_dialect(self, dialect: str) -> "SolverSpec":
        return SolverSpec(self.command, dialect, self.width, self.timeout, self.name, self.method, self.verifier)

    def argv(self, path, seed: int = 0, timeout: Optional[float] = None, proof=None) -> List[str]:
        values = {
            "cnf": str(path),
            "seed": str(seed),
            "timeout": str(int(timeout if timeout is not None else self.timeout)),
            "proof": str(proof) if proof is not None else "",
        }
        return [tok.format(**values) for tok in shlex.split(self.command)]


def serialize(instance: Instance, spec: SolverSpec) -> str:
    if spec.dialect == KNF:
        return knf_text(instance)
    return dimacs_text(instance, spec.method)


def run_solver(path, spec: SolverSpec, seed: int = 0, timeout: Optional[float] = None, proof=None) -> SolverResult:
    """Run the solver on a file already on disk and parse what it prints."""
    timeout = timeout if timeout is not None else spec.timeout
    argv = spec.argv(path, seed, timeout, proof)
    t0 = time.monotonic()
    try:
        proc = subprocess.run(argv, capture_output=True, text=True, timeout=timeout + 5)
    except subprocess.TimeoutExpired:
        return SolverResult(Status.UNKNOWN, None, time.monotonic() - t0, spec.name, seed)
    except OSError as exc:
        raise SolverError(f"could not launch {argv[0]!r}: {exc}") from exc
    elapsed = time.monotonic() - t0
    result = parse_solver_output(proc.stdout, spec.name, seed, elapsed)
    if result.status == Status.UNKNOWN and proc.returncode not in (0, 10, 20):
        raise SolverError(f"{spec.name} exited with {proc.returncode}: {proc.stderr.strip()[-500:]}")
    return result


def solve_formula(instance: Instance, spec: SolverSpec, seed: int = 0, timeout: Optional[float] = None) -> SolverResult:
    with tempfile.TemporaryDirectory(prefix="grwalks-") as tmp:
        path = Path(tmp) / f"instance.{spec.dialect}"
        path.write_text(serialize(instance, spec))
        return run_solver(path, spec, seed, timeout)


def is_thinned(instance: Instance) -> bool:
    return instance.provenance.get("threshold") is not None


def restore_lines(instance: Instance, walk: Walk) -> Instance:
    """Add back constraints for every skipped line through two or more walk points."""
    have = instance.constrained_lines()
    extra = []
    for line in sorted(collinear_groups(steps_to_points(walk))):
        if line.is_vertical or line.is_horizontal or line in have:
            continue
        if len(line_points(line, instance.n)) >= instance.k:
            extra.append(line_constraint(line, instance.k, instance.n))
    new = instance.with_cards(extra)
    new.provenance["restored"] = instance.provenance.get("restored", 0) + len(extra)
    return new


@dataclass
class SolveOutcome:
    result: SolverResult
    walk: Optional[Walk]
    retries: int = 0
    instance: Optional[Instance] = None


def solve_instance(
    instance: Instance,
    spec: SolverSpec,
    seed: int = 0,
    timeout: Optional[float] = None,
    max_retries: int = 3,
) -> SolveOutcome:
    """Solve, decode and validate.

    A model of a thinned instance that fails validation triggers a re-solve
    with the offending lines restored.  UNSAT of a thinned instance stands.
    """
    inst = instance
    for attempt in range(max_retries + 1):
        res = solve_formula(inst, spec, seed, timeout)
        if res.status != Status.SAT:
            return SolveOutcome(res, None, attempt, inst)
        walk = decode_model(res.model, inst.n)
        report = validate(walk, inst.k)
        if report.ok:
            return SolveOutcome(res, walk, attempt, inst)
        if not is_thinned(inst):
            raise InvalidModel(f"model of a full instance violates GR({inst.k}): {report}")
        if attempt == max_retries:
            raise RetryLimitExceeded(f"walk still invalid after {max_retries} retries: {report}")
        inst = restore_lines(inst, walk)
    raise AssertionError("unreachable")


def blocking_clause(walk: Walk, n: int) -> Tuple[int, ...]:
    return tuple(-var_id(x, y, n) for x, y in steps_to_points(walk))


def all_solutions(
    instance: Instance,
    spec: SolverSpec,
    seed: int = 0,
    timeout: Optional[float] = None,
    limit: Optional[int] = None,
) -> List[Walk]:
    """Every walk of ``instance``, found by re-solving with blocking clauses."""
    found: List[Walk] = []
    inst = instance
    while limit is None or len(found) < limit:
        res = solve_formula(inst, spec, seed, timeout)
        if res.status == Status.UNSAT:
            break
        if res.status == Status.UNKNOWN:
            raise Incomplete("solver returned UNKNOWN during enumeration", sorted(found))
        walk = decode_model(res.model, inst.n)
        if not validate(walk, inst.k).ok:
            raise InvalidModel(f"enumeration model {walk} is not a GR({inst.k}) walk")
        found.append(walk)
        inst = inst.with_clauses("blocking", [blocking_clause(walk, inst.n)])
    return sorted(found)


def update_reachability_db(db: ReachabilityDB, point: Point, status: str, **prov) -> ReachabilityDB:
    return db.update(point, status, **prov)


@dataclass
class ASearchResult:
    k: int
    a: Optional[int]
    walks: Dict[int, List[Walk]] = field(default_factory=dict)

    @property
    def maximal(self) -> List[Walk]:
        return self.walks.get(self.a - 1, []) if self.a else []


def incremental_a_search(
    k: int,
    spec: Optional[SolverSpec] = None,
    method: Optional[str] = None,
    db: Optional[ReachabilityDB] = None,
    max_m: Optional[int] = None,
    seed: int = 0,
    timeout: Optional[float] = None,
    on_step: Optional[Callable[[int, List[Walk]], None]] = None,
) -> ASearchResult:
    """Grow m until no m-step GR(k) walk exists; that m is a(k).

    ``method`` is ``"oracle"`` (default for k <= 5) or ``"sat"``, which solves
    one all-solutions instance per endpoint ``(x, m - x)`` and records every
    endpoint verdict in ``db``.
    """
    method = method or ("oracle" if k <= 5 else "sat")
    if method == "sat" and spec is None:
        raise ValueError("the sat method needs a solver spec")
    if db is None:
        db = ReachabilityDB(k)
    out = ASearchResult(k, None)
    m = 0
    while max_m is None or m <= max_m:
        if method == "oracle":
            walks = sorted({normal_form(w) for w in oracle.enumerate_all(k, m, north_first=True)})
        else:
            found = set()
            for x in range(m + 1):
                p = (x, m - x)
                inst = build_instance(k, m + 1, pin=p, db=db)
                try:
                    ws = all_solutions(inst, spec, seed, timeout)
                except Incomplete as exc:
                    raise Incomplete(f"UNKNOWN at m={m}, endpoint {p}", out) from exc
                db.update(p, REACHABLE if ws else UNREACHABLE, solver=spec.name, seed=seed)
                found.update(normal_form(w) for w in ws)
            walks = sorted(found)
        if on_step is not None:
            on_step(m, walks)
        if not walks:
            out.a = m
            return out
        out.walks[m] = walks
        m += 1
    return out


@dataclass
class FrontierResult:
    upper: List[Point]
    lower: List[Point]
    db: ReachabilityDB
    solved: int = 0


def _outside_extremal(p: Point, k: int) -> bool:
    # north-first convention: y < (k-2)x + (k-1) and x < (k-2)y + 1
    x, y = p
    return not (y < (k - 2) * x + (k - 1) and x < (k - 2) * y + 1)


def sat_reachability(k: int, spec: SolverSpec, db: Optional[ReachabilityDB] = None, seed=0, timeout=None):
    """A verdict function for :func:`frontier_bounds` backed by an external solver."""

    def decide(p: Point) -> Tuple[str, float]:
        inst = build_instance(k, p[0] + p[1] + 1, pin=p, db=db)
        res = solve_formula(inst, spec, seed, timeout)
        if res.status == Status.SAT:
            walk = decode_model(res.model, inst.n)
            if not validate(walk, k).ok:
                raise InvalidModel(f"reachability witness {walk} is not GR({k})")
            return REACHABLE, res.wall_time
        if res.status == Status.UNSAT:
            return UNREACHABLE, res.wall_time
        return UNKNOWN, res.wall_time

    return decide


def frontier_bounds(
    k: int,
    n_max: int,
    spec: Optional[SolverSpec] = None,
    db: Optional[ReachabilityDB] = None,
    decide: Optional[Callable[[Point], Tuple[str, float]]] = None,
    seed: int = 0,
    timeout: Optional[float] = None,
) -> FrontierResult:
    """Trace the north-most and east-most reachable points of each antidiagonal.

    Both frontiers start at ``(0, 1)`` and stop once ``x + y`` reaches
    ``n_max``.  Known verdicts are reused; points beyond the extremal lines
    are recorded unreachable without solving.
    """
    if db is None:
        db = ReachabilityDB(k)
    if db.k != k:
        raise ValueError(f"database is for k={db.k}")
    if decide is None:
        if spec is None:
            raise ValueError("need a solver spec or a decide function")
        decide = sat_reachability(k, spec.with_dialect(choose_dialect("unknown")), db, seed, timeout)
    name = spec.name if spec is not None else "custom"
    solved = [0]

    def verdict(p: Point) -> str:
        st = db.status(p)
        if st != UNKNOWN:
            return st
        if _outside_extremal(p, k):
            db.update(p, UNREACHABLE, solver="extremal")
            return UNREACHABLE
        st, t = decide(p)
        solved[0] += 1
        if st == UNKNOWN:
            raise Incomplete(f"UNKNOWN verdict at {p}", FrontierResult(upper, lower, db, solved[0]))
        db.update(p, st, solver=name, seed=seed, time=t)
        return st

    upper: List[Point] = []
    lower: List[Point] = []
    db.update((0, 0), REACHABLE, solver="trivial")
    x, y = 0, 1
    while x + y < n_max and y >= 0:
        if verdict((x, y)) == REACHABLE:
            upper.append((x, y))
            y += 1
        else:
            x, y = x + 1, y - 1
    x, y = 0, 1
    while x + y < n_max and x >= 0:
        if verdict((x, y)) == REACHABLE:
            lower.append((x, y))
            x += 1
        else:
            x, y = x - 1, y + 1
    return FrontierResult(upper, lower, db, solved[0])


def negative_units(instance: Instance) -> set:
    return {-c[0] for c in instance.clauses if len(c) == 1 and c[0] < 0}


def generate_antidiagonal_cubes(instance: Instance, c: int) -> List[List[int]]:
    """One single-literal cube per unblocked point of antidiagonal ``c``.

    Every walk crosses antidiagonal ``c`` exactly once, so the cubes split
    the solution set into disjoint parts.
    """
    if not 0 <= c < max(instance.n - 1, 1):
        raise ValueError(f"antidiagonal {c} out of range for n={instance.n}")
    blocked = negative_units(instance)
    cubes = []
    for x in range(c + 1):
        v = var_id(x, c - x, instance.n)
        if v not in blocked:
            cubes.append([v])
    return cubes


def instance_hash(text: str) -> str:
    return hashlib.sha256(text.encode()).hexdigest()[:16]


@dataclass
class JobRecord:
    job: int
    instance: str
    cube: Optional[List[int]]
    seed: int
    status: str
    walk: Optional[Walk] = None
    normal_form: Optional[Walk] = None
    time: float = 0.0
    solver: str = ""
    error: Optional[str] = None
    proof: Optional[str] = None
    verified: Optional[bool] = None

    def to_json(self) -> str:
        return json.dumps(self.__dict__, sort_keys=True)


TIMING_FIELDS = ("time",)


@dataclass
class CampaignResult:
    records: List[JobRecord]

    @property
    def walks(self) -> set:
        return {r.normal_form for r in self.records if r.normal_form is not None}

    @property
    def raw_walks(self) -> set:
        return {r.walk for r in self.records if r.walk is not None}


def run_campaign(
    jobs: Sequence[Tuple[Instance, Optional[Sequence[int]]]],
    spec: SolverSpec,
    seeds: Iterable[int] = (0,),
    ledger=None,
    timeout: Optional[float] = None,
    proof_dir=None,
) -> CampaignResult:
    """Run every ``(instance, cube, seed)`` triple, up to ``spec.width`` at a time.

    Records are appended to ``ledger`` as they finish and the file is
    rewritten in job order at the end.  A failing job is recorded, not raised.
    """
    seeds = list(seeds)
    ledger = Path(ledger) if ledger is not None else None
    lock = threading.Lock()
    tasks = [(inst, cube, seed) for inst, cube in jobs for seed in seeds]
    texts: Dict[int, str] = {}
    for inst, _, _ in tasks:
        if id(inst) not in texts:
            texts[id(inst)] = serialize(inst, spec)

    def run(idx: int) -> JobRecord:
        inst, cube, seed = tasks[idx]
        base = texts[id(inst)]
        rec = JobRecord(idx, instance_hash(base), list(cube) if cube else None, seed, Status.UNKNOWN.value, solver=spec.name)
        try:
            job_inst = inst.with_clauses("cube", [[l] for l in dict.fromkeys(cube)]) if cube else inst
            with tempfile.TemporaryDirectory(prefix="grwalks-job-") as tmp:
                path = Path(tmp) / f"job{idx}.{spec.dialect}"
                path.write_text(serialize(job_inst, spec) if cube else base)
                proof = Path(proof_dir) / f"job{idx}.drat" if proof_dir is not None else None
                res = run_solver(path, spec, seed, timeout, proof)
                rec.status, rec.time = res.status.value, res.wall_time
                if proof is not None and "{proof}" in spec.command:
                    rec.proof = str(proof)
                    if res.status == Status.UNSAT and spec.verifier:
                        argv = [t.format(cnf=path, proof=proof) for t in shlex.split(spec.verifier)]
                        rec.verified = subprocess.run(argv, capture_output=True).returncode == 0
            if res.status == Status.SAT:
                walk = decode_model(res.model, inst.n)
                rec.walk = walk
                if validate(walk, inst.k).ok:
                    rec.normal_form = normal_form(walk)
                else:
                    rec.error = "model violates collinearity"
        except (SolverError, DecodeError, OSError, ValueError) as exc:
            rec.status = "ERROR"
            rec.error = f"{type(exc).__name__}: {exc}"
        if ledger is not None:
            with lock, ledger.open("a") as fh:
                fh.write(rec.to_json() + "\n")
        return rec

    with ThreadPoolExecutor(max_workers=spec.width) as pool:
        records = list(pool.map(run, range(len(tasks))))
    if ledger is not None:
        tmp = ledger.with_suffix(ledger.suffix + ".tmp")
        tmp.write_text("".join(r.to_json() + "\n" for r in records))
        tmp.replace(ledger)
    return CampaignResult(records)


def read_ledger(path) -> List[dict]:
    return [json.loads(line) for line in Path(path).read_text().splitlines() if line.strip()]
