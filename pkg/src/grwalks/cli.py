"""Command-line entry point.

Exit status: 0 success, 10 satisfiable, 20 unsatisfiable (``solve`` and
``extend --solve``), 1 on errors or invalid walks, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import driver, formats, geometry, oracle
from .encoding import build_instance
from .reachdb import ReachabilityDB
from .walk import dedup, read_walks, validate, write_walks

EXIT_OK, EXIT_ERR, EXIT_SAT, EXIT_UNSAT = 0, 1, 10, 20


def _point(text: str):
    try:
        x, y = (int(t) for t in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected X,Y, got {text!r}")
    return (x, y)


def _instance_args(p: argparse.ArgumentParser, need_n=True):
    p.add_argument("--k", type=int, required=True)
    if need_n:
        p.add_argument("--n", type=int, required=True, help="number of points (steps + 1)")
    p.add_argument("--no-prop1", dest="prop1", action="store_false", help="keep lines of every positive slope")
    p.add_argument("--threshold", type=int, default=None, help="drop lines with this many region points or fewer")
    p.add_argument("--band", action="store_true", help="only count points inside the extremal band")
    p.add_argument("--no-symmetry", dest="symmetry", action="store_const", const=False, default=None)
    p.add_argument("--no-extremal", dest="extremal", action="store_false")
    p.add_argument("--streamline", type=int, default=None, metavar="W")
    p.add_argument("--endpoint", type=_point, default=None, metavar="X,Y")
    p.add_argument("--db", type=Path, default=None, help="reachability database file")
    sub = p.add_mutually_exclusive_group()
    sub.add_argument("--subpath", default=None, help="steps that must occur, e.g. NNEN")
    sub.add_argument("--subpath-file", type=Path, default=None, help="walk file; its first walk is the subpath")


def _solver_args(p: argparse.ArgumentParser):
    p.add_argument("--solver", default=None, help="command template with {cnf} {seed} {timeout}")
    p.add_argument("--dialect", choices=["cnf", "knf"], default=None)
    p.add_argument("--method", choices=list(formats.METHODS), default=formats.SEQCOUNTER)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--timeout", type=float, default=3600.0)
    p.add_argument("--width", type=int, default=1)


def _build(args, n=None):
    subpath = args.subpath
    if args.subpath_file is not None:
        walks = read_walks(args.subpath_file)
        if not walks:
            raise ValueError(f"{args.subpath_file} holds no walk")
        subpath = walks[0]
    db = ReachabilityDB(args.k, args.db) if args.db is not None else None
    return build_instance(
        args.k,
        n if n is not None else args.n,
        symmetry=args.symmetry,
        extremal=args.extremal,
        use_prop1=args.prop1,
        threshold=args.threshold,
        band=args.band,
        db=db,
        streamline=args.streamline,
        pin=args.endpoint,
        subpath=subpath,
    )


def _spec(args, expectation="unknown"):
    dialect = args.dialect or driver.choose_dialect(expectation)
    if args.solver is None:
        return driver.SolverSpec.reference(dialect, width=args.width, timeout=args.timeout, method=args.method)
    return driver.SolverSpec(args.solver, dialect, args.width, args.timeout, method=args.method)


def _write_instance(inst, fmt, method, out):
    if fmt == "knf":
        formats.write_knf(inst, out)
    else:
        formats.write_dimacs(inst, out, method)


def cmd_encode(args):
    inst = _build(args)
    _write_instance(inst, args.format, args.method, args.output or sys.stdout)
    return EXIT_OK


def _report_solve(outcome, out=None):
    res = outcome.result
    print(f"status: {res.status.value} ({res.wall_time:.2f}s, retries {outcome.retries})")
    if outcome.walk is not None:
        print(outcome.walk)
        if out is not None:
            write_walks(out, [outcome.walk])
    return {formats.Status.SAT: EXIT_SAT, formats.Status.UNSAT: EXIT_UNSAT}.get(res.status, EXIT_OK)


def cmd_solve(args):
    inst = _build(args)
    outcome = driver.solve_instance(inst, _spec(args), args.seed, args.timeout)
    return _report_solve(outcome, args.output)


def cmd_enumerate(args):
    if args.search == "oracle":
        res = oracle.search_max(args.k, args.max_steps, args.time_budget)
        maximal, a, exhausted = res.witnesses, res.a_lower, res.exhausted
    else:
        spec = _spec(args)
        db = ReachabilityDB(args.k, args.db) if args.db is not None else None
        res = driver.incremental_a_search(args.k, spec, "sat", db=db, max_m=args.max_steps, seed=args.seed)
        maximal, a, exhausted = res.maximal, res.a, res.a is not None
    if exhausted:
        print(f"a({args.k}) = {a}")
    else:
        print(f"a({args.k}) >= {a} (search incomplete)")
    print(f"{len(maximal)} maximal walk(s) of {a - 1} steps in normal form")
    if args.output:
        write_walks(args.output, maximal, header=f"maximal GR({args.k}) walks, normal form")
    else:
        for w in maximal:
            print(w)
    return EXIT_OK if exhausted else EXIT_ERR


def cmd_validate(args):
    bad = 0
    for w in read_walks(args.file):
        report = validate(w, args.k)
        if report.ok:
            print(f"ok   {w}")
        else:
            bad += 1
            print(f"FAIL {w}: {report}")
    return EXIT_ERR if bad else EXIT_OK


def cmd_canon(args):
    walks = sorted(dedup(read_walks(args.file)), key=lambda w: (len(w), w))
    if args.output:
        write_walks(args.output, walks)
    else:
        for w in walks:
            print(w)
    return EXIT_OK


def cmd_reach(args):
    db = ReachabilityDB(args.k, args.db)
    spec = _spec(args, "unknown")
    res = driver.frontier_bounds(args.k, args.n_max, spec, db, seed=args.seed, timeout=args.timeout)
    print("upper: " + " ".join(f"({x},{y})" for x, y in res.upper))
    print("lower: " + " ".join(f"({x},{y})" for x, y in res.lower))
    print(f"{res.solved} instance(s) solved; database {args.db}")
    return EXIT_OK


def cmd_cubes(args):
    inst = _build(args)
    cubes = driver.generate_antidiagonal_cubes(inst, args.antidiagonal)
    formats.write_cubes(cubes, args.output or sys.stdout)
    if args.instance_out:
        _write_instance(inst, args.format, args.method, args.instance_out)
    print(f"{len(cubes)} cube(s) on antidiagonal {args.antidiagonal}", file=sys.stderr)
    return EXIT_OK


def cmd_extend(args):
    if args.subpath is None and args.subpath_file is None:
        raise ValueError("extend needs --subpath or --subpath-file")
    inst = _build(args)
    if args.solve:
        outcome = driver.solve_instance(inst, _spec(args), args.seed, args.timeout)
        return _report_solve(outcome)
    _write_instance(inst, args.format, args.method, args.output or sys.stdout)
    return EXIT_OK


def cmd_heatmap(args):
    counts = oracle.point_counts(args.k, args.max_steps)
    oracle.write_heatmap_csv(counts, args.output, args.which)
    return EXIT_OK


def cmd_bounds(args):
    b = geometry.theoretical_bounds(args.k)
    if b.upper_log2 is not None:
        print(f"upper: 2^{b.upper_log2}")
    else:
        print(f"upper: {b.upper_factor} * 2^{b.upper_exponent}")
    print(f"lower: {b.lower:.6g}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="grwalks", description="Lattice paths avoiding k collinear points.")
    sp = ap.add_subparsers(dest="command", required=True)

    p = sp.add_parser("encode", help="write a CNF or KNF instance")
    _instance_args(p)
    p.add_argument("--format", choices=["cnf", "knf"], default="cnf")
    p.add_argument("--method", choices=list(formats.METHODS), default=formats.SEQCOUNTER)
    p.add_argument("-o", "--output", type=Path)
    p.set_defaults(func=cmd_encode)

    p = sp.add_parser("solve", help="encode, run a solver, validate the walk")
    _instance_args(p)
    _solver_args(p)
    p.add_argument("-o", "--output", type=Path, help="write the walk found here")
    p.set_defaults(func=cmd_solve)

    p = sp.add_parser("enumerate", help="determine a(k) and the maximal walks")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--method", dest="search", choices=["oracle", "sat"], default="oracle")
    p.add_argument("--max-steps", type=int, default=None)
    p.add_argument("--time-budget", type=float, default=None)
    p.add_argument("--db", type=Path, default=None)
    p.add_argument("--solver", default=None)
    p.add_argument("--dialect", choices=["cnf", "knf"], default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--timeout", type=float, default=3600.0)
    p.add_argument("-o", "--output", type=Path)
    p.set_defaults(func=cmd_enumerate, width=1, method=formats.SEQCOUNTER)

    p = sp.add_parser("validate", help="check walks for k collinear points")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("file", type=Path)
    p.set_defaults(func=cmd_validate)

    p = sp.add_parser("canon", help="normal forms, duplicates removed")
    p.add_argument("file", type=Path)
    p.add_argument("-o", "--output", type=Path)
    p.set_defaults(func=cmd_canon)

    p = sp.add_parser("reach", help="trace the reachability frontier")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--db", type=Path, required=True)
    _solver_args(p)
    p.set_defaults(func=cmd_reach)

    p = sp.add_parser("cubes", help="split an instance on one antidiagonal")
    _instance_args(p)
    p.add_argument("--antidiagonal", "-c", type=int, required=True)
    p.add_argument("--format", choices=["cnf", "knf"], default="cnf")
    p.add_argument("--method", choices=list(formats.METHODS), default=formats.SEQCOUNTER)
    p.add_argument("--instance-out", type=Path, default=None)
    p.add_argument("-o", "--output", type=Path)
    p.set_defaults(func=cmd_cubes)

    p = sp.add_parser("extend", help="instances that must contain a given subpath")
    _instance_args(p)
    _solver_args(p)
    p.add_argument("--format", choices=["cnf", "knf"], default="cnf")
    p.add_argument("--solve", action="store_true")
    p.add_argument("-o", "--output", type=Path)
    p.set_defaults(func=cmd_extend)

    p = sp.add_parser("heatmap", help="CSV of normal-form walk counts per point")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--max-steps", type=int, default=None)
    p.add_argument("--which", choices=["end", "passing"], default="end")
    p.add_argument("-o", "--output", type=Path, required=True)
    p.set_defaults(func=cmd_heatmap)

    p = sp.add_parser("bounds", help="the explicit theoretical bounds")
    p.add_argument("--k", type=int, required=True)
    p.set_defaults(func=cmd_bounds)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError, driver.SolverError) as exc:
        print(f"grwalks {args.command}: {exc}", file=sys.stderr)
        return EXIT_ERR


if __name__ == "__main__":
    sys.exit(main())
