from itertools import product

import pytest
from pysat.solvers import Solver

from helpers import sat_walks
from grwalks.encoding import (
    AT_LEAST,
    CardinalityConstraint,
    assemble_instance,
    build_instance,
    var_id,
)
from grwalks.formats import (
    METHODS,
    DecodeError,
    MalformedOutput,
    Status,
    SolverResult,
    cubes_text,
    decode_model,
    dimacs_text,
    knf_text,
    knf_to_cnf,
    lower_cardinality,
    lower_instance,
    parse_formula,
    parse_solver_output,
    read_cubes,
    write_cubes,
    write_dimacs,
    write_knf,
)


def projected_models(clauses, nvars):
    """Assignments of variables 1..nvars that extend to a model of clauses."""
    ok = set()
    with Solver(name="minisat22", bootstrap_with=clauses) as s:
        for bits in product((False, True), repeat=nvars):
            assumptions = [v + 1 if b else -(v + 1) for v, b in enumerate(bits)]
            if s.solve(assumptions=assumptions):
                ok.add(bits)
    return ok


@pytest.mark.parametrize("method", METHODS)
@pytest.mark.parametrize("size", [1, 2, 3, 5, 7])
def test_lowering_matches_cardinality(method, size):
    lits = [v if v % 2 else -v for v in range(1, size + 1)]
    for bound in range(size + 1):
        for sense in ("at-most", AT_LEAST):
            card = CardinalityConstraint(tuple(lits), bound, sense)
            clauses, used = lower_cardinality(card, method, size + 1)
            assert all(abs(l) <= size + used for c in clauses for l in c)
            got = projected_models(clauses, size)
            want = {bits for bits in product((False, True), repeat=size) if card.satisfied({v + 1 for v, b in enumerate(bits) if b})}
            assert got == want, (bound, sense)


def test_lowering_rejects_unknown_method():
    with pytest.raises(ValueError):
        lower_cardinality(CardinalityConstraint((1, 2, 3), 1), "bdd")


def tiny_instance():
    inst = assemble_instance(
        3,
        3,
        path=[(1,), (-2, -3)],
        symmetry=[(3,)],
        hv=[(-1, -6)],
        cards=[CardinalityConstraint((1, 5, 6), 2)],
    )
    return inst


def test_knf_fixture():
    assert knf_text(tiny_instance()) == "p knf 6 5\n1 0\n-2 -3 0\n3 0\n-1 -6 0\nk 1 -1 -5 -6 0\n"


def test_dimacs_fixture():
    text = dimacs_text(tiny_instance())
    lines = text.splitlines()
    assert lines[0] == "p cnf 10 12"
    assert lines[1:5] == ["1 0", "-2 -3 0", "3 0", "-1 -6 0"]
    f = parse_formula(text)
    assert f.num_vars == 10 and len(f.clauses) == 12 and f.dialect == "cnf"


def test_write_to_path_and_stream(tmp_path):
    inst = build_instance(4, 7)
    p = tmp_path / "a.cnf"
    write_dimacs(inst, p)
    assert p.read_text() == dimacs_text(inst)
    q = tmp_path / "a.knf"
    with q.open("w") as fh:
        write_knf(inst, fh)
    assert q.read_text() == knf_text(inst)


def test_lowered_aux_follow_point_vars():
    inst = build_instance(5, 15)
    low = lower_instance(inst)
    assert low.variable_count > inst.num_vars
    aux = {abs(l) for c in low.clauses for l in c if abs(l) > inst.num_vars}
    assert aux == set(range(inst.num_vars + 1, low.variable_count + 1))


@pytest.mark.parametrize("method", METHODS)
def test_methods_agree_on_walks(method):
    inst = build_instance(4, 8)
    assert sat_walks(inst, method) == sat_walks(inst)


def test_knf_round_trip_and_lowering():
    inst = build_instance(4, 9)
    f = parse_formula(knf_text(inst))
    assert f.dialect == "knf" and len(f.klauses) == len(inst.cards)
    assert all(b == len(lits) - 3 for b, lits in f.klauses)
    for n, sat in ((9, True), (10, False)):
        cnf = knf_to_cnf(knf_text(build_instance(4, n)))
        with Solver(name="cadical195", bootstrap_with=parse_formula(cnf).clauses) as s:
            assert s.solve() == sat


def test_parse_formula_errors():
    with pytest.raises(MalformedOutput):
        parse_formula("1 2 0\n")
    with pytest.raises(MalformedOutput):
        parse_formula("p cnf 2 2\n1 2 0\n")
    with pytest.raises(MalformedOutput):
        parse_formula("p cnf 2 1\nk 1 1 2 0\n")
    with pytest.raises(MalformedOutput):
        parse_formula("p cnf 2 1\n1 2\n")
    assert parse_formula("c hi\np cnf 2 1\n1 -2 0\n").clauses == [[1, -2]]


def test_cubes(tmp_path):
    assert cubes_text([[3], [4, -5, 4]]) == "a 3 0\na 4 -5 0\n"
    p = tmp_path / "c.icnf"
    write_cubes([[3], [4, -5]], p)
    assert read_cubes(p) == [[3], [4, -5]]
    with pytest.raises(ValueError):
        cubes_text([])
    with pytest.raises(ValueError):
        cubes_text([[1, -1]])
    p.write_text("a 1 2\n")
    with pytest.raises(MalformedOutput):
        read_cubes(p)


def test_parse_solver_output():
    r = parse_solver_output("c banner\ns SATISFIABLE\nv 1 -2 3\nv -4 5 0\n", "x", 3, 1.5)
    assert r.status == Status.SAT and r.model == frozenset({1, 3, 5})
    assert (r.solver, r.seed, r.wall_time) == ("x", 3, 1.5)
    assert parse_solver_output("s UNSATISFIABLE\n").status == Status.UNSAT
    assert parse_solver_output("s UNSATISFIABLE\n").model is None
    assert parse_solver_output("s UNKNOWN\n").status == Status.UNKNOWN
    assert parse_solver_output("s INDETERMINATE\n").status == Status.UNKNOWN
    assert parse_solver_output("").status == Status.UNKNOWN
    with pytest.raises(MalformedOutput):
        parse_solver_output("s SATISFIABLE\ns UNSATISFIABLE\n")
    with pytest.raises(MalformedOutput):
        parse_solver_output("s MAYBE\n")
    with pytest.raises(MalformedOutput):
        parse_solver_output("s SATISFIABLE\nv 1 x 0\n")
    with pytest.raises(ValueError):
        SolverResult(Status.UNSAT, frozenset({1}))


def test_decode_model():
    n = 4
    walk_vars = [var_id(*p, n) for p in [(0, 0), (0, 1), (1, 1), (1, 2)]]
    assert decode_model(walk_vars + [999], n) == "NEN"
    with pytest.raises(DecodeError):
        decode_model(walk_vars[1:], n)
    with pytest.raises(DecodeError):
        decode_model(walk_vars + [var_id(2, 0, n)], n)
    with pytest.raises(DecodeError):
        decode_model([walk_vars[0], walk_vars[2], walk_vars[3]], n)
    with pytest.raises(DecodeError):
        decode_model(walk_vars[:3], n)
    with pytest.raises(DecodeError):
        decode_model([var_id(0, 0, n), var_id(1, 0, n), var_id(0, 2, n), var_id(0, 3, n)], n)
