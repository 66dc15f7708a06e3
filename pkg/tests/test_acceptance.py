"""Acceptance criteria, one or more tests each; see the summary section of a pytest run."""

import os
import subprocess
import sys
import time

import pytest

from helpers import sat_walks
from grwalks.cli import main
from grwalks.driver import all_solutions, generate_antidiagonal_cubes, solve_formula, solve_instance
from grwalks.encoding import build_instance
from grwalks.formats import Status
from grwalks.geometry import enumerate_lines, prop1_slope_bounds
from grwalks.oracle import enumerate_all, point_counts, search_max
from grwalks.walk import normal_form, read_walks, steps_to_points, validate

A = {3: 4, 4: 9, 5: 29, 6: 97}
K5_WITNESS = "NNENNNENNNENNNEEENEEENEEENEE"


@pytest.mark.criterion(1, "enumerate gives a(3)=4, a(4)=9 under 1 s and a(5)=29 under 10 s")
@pytest.mark.parametrize("k,limit", [(3, 1.0), (4, 1.0), (5, 10.0)])
def test_exact_values(k, limit, tmp_path, capsys):
    t0 = time.perf_counter()
    code = main(["enumerate", "--k", str(k), "-o", str(tmp_path / "w.txt")])
    elapsed = time.perf_counter() - t0
    assert code == 0
    assert f"a({k}) = {A[k]}" in capsys.readouterr().out
    assert elapsed < limit


@pytest.mark.criterion(2, "maximal-walk census: 2 walks for k=4, 1 walk of 28 steps for k=5")
def test_census(tmp_path):
    sizes = {}
    for k in (4, 5):
        out = tmp_path / f"k{k}.txt"
        assert main(["enumerate", "--k", str(k), "-o", str(out)]) == 0
        walks = read_walks(out)
        assert sorted({normal_form(w) for w in walks}) == walks
        sizes[k] = walks
    assert len(sizes[4]) == 2
    assert sizes[5] == [K5_WITNESS] and len(K5_WITNESS) == 28
    assert validate(K5_WITNESS, 5).ok


@pytest.mark.long
@pytest.mark.criterion(2, "maximal-walk census: 2 walks for k=4, 1 walk of 28 steps for k=5")
def test_census_k6_long():
    res = search_max(6, time_budget=4 * 3600)
    assert res.exhausted
    assert res.a_lower == 97 and len(res.witnesses) == 2


@pytest.mark.criterion(3, "SAT pipeline and oracle give the same walks for k in {3,4}, every m < a(k), every endpoint")
@pytest.mark.parametrize("k", [3, 4])
def test_oracle_sat_equivalence(k, cnf_solver):
    for m in range(A[k]):
        oracle_walks = enumerate_all(k, m, north_first=True)
        sat_set = set()
        for x in range(m + 1):
            inst = build_instance(k, m + 1, pin=(x, m - x))
            found = all_solutions(inst, cnf_solver)
            assert set(found) == {w for w in oracle_walks if steps_to_points(w)[-1] == (x, m - x)}
            sat_set.update(found)
        all_walks = enumerate_all(k, m)
        assert {normal_form(w) for w in sat_set} == {normal_form(w) for w in all_walks}
    assert enumerate_all(k, A[k]) == []


@pytest.mark.criterion(4, "default instances are SAT at n=a(k) and UNSAT at n=a(k)+1 for k in {3,4,5}")
@pytest.mark.parametrize("k", [3, 4, 5])
def test_boundary(k, cnf_solver):
    sat = solve_instance(build_instance(k, A[k]), cnf_solver)
    assert sat.result.status == Status.SAT
    assert validate(sat.walk, k).ok and len(sat.walk) == A[k] - 1
    assert solve_formula(build_instance(k, A[k] + 1), cnf_solver).status == Status.UNSAT


def has_excluded_line(k, n):
    lo, hi = prop1_slope_bounds(k)
    return any(not lo <= line.slope <= hi for line in enumerate_lines(k, n, use_prop1=False))


@pytest.mark.criterion(5, "slope filter keeps walk sets identical and removes constraints, k in {3,4,5}, n <= 29")
@pytest.mark.parametrize("k", [3, 4, 5])
def test_prop1_equivalence(k):
    strict = []
    for n in range(1, 30):
        on = build_instance(k, n)
        off = build_instance(k, n, use_prop1=False)
        assert sat_walks(on) == sat_walks(off) == set(enumerate_all(k, n - 1, north_first=True))
        if has_excluded_line(k, n):
            assert len(on.cards) < len(off.cards)
            strict.append(n)
        else:
            # no line outside the slope interval carries k region points yet
            assert len(on.cards) == len(off.cards)
    assert strict and strict == list(range(strict[0], 30))


@pytest.mark.criterion(6, "thinned instances: UNSAT is sound, invalid models are retried, accepted walks validate")
@pytest.mark.parametrize("threshold", [4, 5, 6, 8, 100])
def test_thinning_soundness(threshold, cnf_solver):
    full = solve_formula(build_instance(4, 10), cnf_solver)
    assert full.status == Status.UNSAT
    thin = build_instance(4, 10, threshold=threshold)
    out = solve_instance(thin, cnf_solver, max_retries=10)
    assert out.result.status == Status.UNSAT
    if solve_formula(thin, cnf_solver).status == Status.SAT:
        assert out.retries >= 1
    sat = solve_instance(build_instance(4, 9, threshold=threshold), cnf_solver, max_retries=10)
    assert sat.result.status == Status.SAT and validate(sat.walk, 4).ok


@pytest.mark.criterion(7, "antidiagonal cubes for k=4, n=9, c in 2..6 partition the solution set")
@pytest.mark.parametrize("c", [2, 3, 4, 5, 6])
def test_cube_partition(c, cnf_solver):
    base = build_instance(4, 9)
    expect = set(enumerate_all(4, 8, north_first=True))
    parts = []
    for cube in generate_antidiagonal_cubes(base, c):
        parts.append(set(all_solutions(base.with_clauses("cube", [cube]), cnf_solver)))
    assert set().union(*parts) == expect
    assert sum(len(p) for p in parts) == len(expect)


@pytest.mark.criterion(8, "extension of the maximal GR(5) walk: SAT at n=29, UNSAT at n=30")
def test_subpath_extension(cnf_solver):
    at29 = solve_instance(build_instance(5, 29, subpath=K5_WITNESS), cnf_solver)
    assert at29.result.status == Status.SAT and at29.walk == K5_WITNESS
    assert solve_formula(build_instance(5, 30, subpath=K5_WITNESS), cnf_solver).status == Status.UNSAT


@pytest.mark.criterion(9, "k=5 heatmap: count(8,4)=0 and count(9,4)>0")
def test_heatmap():
    pc = point_counts(5)
    assert pc[(8, 4)] == 0 and pc[(9, 4)] > 0


@pytest.mark.criterion(10, "not gated: a(6) enumeration, a(7) bounds, timing tables")
def test_not_gated():
    pytest.skip("out of scope as a result; encodings are exercised by criteria 3-8")


ENCODE_RUNS = [
    ["encode", "--k", "5", "--n", "29", "--format", "cnf"],
    ["encode", "--k", "5", "--n", "29", "--format", "knf"],
    ["encode", "--k", "6", "--n", "40", "--format", "cnf", "--method", "totalizer", "--threshold", "8"],
    ["encode", "--k", "5", "--n", "30", "--format", "knf", "--subpath", K5_WITNESS, "--streamline", "6"],
    ["cubes", "--k", "5", "--n", "29", "-c", "12"],
]


@pytest.mark.criterion(11, "encode output is byte-identical across runs")
@pytest.mark.parametrize("args", ENCODE_RUNS, ids=lambda a: "-".join(a[:6]))
def test_format_determinism(args, tmp_path):
    outputs = []
    for hashseed in ("0", "1", "12345"):
        out = tmp_path / f"out{hashseed}"
        env = dict(os.environ, PYTHONHASHSEED=hashseed)
        r = subprocess.run([sys.executable, "-m", "grwalks.cli", *args, "-o", str(out)], env=env, capture_output=True)
        assert r.returncode == 0, r.stderr
        outputs.append(out.read_bytes())
    assert outputs[0] and outputs[0] == outputs[1] == outputs[2]
