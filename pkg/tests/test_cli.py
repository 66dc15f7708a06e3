import csv
import shutil
import subprocess

import pytest

from grwalks.cli import main
from grwalks.formats import parse_formula, read_cubes
from grwalks.reachdb import ReachabilityDB
from grwalks.walk import read_walks


def test_enumerate(tmp_path, capsys):
    out = tmp_path / "k4.txt"
    assert main(["enumerate", "--k", "4", "-o", str(out)]) == 0
    assert "a(4) = 9" in capsys.readouterr().out
    assert read_walks(out) == ["NENNENNE", "NNENNENN"]


def test_enumerate_incomplete(capsys):
    assert main(["enumerate", "--k", "5", "--max-steps", "10"]) == 1
    assert "a(5) >= 11" in capsys.readouterr().out


def test_enumerate_sat(capsys):
    assert main(["enumerate", "--k", "3", "--method", "sat"]) == 0
    assert "a(3) = 4" in capsys.readouterr().out


def test_validate(tmp_path, capsys):
    f = tmp_path / "w.txt"
    f.write_text("NN\n")
    assert main(["validate", "--k", "3", str(f)]) != 0
    assert "x=0" in capsys.readouterr().out
    f.write_text("# ok\nNEN\n")
    assert main(["validate", "--k", "3", str(f)]) == 0


def test_canon(tmp_path, capsys):
    f = tmp_path / "w.txt"
    f.write_text("EEN\nNNE\nENE\n")
    assert main(["canon", str(f)]) == 0
    assert capsys.readouterr().out.split() == ["NEN", "NNE"]


def test_bounds(capsys):
    assert main(["bounds", "--k", "3"]) == 0
    out = capsys.readouterr().out
    assert "lower: 1\n" in out and "upper: 2^131073" in out
    main(["bounds", "--k", "4"])
    assert "upper: 3 * 2^663552" in capsys.readouterr().out


def test_encode_is_deterministic(tmp_path):
    for fmt in ("cnf", "knf"):
        a, b = tmp_path / f"a.{fmt}", tmp_path / f"b.{fmt}"
        args = ["encode", "--k", "5", "--n", "20", "--format", fmt, "--streamline", "4"]
        assert main(args + ["-o", str(a)]) == 0
        assert main(args + ["-o", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()
        assert parse_formula(a.read_text()).dialect == fmt


def test_solve_exit_codes(tmp_path, capsys):
    out = tmp_path / "w.txt"
    assert main(["solve", "--k", "4", "--n", "9", "--dialect", "knf", "-o", str(out)]) == 10
    assert len(read_walks(out)[0]) == 8
    assert main(["solve", "--k", "4", "--n", "10"]) == 20
    assert main(["solve", "--k", "4", "--n", "10", "--threshold", "50"]) == 20
    assert "retries" in capsys.readouterr().out


def test_cubes(tmp_path, capsys):
    c, inst = tmp_path / "c.icnf", tmp_path / "i.cnf"
    assert main(["cubes", "--k", "4", "--n", "9", "-c", "4", "-o", str(c), "--instance-out", str(inst)]) == 0
    assert len(read_cubes(c)) == 4
    assert inst.read_text().startswith("p cnf")
    assert main(["cubes", "--k", "4", "--n", "9", "-c", "20"]) == 1


def test_extend(tmp_path):
    f = tmp_path / "b.txt"
    f.write_text("NENNENNE\n")
    assert main(["extend", "--k", "4", "--n", "9", "--subpath-file", str(f), "--solve"]) == 10
    assert main(["extend", "--k", "4", "--n", "10", "--subpath", "NENNENNE", "--solve"]) == 20
    assert main(["extend", "--k", "4", "--n", "9"]) == 1


def test_reach(tmp_path, capsys):
    db = tmp_path / "k4.db"
    assert main(["reach", "--k", "4", "--n-max", "6", "--db", str(db)]) == 0
    assert "upper: (0,1) (0,2) (1,2)" in capsys.readouterr().out
    assert len(ReachabilityDB(4, db)) > 0


def test_heatmap(tmp_path):
    out = tmp_path / "h.csv"
    assert main(["heatmap", "--k", "5", "-o", str(out)]) == 0
    rows = {(int(r["x"]), int(r["y"])): int(r["count"]) for r in csv.DictReader(out.open())}
    assert rows.get((8, 4), 0) == 0 and rows[(9, 4)] > 0


def test_usage_errors(capsys):
    with pytest.raises(SystemExit) as e:
        main(["encode", "--k", "4"])
    assert e.value.code != 0
    with pytest.raises(SystemExit):
        main(["encode", "--k", "4", "--n", "9", "--subpath", "NE", "--subpath-file", "x"])
    assert main(["encode", "--k", "2", "--n", "5"]) == 1
    assert "k must be at least 3" in capsys.readouterr().err


@pytest.mark.skipif(shutil.which("grwalks") is None, reason="console script not installed")
def test_console_script():
    r = subprocess.run(["grwalks", "enumerate", "--k", "3"], capture_output=True, text=True)
    assert r.returncode == 0 and "a(3) = 4" in r.stdout
