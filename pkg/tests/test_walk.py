import pytest
from hypothesis import given, settings, strategies as st

from conftest import collinear_by_cross_product
from grwalks.geometry import Line
from grwalks.walk import (
    complement,
    dedup,
    encode_bits,
    is_gr,
    normal_form,
    orbit,
    points_to_steps,
    read_walks,
    reverse,
    steps_to_points,
    validate,
    write_walks,
)

walks = st.text(alphabet="NE", max_size=14)


def test_points_round_trip():
    w = "NNENE"
    pts = steps_to_points(w)
    assert pts == [(0, 0), (0, 1), (0, 2), (1, 2), (1, 3), (2, 3)]
    assert points_to_steps(pts) == w
    with pytest.raises(ValueError):
        points_to_steps([(0, 0), (1, 1)])
    with pytest.raises(ValueError):
        steps_to_points("NX")


def test_symmetries():
    assert complement("NNE") == "EEN"
    assert reverse("NNE") == "ENN"
    assert orbit("NNE") == {"NNE", "EEN", "ENN", "NEE"}
    assert encode_bits("NEE") == "011"
    assert normal_form("EEN") == "NNE"


def test_normal_form_starts_north():
    assert normal_form("ENNENNEN")[0] == "N"


@given(walks)
def test_normal_form_is_orbit_invariant(w):
    nf = normal_form(w)
    assert nf in orbit(w)
    assert normal_form(nf) == nf
    for v in orbit(w):
        assert normal_form(v) == nf
    assert encode_bits(nf) == min(encode_bits(v) for v in orbit(w))


@given(walks, st.integers(3, 5))
def test_gr_property_is_symmetric(w, k):
    ok = is_gr(w, k)
    assert all(is_gr(v, k) == ok for v in orbit(w))


@settings(max_examples=200)
@given(st.text(alphabet="NE", max_size=9), st.integers(3, 5))
def test_validate_matches_direct_check(w, k):
    assert is_gr(w, k) == (not collinear_by_cross_product(steps_to_points(w), k))


def test_validate_reports_line():
    r = validate("NN", 3)
    assert not r.ok and r
    assert r.violating_lines == [(Line(1, 0, 0), 3)]
    assert "x=0" in str(r)
    assert validate("NENNENNE", 4).ok
    with pytest.raises(ValueError):
        validate("NE", 2)


def test_dedup():
    assert dedup(["NEE", "EEN", "ENN", "NEN"]) == {"NNE", "NEN"}


def test_corpus_round_trip(tmp_path):
    p = tmp_path / "walks.txt"
    write_walks(p, ["NENNENNE", "NNENNENN"], header="k=4\nmaximal")
    assert p.read_text().startswith("# k=4\n# maximal\n")
    assert read_walks(p) == ["NENNENNE", "NNENNENN"]
    p.write_text("NEX\n")
    with pytest.raises(ValueError):
        read_walks(p)
