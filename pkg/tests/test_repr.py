import random
from fractions import Fraction as F
from pathlib import Path

import pytest
from hypothesis import given, settings, strategies as hs

from trilogic import geom
from trilogic.errors import ArityError
from trilogic.geom import Point2, Triangle, triangle
from trilogic.model import Relation, canonical_triangle, load_database
from trilogic.repr import aftr, boundary, drawing, export_svg, format_number, is_bounded, is_finite, orbit_count

import oracles
from strategies import affinities, triangles

GOLDEN = Path(__file__).parent / "golden"
CORPUS = Path(__file__).resolve().parents[1] / "corpus"


def rel(*tris):
    return Relation.of("R", 1, [(t,) for t in tris])


def orbits(r):
    return sorted(canonical_triangle(t) for (t,) in r.reps())


SQUARE = rel(triangle((0, 0), (1, 0), (1, 1)), triangle((0, 0), (1, 1), (0, 1)))


def test_drawing_cells():
    assert len(drawing(rel(triangle((0, 0), (4, 0), (0, 4)))).inside_cells) == 1
    # placed so that neither triangle's carriers cut the other
    apart = rel(triangle((0, 0), (2, 0), (0, 2)), triangle((4, 4), (6, 4), (4, 6)))
    assert len(drawing(apart).inside_cells) == 2
    with pytest.raises(ArityError):
        drawing(Relation.of("S", 2, []))


def test_overlapping_drawing_matches_pointwise_union():
    a, b = triangle((0, 0), (4, 0), (0, 4)), triangle((2, 0), (6, 0), (2, 4))
    reg = drawing(rel(a, b))
    for cell in reg.cells:
        assert cell.inside == oracles.in_union(cell.sample, [a, b])
    rng = random.Random(3)
    for _ in range(300):
        p = Point2(F(rng.randint(-20, 140), 20), F(rng.randint(-20, 100), 20))
        assert (p in reg) == oracles.in_union(p, [a, b])


def test_boundary_examples():
    tri = boundary(drawing(rel(triangle((0, 0), (4, 0), (0, 4)))))
    assert len(tri.segments) == 3 and tri.points == ()
    square = boundary(drawing(SQUARE))
    assert sorted(square.segments) == sorted([
        (Point2(0, 0), Point2(1, 0)), (Point2(1, 0), Point2(1, 1)),
        (Point2(0, 1), Point2(1, 1)), (Point2(0, 0), Point2(0, 1)),
    ])
    dot = boundary(drawing(rel(triangle((2, 3), (2, 3), (2, 3)))))
    assert dot.segments == () and dot.points == (Point2(2, 3),)


def test_aftr_examples():
    out = aftr(SQUARE)
    assert len(out.reps()) == 4
    assert oracles.drawings_equal(orbits(out), orbits(SQUARE))
    single = triangle((0, 0), (4, 0), (0, 4))
    assert orbits(aftr(rel(single))) == [canonical_triangle(single)]
    seg = triangle((0, 0), (0, 0), (4, 4))
    assert aftr(rel(seg)).tuples == rel(seg).tuples
    with pytest.raises(ArityError):
        aftr(Relation.of("S", 2, []))


def test_aftr_absorbs_covered_pieces():
    t = triangle((0, 0), (4, 0), (0, 4))
    inside = [triangle((1, 1), (1, 1), (1, 1)), triangle((0, 0), (1, 1), (1, 1))]
    assert orbits(aftr(rel(t, *inside))) == [canonical_triangle(t)]
    sticking_out = triangle((1, 1), (1, 1), (5, 5))
    out = orbits(aftr(rel(t, sticking_out)))
    assert oracles.drawings_equal(out, [t, sticking_out])
    assert triangle((2, 2), (F(7, 2), F(7, 2)), (5, 5)) in out


def test_safety_checks():
    r = rel(*(triangle((i, 0), (i + 1, 0), (i, 1)) for i in range(10)))
    assert orbit_count(r) == 10 and is_finite(r) and is_bounded(r)
    empty = rel()
    assert is_bounded(empty) and is_finite(empty) and orbit_count(empty) == 0


@given(hs.lists(triangles, min_size=1, max_size=3))
@settings(max_examples=60)
def test_aftr_preserves_drawing(ts):
    r = rel(*ts)
    out = orbits(aftr(r))
    assert oracles.drawings_equal(out, ts)
    corners = {p for t in out for p in t}
    assert all(oracles.in_union(p, ts) for p in corners)
    assert out == sorted(set(out))


@given(hs.lists(triangles, min_size=1, max_size=3), affinities)
@settings(max_examples=40)
def test_aftr_is_equivariant(ts, f):
    moved = aftr(rel(*(geom.apply_affinity(f, t) for t in ts))).tuples
    assert moved == {(geom.apply_affinity(f, t),) for (t,) in aftr(rel(*ts)).tuples}


@given(hs.lists(triangles, min_size=1, max_size=3))
@settings(max_examples=40)
def test_boundary_is_idempotent(ts):
    first = boundary(drawing(rel(*ts)))
    again = boundary(drawing(aftr(rel(*ts))))
    assert again.segments == first.segments
    assert again.points == first.points


@given(hs.lists(triangles, min_size=1, max_size=3))
@settings(max_examples=40)
def test_inside_cells_are_covered_by_their_triangles(ts):
    reg = drawing(aftr(rel(*ts)))
    for cell in reg.inside_cells:
        fan = [Triangle(cell.vertices[0], a, b) for a, b in zip(cell.vertices[1:], cell.vertices[2:])]
        assert oracles.in_union(cell.sample, fan)
        assert all(oracles.in_union(p, ts) for p in cell.vertices)


def test_format_number():
    assert format_number(F(3)) == "3"
    assert format_number(F(-1, 4)) == "-0.25"
    assert format_number(F(1, 3)) == "0.333333333333"
    assert format_number(F(0)) == "0"


def test_svg_examples():
    empty = export_svg(rel())
    assert 'viewBox="0 0 1 1"' in empty and "<polygon" not in empty
    one = export_svg(rel(triangle((0, 0), (4, 0), (0, 4))))
    assert one.count("<polygon") == 1
    assert '<polygon points="0,0 0,-4 4,0"/>' in one
    assert 'viewBox="-0.2 -4.2 4.4 4.4"' in one


def test_svg_golden_butterfly():
    svg = export_svg(load_database(CORPUS / "butterfly.tdb"))
    assert svg == (GOLDEN / "butterfly.svg").read_text()
