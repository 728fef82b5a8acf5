from fractions import Fraction
from functools import cmp_to_key

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from coisotropic.errors import NotFullDimensional, ShapeMismatch, Unbounded
from coisotropic.exact_linalg import QMatrix
from coisotropic.polytope import (
    DelzantPolytope,
    Facet,
    Halfspace,
    Polyhedron,
    centroid,
    hrep_to_vrep,
    is_delzant,
    translate_to_centered,
    vertex_count,
    vrep_to_hrep,
)

from tests.strategies import unimodular

SIMPLEX = [(0, 0), (1, 0), (0, 1)]
SQUARE = [(0, 0), (1, 0), (0, 1), (1, 1)]
WIDE = [(0, 0), (2, 0), (0, 1)]
TALL = [(0, 0), (1, 0), (0, 2)]


def _facet_set(facets):
    return {(f.normal, f.offset) for f in facets}


def test_simplex_facets():
    assert _facet_set(vrep_to_hrep(SIMPLEX, 2)) == {((1, 0), 0), ((0, 1), 0), ((-1, -1), -1)}


def test_square_facets():
    assert len(vrep_to_hrep(SQUARE, 2)) == 4


def test_wide_simplex_facets():
    assert _facet_set(vrep_to_hrep(WIDE, 2)) == {((1, 0), 0), ((0, 1), 0), ((-1, -2), -2)}


def test_interior_points_are_dropped():
    points = [*SQUARE, (Fraction(1, 2), Fraction(1, 2))]
    assert DelzantPolytope.from_vertices(points, 2) == DelzantPolytope.from_vertices(SQUARE, 2)


def test_degenerate_input():
    with pytest.raises(NotFullDimensional):
        vrep_to_hrep([(0, 0), (1, 1)], 2)


def test_dimension_bound(monkeypatch):
    monkeypatch.setenv("COISO_MAX_POLYTOPE_DIM", "1")
    with pytest.raises(ShapeMismatch):
        vrep_to_hrep(SIMPLEX, 2)


def test_unbounded_facets():
    with pytest.raises(Unbounded):
        hrep_to_vrep([Facet((1, 0), Fraction(0)), Facet((0, 1), Fraction(0))], 2)


def test_representations_round_trip():
    for points in (SIMPLEX, SQUARE, WIDE):
        facets = vrep_to_hrep(points, 2)
        assert set(hrep_to_vrep(facets, 2)) == {tuple(Fraction(x) for x in p) for p in points}
        assert DelzantPolytope.from_facets(facets, 2) == DelzantPolytope.from_vertices(points, 2)


def test_delzant_accepts_simplex_and_square():
    for points in (SIMPLEX, SQUARE):
        certificate = is_delzant(DelzantPolytope.from_vertices(points, 2))
        assert certificate.accepted
        assert all(abs(v.edge_determinant) == 1 for v in certificate.vertices)


def test_delzant_rejection_certificate():
    certificate = is_delzant(DelzantPolytope.from_vertices(TALL, 2))
    assert not certificate.accepted
    bad = certificate.first_rejection()
    assert bad.vertex == (1, 0)
    assert bad.edges == ((-1, 0), (-1, 2))
    assert bad.edge_determinant == -2


def test_non_simple_vertex_is_rejected():
    octahedron = [(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1)]
    certificate = is_delzant(DelzantPolytope.from_vertices(octahedron, 3))
    assert not certificate.accepted
    assert not certificate.first_rejection().simple


def test_point_polytope():
    point = DelzantPolytope.from_vertices([()], 0)
    assert point == DelzantPolytope.point()
    assert vertex_count(point) == 1
    assert is_delzant(point).accepted
    assert centroid(point) == ()


@pytest.mark.parametrize(
    "points, expected",
    [
        (SIMPLEX, (Fraction(1, 3), Fraction(1, 3))),
        (SQUARE, (Fraction(1, 2), Fraction(1, 2))),
        (WIDE, (Fraction(2, 3), Fraction(1, 3))),
    ],
)
def test_centroid(points, expected):
    assert centroid(DelzantPolytope.from_vertices(points, 2)) == expected


def test_centroid_of_pentagon():
    # 2x2 square minus the triangle (2,1),(2,2),(1,2)
    pentagon = DelzantPolytope.from_vertices([(0, 0), (2, 0), (2, 1), (1, 2), (0, 2)], 2)
    assert centroid(pentagon) == (Fraction(19, 21), Fraction(19, 21))


def test_translate_to_centered():
    square = translate_to_centered(DelzantPolytope.from_vertices(SQUARE, 2))
    h = Fraction(1, 2)
    assert set(square.vertices) == {(-h, -h), (h, -h), (-h, h), (h, h)}
    assert translate_to_centered(square) == square
    simplex = translate_to_centered(DelzantPolytope.from_vertices(SIMPLEX, 2))
    t = Fraction(1, 3)
    assert set(simplex.vertices) == {(-t, -t), (1 - t, -t), (-t, 1 - t)}


def test_vertex_counts():
    assert vertex_count(DelzantPolytope.from_vertices(SIMPLEX, 2)) == 3
    assert vertex_count(DelzantPolytope.from_vertices(SQUARE, 2)) == 4
    assert vertex_count(translate_to_centered(DelzantPolytope.from_vertices(SIMPLEX, 2))) == 3


@given(unimodular(2), st.sampled_from([SIMPLEX, SQUARE, TALL]), st.tuples(st.integers(-3, 3), st.integers(-3, 3)))
def test_delzant_is_lattice_invariant(u, points, shift):
    p = DelzantPolytope.from_vertices(points, 2)
    moved = p.transform(u).translate(shift)
    assert is_delzant(moved).accepted == is_delzant(p).accepted


@given(unimodular(2), st.sampled_from([SIMPLEX, SQUARE, WIDE]))
def test_centering_zeroes_the_centroid(u, points):
    p = DelzantPolytope.from_vertices(points, 2).transform(u)
    assert not any(centroid(translate_to_centered(p)))


def test_transform_requires_unimodular():
    with pytest.raises(ShapeMismatch):
        DelzantPolytope.from_vertices(SIMPLEX, 2).transform(QMatrix.from_rows([[2, 0], [0, 1]]))


def test_polyhedron_recession():
    half_plane = Polyhedron(2, (Halfspace((Fraction(1), Fraction(0)), Fraction(0)),))
    assert not half_plane.is_bounded()
    strip = Polyhedron(
        1, (Halfspace((Fraction(1),), Fraction(0)), Halfspace((Fraction(-1),), Fraction(-1)))
    )
    assert strip.is_bounded()
    assert strip.vertices() == ((0,), (1,))
    quadrant = Polyhedron(2, tuple(Halfspace(n, Fraction(0)) for n in ((1, 0), (0, 1))))
    r = quadrant.recession_witness()
    assert r is not None and all(x >= 0 for x in r)


def test_polyhedron_feasibility():
    strip = Polyhedron(1, (Halfspace((Fraction(1),), Fraction(0)), Halfspace((Fraction(-1),), Fraction(-1))))
    point = strip.feasible_point()
    assert point is not None and strip.contains(point)
    crossed = Polyhedron(1, (Halfspace((Fraction(1),), Fraction(1)), Halfspace((Fraction(-1),), Fraction(0))))
    assert crossed.is_empty()
    corner = tuple(Halfspace(n, Fraction(o)) for n, o in (((1, 0), 0), ((0, 1), 0), ((-1, -1), 1)))
    assert Polyhedron(2, corner).is_empty()
    assert Polyhedron(2, ()).feasible_point() == (0, 0)
    assert not Polyhedron(2, (Halfspace((Fraction(1), Fraction(-2)), Fraction(5, 3)),)).is_empty()


def _shoelace_centroid(vertices):
    n = len(vertices)
    cx = sum(v[0] for v in vertices) / n
    cy = sum(v[1] for v in vertices) / n

    def side(v):
        dx, dy = v[0] - cx, v[1] - cy
        return 0 if dy > 0 or (dy == 0 and dx > 0) else 1

    def counterclockwise(a, b):
        if side(a) != side(b):
            return side(a) - side(b)
        cross = (a[0] - cx) * (b[1] - cy) - (a[1] - cy) * (b[0] - cx)
        return -1 if cross > 0 else 1

    ring = sorted(vertices, key=cmp_to_key(counterclockwise))
    area, gx, gy = Fraction(0), Fraction(0), Fraction(0)
    for (x0, y0), (x1, y1) in zip(ring, ring[1:] + ring[:1]):
        cross = x0 * y1 - x1 * y0
        area += cross
        gx += (x0 + x1) * cross
        gy += (y0 + y1) * cross
    return gx / (3 * area), gy / (3 * area)


@settings(max_examples=50)
@given(st.lists(st.tuples(st.integers(-4, 4), st.integers(-4, 4)), min_size=3, max_size=8, unique=True))
def test_centroid_matches_shoelace(points):
    x0, y0 = points[0]
    assume(any((x1 - x0) * (y2 - y0) != (x2 - x0) * (y1 - y0) for (x1, y1) in points for (x2, y2) in points))
    p = DelzantPolytope.from_vertices(points, 2)
    assert centroid(p) == _shoelace_centroid(p.vertices)
