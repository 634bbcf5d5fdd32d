from fractions import Fraction as F

from hypothesis import given, strategies as st

from rheight.newton import (
    Weight,
    augmented_polyhedron,
    dilate,
    kappa_principal_part,
    newton_distance,
    newton_polyhedron,
    newton_polyhedron_from_points,
    principal_face,
    principal_weight,
    r_height,
)
from rheight.poly import parse_poly

points = st.lists(st.tuples(st.integers(0, 9), st.integers(0, 9)).map(lambda t: (F(t[0]), F(t[1]))),
                  min_size=1, max_size=8)


def test_edge_and_weight():
    np_ = newton_polyhedron(parse_poly("x2^3 + x1^9"))
    face = principal_face(np_)
    assert face.kind == "edge"
    assert principal_weight(face) == Weight(F(1, 9), F(1, 3))
    assert newton_distance(np_) == F(9, 4)


def test_vertex_on_bisectrix():
    np_ = newton_polyhedron(parse_poly("x1^2*x2^2 + x1^6 + x2^5"))
    assert principal_face(np_).kind == "vertex"
    assert newton_distance(np_) == 2


@given(points)
def test_support_points_lie_inside(pts):
    np_ = newton_polyhedron_from_points(pts)
    assert all(np_.contains(p) for p in pts)
    d = newton_distance(np_)
    assert np_.contains((d, d))
    assert not np_.contains((d - F(1, 1000), d - F(1, 1000)))


@given(points)
def test_edges_are_convex(pts):
    np_ = newton_polyhedron_from_points(pts)
    slopes = [e.slope for e in np_.edges]
    # moving right along the boundary the edges get flatter
    assert slopes == sorted(slopes, reverse=True)


def test_weight_through_points():
    w = Weight.through((F(0), F(4)), (F(2), F(1)))
    assert (w.k1, w.k2) == (F(3, 8), F(1, 4))


def test_dilation_homogeneity():
    w = Weight(F(1, 9), F(1, 3))
    p = parse_poly("x2^3 + x1^9")
    assert dilate(p, w, 8) == p * 8
    assert kappa_principal_part(p + parse_poly("x1^10"), w) == p


def test_augmented_hull_and_r_height():
    # x2^3 + x1^9 at m = 2: L is the line of weight (1/9, 1/3); hr = 2
    np_ = newton_polyhedron(parse_poly("x2^3 + x1^9"))
    w = principal_weight(principal_face(np_))
    aug = augmented_polyhedron(np_, w)
    assert r_height(aug, 2) == 2
