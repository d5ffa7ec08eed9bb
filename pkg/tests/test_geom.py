import math

import numpy as np
import pytest
import shapely.geometry as sg
from hypothesis import given, settings
from hypothesis import strategies as st

from starworlds.errors import DegenerateHull, MalformedInput, NotFreeExterior, PointInsideShape
from starworlds.geom import (
    Ellipse, Orientation, PointClass, Polygon, Ray, Segment, classify_point, convex_hull,
    convex_pieces_intersect, eps_geom, orient, polygon_kernel, ray_polygon_hits, tangent_points,
    tangent_points_ellipse, tangent_points_polygon,
)

from conftest import radial_polygon, random_ellipse

SQUARE = Polygon([(0, 0), (1, 0), (1, 1), (0, 1)])
L_SHAPE = Polygon([(0, 0), (2, 0), (2, 1), (1, 1), (1, 2), (0, 2)])
coord = st.floats(-1e3, 1e3, allow_nan=False, allow_infinity=False)


# ------------------------------------------------------------------ orient

@pytest.mark.parametrize("a,b,c,expected", [
    ((0, 0), (1, 0), (0, 1), Orientation.CCW),
    ((0, 0), (1, 0), (2, 0), Orientation.COLLINEAR),
    ((0, 0), (0, 1), (1, 1), Orientation.CW),
])
def test_orient_examples(a, b, c, expected):
    assert orient(a, b, c) == expected


@settings(max_examples=200, deadline=None)
@given(coord, coord, coord, coord, coord, coord, coord, coord)
def test_orient_antisymmetric_and_translation_invariant(ax, ay, bx, by, cx, cy, tx, ty):
    a, b, c = (ax, ay), (bx, by), (cx, cy)
    o = orient(a, b, c)
    flip = {Orientation.CCW: Orientation.CW, Orientation.CW: Orientation.CCW,
            Orientation.COLLINEAR: Orientation.COLLINEAR}
    assert orient(b, a, c) == flip[o]
    # translation changes magnitudes, so only clear-cut signs must survive it
    cr = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)
    scale = max(1.0, *map(abs, (ax, ay, bx, by, cx, cy, ax + tx, ay + ty, bx + tx, by + ty,
                                cx + tx, cy + ty)))
    if abs(cr) > 1e-6 * scale * scale:
        t = lambda p: (p[0] + tx, p[1] + ty)
        assert orient(t(a), t(b), t(c)) == o


# ------------------------------------------------------------------ types

def test_ray_and_segment_types():
    with pytest.raises(MalformedInput):
        Ray((0, 0), (0, 0))
    assert Segment((1, 1), (1, 1)).is_degenerate
    assert not Segment((0, 0), (1, 0)).is_degenerate
    with pytest.raises(MalformedInput):
        Ellipse((0, 0), (1, 0))
    with pytest.raises(MalformedInput):
        Polygon([(0, 0), (1, 1), (1, 0), (0, 1)])  # bowtie
    with pytest.raises(MalformedInput):
        Polygon([(0, 0), (1, 0)])
    with pytest.raises(MalformedInput):
        Polygon([(0, 0), (float("nan"), 0), (0, 1)])


def test_polygon_normalized_ccw_without_duplicates():
    P = Polygon([(0, 0), (0, 1), (1, 1), (1, 1), (1, 0)])
    assert len(P) == 4
    assert P.area == pytest.approx(1.0)
    assert orient(*P.vertices[:3]) == Orientation.CCW


# ------------------------------------------------------------------ convex hull

def test_convex_hull_examples():
    H = convex_hull([(0, 0), (1, 0), (1, 1), (0, 1), (0.5, 0.5)])
    assert {tuple(p) for p in H.vertices} == {(0, 0), (1, 0), (1, 1), (0, 1)}
    T = convex_hull([(0, 0), (2, 0), (1, 1)])
    assert {tuple(p) for p in T.vertices} == {(0, 0), (2, 0), (1, 1)}
    with pytest.raises(DegenerateHull):
        convex_hull([(0, 0), (1, 0), (2, 0)])


def test_convex_hull_drops_collinear_boundary_points():
    H = convex_hull([(0, 0), (1, 0), (2, 0), (2, 2), (0, 2)])
    assert len(H) == 4


def test_convex_hull_matches_shapely(rng):
    for _ in range(50):
        pts = rng.normal(size=(int(rng.integers(3, 40)), 2))
        H = convex_hull(pts)
        ref = sg.MultiPoint(pts).convex_hull
        assert H.area == pytest.approx(ref.area, rel=1e-12)
        assert H.is_convex


# ------------------------------------------------------------------ tangents

def _brute_force_tangents(P, x):
    """Vertices whose ray from x does not enter int P, as extreme polar angles."""
    from starworlds.geom import ray_enters_interior
    cand = [v for v in P.vertices if not ray_enters_interior(x, v - x, P)]
    ref = np.arctan2(*(P.centroid - x)[::-1])
    ang = [((math.atan2(*(v - x)[::-1]) - ref + math.pi) % (2 * math.pi)) for v in cand]
    return cand[int(np.argmax(ang))], cand[int(np.argmin(ang))]


def test_tangent_points_square():
    # x t1 t2 must be clockwise, which fixes t1 = (1, 0), t2 = (1, 1)
    t1, t2 = tangent_points_polygon(SQUARE, (2, 0.5))
    assert tuple(t1) == (1, 0) and tuple(t2) == (1, 1)
    assert orient((2, 0.5), t1, t2) == Orientation.CW


def test_tangent_points_triangle():
    T = Polygon([(0, 0), (1, 0), (0, 1)])
    t1, t2 = tangent_points_polygon(T, (-1, -1))
    assert tuple(t1) == (0, 1) and tuple(t2) == (1, 0)
    b1, b2 = _brute_force_tangents(T, np.array([-1.0, -1.0]))
    assert np.allclose(t1, b1) and np.allclose(t2, b2)


def test_tangent_points_interior_point_raises():
    with pytest.raises(NotFreeExterior):
        tangent_points_polygon(SQUARE, (0.5, 0.5))


def test_tangent_points_polygon_brute_force(rng):
    for _ in range(40):
        P = radial_polygon(rng, rmin=0.5, rmax=1.5)
        x = rng.uniform(-1, 1, 2)
        x = x / np.linalg.norm(x) * rng.uniform(2.0, 4.0)
        t1, t2 = tangent_points_polygon(P, x)
        b1, b2 = _brute_force_tangents(P, x)
        assert np.allclose(t1, b1) and np.allclose(t2, b2)
        assert orient(x, t1, t2) == Orientation.CW


def test_tangent_points_ellipse_examples():
    E = Ellipse((0, 0), (1, 1))
    t1, t2 = tangent_points_ellipse(E, (2, 0))
    s = math.sqrt(3) / 2
    assert np.allclose(t1, (0.5, -s)) and np.allclose(t2, (0.5, s))
    t1, t2 = tangent_points_ellipse(E, (0, 2))
    assert np.allclose(t1, (s, 0.5)) and np.allclose(t2, (-s, 0.5))
    with pytest.raises(PointInsideShape):
        tangent_points_ellipse(E, (0.5, 0))


def test_tangent_points_ellipse_analytic(rng):
    for _ in range(50):
        E = random_ellipse(rng, center=np.zeros(2))
        x = rng.normal(size=2)
        x = x / np.linalg.norm(x) * (max(E.semi_axes) + rng.uniform(0.1, 3))
        t1, t2 = tangent_points_ellipse(E, x)
        for t in (t1, t2):
            assert abs(E.level(t)) < 1e-9
            # tangency: the normal at t is perpendicular to t - x
            assert abs(np.dot(E.normal_at(t), t - x)) < 1e-7 * np.linalg.norm(t - x)
        assert orient(x, t1, t2) == Orientation.CW


def test_tangent_cone_contains_shape(rng):
    # every boundary sample lies in the CCW cone from r(x, t2) to r(x, t1)
    for _ in range(40):
        shape = random_ellipse(rng) if rng.random() < 0.5 else radial_polygon(rng, center=rng.uniform(-2, 2, 2))
        x = rng.uniform(-6, 6, 2)
        if classify_point([shape], x) is not PointClass.FREE_EXTERIOR:
            continue
        t1, t2 = tangent_points(shape, x)
        a2 = math.atan2(*(t2 - x)[::-1])
        width = (math.atan2(*(t1 - x)[::-1]) - a2) % (2 * math.pi)
        for p in shape.boundary_points(200):
            a = (math.atan2(*(p - x)[::-1]) - a2) % (2 * math.pi)
            assert a <= width + 1e-9 or a >= 2 * math.pi - 1e-9


# ------------------------------------------------------------------ ray hits

def test_ray_polygon_hits_examples():
    assert [t for t, _ in ray_polygon_hits(Ray((-1, 0.5), (1, 0)), SQUARE)] == pytest.approx([1, 2])
    assert [t for t, _ in ray_polygon_hits(Ray((0.5, 0.5), (1, 0)), SQUARE)] == pytest.approx([0.5])
    assert ray_polygon_hits(Ray((-1, 2), (1, 0)), SQUARE) == []


def test_ray_polygon_hits_sorted_and_on_boundary(rng):
    for _ in range(30):
        P = radial_polygon(rng)
        ring = sg.Polygon(P.vertices).exterior
        r = Ray(rng.uniform(-3, 3, 2), rng.normal(size=2))
        hits = ray_polygon_hits(r, P)
        ts = [t for t, _ in hits]
        assert ts == sorted(ts)
        for _, p in hits:
            assert ring.distance(sg.Point(p)) < 1e-9


def test_grazing_vertex_counted_once():
    # the ray touches the apex of a triangle without entering it
    T = Polygon([(0, 0), (2, 0), (1, 1)])
    hits = ray_polygon_hits(Ray((-1, 1), (1, 0)), T)
    assert len(hits) == 1 and hits[0][0] == pytest.approx(2.0)


# ------------------------------------------------------------------ classify

def test_classify_examples():
    C = Ellipse((0, 0), (1, 1))
    assert classify_point([C], (3, 0)) is PointClass.FREE_EXTERIOR
    assert classify_point([C], (0.2, 0.1)) is PointClass.INSIDE
    ring = [Polygon([(-3, -3), (3, -3), (3, -1), (-3, -1)]),
            Polygon([(1, -3), (3, -3), (3, 3), (1, 3)]),
            Polygon([(-3, 1), (3, 1), (3, 3), (-3, 3)]),
            Polygon([(-3, -3), (-1, -3), (-1, 3), (-3, 3)])]
    assert classify_point(ring, (0, 0)) is PointClass.BOUNDED_EXTERIOR
    assert classify_point(ring[:3], (0, 0)) is PointClass.FREE_EXTERIOR


def test_classify_single_concave_enclosure():
    # a C-shape whose mouth is closed by a second piece
    C = Polygon([(0, 0), (4, 0), (4, 4), (0, 4), (0, 3), (3, 3), (3, 1), (0, 1)])
    assert classify_point([C], (2, 2)) is PointClass.FREE_EXTERIOR
    lid = Polygon([(-1, 0.5), (0.5, 0.5), (0.5, 3.5), (-1, 3.5)])
    assert classify_point([C, lid], (2, 2)) is PointClass.BOUNDED_EXTERIOR


def _ray_sampling_free(shapes, x, n=720):
    from shapely.ops import unary_union
    from starworlds.render import _shape_outline
    u = unary_union([sg.Polygon(_shape_outline(s, 256)) for s in shapes])
    far = 1e3
    for a in np.linspace(0, 2 * math.pi, n, endpoint=False):
        seg = sg.LineString([x, x + far * np.array([math.cos(a), math.sin(a)])])
        if not seg.intersects(u):
            return True
    return False


def test_classify_agrees_with_ray_sampling(rng):
    agree = 0
    trials = 60
    for _ in range(trials):
        shapes = [random_ellipse(rng, spread=2.5) if rng.random() < 0.5
                  else radial_polygon(rng, center=rng.uniform(-2.5, 2.5, 2)) for _ in range(6)]
        x = rng.uniform(-2, 2, 2)
        c = classify_point(shapes, x)
        if c is PointClass.INSIDE:
            trials -= 1
            continue
        agree += (c is PointClass.FREE_EXTERIOR) == _ray_sampling_free(shapes, x)
    # the sampled answer can only differ when a gap is narrower than 0.5 degrees
    assert agree >= trials - 1


# ------------------------------------------------------------------ SAT

def test_convex_pieces_intersect_examples():
    A = SQUARE.vertices
    assert convex_pieces_intersect(A, A + (0.5, 0))
    assert not convex_pieces_intersect(A, A + (3, 0))
    assert convex_pieces_intersect(A, A + (1, 0))  # shared edge
    assert convex_pieces_intersect(A, A + (1, 1))  # shared corner


def test_convex_pieces_intersect_matches_shapely(rng):
    for _ in range(200):
        A = convex_hull(rng.normal(size=(6, 2)))
        B = convex_hull(rng.normal(size=(6, 2)) + rng.uniform(-3, 3, 2))
        ref = sg.Polygon(A.vertices).intersects(sg.Polygon(B.vertices))
        assert convex_pieces_intersect(A, B) == ref


# ------------------------------------------------------------------ kernel

def test_polygon_kernel_examples():
    K = polygon_kernel(SQUARE)
    assert K.area == pytest.approx(1.0)
    K = polygon_kernel(L_SHAPE)
    assert {tuple(np.round(p, 12)) for p in K.vertices} == {(0, 0), (1, 0), (1, 1), (0, 1)}
    spiral = Polygon([(0, 0), (6, 0), (6, 6), (1, 6), (1, 2), (4, 2), (4, 4), (3, 4), (3, 3),
                      (2, 3), (2, 5), (5, 5), (5, 1), (0, 1)])
    assert polygon_kernel(spiral) is None


def test_polygon_kernel_is_starshaped_center(rng):
    for _ in range(20):
        P = radial_polygon(rng, rmin=0.6, rmax=1.5)
        ker = polygon_kernel(P)
        assert ker is not None  # radial polygons are starshaped about the origin
        poly = sg.Polygon(P.vertices).buffer(1e-9)
        assert sg.Polygon(ker.vertices).within(poly)
        kx = ker.boundary_points(30)
        ys = P.boundary_points(30)
        for k in kx:
            for y in ys:
                assert poly.covers(sg.LineString([k, y]))


def test_eps_geom_scales():
    assert eps_geom((0, 0)) == 1e-9
    assert eps_geom((1e6, 0)) == pytest.approx(1e-3)
