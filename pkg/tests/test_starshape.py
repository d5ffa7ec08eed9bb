import math

import numpy as np
import pytest
import shapely.geometry as sg

from starworlds.errors import MalformedInput, OriginOutsideKernel
from starworlds.geom import Ellipse, Polygon, is_simple, polygon_kernel
from starworlds.starshape import (
    KernelSpec, Piece, PieceKind, StarObstacle, exact_kernel_hull, is_starshaped_wrt,
    kernel_hull_walk, sh_kernel_convex, sh_kernel_polygon, sh_kernel_union, sh_point_convex,
    star_boundary_ray,
)
from starworlds.starworld import is_strictly_starshaped

from conftest import Grid, iou, radial_hull_mask, radial_polygon, star_mask, triangle

CIRCLE = Ellipse((0, 0), (1, 1))
SQUARE = Polygon([(0, 0), (1, 0), (1, 1), (0, 1)])
L_SHAPE = Polygon([(0, 0), (2, 0), (2, 1), (1, 1), (1, 2), (0, 2)])


def circle_tangents(p):
    """Analytic tangent points of the unit circle seen from p."""
    p = np.asarray(p, float)
    d2 = p @ p
    q = np.array([-p[1], p[0]])
    return p / d2 + math.sqrt(d2 - 1) / d2 * q, p / d2 - math.sqrt(d2 - 1) / d2 * q


# ----------------------------------------------------------- hull w.r.t. a point

def test_sh_point_convex_inside_is_identity():
    S = sh_point_convex(CIRCLE, (0, 0))
    assert [p.kind for p in S.pieces] == [PieceKind.ORIGINAL]


def test_sh_point_convex_exterior_adds_tangent_triangle():
    S = sh_point_convex(CIRCLE, (2, 0))
    assert [p.kind for p in S.pieces] == [PieceKind.ORIGINAL, PieceKind.TANGENT_CONE]
    tri = {tuple(np.round(v, 12)) for v in S.pieces[1].shape.vertices}
    s = round(math.sqrt(3) / 2, 12)
    assert tri == {(2.0, 0.0), (0.5, -s), (0.5, s)}


def test_sh_point_convex_boundary_point():
    S = sh_point_convex(SQUARE, (1, 0.5))
    assert len(S.pieces) == 1


# ----------------------------------------------------------- hull with kernel, convex

def test_sh_kernel_convex_kernel_inside():
    S = sh_kernel_convex(CIRCLE, triangle((0.1, 0.0), 0.3))
    assert len(S.pieces) == 1


def test_sh_kernel_convex_exterior_kernel():
    K = KernelSpec([(2, 0), (2, 0.1), (2.1, 0)])
    S = sh_kernel_convex(CIRCLE, K)
    pts = list(K.points)
    for k in K.points:
        pts.extend(circle_tangents(k))
    ref = sg.MultiPoint(pts).convex_hull
    cone = sg.Polygon(S.pieces[1].shape.vertices)
    assert cone.symmetric_difference(ref).area < 1e-9


def test_sh_kernel_convex_two_exterior_points_is_convex():
    E = Ellipse((0, 0), (2, 1), 0.3)
    K = KernelSpec([(3, 1.5), (3.5, 0.2)])
    S = sh_kernel_convex(E, K)
    region = sg.Polygon(E.boundary_points(2000)).union(sg.Polygon(S.pieces[1].shape.vertices))
    assert region.area == pytest.approx(region.convex_hull.area, rel=2e-3)
    for k in K.points:
        assert region.exterior.distance(sg.Point(k)) < 1e-9


# ----------------------------------------------------------- polygons

def test_sh_kernel_polygon_convex_unchanged():
    H = sh_kernel_polygon(SQUARE, KernelSpec([SQUARE.centroid]))
    assert H.polygon.area == pytest.approx(1.0)


def test_sh_kernel_polygon_rejects_non_simple():
    bad = Polygon([(0, 0), (2, 0), (2, 2), (0, 2)], check=False)
    bad.vertices = np.array([(0, 0), (2, 2), (2, 0), (0, 2)], float)
    with pytest.raises(MalformedInput):
        sh_kernel_polygon(bad, KernelSpec([(1, 1)]))


@pytest.mark.parametrize("k", [(0.5, 0.5), (1.8, 0.3), (0.5, 2.5), (3.0, 3.0)])
def test_sh_kernel_polygon_l_shape_matches_swept_raster(k):
    H = sh_kernel_polygon(L_SHAPE, KernelSpec([k]))
    g = Grid((-0.2, -0.2, 3.2, 3.2), 512)
    ref = radial_hull_mask(g, g.shape(L_SHAPE), k)
    assert iou(g.shape(H.polygon), ref) >= 0.99


def test_sh_kernel_polygon_l_shape_exact_area():
    # from inside the notch only the two triangles seen through (1, 1) are added
    H = sh_kernel_polygon(L_SHAPE, KernelSpec([(1.5, 1.5)]))
    assert H.polygon.area == pytest.approx(3.5)
    H = sh_kernel_polygon(L_SHAPE, KernelSpec([(0.5, 0.5)]))
    assert H.polygon.area == pytest.approx(3.0)


def test_sh_kernel_polygon_strict_from_triangle_kernel():
    # comb-like polygon: three teeth facing upwards
    P = Polygon([(0, 0), (5, 0), (5, 3), (4, 3), (4, 1), (3, 1), (3, 3), (2, 3), (2, 1),
                 (1, 1), (1, 3), (0, 3)])
    K = triangle((2.5, 0.5), 0.3)
    H = sh_kernel_polygon(P, K)
    S = StarObstacle([Piece(PieceKind.STAR_POLYGON, H.polygon)], K)
    assert is_strictly_starshaped(S, 720)


def test_sh_kernel_polygon_postconditions(rng):
    for _ in range(40):
        P = radial_polygon(rng, concave=True)
        c = rng.uniform(-2.5, 2.5, 2)
        K = triangle(c, rng.uniform(0.05, 0.6), rng.uniform(0, 2 * math.pi))
        H = sh_kernel_polygon(P, K)
        v = H.polygon.vertices
        assert is_simple(v)
        ker = polygon_kernel(H.polygon)
        assert ker is not None
        assert all(ker.contains(k, 1e-7) for k in K.points)
        assert sg.Polygon(v).buffer(1e-9).covers(sg.Polygon(P.vertices))
        assert H.polygon.area == pytest.approx(exact_kernel_hull(P, K).area, rel=1e-6)


def test_kernel_hull_walk_mostly_valid_without_fallback(rng):
    from starworlds.starshape import validate_kernel_hull
    ok = 0
    n = 100
    for _ in range(n):
        P = radial_polygon(rng, concave=True)
        K = triangle(rng.uniform(-2.5, 2.5, 2), rng.uniform(0.05, 0.6), rng.uniform(0, 6.3))
        ok += validate_kernel_hull(P, K, kernel_hull_walk(P, K)) is None
    assert ok >= 0.95 * n


# ----------------------------------------------------------- predicates / queries

def test_is_starshaped_wrt_examples():
    assert is_starshaped_wrt(SQUARE, (0.5, 0.5))
    assert not is_starshaped_wrt(L_SHAPE, (1.9, 1.9))
    assert not is_starshaped_wrt(L_SHAPE, (1.9, 0.5))
    assert is_starshaped_wrt(L_SHAPE, (0.5, 0.5))


def test_star_boundary_ray_examples():
    S = StarObstacle([Piece(PieceKind.ORIGINAL, CIRCLE)], KernelSpec([(0, 0)]))
    assert np.allclose(star_boundary_ray(S, (0, 0), (1, 0)), (1, 0))
    cone = sh_point_convex(CIRCLE, (2, 0)).pieces
    S = StarObstacle(cone, triangle((0, 0), 0.2))
    assert np.allclose(star_boundary_ray(S, (0, 0), (1, 0)), (2, 0))
    assert np.allclose(star_boundary_ray(S, (0, 0), (0, 1)), (0, 1))
    with pytest.raises(OriginOutsideKernel):
        star_boundary_ray(S, (0.5, 0.5), (1, 0))


def test_kernel_spec_validation():
    with pytest.raises(MalformedInput):
        KernelSpec([])
    K = KernelSpec([(0, 0), (1, 0), (2, 0)])
    assert not K.is_strict
    K = KernelSpec([(0, 0), (0, 1), (1, 0)])  # clockwise input
    assert K.is_strict and K.hull.area == pytest.approx(0.5)


def test_union_hull_covers_members(rng):
    for _ in range(10):
        shapes = [Ellipse(rng.uniform(-1, 1, 2), rng.uniform(0.3, 1, 2), rng.uniform(0, 3)),
                  radial_polygon(rng, center=rng.uniform(-1, 1, 2), concave=True)]
        K = triangle(rng.uniform(-0.5, 0.5, 2), 0.1)
        S = sh_kernel_union(shapes, K)
        for s in shapes:
            for p in s.boundary_points(200):
                assert S.contains(p, 1e-7)


def test_union_raster_equals_swept_raster(rng):
    # hull of a union equals the union of hulls, checked against a raster sweep
    shapes = [Ellipse((0, 0), (1.0, 0.4), 0.5), radial_polygon(rng, center=(1.5, 1.0), concave=True)]
    K = triangle((0.3, -1.2), 0.3)
    S = sh_kernel_union(shapes, K)
    g = Grid((-3, -3, 4, 4), 384)
    base = g.shape(shapes[0])
    g.shape(shapes[1], base)
    ref = g.empty()
    for k in K.points:
        ref |= radial_hull_mask(g, base, k)
    ref |= g.shape(sg_to_verts(sg.MultiPoint(list(K.points)).convex_hull))
    m = star_mask(g, S)
    # sweeping only from the corners of K slightly under-fills the hull
    assert iou(m, ref) >= 0.97


def sg_to_verts(g):
    return np.asarray(g.exterior.coords)[:-1]


def test_strip_collinear_keeps_one_of_twin_vertices():
    from starworlds.starshape import _strip_collinear
    v = np.array([(0, 0), (2, 0), (2, 2), (2, 2 + 1e-13), (1, 3), (0, 2), (0, 1)], float)
    out = _strip_collinear(v)
    assert Polygon(out, check=False).area == pytest.approx(Polygon(v[[0, 1, 2, 4, 5]]).area)
    assert len(out) == 5
