"""Starshaped hulls with respect to a point and with a specified kernel.

A hull over a polygon ``P`` and kernel points ``K`` equals the union over the
edges ``[a, b]`` of ``P`` of the convex hulls ``CH(K + {a, b})``: the union of
``l[k, y]`` over ``y`` in ``P`` is the fan of triangles ``(k, a, b)``, and
sweeping ``k`` over ``CH(K)`` turns each triangle into ``CH(K + {a, b})``.
That identity backs the validation of the vertex-walking construction in
:func:`sh_kernel_polygon` and its fallback.
"""
from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
import shapely
import shapely.geometry as sg

from . import _kernels
from .errors import DegenerateHull, MalformedInput, OriginOutsideKernel
from .geom import (
    Ellipse,
    Orientation,
    Polygon,
    as_point,
    convex_hull,
    distance_point_segment,
    eps_geom,
    is_simple,
    normalized,
    orient,
    polygon_kernel,
    ray_enters_interior,
    segment_interior_runs,
    segment_intersection,
    tangent_points,
)

log = logging.getLogger(__name__)


class KernelSpec:
    """Specified kernel points ``K`` and their convex hull."""

    def __init__(self, points):
        pts = np.array(points, dtype=float).reshape(-1, 2)
        if len(pts) == 0:
            raise MalformedInput("kernel needs at least one point")
        if not np.all(np.isfinite(pts)):
            raise MalformedInput("kernel points must be finite")
        self.points = pts
        self.centroid = pts.mean(axis=0)
        self.hull = None
        if len(pts) == 3:
            o = orient(*pts)
            if o is not Orientation.COLLINEAR:
                self.hull = Polygon(pts if o is Orientation.CCW else pts[::-1], check=False)
        elif len(pts) > 3:
            try:
                self.hull = convex_hull(pts)
            except DegenerateHull:
                pass

    def __len__(self):
        return len(self.points)

    def __repr__(self):
        return f"KernelSpec({self.points.tolist()})"

    @property
    def is_strict(self) -> bool:
        """Three affinely independent points: hulls become strictly starshaped."""
        return self.hull is not None

    def hull_contains(self, p, tol: float) -> bool:
        if self.hull is not None:
            return self.hull.contains(p, tol)
        p = np.asarray(p, float)
        pts = self.points
        if len(pts) == 1:
            return float(np.linalg.norm(p - pts[0])) <= tol
        return any(distance_point_segment(p, pts[i], pts[j]) <= tol
                   for i in range(len(pts)) for j in range(i + 1, len(pts)))

    def same_as(self, other: "KernelSpec") -> bool:
        return self.points.shape == other.points.shape and bool(np.all(self.points == other.points))


class PieceKind(enum.Enum):
    ORIGINAL = "original"          # the obstacle itself (convex)
    TANGENT_CONE = "tangent_cone"  # CH(K + tangent points), convex
    STAR_POLYGON = "star_polygon"  # hull of a concave polygon, starshaped w.r.t. CH(K)


@dataclass(frozen=True, eq=False)
class Piece:
    kind: PieceKind
    shape: object  # Ellipse | Polygon


class StarPolygon:
    """Polygon output of :func:`sh_kernel_polygon`, starshaped w.r.t. ``CH(K)``."""

    def __init__(self, polygon: Polygon, kernel: KernelSpec, fallback: bool = False):
        self.polygon = polygon
        self.kernel = kernel
        self.fallback = fallback

    @property
    def vertices(self) -> np.ndarray:
        return self.polygon.vertices

    def __repr__(self):
        return f"StarPolygon({self.vertices.tolist()}, fallback={self.fallback})"


class StarObstacle:
    """Union of pieces that is strictly starshaped w.r.t. ``int CH(K)``.

    ``members`` lists the ids of the original obstacles it covers.
    """

    def __init__(self, pieces: Sequence[Piece], kernel: KernelSpec, members=()):
        if not pieces:
            raise MalformedInput("star obstacle needs at least one piece")
        self.pieces = list(pieces)
        self.kernel = kernel
        self.members = tuple(members)
        self._convex_parts = None
        self._boundary = None
        self._scale = eps_geom(*(p.shape.bounds for p in self.pieces), kernel.points)

    def __repr__(self):
        kinds = ",".join(p.kind.value for p in self.pieces)
        return f"StarObstacle(members={self.members}, pieces=[{kinds}])"

    @property
    def kernel_hull(self):
        return self.kernel.hull

    @property
    def bounds(self):
        b = np.array([p.shape.bounds for p in self.pieces])
        return (b[:, 0].min(), b[:, 1].min(), b[:, 2].max(), b[:, 3].max())

    def contains(self, p, tol: float = 0.0) -> bool:
        return any(pc.shape.contains(p, tol) for pc in self.pieces)

    def convex_parts(self) -> list[np.ndarray]:
        """Convex polygons covering the obstacle (ellipses circumscribed by 30-gons)."""
        if self._convex_parts is None:
            parts = []
            for pc in self.pieces:
                s = pc.shape
                if isinstance(s, Ellipse):
                    parts.append(s.polygon(30, circumscribed=True).vertices)
                elif pc.kind is PieceKind.STAR_POLYGON:
                    parts.extend(_fan(s, self.kernel.centroid))
                else:
                    parts.append(s.vertices)
            self._convex_parts = parts
        return self._convex_parts

    def exit(self, origin, direction):
        """``(t, point, normal)`` of the farthest exit along the ray."""
        o = np.asarray(origin, float)
        d = np.asarray(direction, float)
        best_t, best = -math.inf, None
        for pc in self.pieces:
            t = _piece_exit(pc, o, d, self._scale)
            if t is not None and t > best_t:
                best_t, best = t, pc
        if best is None:
            return None
        b = o + best_t * d
        return best_t, b, _piece_normal(best, b)

    def boundary_ray(self, origin, direction):
        """Boundary point along ``r(origin, direction)``; origin must be in CH(K)."""
        o = as_point(origin)
        d = as_point(direction)
        if d[0] == 0.0 and d[1] == 0.0:
            raise MalformedInput("direction must be nonzero")
        if not self.kernel.hull_contains(o, 1e3 * self._scale):
            raise OriginOutsideKernel(f"{tuple(o)} is outside CH(K)")
        hit = self.exit(o, d)
        if hit is None:
            raise OriginOutsideKernel("ray does not meet the obstacle")
        return hit

    def boundary_polygon(self, n: int = 360) -> np.ndarray:
        """Boundary sampled by ``n`` rays from the kernel centroid (cached)."""
        if self._boundary is None:
            c = self.kernel.centroid
            ang = np.linspace(0.0, 2 * math.pi, n, endpoint=False)
            pts = []
            for a in ang:
                hit = self.exit(c, (math.cos(a), math.sin(a)))
                pts.append(hit[1] if hit is not None else c)
            self._boundary = np.array(pts)
        return self._boundary


def _fan(P: Polygon, c) -> list[np.ndarray]:
    v = P.vertices
    n = len(v)
    # edges seen edge-on from c contribute nothing
    return [np.array([c, v[i], v[(i + 1) % n]]) for i in range(n)
            if orient(c, v[i], v[(i + 1) % n]) == Orientation.CCW]


def _piece_exit(pc: Piece, o, d, tol):
    s = pc.shape
    if isinstance(s, Ellipse):
        iv = s.ray_interval(o, d)
        if iv is None or iv[1] < 0.0:
            return None
        return iv[1]
    if pc.kind is PieceKind.STAR_POLYGON:
        ts = _kernels.segment_polygon_params(o[0], o[1], d[0], d[1], math.inf, s.vertices, tol)
        return ts[-1] if ts else None
    iv = _kernels.ray_convex_interval(o[0], o[1], d[0], d[1], s.vertices, 0.0)
    if iv is None or iv[1] < 0.0:
        return None
    return iv[1]


def _piece_normal(pc: Piece, b) -> np.ndarray:
    s = pc.shape
    if isinstance(s, Ellipse):
        return s.normal_at(b)
    v = s.vertices
    w = np.roll(v, -1, axis=0)
    dists = [distance_point_segment(b, v[i], w[i]) for i in range(len(v))]
    i = int(np.argmin(dists))
    e = w[i] - v[i]
    return normalized([e[1], -e[0]])


# --------------------------------------------------------------------------
# Hulls of convex sets


def sh_point_convex(A, x) -> StarObstacle:
    """``SH_x(A)`` for a convex ``A``: ``A`` plus the tangent triangle."""
    x = as_point(x)
    K = KernelSpec([x])
    if A.contains(x, eps_geom(x, A.bounds)):
        return StarObstacle([Piece(PieceKind.ORIGINAL, A)], K)
    t1, t2 = tangent_points(A, x)
    cone = convex_hull([x, t1, t2])
    return StarObstacle([Piece(PieceKind.ORIGINAL, A), Piece(PieceKind.TANGENT_CONE, cone)], K)


def tangent_cone_points(A, K: KernelSpec) -> np.ndarray | None:
    """``K`` together with the tangent points of ``A`` through each ``k`` outside ``A``.

    ``None`` when every kernel point lies in ``A`` (no extension needed).
    """
    tol = eps_geom(K.points, A.bounds)
    pts = [K.points]
    outside = False
    for k in K.points:
        if A.contains(k, tol):
            continue
        outside = True
        t1, t2 = tangent_points(A, k)
        pts.append(np.array([t1, t2]))
    if not outside:
        return None
    return np.concatenate(pts)


def sh_kernel_convex(A, K: KernelSpec) -> StarObstacle:
    """Hull of a convex set with specified kernel: ``A`` plus ``CH(K + tangents)``."""
    pts = tangent_cone_points(A, K)
    pieces = [Piece(PieceKind.ORIGINAL, A)]
    if pts is not None:
        try:
            pieces.append(Piece(PieceKind.TANGENT_CONE, convex_hull(pts)))
        except DegenerateHull:
            pass  # the cone collapsed onto a segment already inside A's closure
    return StarObstacle(pieces, K)


# --------------------------------------------------------------------------
# Hulls of polygons


def exact_kernel_hull(P: Polygon, K: KernelSpec):
    """``SH_kerK(P)`` as a shapely polygon via the per-edge convex hull union."""
    v = P.vertices
    w = np.roll(v, -1, axis=0)
    parts = [sg.Polygon(v)]
    for a, b in zip(v, w):
        pts = np.vstack([K.points, a, b])
        hull = sg.MultiPoint(pts).convex_hull
        if hull.geom_type == "Polygon":
            parts.append(hull)
    u = shapely.unary_union(parts)
    if u.geom_type != "Polygon":
        u = max(u.geoms, key=lambda g: g.area)
    return u


def _strip_collinear(v: np.ndarray) -> np.ndarray:
    v = np.asarray(v, float)
    tol = eps_geom(v)
    # near-duplicates first: each twin would otherwise look collinear and both would go
    pts = [p for i, p in enumerate(v) if math.hypot(*(p - v[i - 1])) > tol] or [v[0]]
    i = 0
    while len(pts) > 3 and i < len(pts):
        n = len(pts)
        if orient(pts[i - 1], pts[i], pts[(i + 1) % n]) == Orientation.COLLINEAR:
            pts.pop(i)
            i = max(i - 1, 0)
        else:
            i += 1
    return np.array(pts) if len(pts) >= 3 else v


def _dedupe(pts: list, tol: float) -> list:
    out = []
    for p in pts:
        if out and np.linalg.norm(p - out[-1]) <= tol:
            continue
        out.append(p)
    while len(out) > 1 and np.linalg.norm(out[0] - out[-1]) <= tol:
        out.pop()
    return out


def _start_index(v: np.ndarray, tol: float) -> int:
    xmax = v[:, 0].max()
    cand = np.flatnonzero(v[:, 0] >= xmax - tol)
    return int(cand[np.argmin(v[cand, 1])])


def _approach(k, v, P: Polygon, tol):
    """How ``l[k, v]`` reaches ``v``: ``('inside', None)``, ``('boundary', None)``,
    ``('outside', u)`` with ``u`` the end of the last interior run, or
    ``('clear', None)`` when the segment never meets ``int P``."""
    d = v - k
    L = math.hypot(d[0], d[1])
    if L <= tol:
        return "boundary", None
    ts = _kernels.segment_polygon_params(k[0], k[1], d[0], d[1], 1.0, P.vertices, tol)
    cuts = sorted(set([0.0] + [t for t in ts if t < 1.0 - tol / L] + [1.0]))
    a = cuts[-2]
    m = k + 0.5 * (a + 1.0) * d
    if P.contains_strict(m, tol):
        return "inside", None
    if P.contains(m, tol):
        return "boundary", None
    runs = segment_interior_runs(k, v, P, tol)
    if not runs:
        return "clear", None
    return "outside", k + runs[-1][1] * d


def _crosses(p1, p2, q1, q2, tol) -> np.ndarray | None:
    """Intersection of ``l[p1, p2]`` and ``l[q1, q2]`` away from ``p1`` and ``p2``."""
    x = segment_intersection(p1, p2, q1, q2)
    if x is None:
        return None
    if np.linalg.norm(x - p1) <= tol or np.linalg.norm(x - p2) <= tol:
        return None
    return x


def kernel_hull_walk(P: Polygon, K: KernelSpec) -> list[np.ndarray]:
    """Vertex walk producing the hull polygon of ``P`` with kernel ``K``.

    Follows the classic construction for a single point generalised to a
    finite kernel set: every vertex whose outward ray (away from each ``k``)
    stays out of ``int P`` is kept, window edges along ``l[k, v]`` are added
    where ``v`` is reached from outside ``P``, and a final pass bridges
    consecutive output vertices that some ``k`` sees from behind.
    """
    verts = P.vertices
    n = len(verts)
    tol = 1e3 * eps_geom(verts, K.points)
    s = _start_index(verts, tol)
    order = [verts[(s + i) % n] for i in range(n)]
    prev_of = {i: order[i - 1] for i in range(n)}
    ks = list(K.points)

    out: list[np.ndarray] = []
    e1 = e2 = K.centroid.copy()
    vbar = K.centroid.copy()
    for i, v in enumerate(order):
        if any(ray_enters_interior(v, v - k, P, tol) for k in ks
               if np.linalg.norm(v - k) > tol):
            continue
        if K.hull is not None and K.hull.contains_strict(v, tol):
            continue  # some k in CH(K) lies behind v in every direction
        out.append(v)
        vp = prev_of[i]
        hits = [x for k in ks if (x := _crosses(k, v, e1, e2, tol)) is not None]
        if hits:
            e1 = min(hits, key=lambda x: float(np.linalg.norm(x - e2)))
        else:
            for j, k in enumerate(ks):
                others = [kk for jj, kk in enumerate(ks) if jj != j]
                kind, u = _approach(k, v, P, tol)
                if kind == "outside":
                    if any(ray_enters_interior(u, v - k2, P, tol) for k2 in others):
                        continue
                    for k2 in others:
                        x = segment_intersection(k2, vbar, u, v)
                        if x is not None and np.linalg.norm(x - v) > tol:
                            u = x
                            break
                    out.append(u)
                    e1, e2 = u, v
                    if orient(u, v, vp) == Orientation.CCW:
                        out[-1], out[-2] = out[-2], out[-1]
                elif kind == "clear":
                    if any(ray_enters_interior(k, v - k2, P, tol) for k2 in others):
                        continue
                    out.append(k.copy())
                    e1, e2 = k, v
                    if orient(k, v, vp) == Orientation.CCW:
                        out[-1], out[-2] = out[-2], out[-1]
        vbar = out[-1]

    out = _dedupe(out, tol)
    # final pass: bridge pairs with kernel points on their outer side
    final: list[np.ndarray] = []
    m = len(out)
    for i in range(m):
        a, b = out[i], out[(i + 1) % m]
        final.append(a)
        bad = [k for k in ks if orient(k, a, b) == Orientation.CW]
        if bad:
            final.extend(_outer_chain(a, b, bad))
    return _dedupe(final, tol)


def _outer_chain(a, b, pts) -> list[np.ndarray]:
    """Points of ``pts`` on the convex chain from ``a`` to ``b`` right of ``a -> b``."""
    cand = [p for p in pts if orient(a, b, p) == Orientation.CW]
    if not cand:
        return []
    try:
        hull = convex_hull(np.vstack([a, b, *cand])).vertices
    except DegenerateHull:
        return []
    ia = int(np.argmin(np.linalg.norm(hull - a, axis=1)))
    ib = int(np.argmin(np.linalg.norm(hull - b, axis=1)))
    chain = []
    j = (ia + 1) % len(hull)
    while j != ib:
        chain.append(hull[j].copy())
        j = (j + 1) % len(hull)
    return chain


def validate_kernel_hull(P: Polygon, K: KernelSpec, verts, exact=None) -> str | None:
    """Reason the candidate hull is invalid, or ``None`` if it passes.

    Checks simplicity, ``K`` in the polygon kernel, ``P`` covered, and area
    equal to the exact hull (which, with the first three, pins it down).
    """
    v = np.asarray(verts, float)
    if len(v) < 3:
        return "fewer than three vertices"
    try:
        cand = Polygon(v, check=False)
    except MalformedInput as exc:
        return str(exc)
    if not is_simple(cand.vertices):
        return "not simple"
    scale = max(1.0, float(np.ptp(np.vstack([P.vertices, K.points]), axis=0).max()))
    tol = 1e-7 * scale
    ker = polygon_kernel(cand)
    if ker is None or not all(ker.contains(k, tol) for k in K.points):
        return "kernel points outside the polygon kernel"
    sc = sg.Polygon(cand.vertices)
    if not sc.buffer(tol).covers(sg.Polygon(P.vertices)):
        return "does not cover the input polygon"
    if exact is None:
        exact = exact_kernel_hull(P, K)
    if abs(sc.area - exact.area) > 1e-6 * max(exact.area, scale * scale * 1e-3):
        return f"area {sc.area:.9g} differs from exact {exact.area:.9g}"
    return None


def sh_kernel_polygon(P: Polygon, K: KernelSpec, validate: bool = True) -> StarPolygon:
    """Hull of a simple polygon with specified kernel ``K``.

    The vertex walk result is post-validated; on failure the exact per-edge
    union is used instead and the event is logged.
    """
    if not isinstance(P, Polygon):
        raise MalformedInput("expected a Polygon")
    if not is_simple(P.vertices):
        raise MalformedInput("polygon is not simple")
    tol = eps_geom(P.vertices, K.points)
    if all(P.contains(k, tol) for k in K.points):
        ker = polygon_kernel(P)
        if ker is not None and all(ker.contains(k, 1e3 * tol) for k in K.points):
            return StarPolygon(P, K)
    verts = kernel_hull_walk(P, K)
    if not validate:
        return StarPolygon(Polygon(verts, check=False), K)
    exact = exact_kernel_hull(P, K)
    why = validate_kernel_hull(P, K, verts, exact)
    if why is None:
        return StarPolygon(Polygon(_strip_collinear(np.asarray(verts)), check=False), K)
    log.info("kernel hull walk rejected (%s); using per-edge union", why)
    return StarPolygon(_shapely_to_polygon(exact), K, fallback=True)


def _shapely_to_polygon(g) -> Polygon:
    v = np.asarray(g.exterior.coords)[:-1]
    return Polygon(_strip_collinear(v), check=False)


def sh_kernel(shape, K: KernelSpec) -> list[Piece]:
    """Pieces of the hull of one obstacle shape with kernel ``K``."""
    if isinstance(shape, Ellipse) or shape.is_convex:
        return sh_kernel_convex(shape, K).pieces
    return [Piece(PieceKind.STAR_POLYGON, sh_kernel_polygon(shape, K).polygon)]


def sh_kernel_union(shapes, K: KernelSpec, members=()) -> StarObstacle:
    """Hull of a union of shapes: the union of the per-shape hulls."""
    pieces = []
    for s in shapes:
        pieces.extend(sh_kernel(s, K))
    return StarObstacle(pieces, K, members)


def is_starshaped_wrt(P: Polygon, x) -> bool:
    ker = polygon_kernel(P)
    return ker is not None and ker.contains(as_point(x), eps_geom(P.vertices, x))


def star_boundary_ray(S: StarObstacle, origin, direction) -> np.ndarray:
    return S.boundary_ray(origin, direction)[1]
