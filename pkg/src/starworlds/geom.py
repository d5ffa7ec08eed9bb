"""Planar primitives, predicates, tangents and convex operations.

Points are float arrays of shape ``(2,)`` (tuples are accepted everywhere);
polygons store CCW vertex arrays of shape ``(N, 2)``. All sign decisions use
the tolerance returned by :func:`eps_geom`, which grows with the magnitude of
the coordinates involved.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from . import _kernels
from .errors import DegenerateHull, MalformedInput, NotFreeExterior, PointInsideShape

EPS_REL = 1e-9
TWO_PI = 2.0 * math.pi


def eps_geom(*values) -> float:
    """Absolute tolerance ``1e-9 * max(1, magnitude)`` for the given inputs."""
    m = 1.0
    for v in values:
        a = np.abs(np.asarray(v, dtype=float))
        if a.size:
            m = max(m, float(a.max()))
    return EPS_REL * m


def as_point(p) -> np.ndarray:
    a = np.asarray(p, dtype=float).reshape(2)
    if not np.all(np.isfinite(a)):
        raise MalformedInput(f"non-finite point {p!r}")
    return a


def cross(u, v) -> float:
    return float(u[0] * v[1] - u[1] * v[0])


def perp(v) -> np.ndarray:
    """Rotate by +90 degrees."""
    return np.array([-v[1], v[0]], dtype=float)


def normalized(v) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    n = math.hypot(v[0], v[1])
    if n == 0.0:
        raise MalformedInput("zero-length vector")
    return v / n


class Orientation(enum.Enum):
    CW = -1
    COLLINEAR = 0
    CCW = 1


def orient(a, b, c) -> Orientation:
    """Turn direction of ``a -> b -> c``.

    Collinear when ``c`` lies within ``eps_geom`` of the line through ``a`` and
    ``b`` (measured against the longer of the two legs).
    """
    a, b, c = np.asarray(a, float), np.asarray(b, float), np.asarray(c, float)
    u, v = b - a, c - a
    cr = cross(u, v)
    scale = max(math.hypot(*u), math.hypot(*v))
    if abs(cr) <= eps_geom(a, b, c) * scale:
        return Orientation.COLLINEAR
    return Orientation.CCW if cr > 0 else Orientation.CW


@dataclass(frozen=True, eq=False)
class Ray:
    origin: np.ndarray
    direction: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "origin", as_point(self.origin))
        d = as_point(self.direction)
        if d[0] == 0.0 and d[1] == 0.0:
            raise MalformedInput("ray direction must be nonzero")
        object.__setattr__(self, "direction", d)

    @property
    def unit(self) -> np.ndarray:
        return normalized(self.direction)

    def at(self, t: float) -> np.ndarray:
        return self.origin + t * self.direction


@dataclass(frozen=True, eq=False)
class Segment:
    a: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "a", as_point(self.a))
        object.__setattr__(self, "b", as_point(self.b))

    @property
    def is_degenerate(self) -> bool:
        return bool(np.linalg.norm(self.b - self.a) <= eps_geom(self.a, self.b))

    @property
    def length(self) -> float:
        return float(np.linalg.norm(self.b - self.a))


# --------------------------------------------------------------------------
# Shapes


class Ellipse:
    """Closed ellipse given by center, semi-axes and rotation (radians)."""

    is_convex = True

    def __init__(self, center, semi_axes, rotation: float = 0.0):
        self.center = as_point(center)
        a, b = (float(s) for s in semi_axes)
        if not (a > 0 and b > 0 and math.isfinite(a) and math.isfinite(b)):
            raise MalformedInput(f"semi-axes must be positive, got {semi_axes!r}")
        self.semi_axes = (a, b)
        self.rotation = float(rotation)
        c, s = math.cos(self.rotation), math.sin(self.rotation)
        self._rot = np.array([[c, -s], [s, c]])
        self._fwd = self._rot @ np.diag([a, b])  # unit circle -> ellipse
        self._inv = np.diag([1.0 / a, 1.0 / b]) @ self._rot.T

    def __repr__(self):
        return f"Ellipse(center={tuple(self.center)}, semi_axes={self.semi_axes}, rotation={self.rotation})"

    def to_local(self, p) -> np.ndarray:
        return self._inv @ (np.asarray(p, float) - self.center)

    def from_local(self, q) -> np.ndarray:
        return self.center + self._fwd @ np.asarray(q, float)

    @property
    def area(self) -> float:
        return math.pi * self.semi_axes[0] * self.semi_axes[1]

    @property
    def bounds(self):
        a, b = self.semi_axes
        c, s = math.cos(self.rotation), math.sin(self.rotation)
        hx = math.hypot(a * c, b * s)
        hy = math.hypot(a * s, b * c)
        x, y = self.center
        return (x - hx, y - hy, x + hx, y + hy)

    def level(self, p) -> float:
        """Implicit value ``|local(p)|^2 - 1`` (negative inside)."""
        q = self.to_local(p)
        return float(q @ q - 1.0)

    def contains(self, p, tol: float = 0.0) -> bool:
        """Closed membership; ``tol`` grows the ellipse by roughly that distance."""
        q = self.to_local(p)
        r = math.hypot(q[0], q[1])
        return r <= 1.0 + tol / min(self.semi_axes)

    def boundary_points(self, n: int) -> np.ndarray:
        t = np.linspace(0.0, TWO_PI, n, endpoint=False)
        circ = np.stack([np.cos(t), np.sin(t)], axis=1)
        return self.center + circ @ self._fwd.T

    def polygon(self, n: int = 30, circumscribed: bool = False) -> "Polygon":
        """Inscribed (default) or circumscribed ``n``-gon approximation."""
        pts = self.boundary_points(n)
        if circumscribed:
            pts = self.center + (pts - self.center) / math.cos(math.pi / n)
        return Polygon(pts, check=False)

    def support(self, u) -> np.ndarray:
        """Boundary point maximizing ``<p, u>``."""
        w = self._fwd.T @ np.asarray(u, float)
        return self.center + self._fwd @ (w / np.linalg.norm(w))

    def normal_at(self, p) -> np.ndarray:
        q = self.to_local(p)
        return normalized(self._inv.T @ q)

    def ray_interval(self, o, d):
        """Parameters ``(t0, t1)`` where ``o + t d`` is inside, or ``None``."""
        qo = self.to_local(o)
        qd = self._inv @ np.asarray(d, float)
        A = float(qd @ qd)
        B = float(qo @ qd)
        C = float(qo @ qo) - 1.0
        disc = B * B - A * C
        if disc < 0.0:
            return None
        sq = math.sqrt(disc)
        return ((-B - sq) / A, (-B + sq) / A)

    def translated(self, v) -> "Ellipse":
        return Ellipse(self.center + np.asarray(v, float), self.semi_axes, self.rotation)

    def inflated(self, r: float) -> "Ellipse":
        return Ellipse(self.center, (self.semi_axes[0] + r, self.semi_axes[1] + r), self.rotation)


def signed_area(v: np.ndarray) -> float:
    x, y = v[:, 0], v[:, 1]
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(np.roll(x, -1), y))


def _segments_cross(p1, p2, q1, q2, tol) -> bool:
    """Closed segment intersection test."""
    d1 = cross(p2 - p1, q1 - p1)
    d2 = cross(p2 - p1, q2 - p1)
    d3 = cross(q2 - q1, p1 - q1)
    d4 = cross(q2 - q1, p2 - q1)
    lp = max(np.linalg.norm(p2 - p1), 1e-300)
    lq = max(np.linalg.norm(q2 - q1), 1e-300)
    s1, s2 = _sgn(d1 / lp, tol), _sgn(d2 / lp, tol)
    s3, s4 = _sgn(d3 / lq, tol), _sgn(d4 / lq, tol)
    if s1 * s2 < 0 and s3 * s4 < 0:
        return True

    def on_seg(a, b, c):
        return (min(a[0], b[0]) - tol <= c[0] <= max(a[0], b[0]) + tol
                and min(a[1], b[1]) - tol <= c[1] <= max(a[1], b[1]) + tol)

    if s1 == 0 and on_seg(p1, p2, q1):
        return True
    if s2 == 0 and on_seg(p1, p2, q2):
        return True
    if s3 == 0 and on_seg(q1, q2, p1):
        return True
    if s4 == 0 and on_seg(q1, q2, p2):
        return True
    return False


def _sgn(x, tol) -> int:
    return 0 if abs(x) <= tol else (1 if x > 0 else -1)


def is_simple(v: np.ndarray, tol: float | None = None) -> bool:
    """True when no two non-adjacent edges touch."""
    n = len(v)
    if n < 3:
        return False
    tol = eps_geom(v) if tol is None else tol
    for i in range(n):
        a1, a2 = v[i], v[(i + 1) % n]
        for j in range(i + 1, n):
            if j == i or (j + 1) % n == i or (i + 1) % n == j:
                continue
            if _segments_cross(a1, a2, v[j], v[(j + 1) % n], tol):
                return False
    return True


class Polygon:
    """Simple polygon with CCW vertices.

    Clockwise input is reversed; consecutive duplicates are dropped. With
    ``check=True`` the polygon is verified to be simple.
    """

    def __init__(self, vertices, check: bool = True):
        v = np.array(vertices, dtype=float).reshape(-1, 2)
        if not np.all(np.isfinite(v)):
            raise MalformedInput("polygon has non-finite vertices")
        if len(v) >= 2:
            tol = eps_geom(v)
            keep = np.linalg.norm(v - np.roll(v, 1, axis=0), axis=1) > tol
            if not keep.any():
                keep[0] = True
            v = v[keep]
        if len(v) < 3:
            raise MalformedInput("polygon needs at least 3 distinct vertices")
        area = signed_area(v)
        if abs(area) <= eps_geom(v) ** 2:
            raise MalformedInput("polygon has zero area")
        if area < 0:
            v = v[::-1].copy()
        if check and not is_simple(v):
            raise MalformedInput("polygon is not simple")
        self.vertices = np.ascontiguousarray(v)
        self._convex = None

    def __repr__(self):
        return f"Polygon({self.vertices.tolist()})"

    def __len__(self):
        return len(self.vertices)

    @property
    def area(self) -> float:
        return signed_area(self.vertices)

    @property
    def centroid(self) -> np.ndarray:
        v = self.vertices
        w = v[:, 0] * np.roll(v[:, 1], -1) - np.roll(v[:, 0], -1) * v[:, 1]
        a = w.sum() / 2.0
        cx = ((v[:, 0] + np.roll(v[:, 0], -1)) * w).sum() / (6 * a)
        cy = ((v[:, 1] + np.roll(v[:, 1], -1)) * w).sum() / (6 * a)
        return np.array([cx, cy])

    @property
    def bounds(self):
        lo = self.vertices.min(axis=0)
        hi = self.vertices.max(axis=0)
        return (lo[0], lo[1], hi[0], hi[1])

    @property
    def is_convex(self) -> bool:
        if self._convex is None:
            v = self.vertices
            n = len(v)
            self._convex = all(
                orient(v[i - 1], v[i], v[(i + 1) % n]) != Orientation.CW for i in range(n)
            )
        return self._convex

    def edges(self):
        v = self.vertices
        return zip(v, np.roll(v, -1, axis=0))

    def contains(self, p, tol: float = 0.0) -> bool:
        """Closed membership; points within ``tol`` of the boundary count."""
        p = np.asarray(p, float)
        if bool(_kernels.points_in_polygon(p.reshape(1, 2), self.vertices)[0]):
            return True
        return tol > 0 and distance_to_boundary(self, p) <= tol

    def contains_strict(self, p, tol: float) -> bool:
        """Interior membership at least ``tol`` away from the boundary."""
        p = np.asarray(p, float)
        if not bool(_kernels.points_in_polygon(p.reshape(1, 2), self.vertices)[0]):
            return False
        return distance_to_boundary(self, p) > tol

    def boundary_points(self, n: int) -> np.ndarray:
        """``n`` points evenly spaced by arc length along the boundary."""
        v = self.vertices
        w = np.roll(v, -1, axis=0)
        seg = np.linalg.norm(w - v, axis=1)
        cum = np.concatenate([[0.0], np.cumsum(seg)])
        s = np.linspace(0.0, cum[-1], n, endpoint=False)
        idx = np.searchsorted(cum, s, side="right") - 1
        frac = (s - cum[idx]) / seg[idx]
        return v[idx] + frac[:, None] * (w[idx] - v[idx])

    def translated(self, v) -> "Polygon":
        return Polygon(self.vertices + np.asarray(v, float), check=False)


Shape = Union[Ellipse, Polygon]


def shape_polygon(shape: Shape, n: int = 30, circumscribed: bool = False) -> Polygon:
    """Polygon stand-in for a shape; ellipses become ``n``-gons."""
    if isinstance(shape, Ellipse):
        return shape.polygon(n, circumscribed=circumscribed)
    return shape


def shape_contains(shape: Shape, p, tol: float = 0.0) -> bool:
    return shape.contains(p, tol)


# --------------------------------------------------------------------------
# Distances and intersections


def distance_point_segment(p, a, b) -> float:
    p, a, b = np.asarray(p, float), np.asarray(a, float), np.asarray(b, float)
    ab = b - a
    L = float(ab @ ab)
    if L == 0.0:
        return float(np.linalg.norm(p - a))
    t = min(max(float((p - a) @ ab) / L, 0.0), 1.0)
    return float(np.linalg.norm(p - (a + t * ab)))


def distance_to_boundary(P: Polygon, p) -> float:
    v = P.vertices
    w = np.roll(v, -1, axis=0)
    p = np.asarray(p, float)
    ab = w - v
    L = np.einsum("ij,ij->i", ab, ab)
    t = np.clip(np.einsum("ij,ij->i", p - v, ab) / np.where(L == 0, 1, L), 0.0, 1.0)
    d = p - (v + t[:, None] * ab)
    return float(np.sqrt(np.einsum("ij,ij->i", d, d)).min())


def segment_intersection(p1, p2, q1, q2):
    """Intersection point of two closed segments, or ``None``.

    Collinear overlaps return the overlap point closest to ``p1``.
    """
    p1, p2, q1, q2 = (np.asarray(z, float) for z in (p1, p2, q1, q2))
    tol = eps_geom(p1, p2, q1, q2)
    if not _segments_cross(p1, p2, q1, q2, tol):
        return None
    r, s = p2 - p1, q2 - q1
    den = cross(r, s)
    if abs(den) > tol * max(np.linalg.norm(r) * np.linalg.norm(s), 1e-300) and abs(den) > 0:
        t = cross(q1 - p1, s) / den
        return p1 + min(max(t, 0.0), 1.0) * r
    rr = float(r @ r)
    if rr == 0.0:
        return p1.copy()
    ts = sorted(min(max(float((q - p1) @ r) / rr, 0.0), 1.0) for q in (q1, q2))
    return p1 + ts[0] * r


def line_intersection(p1, d1, p2, d2):
    """Intersection of lines ``p1 + t d1`` and ``p2 + s d2`` (or ``None``)."""
    den = cross(d1, d2)
    if den == 0.0:
        return None
    t = cross(np.asarray(p2, float) - p1, d2) / den
    return np.asarray(p1, float) + t * np.asarray(d1, float)


# --------------------------------------------------------------------------
# Convex operations


def convex_hull(points) -> Polygon:
    """CCW convex hull (monotone chain) without collinear boundary points."""
    pts = np.unique(np.asarray(points, dtype=float).reshape(-1, 2), axis=0)
    if len(pts) < 3:
        raise DegenerateHull("fewer than three distinct points")
    order = np.lexsort((pts[:, 1], pts[:, 0]))
    pts = pts[order]

    def chain(seq):
        out = []
        for p in seq:
            while len(out) >= 2 and orient(out[-2], out[-1], p) != Orientation.CCW:
                out.pop()
            out.append(p)
        return out

    lower = chain(pts)
    upper = chain(pts[::-1])
    hull = np.array(lower[:-1] + upper[:-1])
    if len(hull) < 3:
        raise DegenerateHull("all points are collinear")
    return Polygon(hull, check=False)


def clip_halfplane(v: np.ndarray, a, b) -> np.ndarray:
    """Sutherland-Hodgman clip of a polygon to the closed left side of ``a -> b``."""
    a, b = np.asarray(a, float), np.asarray(b, float)
    d = b - a
    n = len(v)
    if n == 0:
        return v
    side = (d[0] * (v[:, 1] - a[1]) - d[1] * (v[:, 0] - a[0]))
    out = []
    for i in range(n):
        j = (i + 1) % n
        si, sj = side[i], side[j]
        if si >= 0:
            out.append(v[i])
        if (si >= 0) != (sj >= 0):
            t = si / (si - sj)
            out.append(v[i] + t * (v[j] - v[i]))
    return np.array(out).reshape(-1, 2)


def convex_intersection(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Vertices of the intersection of two CCW convex polygons (may be empty)."""
    out = np.asarray(A, float)
    m = len(B)
    for i in range(m):
        out = clip_halfplane(out, B[i], B[(i + 1) % m])
        if len(out) == 0:
            break
    return out


def convex_pieces_intersect(A, B) -> bool:
    """Closed convex polygons share a point (separating-axis test)."""
    va = A.vertices if isinstance(A, Polygon) else np.ascontiguousarray(A, dtype=float)
    vb = B.vertices if isinstance(B, Polygon) else np.ascontiguousarray(B, dtype=float)
    return bool(_kernels.convex_intersect(va, vb, eps_geom(va, vb)))


def polygon_kernel(P: Polygon):
    """Kernel of a simple polygon as a convex ``Polygon``, or ``None`` if empty.

    Quadratic half-plane clipping of the bounding box by every edge.
    """
    v = P.vertices
    x0, y0, x1, y1 = P.bounds
    region = np.array([[x0, y0], [x1, y0], [x1, y1], [x0, y1]], dtype=float)
    n = len(v)
    for i in range(n):
        region = clip_halfplane(region, v[i], v[(i + 1) % n])
        if len(region) < 3:
            return None
    tol = eps_geom(v)
    if abs(signed_area(region)) <= tol * max(x1 - x0, y1 - y0):
        return None
    try:
        return convex_hull(region)
    except DegenerateHull:
        return None


# --------------------------------------------------------------------------
# Tangents and angular extent


def _unwrapped_angles(pts: np.ndarray, x: np.ndarray):
    d = pts - x
    ang = np.arctan2(d[:, 1], d[:, 0])
    diff = np.diff(np.concatenate([ang, ang[:1]]))
    diff = (diff + math.pi) % TWO_PI - math.pi
    unwrapped = ang[0] + np.concatenate([[0.0], np.cumsum(diff[:-1])])
    winding = float(diff.sum())
    return unwrapped, winding


def angular_extent(shape: Shape, x):
    """Directions from ``x`` in which rays hit ``shape``.

    Returns ``(lo, hi)`` with ``hi - lo < 2 pi`` (radians, unwrapped) or
    ``None`` when every ray hits (``x`` inside or enclosed by the shape).
    """
    x = as_point(x)
    if isinstance(shape, Ellipse):
        if shape.contains(x, eps_geom(x, shape.center)):
            return None
        t1, t2 = tangent_points_ellipse(shape, x)
        a1 = math.atan2(*(t1 - x)[::-1])
        a2 = math.atan2(*(t2 - x)[::-1])
        if a1 < a2:
            a1 += TWO_PI
        return (a2, a1)
    try:
        i1, i2, ang = _polygon_tangent_indices(shape, x)
    except NotFreeExterior:
        return None
    return (float(ang[i2]), float(ang[i1]))


def _polygon_tangent_indices(P: Polygon, x):
    v = P.vertices
    tol = eps_geom(v, x)
    if P.contains(x, tol):
        raise NotFreeExterior("point lies in the polygon")
    ang, winding = _unwrapped_angles(v, x)
    if abs(winding) > math.pi:
        raise NotFreeExterior("point lies in the polygon")
    lo, hi = ang.min(), ang.max()
    span = hi - lo
    if span >= TWO_PI - 1e-12:
        raise NotFreeExterior("point is enclosed by the polygon")
    dist = np.linalg.norm(v - x, axis=1)
    atol = 1e-12 * max(1.0, abs(hi), abs(lo))
    cand_hi = np.flatnonzero(ang >= hi - atol)
    cand_lo = np.flatnonzero(ang <= lo + atol)
    i1 = int(cand_hi[np.argmin(dist[cand_hi])])
    i2 = int(cand_lo[np.argmin(dist[cand_lo])])
    return i1, i2, ang


def tangent_points_polygon(P: Polygon, x):
    """Vertices of ``P`` with maximal/minimal polar angle seen from ``x``.

    ``x`` must be a free exterior point. The pair is ordered so that the
    triangle ``x, t1, t2`` is clockwise.
    """
    x = as_point(x)
    i1, i2, _ = _polygon_tangent_indices(P, x)
    return P.vertices[i1].copy(), P.vertices[i2].copy()


def tangent_points_ellipse(E: Ellipse, x):
    """Closed-form tangent points through an exterior point, CW ordered."""
    x = as_point(x)
    q = E.to_local(x)
    r = math.hypot(q[0], q[1])
    if r <= 1.0 + eps_geom(x, E.center) / min(E.semi_axes):
        raise PointInsideShape("point is inside or on the ellipse")
    phi = math.atan2(q[1], q[0])
    alpha = math.acos(1.0 / r)
    t1 = E.from_local([math.cos(phi - alpha), math.sin(phi - alpha)])
    t2 = E.from_local([math.cos(phi + alpha), math.sin(phi + alpha)])
    return t1, t2


def tangent_points(shape: Shape, x):
    if isinstance(shape, Ellipse):
        return tangent_points_ellipse(shape, x)
    try:
        return tangent_points_polygon(shape, x)
    except NotFreeExterior as exc:
        if shape.contains(x, eps_geom(shape.vertices, x)):
            raise PointInsideShape(str(exc)) from exc
        raise


# --------------------------------------------------------------------------
# Ray queries


def ray_polygon_hits(ray: Ray, P: Polygon):
    """Boundary contacts of a ray, sorted by parameter, grazes merged."""
    o, d = ray.origin, ray.direction
    tol = eps_geom(P.vertices, o)
    ts = _kernels.segment_polygon_params(o[0], o[1], d[0], d[1], math.inf, P.vertices, tol)
    return [(t, o + t * d) for t in ts]


def segment_interior_runs(p, q, P: Polygon, tol: float | None = None):
    """Sub-intervals ``[s0, s1]`` of ``l[p, q]`` (parameter in [0, 1]) that lie
    in the open interior of ``P``."""
    p, q = np.asarray(p, float), np.asarray(q, float)
    d = q - p
    if tol is None:
        tol = eps_geom(P.vertices, p, q)
    if math.hypot(d[0], d[1]) <= tol:
        return []
    ts = _kernels.segment_polygon_params(p[0], p[1], d[0], d[1], 1.0, P.vertices, tol)
    cuts = sorted(set([0.0, 1.0] + list(ts)))
    runs = []
    for a, b in zip(cuts[:-1], cuts[1:]):
        if b - a <= 0.0:
            continue
        m = p + 0.5 * (a + b) * d
        if P.contains_strict(m, tol):
            if runs and abs(runs[-1][1] - a) <= 1e-15:
                runs[-1] = (runs[-1][0], b)
            else:
                runs.append((a, b))
    return runs


def ray_enters_interior(origin, direction, P: Polygon, tol: float | None = None) -> bool:
    """Whether the open ray ``origin + t direction, t > 0`` meets ``int P``."""
    o, d = np.asarray(origin, float), np.asarray(direction, float)
    if tol is None:
        tol = eps_geom(P.vertices, o)
    dn = math.hypot(d[0], d[1])
    if dn == 0.0:
        return False
    ts = _kernels.segment_polygon_params(o[0], o[1], d[0], d[1], math.inf, P.vertices, tol)
    cuts = [0.0] + [t for t in ts if t > tol / dn]
    # beyond the last contact the ray is outside a bounded polygon
    for a, b in zip(cuts[:-1], cuts[1:]):
        if P.contains_strict(o + 0.5 * (a + b) * d, tol):
            return True
    return False


# --------------------------------------------------------------------------
# Point classification


class PointClass(enum.Enum):
    INSIDE = "inside"
    BOUNDED_EXTERIOR = "bounded_exterior"
    FREE_EXTERIOR = "free_exterior"


def classify_point(shapes: Sequence[Shape], x) -> PointClass:
    """Inside / bounded exterior / free exterior w.r.t. the union of shapes.

    Exact: the union of the angular intervals subtended by each shape is
    compared against the full circle.
    """
    x = as_point(x)
    intervals = []
    for s in shapes:
        tol = eps_geom(x, *(s.bounds))
        if s.contains(x, tol):
            return PointClass.INSIDE
    for s in shapes:
        ext = angular_extent(s, x)
        if ext is None:
            return PointClass.BOUNDED_EXTERIOR
        intervals.append(ext)
    if not intervals:
        return PointClass.FREE_EXTERIOR
    return (PointClass.BOUNDED_EXTERIOR if _covers_circle(intervals)
            else PointClass.FREE_EXTERIOR)


def _covers_circle(intervals, tol: float = 1e-12) -> bool:
    segs = []
    for lo, hi in intervals:
        lo0 = lo % TWO_PI
        hi0 = lo0 + (hi - lo)
        if hi0 > TWO_PI:
            segs.append((lo0, TWO_PI))
            segs.append((0.0, hi0 - TWO_PI))
        else:
            segs.append((lo0, hi0))
    segs.sort()
    reach = 0.0
    for lo, hi in segs:
        if lo > reach + tol:
            return False
        reach = max(reach, hi)
    return reach >= TWO_PI - tol
