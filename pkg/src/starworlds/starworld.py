"""Forming disjoint star worlds from possibly intersecting obstacles.

:func:`form_star_world` clusters obstacles, picks kernel points inside each
cluster's admissible kernel and replaces every cluster by the starshaped hull
with that kernel, repeating until no two hulls intersect. If some cluster's
admissible kernel is empty the whole scene falls back to a convex
decomposition (an intersecting star world).
"""
from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
import shapely
import shapely.geometry as sg
from shapely.ops import polylabel

from . import _kernels
from .admker import KernelRegion, WedgeCache, admissible_kernel, scene_box
from .decomp import hertel_mehlhorn
from .errors import (
    EmptyKernel,
    GoalInsideObstacle,
    IterationLimit,
    MalformedInput,
    RobotInsideObstacle,
)
from .geom import (
    Ellipse,
    Orientation,
    Polygon,
    as_point,
    distance_to_boundary,
    eps_geom,
    orient,
)
from .starshape import KernelSpec, Piece, PieceKind, StarObstacle, sh_kernel_union

log = logging.getLogger(__name__)


class Status(enum.Enum):
    DISJOINT = "disjoint"
    INTERSECTING_FALLBACK = "intersecting_fallback"


@dataclass(frozen=True, eq=False)
class Obstacle:
    id: str
    shape: object
    velocity: Optional[tuple] = None

    def at_time(self, t: float) -> "Obstacle":
        if self.velocity is None or t == 0.0:
            return self
        return Obstacle(self.id, self.shape.translated(np.asarray(self.velocity) * t), self.velocity)


@dataclass
class FormOptions:
    exclude_obstacle_points: bool = False
    kernel_side_length: float = 0.1
    max_iterations: int = 10

    def __post_init__(self):
        if not self.kernel_side_length > 0:
            raise MalformedInput("kernel side length must be positive")
        if self.max_iterations < 1:
            raise MalformedInput("max_iterations must be at least 1")


@dataclass
class Cluster:
    member_ids: tuple
    kernel_region: Optional[KernelRegion] = None
    star: Optional[StarObstacle] = None
    k_c: Optional[np.ndarray] = None


@dataclass
class StarWorld:
    obstacles: list
    status: Status
    iterations: int
    cluster_map: dict
    prev_kernels: dict = field(default_factory=dict)
    clusters: list = field(default_factory=list)

    @property
    def is_disjoint(self) -> bool:
        return self.status is Status.DISJOINT


# --------------------------------------------------------------------------
# Helpers


def _shape_geometry(shape):
    """Shapely stand-in for a shape; ellipses use an inscribed 30-gon."""
    if isinstance(shape, Ellipse):
        return sg.Polygon(shape.polygon(30).vertices)
    return sg.Polygon(shape.vertices)


def _shape_points(shape) -> np.ndarray:
    if isinstance(shape, Ellipse):
        x0, y0, x1, y1 = shape.bounds
        return np.array([[x0, y0], [x1, y1]])
    return shape.vertices


def exclusion_points_for(obstacle) -> np.ndarray:
    """Representative points of an obstacle for obstacle-point exclusion.

    Polygon vertices, or for an ellipse its extreme points along both axes.
    """
    shape = getattr(obstacle, "shape", obstacle)
    if isinstance(shape, Ellipse):
        return np.array([shape.support(u) for u in ((1, 0), (0, 1), (-1, 0), (0, -1))])
    return shape.vertices.copy()


def equilateral(center, side: float, angle: float) -> np.ndarray:
    rho = side / math.sqrt(3.0)
    a = angle + np.array([0.0, 2.0, 4.0]) * math.pi / 3.0
    return np.c_[center[0] + rho * np.cos(a), center[1] + rho * np.sin(a)]


def _principal_angle(g) -> float:
    rect = g.minimum_rotated_rectangle
    if rect.geom_type != "Polygon":
        return 0.0
    c = np.asarray(rect.exterior.coords)
    e = np.diff(c[:3], axis=0)
    i = int(np.argmax(np.hypot(e[:, 0], e[:, 1])))
    return math.atan2(e[i, 1], e[i, 0])


def _fit_triangle(region: KernelRegion, kc, l: float, angle: float):
    """Largest equilateral triangle (side in ``[l/1024, l]``) around ``kc``
    inside ``region``; ``None`` if even the smallest does not fit."""
    def fits(side):
        return region.contains_geometry(sg.Polygon(equilateral(kc, side, angle)))

    if fits(l):
        return equilateral(kc, l, angle)
    lo, hi = l / 1024.0, l
    if not fits(lo):
        return None
    for _ in range(12):
        mid = 0.5 * (lo + hi)
        if fits(mid):
            lo = mid
        else:
            hi = mid
    return equilateral(kc, lo, angle)


def _largest(g):
    if g.is_empty:
        return None
    if g.geom_type == "Polygon":
        return g if g.area > 0 else None
    polys = [p for p in getattr(g, "geoms", []) if p.geom_type == "Polygon" and p.area > 0]
    return max(polys, key=lambda p: p.area) if polys else None


def _split(S, x, x_g, radius: float):
    """``(S1, S2)``: parts of ``S`` right (CW side) and left of ``x -> x_g``."""
    d = np.asarray(x_g, float) - np.asarray(x, float)
    L = math.hypot(d[0], d[1])
    if L == 0.0:
        return S, sg.Polygon()
    d = d / L
    nr = np.array([d[1], -d[0]])
    a, b = np.asarray(x) - radius * d, np.asarray(x) + radius * d
    right = sg.Polygon([a, b, b + radius * nr, a + radius * nr])
    left = sg.Polygon([a, b, b - radius * nr, a - radius * nr])
    return S.intersection(right), S.intersection(left)


def select_kernel_points(region: KernelRegion, shapes: Sequence, x, x_g, l: float,
                         prev=None, cluster_geometry=None):
    """Kernel points ``K`` (equilateral triangle) and centroid ``k_c`` for a cluster.

    ``prev`` is ``(K_points, k_c)`` from the previous frame for the same
    cluster. ``K`` is reused unchanged while it still lies in the region.
    """
    if region.is_empty:
        raise EmptyKernel("admissible kernel is empty")
    x, x_g = as_point(x), as_point(x_g)
    if prev is not None:
        pk, pkc = prev
        if region.contains_geometry(sg.Polygon(pk)):
            return KernelSpec(pk), np.asarray(pkc, float).copy()

    if cluster_geometry is None:
        cluster_geometry = shapely.unary_union([_shape_geometry(s) for s in shapes])
    S = region.geometry.intersection(cluster_geometry)
    if S.is_empty or S.area <= 0.0:
        # region misses the obstacles: stay as close to them as possible
        b = cluster_geometry.bounds
        r = 0.1 * max(math.hypot(b[2] - b[0], b[3] - b[1]), l)
        S = region.geometry
        for _ in range(12):
            near = region.geometry.intersection(cluster_geometry.buffer(r, quad_segs=4))
            if not near.is_empty and near.area > 0.0:
                S = near
                break
            r *= 2.0
    minx, miny, maxx, maxy = region.geometry.bounds
    radius = 4.0 * math.hypot(maxx - minx, maxy - miny) + 1.0
    S1, S2 = _split(S, x, x_g, radius)

    candidates = []
    if prev is not None:
        pkc = np.asarray(prev[1], float)
        if S.contains(sg.Point(*pkc)):
            candidates.append(pkc)
        elif orient(x, x_g, pkc) == Orientation.CCW:
            S1, S2 = S2, S1
    for part in (S1, S2, S):
        comp = _largest(part)
        if comp is None:
            continue
        c = comp.centroid
        if not comp.contains(c):
            c = shapely.ops.nearest_points(comp, c)[0]
        candidates.append(np.array([c.x, c.y]))
        pl = polylabel(comp, tolerance=max(comp.length * 1e-4, 1e-9))
        candidates.append(np.array([pl.x, pl.y]))
        break
    angle = _principal_angle(S)
    for kc in candidates:
        tri = _fit_triangle(region, kc, l, angle)
        if tri is not None:
            return KernelSpec(tri), kc
    raise EmptyKernel("no kernel triangle fits the admissible kernel")


def cluster_star_obstacles(stars: Sequence[StarObstacle], clusters: Sequence[tuple]) -> list:
    """Merge clusters whose star obstacles intersect (union-find over SAT tests)."""
    n = len(stars)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    boxes = [s.bounds for s in stars]
    for i in range(n):
        for j in range(i + 1, n):
            if find(i) == find(j):
                continue
            if not _boxes_overlap(boxes[i], boxes[j]):
                continue
            if stars_intersect(stars[i], stars[j]):
                parent[find(j)] = find(i)
    groups = {}
    for i in range(n):
        groups.setdefault(find(i), []).extend(clusters[i])
    merged = [tuple(sorted(g)) for g in groups.values()]
    merged.sort(key=lambda g: g[0])
    return merged


def _boxes_overlap(a, b, tol: float = 1e-9) -> bool:
    return not (a[2] < b[0] - tol or b[2] < a[0] - tol or a[3] < b[1] - tol or b[3] < a[1] - tol)


def stars_intersect(a: StarObstacle, b: StarObstacle) -> bool:
    for pa in a.convex_parts():
        for pb in b.convex_parts():
            if _kernels.convex_intersect(pa, pb, eps_geom(pa, pb)):
                return True
    return False


# --------------------------------------------------------------------------
# Fallback


def inner_kernel(shape) -> KernelSpec:
    """Small equilateral triangle well inside a convex shape."""
    if isinstance(shape, Ellipse):
        return KernelSpec(equilateral(shape.center, 0.5 * min(shape.semi_axes), shape.rotation))
    c = shape.centroid
    d = distance_to_boundary(shape, c)
    return KernelSpec(equilateral(c, d, 0.0))


def convex_decomposition_world(obstacles: Sequence[Obstacle], iterations: int = 0) -> StarWorld:
    """Intersecting star world made of convex pieces of every obstacle."""
    stars, cmap, clusters = [], {}, []
    for ob in obstacles:
        s = ob.shape
        pieces = [s] if isinstance(s, Ellipse) or s.is_convex else hertel_mehlhorn(s)
        idx = []
        for pc in pieces:
            star = StarObstacle([Piece(PieceKind.ORIGINAL, pc)], inner_kernel(pc), (ob.id,))
            idx.append(len(stars))
            stars.append(star)
            clusters.append(Cluster((ob.id,), None, star, star.kernel.centroid))
        cmap[ob.id] = idx
    return StarWorld(stars, Status.INTERSECTING_FALLBACK, iterations, cmap, {}, clusters)


# --------------------------------------------------------------------------
# Algorithm


def form_star_world(obstacles: Sequence[Obstacle], x, x_g, opts: FormOptions | None = None,
                    prev: StarWorld | None = None) -> StarWorld:
    """Reshape ``obstacles`` into a (preferably disjoint) star world.

    ``prev`` supplies kernel points from the previous frame; clusters with the
    same members reuse them while they stay admissible.
    """
    opts = opts or FormOptions()
    x, x_g = as_point(x), as_point(x_g)
    ids = [ob.id for ob in obstacles]
    if len(set(ids)) != len(ids):
        raise MalformedInput("obstacle ids must be unique")
    shapes = [ob.shape for ob in obstacles]
    scale_pts = [x, x_g] + [_shape_points(s) for s in shapes]
    tol = eps_geom(*scale_pts)
    for ob in obstacles:
        if ob.shape.contains(x, tol):
            raise RobotInsideObstacle(f"robot is inside obstacle {ob.id!r}")
        if ob.shape.contains(x_g, tol):
            raise GoalInsideObstacle(f"goal is inside obstacle {ob.id!r}")
    if not obstacles:
        return StarWorld([], Status.DISJOINT, 0, {}, {}, [])

    pts = np.vstack([np.atleast_2d(p) for p in scale_pts])
    diameter = float(np.hypot(*(pts.max(axis=0) - pts.min(axis=0))))
    bbox = scene_box(pts, 10.0)
    box_diag = math.hypot(bbox[2] - bbox[0], bbox[3] - bbox[1])
    cache = WedgeCache(2.0 * box_diag + 1.0)
    shrink = 1e-6 * max(diameter, 1.0)
    excl = [exclusion_points_for(s) for s in shapes] if opts.exclude_obstacle_points else None
    geoms = [_shape_geometry(s) for s in shapes]
    prev_kernels = prev.prev_kernels if prev is not None else {}

    clusters = [(i,) for i in range(len(obstacles))]
    m = 0
    while True:
        m += 1
        if m > opts.max_iterations:
            raise IterationLimit(f"no stable clustering after {opts.max_iterations} iterations")
        stars, infos = [], []
        for cl in clusters:
            xs = [x, x_g]
            if excl is not None:
                for j in range(len(obstacles)):
                    if j in cl:
                        continue
                    for p in excl[j]:
                        # points inside the cluster itself would empty the kernel
                        if not any(shapes[i].contains(p, tol) for i in cl):
                            xs.append(p)
            members = [shapes[i] for i in cl]
            region = admissible_kernel(members, xs, bbox, shrink=shrink, cache=cache, keys=cl)
            sig = tuple(ids[i] for i in cl)
            if region.is_empty:
                log.info("empty admissible kernel for cluster %s; convex fallback", sig)
                return convex_decomposition_world(obstacles, m)
            cg = geoms[cl[0]] if len(cl) == 1 else shapely.unary_union([geoms[i] for i in cl])
            try:
                K, kc = select_kernel_points(region, members, x, x_g, opts.kernel_side_length,
                                             prev_kernels.get(sig), cg)
            except EmptyKernel as exc:
                log.info("kernel selection failed for %s (%s); convex fallback", sig, exc)
                return convex_decomposition_world(obstacles, m)
            star = sh_kernel_union(members, K, sig)
            stars.append(star)
            infos.append(Cluster(sig, region, star, kc))
        new = cluster_star_obstacles(stars, clusters)
        log.debug("iteration %d: %d clusters -> %d", m, len(clusters), len(new))
        if len(new) == len(clusters):
            break
        clusters = new

    cmap = {}
    for idx, info in enumerate(infos):
        for oid in info.member_ids:
            cmap[oid] = [idx]
    kernels = {info.member_ids: (info.star.kernel.points.copy(), np.asarray(info.k_c).copy())
               for info in infos}
    return StarWorld(stars, Status.DISJOINT, m, cmap, kernels, infos)


# --------------------------------------------------------------------------
# Validation of the problem conditions


@dataclass
class ValidationReport:
    coverage: bool
    strict: bool
    robot_excluded: bool
    goal_excluded: bool
    disjoint: Optional[bool]
    messages: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        base = self.coverage and self.strict and self.robot_excluded and self.goal_excluded
        return base and self.disjoint is not False

    def as_dict(self) -> dict:
        return {
            "coverage": self.coverage,
            "strict": self.strict,
            "robot_excluded": self.robot_excluded,
            "goal_excluded": self.goal_excluded,
            "disjoint": self.disjoint,
            "ok": self.ok,
        }


def _ray_intervals(star: StarObstacle, o, d, tol):
    out = []
    for pc in star.pieces:
        s = pc.shape
        if isinstance(s, Ellipse):
            iv = s.ray_interval(o, d)
            if iv is not None and iv[1] >= 0:
                out.append((max(iv[0], 0.0), iv[1]))
        elif pc.kind is PieceKind.STAR_POLYGON:
            ts = _kernels.segment_polygon_params(o[0], o[1], d[0], d[1], math.inf, s.vertices, tol)
            cuts = [0.0] + [t for t in ts if t > 0.0]
            for a, b in zip(cuts[:-1], cuts[1:]):
                if s.contains_strict(o + 0.5 * (a + b) * d, tol):
                    out.append((a, b))
        else:
            iv = _kernels.ray_convex_interval(o[0], o[1], d[0], d[1], s.vertices, 0.0)
            if iv is not None and iv[1] >= 0:
                out.append((max(iv[0], 0.0), iv[1]))
    return out


def crossing_count(star: StarObstacle, origin, direction, tol: float) -> int:
    """Number of boundary crossings of the ray through the union of pieces
    (counting a grazing touch once); 1 means the ray leaves once and for all."""
    ivs = sorted(_ray_intervals(star, np.asarray(origin, float), np.asarray(direction, float), tol))
    if not ivs:
        return 0
    merged = [list(ivs[0])]
    for a, b in ivs[1:]:
        if a <= merged[-1][1] + tol:
            merged[-1][1] = max(merged[-1][1], b)
        else:
            merged.append([a, b])
    count = 2 * len(merged)
    if merged[0][0] <= tol:
        count -= 1  # origin inside: the first interval has no entry crossing
    return count


def is_strictly_starshaped(star: StarObstacle, n_rays: int = 720) -> bool:
    c = star.kernel.centroid
    tol = 1e3 * eps_geom(*(p.shape.bounds for p in star.pieces))
    if not star.contains(c, tol):
        return False
    for a in np.linspace(0.0, 2 * math.pi, n_rays, endpoint=False):
        if crossing_count(star, c, (math.cos(a), math.sin(a)), tol) != 1:
            return False
    return True


def validate_world(world: StarWorld, obstacles: Sequence[Obstacle], x, x_g,
                   n_boundary: int = 500, n_rays: int = 720) -> ValidationReport:
    """Programmatic check of coverage, strictness, exclusion and disjointness."""
    msgs = []
    x, x_g = as_point(x), as_point(x_g)
    coverage = True
    for ob in obstacles:
        idx = world.cluster_map.get(ob.id, [])
        stars = [world.obstacles[i] for i in idx]
        s = ob.shape
        tol = 1e-7 * max(1.0, *map(abs, s.bounds))
        for p in s.boundary_points(n_boundary):
            if not any(st.contains(p, tol) for st in stars):
                coverage = False
                msgs.append(f"obstacle {ob.id!r} not covered near {tuple(np.round(p, 6))}")
                break
    strict = True
    for i, st in enumerate(world.obstacles):
        if not is_strictly_starshaped(st, n_rays):
            strict = False
            msgs.append(f"star {i} is not strictly starshaped from its kernel centroid")
    robot = not any(st.contains(x) for st in world.obstacles)
    goal = not any(st.contains(x_g) for st in world.obstacles)
    if not robot:
        msgs.append("robot position inside a star obstacle")
    if not goal:
        msgs.append("goal inside a star obstacle")
    disjoint = None
    if world.status is Status.DISJOINT:
        disjoint = True
        n = len(world.obstacles)
        for i in range(n):
            for j in range(i + 1, n):
                if stars_intersect(world.obstacles[i], world.obstacles[j]):
                    disjoint = False
                    msgs.append(f"stars {i} and {j} intersect")
    return ValidationReport(coverage, strict, robot, goal, disjoint, msgs)
