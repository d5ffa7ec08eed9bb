"""Admissible kernels: where kernel points may go so that hulls avoid given points.

For a shape ``A`` and a free exterior point ``xb`` the admissible kernel is the
open cone at ``xb`` between the rays pointing away from the two tangent points.
Equivalently it is the plane minus the closed "shadow" wedge of directions
``xb - y`` for ``y`` in ``A``. Combining shapes and points intersects these
sets, which we do by subtracting the wedges from a large bounding box.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
import shapely
import shapely.geometry as sg
from shapely import prepared

from .geom import TWO_PI, angular_extent, as_point

ARC_STEP = math.pi / 4


@dataclass(frozen=True, eq=False)
class Cone:
    """Open cone with apex ``apex`` spanning ``[start, start + width]`` CCW."""

    apex: np.ndarray
    start: float
    width: float

    @property
    def end(self) -> float:
        return self.start + self.width

    @property
    def right_ray(self) -> np.ndarray:
        return np.array([math.cos(self.start), math.sin(self.start)])

    @property
    def left_ray(self) -> np.ndarray:
        return np.array([math.cos(self.end), math.sin(self.end)])

    @property
    def is_reflex(self) -> bool:
        """Wider than a half-plane (always the case for convex shapes)."""
        return self.width > math.pi

    def contains(self, p, tol: float = 0.0) -> bool:
        """Open-cone membership; ``tol`` is an angular margin in radians."""
        d = np.asarray(p, float) - self.apex
        if d[0] == 0.0 and d[1] == 0.0:
            return False
        a = (math.atan2(d[1], d[0]) - self.start) % TWO_PI
        return tol < a < self.width - tol

    def shadow(self, radius: float):
        """Closed complement wedge as a shapely polygon of the given radius."""
        return wedge_polygon(self.apex, self.end, TWO_PI - self.width, radius)


def wedge_polygon(apex, start: float, width: float, radius: float):
    """Circular-sector polygon (apex + arc) from ``start`` spanning ``width``."""
    steps = max(2, int(math.ceil(width / ARC_STEP)) + 1)
    # the chord between arc samples must not cut back inside the cone
    r = radius / math.cos(width / (steps - 1) / 2.0)
    ang = start + np.linspace(0.0, width, steps)
    arc = np.c_[apex[0] + r * np.cos(ang), apex[1] + r * np.sin(ang)]
    return sg.Polygon(np.vstack([apex, arc]))


def admissible_kernel_single(shape, xbar):
    """Admissible kernel of one shape excluding one point.

    Returns a :class:`Cone`, or ``None`` when it is empty (``xbar`` inside the
    shape, on its boundary, or enclosed by it).
    """
    xbar = as_point(xbar)
    ext = angular_extent(shape, xbar)
    if ext is None:
        return None
    lo, hi = ext
    # excluded directions from xbar are [lo + pi, hi + pi]
    return Cone(xbar, hi + math.pi, TWO_PI - (hi - lo))


class KernelRegion:
    """Intersection of admissible kernels inside a bounding box.

    ``geometry`` is a shapely (multi)polygon; it is generally not convex.
    """

    def __init__(self, geometry, exact: bool = True):
        self.geometry = geometry
        self.exact = exact
        self._prep = None

    @classmethod
    def empty(cls) -> "KernelRegion":
        return cls(sg.Polygon(), exact=True)

    @property
    def is_empty(self) -> bool:
        return self.geometry.is_empty or self.geometry.area <= 0.0

    @property
    def area(self) -> float:
        return float(self.geometry.area)

    def contains(self, p) -> bool:
        if self.is_empty:
            return False
        if self._prep is None:
            self._prep = prepared.prep(self.geometry)
        return self._prep.contains(sg.Point(float(p[0]), float(p[1])))

    def contains_geometry(self, g) -> bool:
        if self.is_empty:
            return False
        if self._prep is None:
            self._prep = prepared.prep(self.geometry)
        return self._prep.contains(g)

    def components(self) -> list:
        g = self.geometry
        if g.is_empty:
            return []
        if g.geom_type == "Polygon":
            return [g]
        return [p for p in getattr(g, "geoms", []) if p.geom_type == "Polygon" and p.area > 0]


def scene_box(points: Iterable, factor: float = 10.0):
    """Axis-aligned box around ``points`` scaled by ``factor`` about its center."""
    pts = np.asarray(list(points), dtype=float).reshape(-1, 2)
    lo, hi = pts.min(axis=0), pts.max(axis=0)
    c = 0.5 * (lo + hi)
    half = np.maximum(0.5 * (hi - lo), 1.0) * factor
    return (c[0] - half[0], c[1] - half[1], c[0] + half[0], c[1] + half[1])


class WedgeCache:
    """Per (obstacle, excluder) shadow wedges; ``None`` marks an empty kernel."""

    def __init__(self, radius: float):
        self.radius = radius
        self._store = {}

    def get(self, key, shape, xbar):
        k = (key, float(xbar[0]), float(xbar[1]))
        if k not in self._store:
            cone = admissible_kernel_single(shape, xbar)
            self._store[k] = None if cone is None else cone.shadow(self.radius)
        return self._store[k]


def admissible_kernel(shapes: Sequence, xs: Sequence, bbox, *, shrink: float | None = None,
                      cache: WedgeCache | None = None, keys: Sequence | None = None) -> KernelRegion:
    """Admissible kernel of the union of ``shapes`` excluding every point of ``xs``.

    ``bbox`` is ``(xmin, ymin, xmax, ymax)`` and bounds the (possibly
    unbounded) result. The region is shrunk by ``shrink`` (default
    ``1e-6`` times the box diagonal over 10) so every point is strictly inside
    the open kernel.
    """
    box = sg.box(*bbox)
    diag = math.hypot(bbox[2] - bbox[0], bbox[3] - bbox[1])
    if cache is None:
        cache = WedgeCache(2.0 * diag + 1.0)
    if keys is None:
        keys = [("anon", i, id(s)) for i, s in enumerate(shapes)]
    wedges = []
    for key, s in zip(keys, shapes):
        for xb in xs:
            w = cache.get(key, s, xb)
            if w is None:
                return KernelRegion.empty()
            wedges.append(w)
    region = box.difference(shapely.unary_union(wedges)) if wedges else box
    if shrink is None:
        shrink = 1e-6 * diag / 10.0
    if shrink > 0 and not region.is_empty:
        region = region.buffer(-shrink, join_style="mitre")
    return KernelRegion(region)


__all__ = [
    "Cone",
    "KernelRegion",
    "WedgeCache",
    "admissible_kernel",
    "admissible_kernel_single",
    "scene_box",
    "wedge_polygon",
]
