"""Pure-Python versions of the hot geometric loops.

These mirror ``_ckernels.pyx`` one to one and are used when the compiled
extension is unavailable (or when ``STARWORLDS_PURE=1``).
"""
import math

import numpy as np


def convex_intersect(a, b, tol=1e-9):
    """Separating-axis test for two closed convex polygons (CCW, (N,2))."""
    for poly, other in ((a, b), (b, a)):
        n = poly.shape[0]
        for i in range(n):
            x0, y0 = poly[i, 0], poly[i, 1]
            x1, y1 = poly[(i + 1) % n, 0], poly[(i + 1) % n, 1]
            nx, ny = y1 - y0, x0 - x1
            norm = math.hypot(nx, ny)
            if norm == 0.0:
                continue
            nx /= norm
            ny /= norm
            lo = math.inf
            for j in range(other.shape[0]):
                d = (other[j, 0] - x0) * nx + (other[j, 1] - y0) * ny
                if d < lo:
                    lo = d
            if lo > tol:
                return False
    return True


def ray_convex_interval(ox, oy, dx, dy, poly, tol=1e-12):
    """Cyrus-Beck clip of the line o + t d against a CCW convex polygon.

    Returns ``(t_in, t_out)`` or ``None`` when the line misses. ``tol`` is a
    distance: the polygon is treated as grown by ``tol``.
    """
    t_in, t_out = -math.inf, math.inf
    dn = math.hypot(dx, dy)
    n = poly.shape[0]
    for i in range(n):
        x0, y0 = poly[i, 0], poly[i, 1]
        x1, y1 = poly[(i + 1) % n, 0], poly[(i + 1) % n, 1]
        # outward normal of a CCW edge
        nx, ny = y1 - y0, x0 - x1
        en = math.hypot(nx, ny)
        if en == 0.0:
            continue
        num = ((ox - x0) * nx + (oy - y0) * ny) / en - tol
        den = (dx * nx + dy * ny) / en
        if abs(den) <= 1e-15 * dn:
            if num > 0.0:
                return None
            continue
        t = -num / den
        if den < 0.0:
            if t > t_in:
                t_in = t
        else:
            if t < t_out:
                t_out = t
        if t_in > t_out:
            return None
    return t_in, t_out


def points_in_polygon(points, poly):
    """Even-odd membership of many points; boundary handling is arbitrary."""
    points = np.asarray(points, dtype=float)
    x = points[:, 0]
    y = points[:, 1]
    inside = np.zeros(points.shape[0], dtype=bool)
    n = poly.shape[0]
    for i in range(n):
        x0, y0 = poly[i]
        x1, y1 = poly[(i + 1) % n]
        if y0 == y1:
            continue
        cond = (y0 > y) != (y1 > y)
        xc = x0 + (y - y0) * (x1 - x0) / (y1 - y0)
        inside ^= cond & (x < xc)
    return inside


def fill_polygon(mask, poly, x0, y0, h):
    """OR the even-odd interior of ``poly`` into ``mask`` (rows = y).

    Pixel (r, c) has its center at ``(x0 + (c + .5) h, y0 + (r + .5) h)``.
    """
    rows, cols = mask.shape
    ys = poly[:, 1]
    r_lo = max(int(math.floor((ys.min() - y0) / h - 0.5)), 0)
    r_hi = min(int(math.ceil((ys.max() - y0) / h - 0.5)), rows - 1)
    n = poly.shape[0]
    for r in range(r_lo, r_hi + 1):
        yc = y0 + (r + 0.5) * h
        xs = []
        for i in range(n):
            ax, ay = poly[i]
            bx, by = poly[(i + 1) % n]
            if (ay > yc) != (by > yc):
                xs.append(ax + (yc - ay) * (bx - ax) / (by - ay))
        xs.sort()
        for j in range(0, len(xs) - 1, 2):
            c_lo = max(int(math.ceil((xs[j] - x0) / h - 0.5)), 0)
            c_hi = min(int(math.floor((xs[j + 1] - x0) / h - 0.5)), cols - 1)
            if c_hi >= c_lo:
                mask[r, c_lo:c_hi + 1] = 1


def segment_polygon_params(px, py, dx, dy, tmax, poly, tol=1e-9):
    """Parameters t in [0, tmax] where p + t d touches the polygon boundary.

    ``tol`` is a distance. Collinear overlaps contribute both overlap
    endpoints. The result is sorted and merged within ``tol``.
    """
    out = []
    n = poly.shape[0]
    dd = dx * dx + dy * dy
    dn = math.sqrt(dd)
    tt = tol / dn
    for i in range(n):
        ax, ay = poly[i, 0], poly[i, 1]
        bx, by = poly[(i + 1) % n, 0], poly[(i + 1) % n, 1]
        da = (dx * (ay - py) - dy * (ax - px)) / dn
        db = (dx * (by - py) - dy * (bx - px)) / dn
        if abs(da) <= tol and abs(db) <= tol:
            ta = ((ax - px) * dx + (ay - py) * dy) / dd
            tb = ((bx - px) * dx + (by - py) * dy) / dd
            lo, hi = max(min(ta, tb), 0.0), min(max(ta, tb), tmax)
            if lo <= hi + tt:
                out.append(lo)
                out.append(max(lo, hi))
            continue
        if (da > tol and db > tol) or (da < -tol and db < -tol):
            continue
        s = da / (da - db)
        s = min(max(s, 0.0), 1.0)
        qx = ax + s * (bx - ax)
        qy = ay + s * (by - ay)
        t = ((qx - px) * dx + (qy - py) * dy) / dd
        if -tt <= t <= tmax + tt:
            out.append(min(max(t, 0.0), tmax))
    out.sort()
    merged = []
    for t in out:
        if not merged or t - merged[-1] > tt:
            merged.append(t)
    return merged
