# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the hot geometric loops (see ``_pykernels``)."""
import numpy as np

from libc.math cimport ceil, floor, sqrt, fabs, INFINITY


def convex_intersect(const double[:, ::1] a, const double[:, ::1] b, double tol=1e-9):
    if not _separated(a, b, tol) and not _separated(b, a, tol):
        return True
    return False


cdef bint _separated(const double[:, ::1] poly, const double[:, ::1] other, double tol):
    cdef Py_ssize_t n = poly.shape[0], m = other.shape[0], i, j
    cdef double x0, y0, x1, y1, nx, ny, norm, lo, d
    for i in range(n):
        x0 = poly[i, 0]
        y0 = poly[i, 1]
        x1 = poly[(i + 1) % n, 0]
        y1 = poly[(i + 1) % n, 1]
        nx = y1 - y0
        ny = x0 - x1
        norm = sqrt(nx * nx + ny * ny)
        if norm == 0.0:
            continue
        nx /= norm
        ny /= norm
        lo = INFINITY
        for j in range(m):
            d = (other[j, 0] - x0) * nx + (other[j, 1] - y0) * ny
            if d < lo:
                lo = d
        if lo > tol:
            return True
    return False


def ray_convex_interval(double ox, double oy, double dx, double dy,
                        const double[:, ::1] poly, double tol=1e-12):
    cdef double t_in = -INFINITY, t_out = INFINITY
    cdef double dn = sqrt(dx * dx + dy * dy)
    cdef double x0, y0, x1, y1, nx, ny, en, num, den, t
    cdef Py_ssize_t n = poly.shape[0], i
    for i in range(n):
        x0 = poly[i, 0]
        y0 = poly[i, 1]
        x1 = poly[(i + 1) % n, 0]
        y1 = poly[(i + 1) % n, 1]
        nx = y1 - y0
        ny = x0 - x1
        en = sqrt(nx * nx + ny * ny)
        if en == 0.0:
            continue
        num = ((ox - x0) * nx + (oy - y0) * ny) / en - tol
        den = (dx * nx + dy * ny) / en
        if fabs(den) <= 1e-15 * dn:
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


def points_in_polygon(points, const double[:, ::1] poly):
    cdef const double[:, ::1] pts = np.ascontiguousarray(points, dtype=np.float64)
    cdef Py_ssize_t m = pts.shape[0], n = poly.shape[0], i, k
    out = np.zeros(m, dtype=np.bool_)
    cdef unsigned char[::1] res = out.view(np.uint8)
    cdef double x, y, x0, y0, x1, y1
    cdef bint inside
    for k in range(m):
        x = pts[k, 0]
        y = pts[k, 1]
        inside = False
        for i in range(n):
            x0 = poly[i, 0]
            y0 = poly[i, 1]
            x1 = poly[(i + 1) % n, 0]
            y1 = poly[(i + 1) % n, 1]
            if (y0 > y) != (y1 > y):
                if x < x0 + (y - y0) * (x1 - x0) / (y1 - y0):
                    inside = not inside
        res[k] = inside
    return out


def fill_polygon(unsigned char[:, ::1] mask, const double[:, ::1] poly,
                 double x0, double y0, double h):
    cdef Py_ssize_t rows = mask.shape[0], cols = mask.shape[1]
    cdef Py_ssize_t n = poly.shape[0], i, j, r, c, c_lo, c_hi, cnt, a, b
    cdef double ymin = INFINITY, ymax = -INFINITY, yc, ax, ay, bx, by, tmp
    cdef double[::1] xs = np.empty(n + 1, dtype=np.float64)
    for i in range(n):
        if poly[i, 1] < ymin:
            ymin = poly[i, 1]
        if poly[i, 1] > ymax:
            ymax = poly[i, 1]
    cdef Py_ssize_t r_lo = <Py_ssize_t> floor((ymin - y0) / h - 0.5)
    cdef Py_ssize_t r_hi = <Py_ssize_t> ceil((ymax - y0) / h - 0.5)
    if r_lo < 0:
        r_lo = 0
    if r_hi > rows - 1:
        r_hi = rows - 1
    for r in range(r_lo, r_hi + 1):
        yc = y0 + (r + 0.5) * h
        cnt = 0
        for i in range(n):
            ax = poly[i, 0]
            ay = poly[i, 1]
            bx = poly[(i + 1) % n, 0]
            by = poly[(i + 1) % n, 1]
            if (ay > yc) != (by > yc):
                xs[cnt] = ax + (yc - ay) * (bx - ax) / (by - ay)
                cnt += 1
        # insertion sort: crossings per row are few
        for a in range(1, cnt):
            tmp = xs[a]
            b = a - 1
            while b >= 0 and xs[b] > tmp:
                xs[b + 1] = xs[b]
                b -= 1
            xs[b + 1] = tmp
        j = 0
        while j + 1 < cnt:
            c_lo = <Py_ssize_t> ceil((xs[j] - x0) / h - 0.5)
            c_hi = <Py_ssize_t> floor((xs[j + 1] - x0) / h - 0.5)
            if c_lo < 0:
                c_lo = 0
            if c_hi > cols - 1:
                c_hi = cols - 1
            for c in range(c_lo, c_hi + 1):
                mask[r, c] = 1
            j += 2


def segment_polygon_params(double px, double py, double dx, double dy, double tmax,
                           const double[:, ::1] poly, double tol=1e-9):
    cdef Py_ssize_t n = poly.shape[0], i
    cdef double dd = dx * dx + dy * dy
    cdef double dn = sqrt(dd)
    cdef double tt = tol / dn
    cdef double ax, ay, bx, by, da, db, ta, tb, lo, hi, s, qx, qy, t
    out = []
    for i in range(n):
        ax = poly[i, 0]
        ay = poly[i, 1]
        bx = poly[(i + 1) % n, 0]
        by = poly[(i + 1) % n, 1]
        da = (dx * (ay - py) - dy * (ax - px)) / dn
        db = (dx * (by - py) - dy * (bx - px)) / dn
        if fabs(da) <= tol and fabs(db) <= tol:
            ta = ((ax - px) * dx + (ay - py) * dy) / dd
            tb = ((bx - px) * dx + (by - py) * dy) / dd
            lo = ta if ta < tb else tb
            hi = tb if ta < tb else ta
            if lo < 0.0:
                lo = 0.0
            if hi > tmax:
                hi = tmax
            if lo <= hi + tt:
                out.append(lo)
                out.append(hi if hi > lo else lo)
            continue
        if (da > tol and db > tol) or (da < -tol and db < -tol):
            continue
        s = da / (da - db)
        if s < 0.0:
            s = 0.0
        elif s > 1.0:
            s = 1.0
        qx = ax + s * (bx - ax)
        qy = ay + s * (by - ay)
        t = ((qx - px) * dx + (qy - py) * dy) / dd
        if -tt <= t <= tmax + tt:
            if t < 0.0:
                t = 0.0
            elif t > tmax:
                t = tmax
            out.append(t)
    out.sort()
    merged = []
    cdef double last = -INFINITY
    for t in out:
        if t - last > tt:
            merged.append(t)
            last = t
    return merged
