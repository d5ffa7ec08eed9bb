"""Convex decomposition of simple polygons: ear clipping + Hertel-Mehlhorn."""
from __future__ import annotations

import numpy as np

from .geom import Orientation, Polygon, orient


def _in_triangle(p, a, b, c) -> bool:
    # closed test: points on the triangle boundary count
    return (orient(a, b, p) != Orientation.CW
            and orient(b, c, p) != Orientation.CW
            and orient(c, a, p) != Orientation.CW)


def triangulate(P: Polygon) -> list[tuple[int, int, int]]:
    """Ear-clipping triangulation; returns CCW index triples into ``P.vertices``."""
    v = P.vertices
    idx = list(range(len(v)))
    tris = []
    guard = 0
    while len(idx) > 3:
        n = len(idx)
        found = False
        for k in range(n):
            i0, i1, i2 = idx[k - 1], idx[k], idx[(k + 1) % n]
            o = orient(v[i0], v[i1], v[i2])
            if o == Orientation.COLLINEAR:
                # spike or straight vertex: removing it keeps the area
                idx.pop(k)
                found = True
                break
            if o != Orientation.CCW:
                continue
            ear = True
            for j in idx:
                if j in (i0, i1, i2):
                    continue
                if np.allclose(v[j], v[i0]) or np.allclose(v[j], v[i2]):
                    continue
                if _in_triangle(v[j], v[i0], v[i1], v[i2]):
                    ear = False
                    break
            if ear:
                tris.append((i0, i1, i2))
                idx.pop(k)
                found = True
                break
        if not found:
            guard += 1
            # numerical dead end: clip the most convex corner anyway
            best = max(range(n), key=lambda k: _cross_at(v, idx, k))
            i0, i1, i2 = idx[best - 1], idx[best], idx[(best + 1) % n]
            tris.append((i0, i1, i2))
            idx.pop(best)
            if guard > len(v):
                break
    if len(idx) == 3 and orient(*(v[i] for i in idx)) == Orientation.CCW:
        tris.append(tuple(idx))
    return tris


def _cross_at(v, idx, k):
    a, b, c = v[idx[k - 1]], v[idx[k]], v[idx[(k + 1) % len(idx)]]
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])


def _is_convex_ring(v, ring) -> bool:
    n = len(ring)
    return all(
        orient(v[ring[i - 1]], v[ring[i]], v[ring[(i + 1) % n]]) != Orientation.CW
        for i in range(n)
    )


def _merge(a: list[int], b: list[int], i: int, j: int):
    """Join rings sharing the diagonal ``i -> j`` (in ``a``) / ``j -> i`` (in ``b``)."""
    ka = a.index(j)
    ra = a[ka:] + a[:ka]  # starts at j, ends at i
    kb = b.index(i)
    rb = b[kb:] + b[:kb]  # starts at i, ends at j
    return ra + rb[1:-1]


def hertel_mehlhorn(P: Polygon) -> list[Polygon]:
    """Convex pieces of ``P`` whose union is ``P``.

    Diagonals of an ear-clipping triangulation are removed greedily whenever
    the merged piece stays convex. At most ``2 r + 1`` pieces for ``r``
    reflex vertices (up to degenerate collinear cases).
    """
    if P.is_convex:
        return [P]
    v = P.vertices
    rings = [list(t) for t in triangulate(P)]
    merged = True
    while merged:
        merged = False
        for ia in range(len(rings)):
            a = rings[ia]
            edges_a = {(a[k], a[(k + 1) % len(a)]) for k in range(len(a))}
            for ib in range(ia + 1, len(rings)):
                b = rings[ib]
                shared = None
                for k in range(len(b)):
                    e = (b[(k + 1) % len(b)], b[k])
                    if e in edges_a:
                        shared = e
                        break
                if shared is None:
                    continue
                ring = _merge(a, b, *shared)
                if _is_convex_ring(v, ring):
                    rings[ia] = ring
                    rings.pop(ib)
                    merged = True
                    break
            if merged:
                break
    return [Polygon(v[r], check=False) for r in rings]


def reflex_count(P: Polygon) -> int:
    v = P.vertices
    n = len(v)
    return sum(orient(v[i - 1], v[i], v[(i + 1) % n]) == Orientation.CW for i in range(n))
