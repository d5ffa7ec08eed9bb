"""Deterministic SVG rendering of scenes, star worlds and trajectories."""
from __future__ import annotations

from typing import Optional, Sequence

import numpy as np

from .geom import Ellipse

PALETTE = ("#4e79a7", "#f28e2b", "#59a14f", "#e15759", "#b07aa1",
           "#76b7b2", "#edc948", "#9c755f", "#ff9da7", "#bab0ac")
GRAY = "#8c8c8c"
KERNEL = "#222222"


def _num(v: float) -> str:
    return f"{v:.4f}".rstrip("0").rstrip(".") if v != 0 else "0"


def _points(pts) -> str:
    return " ".join(f"{_num(p[0])},{_num(p[1])}" for p in np.asarray(pts, float))


def _shape_outline(shape, n: int = 96) -> np.ndarray:
    if isinstance(shape, Ellipse):
        return shape.boundary_points(n)
    shape = getattr(shape, "polygon", shape)
    return shape.vertices


def _bounds(sets) -> tuple:
    pts = np.vstack([np.atleast_2d(np.asarray(s, float)) for s in sets])
    lo, hi = pts.min(axis=0), pts.max(axis=0)
    pad = 0.05 * max(hi[0] - lo[0], hi[1] - lo[1], 1.0)
    return lo[0] - pad, lo[1] - pad, hi[0] + pad, hi[1] + pad


def render_svg(obstacles: Sequence, x=None, x_g=None, world=None, trajectory=None,
               region: Optional[tuple] = None, width: int = 640) -> str:
    """SVG text for the scene.

    Star obstacles are filled with one palette color per cluster, the kernel
    triangles ``CH(K)`` are drawn dark, original obstacles gray on top, the
    robot as a blue dot and the goal as a green cross.
    """
    outlines = [_shape_outline(o.shape) for o in obstacles]
    stars = []
    if world is not None:
        stars = [S.boundary_polygon(360) for S in world.obstacles]
    extra = [p for p in (x, x_g) if p is not None]
    if trajectory is not None and len(trajectory):
        extra.append(np.asarray(trajectory, float))
    if region is not None:
        xmin, ymin, xmax, ymax = region
    else:
        xmin, ymin, xmax, ymax = _bounds(outlines + stars + extra or [np.zeros(2)])
    w_, h_ = xmax - xmin, ymax - ymin
    height = max(1, int(round(width * h_ / w_)))
    lw = _num(0.004 * max(w_, h_))
    r = _num(0.012 * max(w_, h_))
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
           f'viewBox="{_num(xmin)} {_num(-ymax)} {_num(w_)} {_num(h_)}">',
           '<rect x="{}" y="{}" width="{}" height="{}" fill="white"/>'.format(
               _num(xmin), _num(-ymax), _num(w_), _num(h_)),
           '<g transform="scale(1,-1)">']
    if world is not None:
        for i, (S, b) in enumerate(zip(world.obstacles, stars)):
            color = PALETTE[i % len(PALETTE)]
            out.append(f'<polygon points="{_points(b)}" fill="{color}" fill-opacity="0.45" '
                       f'stroke="{color}" stroke-width="{lw}"/>')
    for o, v in zip(obstacles, outlines):
        out.append(f'<polygon points="{_points(v)}" fill="{GRAY}" fill-opacity="0.8" '
                   f'stroke="#555555" stroke-width="{lw}"><title>{o.id}</title></polygon>')
    if world is not None:
        for S in world.obstacles:
            h = S.kernel.hull
            if h is not None:
                out.append(f'<polygon points="{_points(h.vertices)}" fill="{KERNEL}"/>')
            else:
                c = S.kernel.centroid
                out.append(f'<circle cx="{_num(c[0])}" cy="{_num(c[1])}" r="{r}" fill="{KERNEL}"/>')
    if trajectory is not None and len(trajectory) > 1:
        out.append(f'<polyline points="{_points(trajectory)}" fill="none" stroke="#1f3b73" '
                   f'stroke-width="{lw}"/>')
    if x is not None:
        out.append(f'<circle cx="{_num(x[0])}" cy="{_num(x[1])}" r="{r}" fill="#1f77b4"/>')
    if x_g is not None:
        a, b = float(x_g[0]), float(x_g[1])
        d = 1.5 * float(r)
        out.append(f'<path d="M{_num(a - d)},{_num(b - d)} L{_num(a + d)},{_num(b + d)} '
                   f'M{_num(a - d)},{_num(b + d)} L{_num(a + d)},{_num(b - d)}" '
                   f'stroke="#2ca02c" stroke-width="{_num(2 * float(lw))}"/>')
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"
