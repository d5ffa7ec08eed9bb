"""Hot-loop kernels: compiled extension when built, pure Python otherwise.

Set ``STARWORLDS_PURE=1`` before import to force the fallback.
"""
import os

from . import _pykernels

BACKEND = "python"

if os.environ.get("STARWORLDS_PURE", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels as _impl

        BACKEND = "cython"
    except ImportError:  # extension not built
        _impl = _pykernels
else:
    _impl = _pykernels

convex_intersect = _impl.convex_intersect
ray_convex_interval = _impl.ray_convex_interval
points_in_polygon = _impl.points_in_polygon
fill_polygon = _impl.fill_polygon
segment_polygon_params = _impl.segment_polygon_params

__all__ = [
    "BACKEND",
    "convex_intersect",
    "ray_convex_interval",
    "points_in_polygon",
    "fill_polygon",
    "segment_polygon_params",
]
