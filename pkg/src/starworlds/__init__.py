"""Reshape intersecting planar obstacles into disjoint strictly starshaped ones."""
from ._kernels import BACKEND
from .errors import StarworldsError
from .geom import Ellipse, Polygon

__version__ = "0.1.0"

__all__ = ["BACKEND", "Ellipse", "Polygon", "StarworldsError", "__version__"]
