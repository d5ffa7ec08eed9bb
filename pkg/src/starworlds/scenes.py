"""Hand-built example scenes used by the CLI, the tests and the README."""
from __future__ import annotations

import numpy as np

from .geom import Ellipse, Polygon
from .scenario import Scenario, ScenarioOptions
from .starworld import Obstacle


def intersecting_ellipses() -> Scenario:
    """Three overlapping ellipses forming a wall between robot and goal."""
    obs = [
        Obstacle("e1", Ellipse((0.0, -1.6), (0.6, 1.1), 0.3)),
        Obstacle("e2", Ellipse((0.2, 0.0), (0.5, 1.0), 0.0)),
        Obstacle("e3", Ellipse((0.0, 1.6), (0.6, 1.1), -0.3)),
    ]
    return Scenario(obs, np.array([-4.0, 0.3]), np.array([4.0, 0.3]), region=(-5.0, -4.0, 5.0, 4.0))


def ellipses_and_polygon() -> Scenario:
    """A chain of three ellipses whose lowest tip dips into a U-shaped polygon."""
    obs = [
        Obstacle("e1", Ellipse((1.8, 2.2), (1.0, 0.4), -0.3)),
        Obstacle("e2", Ellipse((3.0, 1.2), (0.45, 1.2), 0.0)),
        Obstacle("e3", Ellipse((4.2, 2.0), (1.0, 0.4), 0.3)),
        Obstacle("p1", Polygon([(1.0, -1.5), (4.0, -1.5), (4.0, 0.8), (3.5, 0.8), (3.5, -0.8),
                                (2.5, -0.8), (2.5, 0.8), (1.5, 0.8), (1.5, -0.8), (1.0, -0.8)])),
    ]
    return Scenario(obs, np.array([-1.5, -1.0]), np.array([6.5, -1.0]), region=(-2.5, -2.5, 7.5, 3.5))


def moving_scene() -> Scenario:
    """Three discs drifting upwards in a corridor bounded by two wall polygons."""
    obs = [
        Obstacle("d1", Ellipse((1.0, 1.0), (0.5, 0.5)), (0.0, 0.15)),
        Obstacle("d2", Ellipse((2.8, -1.2), (0.5, 0.5)), (0.0, 0.2)),
        Obstacle("d3", Ellipse((4.2, 0.6), (0.6, 0.6)), (0.05, 0.15)),
        Obstacle("w1", Polygon([(-1.0, 2.5), (6.0, 2.5), (6.0, 3.0), (-1.0, 3.0)])),
        Obstacle("w2", Polygon([(-1.0, -3.0), (6.0, -3.0), (6.0, -2.5), (-1.0, -2.5)])),
    ]
    opts = ScenarioOptions(inflation=0.1)
    return Scenario(obs, np.array([-0.5, 0.0]), np.array([5.5, 0.2]), opts, region=(-1.5, -3.5, 6.5, 3.5))


def c_shapes() -> Scenario:
    """Two disjoint interlocking C-shaped polygons that together surround the robot."""
    left = Polygon([(-2.0, -2.0), (0.8, -2.0), (0.8, -1.6), (-1.6, -1.6),
                    (-1.6, 1.6), (0.8, 1.6), (0.8, 2.0), (-2.0, 2.0)])
    right = Polygon([(-0.8, -1.4), (1.6, -1.4), (1.6, 1.4), (-0.8, 1.4),
                     (-0.8, 1.0), (1.2, 1.0), (1.2, -1.0), (-0.8, -1.0)])
    obs = [Obstacle("c1", left), Obstacle("c2", right)]
    return Scenario(obs, np.array([0.0, 0.0]), np.array([4.0, 0.5]), region=(-3.0, -3.0, 5.0, 3.0))


SCENES = {
    "intersecting-ellipses": intersecting_ellipses,
    "ellipses-polygon": ellipses_and_polygon,
    "moving": moving_scene,
    "c-shapes": c_shapes,
}
