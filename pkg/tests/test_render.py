import xml.etree.ElementTree as ET

import numpy as np

from starworlds import scenes
from starworlds.render import KERNEL, PALETTE, render_svg
from starworlds.starworld import form_star_world


def test_render_is_deterministic_and_valid():
    sc = scenes.ellipses_and_polygon()
    svgs = []
    for _ in range(2):
        w = form_star_world(sc.obstacles, sc.robot, sc.goal)
        svgs.append(render_svg(sc.obstacles, sc.robot, sc.goal, w,
                               np.array([sc.robot, sc.robot + 0.5]), region=sc.region))
    assert svgs[0] == svgs[1]
    root = ET.fromstring(svgs[0])
    assert root.tag.endswith("svg")
    assert PALETTE[0] in svgs[0] and KERNEL in svgs[0]
    titles = [t.text for t in root.iter("{http://www.w3.org/2000/svg}title")]
    assert titles == [o.id for o in sc.obstacles]


def test_render_clusters_get_distinct_colors():
    sc = scenes.ellipses_and_polygon()
    from starworlds.starworld import FormOptions
    w = form_star_world(sc.obstacles, sc.robot, sc.goal, FormOptions(exclude_obstacle_points=True))
    svg = render_svg(sc.obstacles, sc.robot, sc.goal, w)
    assert PALETTE[0] in svg and PALETTE[1] in svg


def test_render_scene_only():
    sc = scenes.c_shapes()
    svg = render_svg(sc.obstacles)
    ET.fromstring(svg)
    assert PALETTE[0] not in svg
