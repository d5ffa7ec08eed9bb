"""Scenario files, random scene generation and obstacle inflation.

File format (one record per line, ``#`` starts a comment)::

    starworlds-scenario 1
    seed 42
    region <xmin> <ymin> <xmax> <ymax>
    robot <x> <y>
    goal <x> <y>
    option <name> <value>
    ellipse <id> <cx> <cy> <a> <b> <rotation> [vel <vx> <vy>]
    polygon <id> <x1> <y1> <x2> <y2> ... [vel <vx> <vy>]

Floats are written with ``repr`` (shortest round-trip form), so saving a
loaded file reproduces it byte for byte.
"""
from __future__ import annotations

import math
import os
import tempfile
from dataclasses import dataclass, field, fields
from typing import Optional

import numpy as np
import shapely
import shapely.geometry as sg

from .decomp import hertel_mehlhorn
from .errors import MalformedInput, ParseError, PlacementFailure, SchemaVersionError
from .geom import Ellipse, Polygon, convex_hull
from .starworld import FormOptions, Obstacle

MAGIC = "starworlds-scenario"
SCHEMA_VERSION = 1
MAX_REJECTIONS = 10_000


@dataclass
class ScenarioOptions:
    inflation: float = 0.0
    exclude_obstacle_points: bool = False
    kernel_side_length: float = 0.1
    max_iterations: int = 10
    dt: float = 0.02
    v_max: float = 1.0
    max_steps: int = 10_000
    goal_tolerance: float = 0.05

    def form_options(self) -> FormOptions:
        return FormOptions(self.exclude_obstacle_points, self.kernel_side_length, self.max_iterations)


@dataclass
class Scenario:
    obstacles: list
    robot: np.ndarray
    goal: np.ndarray
    options: ScenarioOptions = field(default_factory=ScenarioOptions)
    seed: Optional[int] = None
    region: Optional[tuple] = None  # (xmin, ymin, xmax, ymax)

    def inflated_obstacles(self) -> list:
        r = self.options.inflation
        if r <= 0:
            return list(self.obstacles)
        return [Obstacle(o.id, inflate(o.shape, r), o.velocity) for o in self.obstacles]


# --------------------------------------------------------------------------
# Serialization


def _fmt(v: float) -> str:
    return repr(float(v))


def _fmt_option(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    return _fmt(v)


def dumps(sc: Scenario) -> str:
    lines = [f"{MAGIC} {SCHEMA_VERSION}"]
    if sc.seed is not None:
        lines.append(f"seed {int(sc.seed)}")
    if sc.region is not None:
        lines.append("region " + " ".join(map(_fmt, sc.region)))
    lines.append(f"robot {_fmt(sc.robot[0])} {_fmt(sc.robot[1])}")
    lines.append(f"goal {_fmt(sc.goal[0])} {_fmt(sc.goal[1])}")
    for f in fields(ScenarioOptions):
        lines.append(f"option {f.name} {_fmt_option(getattr(sc.options, f.name))}")
    for ob in sc.obstacles:
        s = ob.shape
        if isinstance(s, Ellipse):
            parts = ["ellipse", ob.id, *map(_fmt, (*s.center, *s.semi_axes, s.rotation))]
        else:
            parts = ["polygon", ob.id, *map(_fmt, s.vertices.ravel())]
        if ob.velocity is not None:
            parts += ["vel", _fmt(ob.velocity[0]), _fmt(ob.velocity[1])]
        lines.append(" ".join(parts))
    return "\n".join(lines) + "\n"


def save_scenario(sc: Scenario, path) -> None:
    write_atomic(path, dumps(sc))


def write_atomic(path, text: str) -> None:
    path = os.fspath(path)
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _float(tok: str, line: int, name: str) -> float:
    try:
        v = float(tok)
    except ValueError:
        raise ParseError(f"expected a number, got {tok!r}", line, name) from None
    if not math.isfinite(v):
        raise ParseError(f"non-finite value {tok!r}", line, name)
    return v


def _parse_option(opts: ScenarioOptions, name: str, tok: str, line: int) -> None:
    if name not in {f.name for f in fields(ScenarioOptions)}:
        raise ParseError(f"unknown option {name!r}", line, "option")
    default = getattr(ScenarioOptions(), name)
    if isinstance(default, bool):
        if tok not in ("true", "false"):
            raise ParseError(f"expected true/false, got {tok!r}", line, name)
        val = tok == "true"
    elif isinstance(default, int):
        try:
            val = int(tok)
        except ValueError:
            raise ParseError(f"expected an integer, got {tok!r}", line, name) from None
    else:
        val = _float(tok, line, name)
    setattr(opts, name, val)


def loads(text: str) -> Scenario:
    lines = text.splitlines()
    robot = goal = seed = region = None
    opts = ScenarioOptions()
    obstacles, seen = [], set()
    header = False
    for no, raw in enumerate(lines, 1):
        body = raw.split("#", 1)[0].strip()
        if not body:
            continue
        tok = body.split()
        key = tok[0]
        if not header:
            if key != MAGIC or len(tok) != 2:
                raise ParseError(f"first line must be '{MAGIC} <version>'", no, "header")
            if tok[1] != str(SCHEMA_VERSION):
                raise SchemaVersionError(f"unsupported schema version {tok[1]!r}", no, "header")
            header = True
            continue
        if key in ("robot", "goal"):
            if len(tok) != 3:
                raise ParseError("expected two coordinates", no, key)
            p = np.array([_float(tok[1], no, key), _float(tok[2], no, key)])
            if key == "robot":
                robot = p
            else:
                goal = p
        elif key == "seed":
            if len(tok) != 2:
                raise ParseError("expected one integer", no, "seed")
            try:
                seed = int(tok[1])
            except ValueError:
                raise ParseError(f"expected an integer, got {tok[1]!r}", no, "seed") from None
        elif key == "region":
            if len(tok) != 5:
                raise ParseError("expected xmin ymin xmax ymax", no, "region")
            region = tuple(_float(t, no, "region") for t in tok[1:])
            if not (region[0] < region[2] and region[1] < region[3]):
                raise ParseError("empty region", no, "region")
        elif key == "option":
            if len(tok) != 3:
                raise ParseError("expected 'option <name> <value>'", no, "option")
            _parse_option(opts, tok[1], tok[2], no)
        elif key in ("ellipse", "polygon"):
            obstacles.append(_parse_obstacle(key, tok[1:], no, seen))
        else:
            raise ParseError(f"unknown record {key!r}", no, "record")
    if not header:
        raise ParseError("empty scenario file", None, "header")
    if robot is None:
        raise ParseError("missing robot record", None, "robot")
    if goal is None:
        raise ParseError("missing goal record", None, "goal")
    if opts.inflation < 0:
        raise ParseError("inflation radius must be non-negative", None, "inflation")
    try:
        opts.form_options()
    except MalformedInput as exc:
        raise ParseError(str(exc), None, "option") from None
    return Scenario(obstacles, robot, goal, opts, seed, region)


def _parse_obstacle(kind: str, tok: list, no: int, seen: set) -> Obstacle:
    if not tok:
        raise ParseError("missing obstacle id", no, "id")
    oid = tok[0]
    if oid in seen:
        raise ParseError(f"duplicate obstacle id {oid!r}", no, "id")
    seen.add(oid)
    rest = tok[1:]
    vel = None
    if "vel" in rest:
        i = rest.index("vel")
        if len(rest) != i + 3:
            raise ParseError(f"obstacle {oid!r}: expected 'vel <vx> <vy>' at the end", no, "vel")
        vel = (_float(rest[i + 1], no, "vel"), _float(rest[i + 2], no, "vel"))
        rest = rest[:i]
    nums = [_float(t, no, kind) for t in rest]
    try:
        if kind == "ellipse":
            if len(nums) != 5:
                raise ParseError(f"obstacle {oid!r}: ellipse needs cx cy a b rotation", no, "ellipse")
            shape = Ellipse(nums[:2], nums[2:4], nums[4])
        else:
            if len(nums) < 6 or len(nums) % 2:
                raise ParseError(f"obstacle {oid!r}: polygon needs at least 3 x y pairs", no, "vertices")
            shape = Polygon(np.array(nums).reshape(-1, 2))
    except MalformedInput as exc:
        raise ParseError(f"obstacle {oid!r}: {exc}", no, "vertices" if kind == "polygon" else kind) from None
    return Obstacle(oid, shape, vel)


def load_scenario(path) -> Scenario:
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())


# --------------------------------------------------------------------------
# Random scenes


def valtr_polygon(n: int, rng: np.random.Generator, size: float = 2.0) -> Polygon:
    """Random convex ``n``-gon with vertices in a ``size x size`` box (Valtr)."""
    def chains(vals):
        vals = np.sort(vals)
        lo, hi = vals[0], vals[-1]
        a, b = [lo], [lo]
        for v in vals[1:-1]:
            (a if rng.random() < 0.5 else b).append(v)
        a.append(hi)
        b.append(hi)
        return np.concatenate([np.diff(a), -np.diff(b)])

    xs = chains(rng.random(n))
    ys = chains(rng.random(n))
    rng.shuffle(ys)
    vec = np.c_[xs, ys]
    vec = vec[np.argsort(np.arctan2(vec[:, 1], vec[:, 0]), kind="stable")]
    pts = np.cumsum(vec, axis=0)
    pts -= pts.min(axis=0)
    span = pts.max(axis=0)
    pts = pts / max(span.max(), 1e-12) * size
    return convex_hull(pts)


def generate_random_scene(n_obstacles: int, seed: int, index: int = 0,
                          coverage: float = 0.25) -> Scenario:
    """Square scene with ``ceil(n/2)`` ellipses and ``floor(n/2)`` Valtr 10-gons.

    The side is chosen so the summed obstacle area is ``coverage`` of the
    scene. Scene ``index`` under ``seed`` is reproducible in isolation.
    """
    if n_obstacles < 1:
        raise MalformedInput("need at least one obstacle")
    rng = np.random.default_rng(np.random.SeedSequence([int(seed), int(index)]))
    n_ell = (n_obstacles + 1) // 2
    n_pol = n_obstacles // 2
    proto = []
    for _ in range(n_ell):
        a, b = np.maximum(rng.normal(1.0, 0.2, 2), 0.1)
        proto.append(("e", (a, b, rng.uniform(0.0, math.pi))))
    for _ in range(n_pol):
        proto.append(("p", valtr_polygon(10, rng)))
    area = sum(math.pi * p[1][0] * p[1][1] if p[0] == "e" else p[1].area for p in proto)
    side = math.sqrt(area / coverage)
    obstacles = []
    for i, (kind, spec) in enumerate(proto):
        c = rng.uniform(0.0, side, 2)
        if kind == "e":
            shape = Ellipse(c, spec[:2], spec[2])
        else:
            shape = spec.translated(c - spec.centroid)
        obstacles.append(Obstacle(f"o{i}", shape))

    def free_point():
        for _ in range(MAX_REJECTIONS):
            p = rng.uniform(0.0, side, 2)
            if not any(o.shape.contains(p, 1e-6) for o in obstacles):
                return p
        raise PlacementFailure(f"no free point after {MAX_REJECTIONS} samples")

    robot = free_point()
    goal = free_point()
    return Scenario(obstacles, robot, goal, ScenarioOptions(), seed, (0.0, 0.0, side, side))


def scene_area_ratio(sc: Scenario) -> float:
    """Summed obstacle area over the scene region area."""
    if sc.region is None:
        raise MalformedInput("scenario has no region")
    x0, y0, x1, y1 = sc.region
    return sum(o.shape.area for o in sc.obstacles) / ((x1 - x0) * (y1 - y0))


# --------------------------------------------------------------------------
# Inflation


def _disc(r: float, n: int = 16) -> np.ndarray:
    a = np.linspace(0.0, 2 * math.pi, n, endpoint=False)
    rr = r / math.cos(math.pi / n)  # circumscribed: contains the true disc
    return np.c_[rr * np.cos(a), rr * np.sin(a)]


def inflate(shape, r: float):
    """Grow a shape by radius ``r``.

    Ellipses add ``r`` to both semi-axes. Polygons take the Minkowski sum of
    each convex piece with a circumscribed 16-gon and union the results.
    """
    if r <= 0:
        return shape
    if isinstance(shape, Ellipse):
        return shape.inflated(r)
    disc = _disc(r)
    pieces = [shape] if shape.is_convex else hertel_mehlhorn(shape)
    sums = [convex_hull((p.vertices[:, None, :] + disc[None, :, :]).reshape(-1, 2)) for p in pieces]
    if len(sums) == 1:
        return sums[0]
    u = shapely.unary_union([sg.Polygon(s.vertices) for s in sums])
    if u.geom_type != "Polygon":
        u = max(u.geoms, key=lambda g: g.area)
    return Polygon(np.asarray(u.exterior.coords)[:-1])
