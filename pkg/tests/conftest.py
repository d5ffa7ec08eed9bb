import math

import numpy as np
import pytest

from starworlds import _kernels
from starworlds.geom import Ellipse, Polygon, is_simple
from starworlds.starshape import KernelSpec


# ---------------------------------------------------------------- generators

def radial_polygon(rng, n=None, center=(0.0, 0.0), rmin=0.3, rmax=1.5, concave=False):
    """Random simple polygon from sorted angles and random radii."""
    c = np.asarray(center, float)
    while True:
        m = int(n if n is not None else rng.integers(6, 16))
        ang = np.sort(rng.uniform(0.0, 2 * math.pi, m))
        gaps = np.diff(np.concatenate([ang, ang[:1] + 2 * math.pi]))
        if gaps.max() >= 0.9 * math.pi:
            continue
        r = rng.uniform(rmin, rmax, m)
        v = c + np.c_[r * np.cos(ang), r * np.sin(ang)]
        if not is_simple(v):
            continue
        P = Polygon(v)
        if concave and P.is_convex:
            continue
        return P


def random_ellipse(rng, center=None, spread=2.0):
    c = rng.uniform(-spread, spread, 2) if center is None else center
    return Ellipse(c, rng.uniform(0.3, 1.5, 2), rng.uniform(0, math.pi))


def random_convex_polygon(rng, center=None, spread=2.0):
    c = rng.uniform(-spread, spread, 2) if center is None else np.asarray(center, float)
    ang = np.sort(rng.uniform(0, 2 * math.pi, int(rng.integers(3, 9))))
    pts = c + np.c_[np.cos(ang), np.sin(ang)] * rng.uniform(0.4, 1.4)
    from starworlds.geom import convex_hull
    try:
        return convex_hull(pts)
    except Exception:
        return random_convex_polygon(rng, center, spread)


def triangle(center, side, angle=0.0):
    a = angle + np.array([0.0, 2 * math.pi / 3, 4 * math.pi / 3])
    r = side / math.sqrt(3.0)
    return KernelSpec(np.asarray(center, float) + r * np.c_[np.cos(a), np.sin(a)])


def sample_in_hull(rng, K: KernelSpec, n):
    """Vertices, edge points and interior points of CH(K)."""
    v = K.hull.vertices
    out = [p for p in v]
    per_edge = max(1, n // 4)
    for i in range(len(v)):
        a, b = v[i], v[(i + 1) % len(v)]
        for t in rng.uniform(0, 1, per_edge // len(v) + 1):
            out.append(a + t * (b - a))
    while len(out) < n:
        w = rng.dirichlet(np.ones(len(v)))
        out.append(w @ v)
    return np.array(out[:n])


# ---------------------------------------------------------------- rasters

class Grid:
    """Square pixel grid; pixel (r, c) center at (x0 + (c+.5)h, y0 + (r+.5)h)."""

    def __init__(self, bounds, n=512, pad=0.05):
        x0, y0, x1, y1 = bounds
        span = max(x1 - x0, y1 - y0) * (1 + 2 * pad)
        cx, cy = 0.5 * (x0 + x1), 0.5 * (y0 + y1)
        self.h = span / n
        self.x0 = cx - span / 2
        self.y0 = cy - span / 2
        self.n = n
        c = self.x0 + (np.arange(n) + 0.5) * self.h
        r = self.y0 + (np.arange(n) + 0.5) * self.h
        self.X, self.Y = np.meshgrid(c, r)

    def empty(self):
        return np.zeros((self.n, self.n), dtype=np.uint8)

    def fill(self, mask, verts):
        _kernels.fill_polygon(mask, np.ascontiguousarray(verts, dtype=float), self.x0, self.y0, self.h)
        return mask

    def shape(self, shape, mask=None):
        mask = self.empty() if mask is None else mask
        if isinstance(shape, Ellipse):
            d = np.c_[self.X.ravel(), self.Y.ravel()] - shape.center
            c, s = math.cos(shape.rotation), math.sin(shape.rotation)
            u = d[:, 0] * c + d[:, 1] * s
            w = -d[:, 0] * s + d[:, 1] * c
            inside = (u / shape.semi_axes[0]) ** 2 + (w / shape.semi_axes[1]) ** 2 <= 1.0
            mask |= inside.reshape(mask.shape).astype(np.uint8)
            return mask
        verts = getattr(shape, "vertices", shape)
        return self.fill(mask, verts)

    def geometry(self, g, mask=None):
        """Shapely (multi)polygon without holes."""
        mask = self.empty() if mask is None else mask
        parts = [g] if g.geom_type == "Polygon" else list(g.geoms)
        for p in parts:
            self.fill(mask, np.asarray(p.exterior.coords)[:-1])
        return mask


def iou(a, b):
    a = a.astype(bool)
    b = b.astype(bool)
    u = np.logical_or(a, b).sum()
    return 1.0 if u == 0 else np.logical_and(a, b).sum() / u


def radial_hull_mask(grid: Grid, mask, k, bins=8192):
    """Raster of SH_k(set) from the raster of the set: pixel q is inside when some
    set pixel lies on the ray from k through q at distance >= |q - k|."""
    k = np.asarray(k, float)
    dx = grid.X - k[0]
    dy = grid.Y - k[1]
    dist = np.hypot(dx, dy)
    b = ((np.arctan2(dy, dx) + math.pi) / (2 * math.pi) * bins).astype(int) % bins
    reach = np.full(bins, -1.0)
    sel = mask.astype(bool)
    np.maximum.at(reach, b[sel], dist[sel])
    # pixels span several bins near k; widen by one bin on each side
    reach = np.maximum(reach, np.maximum(np.roll(reach, 1), np.roll(reach, -1)))
    return ((dist <= reach[b]) | sel).astype(np.uint8)


def star_mask(grid: Grid, star):
    mask = grid.empty()
    for pc in star.pieces:
        grid.shape(pc.shape, mask)
    return mask


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


# ---------------------------------------------------------------- shared simulations
# Simulations are costly; planner and acceptance tests share them per session.

CONVERGENCE_SEED = 11
CONVERGENCE_SCENES = 50


@pytest.fixture(scope="session")
def figure_traces():
    from starworlds import scenes
    from starworlds.errors import StalledTrajectory
    from starworlds.planner import simulate

    out = {}
    sc = scenes.intersecting_ellipses()
    out["ellipses"] = simulate(sc.obstacles, sc.robot, sc.goal)
    try:
        out["ellipses_raw"] = simulate(sc.obstacles, sc.robot, sc.goal, form=False)
    except StalledTrajectory as exc:
        out["ellipses_raw"] = exc.trace
    sc = scenes.ellipses_and_polygon()
    out["ellipses_polygon"] = simulate(sc.obstacles, sc.robot, sc.goal)
    return out


@pytest.fixture(scope="session")
def moving_traces():
    from starworlds import scenes
    from starworlds.planner import simulate

    sc = scenes.moving_scene()
    obs = sc.inflated_obstacles()
    return [simulate(obs, sc.robot, sc.goal, max_steps=200, goal_tolerance=0.0,
                     keep_worlds=True, raise_on_stall=False) for _ in range(2)]


@pytest.fixture(scope="session")
def convergence_traces():
    from starworlds.planner import simulate
    from starworlds.scenario import generate_random_scene

    rng = np.random.default_rng(5)
    sizes = [int(rng.integers(5, 11)) for _ in range(CONVERGENCE_SCENES)]
    out = []
    for i, n in enumerate(sizes):
        sc = generate_random_scene(int(n), CONVERGENCE_SEED, i)
        out.append(simulate(sc.obstacles, sc.robot, sc.goal, raise_on_stall=False))
    return out


# ---------------------------------------------------------------- acceptance report

ACCEPTANCE = {}


def record_acceptance(number: int, ok: bool, detail: str) -> str:
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'} ({detail})"
    ACCEPTANCE[number] = line
    print(line)
    return line


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[k])
