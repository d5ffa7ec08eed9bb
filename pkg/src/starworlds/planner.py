"""A small reactive planner over star worlds (modulated dynamical system).

This is a deliberately simple stand-in for a full harmonic-potential or
modulation planner: the nominal velocity ``x_g - x`` is reshaped near each
star obstacle by a matrix with eigenvalues ``1 - 1/Gamma`` (along the radial
direction from the obstacle's center point) and ``1 + 1/Gamma`` (along the
boundary tangent). At the boundary the radial part vanishes, so the robot
slides along the obstacle instead of entering it.
"""
from __future__ import annotations

import logging
import math
import time
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import InsideObstacle, StalledTrajectory
from .geom import Orientation, as_point, eps_geom, orient
from .starshape import StarObstacle
from .starworld import FormOptions, Obstacle, StarWorld, Status, form_star_world, inner_kernel
from .starshape import Piece, PieceKind

log = logging.getLogger(__name__)

STALL_WINDOW = 100
GAMMA_MARGIN = 1e-6  # robot positions keep Gamma >= 1 + margin, strictly outside


def center_point(S: StarObstacle, x, x_g, side: Optional[int] = None) -> np.ndarray:
    """Center point in ``int CH(K)`` that avoids the line through ``x`` and ``x_g``.

    The kernel centroid is used unless it lies on the line; then it is moved
    perpendicular to the line, towards ``side`` (+1 left, -1 right; left by
    default), by a quarter of the triangle's inradius.
    """
    x, x_g = as_point(x), as_point(x_g)
    c = S.kernel.centroid
    if orient(x, x_g, c) != Orientation.COLLINEAR:
        return c.copy()
    d = x_g - x
    L = math.hypot(d[0], d[1])
    if L == 0.0:
        return c.copy()
    nrm = np.array([-d[1], d[0]]) / L
    r_in = _inradius(S)
    s = 1.0 if side is None or side >= 0 else -1.0
    return c + s * 0.25 * r_in * nrm


def _inradius(S: StarObstacle) -> float:
    h = S.kernel.hull
    if h is None:
        return 0.0
    v = h.vertices
    w = np.roll(v, -1, axis=0)
    c = S.kernel.centroid
    e = w - v
    dist = np.abs(e[:, 0] * (c[1] - v[:, 1]) - e[:, 1] * (c[0] - v[:, 0])) / np.hypot(e[:, 0], e[:, 1])
    return float(dist.min())


def gamma(S: StarObstacle, c, p) -> float:
    """``(|p - c| / |b - c|)^2`` with ``b`` the boundary point towards ``p``."""
    return _gamma_normal(S, c, p)[0]


def _gamma_normal(S: StarObstacle, c, p):
    c = np.asarray(c, float)
    d = np.asarray(p, float) - c
    dist = math.hypot(d[0], d[1])
    if dist == 0.0:
        return 0.0, None, None
    t, b, n = S.boundary_ray(c, d)
    rb = t * dist
    return (dist / rb) ** 2, n, d / dist


def _weights(gammas: np.ndarray) -> np.ndarray:
    """``w_i`` proportional to ``prod_{j != i} (Gamma_j - 1)``, summing to one.

    Equivalent to normalized ``1 / (Gamma_i - 1)``: the closest obstacle
    dominates and takes all the weight on its boundary.
    """
    g = np.maximum(np.asarray(gammas, float) - 1.0, 0.0)
    if len(g) == 1:
        return np.ones(1)
    zero = g <= 1e-300
    if zero.any():
        return zero / zero.sum()
    inv = 1.0 / g
    return inv / inv.sum()


def modulation_matrix(gamma_i: float, r, n) -> np.ndarray:
    """``E diag(1 - 1/G, 1 + 1/G) E^-1`` with ``E = [r, e]``.

    ``e`` is perpendicular to a blend of the boundary normal ``n`` (weight
    ``1/G``) and the radial direction ``r``, so on the boundary it is the
    boundary tangent and far away it is perpendicular to ``r``.
    """
    inv = 1.0 / gamma_i
    m = inv * np.asarray(n, float) + (1.0 - inv) * np.asarray(r, float)
    mn = math.hypot(m[0], m[1])
    m = m / mn if mn > 0 else np.asarray(r, float)
    e = np.array([-m[1], m[0]])
    E = np.column_stack([r, e])
    if abs(np.linalg.det(E)) < 1e-9:
        E = np.column_stack([r, [-r[1], r[0]]])
    D = np.diag([1.0 - inv, 1.0 + inv])
    return E @ D @ np.linalg.inv(E)


def modulated_velocity(x, x_g, stars: Sequence[StarObstacle], centers: Sequence,
                       v_max: float = math.inf) -> np.ndarray:
    """Modulated velocity ``M(x) (x_g - x)`` clamped to ``v_max``."""
    x, x_g = as_point(x), as_point(x_g)
    f = x_g - x
    if stars:
        gs, mats = [], []
        tol = 1e-6
        for S, c in zip(stars, centers):
            g, n, r = _gamma_normal(S, c, x)
            if g < 1.0 - tol:
                raise InsideObstacle(f"robot inside a star obstacle (gamma={g:.6g})")
            gs.append(max(g, 1.0))
            mats.append(modulation_matrix(max(g, 1.0), r, n))
        w = _weights(np.array(gs))
        M = sum(wi * Mi for wi, Mi in zip(w, mats))
        f = M @ f
    speed = math.hypot(f[0], f[1])
    if speed > v_max:
        f = f * (v_max / speed)
    return f


def _safe_step(x, v, dt, stars, centers):
    """Euler step that never lands within ``GAMMA_MARGIN`` of a star obstacle.

    The step is halved until it is admissible; if that fails, the inward
    radial components are removed (sliding along the obstacles) and the
    halving is repeated. As a last resort the robot stays put.
    """
    def ok(p):
        return all(gamma(S, c, p) >= 1.0 + GAMMA_MARGIN for S, c in zip(stars, centers))

    for attempt in range(2):
        h = dt
        for _ in range(20):
            xn = x + h * v
            if ok(xn):
                return xn
            h *= 0.5
        if attempt == 0:
            for S, c in zip(stars, centers):
                r = x - np.asarray(c, float)
                nr = math.hypot(r[0], r[1])
                if nr == 0.0 or gamma(S, c, x) > 1.5:
                    continue
                r = r / nr
                vr = float(v @ r)
                if vr < 0.0:
                    v = v - vr * r
    return x.copy()


@dataclass
class Frame:
    t: float
    position: np.ndarray
    n_obstacles: int
    status: str
    compute_ms: float
    min_gamma: float
    kernel_centroids: dict = field(default_factory=dict)
    world: Optional[StarWorld] = None


@dataclass
class SimulationTrace:
    times: list
    positions: list
    frames: list
    termination: str

    @property
    def reached(self) -> bool:
        return self.termination == "goal"

    @property
    def min_gamma(self) -> float:
        return min((f.min_gamma for f in self.frames), default=math.inf)


def raw_world(obstacles: Sequence[Obstacle]) -> StarWorld:
    """Obstacles used as they are (convex shapes only), kernel at their center."""
    stars = []
    for ob in obstacles:
        stars.append(StarObstacle([Piece(PieceKind.ORIGINAL, ob.shape)], inner_kernel(ob.shape), (ob.id,)))
    cmap = {ob.id: [i] for i, ob in enumerate(obstacles)}
    return StarWorld(stars, Status.INTERSECTING_FALLBACK, 0, cmap)


def simulate(obstacles: Sequence[Obstacle], x0, x_g, *, dt: float = 0.02, v_max: float = 1.0,
             max_steps: int = 10_000, goal_tolerance: float = 0.05,
             opts: FormOptions | None = None, form: bool = True, keep_worlds: bool = False,
             raise_on_stall: bool = True) -> SimulationTrace:
    """Integrate the planner with explicit Euler steps.

    Each step moves the obstacles, re-forms the star world (reusing kernel
    points from the previous step) and advances the robot. With ``form``
    false the obstacles are fed to the planner unchanged.
    """
    x = as_point(x0).copy()
    x_g = as_point(x_g)
    opts = opts or FormOptions()
    prev = None
    times, positions, frames = [0.0], [x.copy()], []
    sides = {}
    scale = eps_geom(x, x_g)
    termination = "max_steps"
    for step in range(max_steps):
        t = step * dt
        obs = [o.at_time(t) for o in obstacles]
        t0 = time.perf_counter()
        world = form_star_world(obs, x, x_g, opts, prev) if form else raw_world(obs)
        ms = (time.perf_counter() - t0) * 1e3
        prev = world
        centers = []
        for info, S in zip(world.clusters or [None] * len(world.obstacles), world.obstacles):
            key = info.member_ids if info is not None else S.members
            side = sides.get(key)
            if info is not None and info.k_c is not None:
                o = orient(x, x_g, info.k_c)
                if o != Orientation.COLLINEAR:
                    side = 1 if o == Orientation.CCW else -1
                    sides[key] = side
            centers.append(center_point(S, x, x_g, side))
        gms = [gamma(S, c, x) for S, c in zip(world.obstacles, centers)]
        frames.append(Frame(t, x.copy(), len(world.obstacles), world.status.value, ms,
                            min(gms, default=math.inf),
                            {c.member_ids: tuple(c.star.kernel.centroid) for c in world.clusters
                             if c.star is not None},
                            world if keep_worlds else None))
        if math.hypot(*(x_g - x)) < goal_tolerance:
            termination = "goal"
            break
        v = modulated_velocity(x, x_g, world.obstacles, centers, v_max)
        xn = _safe_step(x, v, dt, world.obstacles, centers)
        x = xn
        times.append(t + dt)
        positions.append(x.copy())
        if len(positions) > STALL_WINDOW:
            moved = math.hypot(*(positions[-1] - positions[-1 - STALL_WINDOW]))
            if moved < max(scale, 1e-9):
                termination = "stalled"
                break
    trace = SimulationTrace(times, positions, frames, termination)
    if termination == "stalled" and raise_on_stall:
        exc = StalledTrajectory(f"no progress over {STALL_WINDOW} steps at {tuple(x)}")
        exc.trace = trace
        raise exc
    return trace
