"""Timing study of star-world formation on generated scenes."""
from __future__ import annotations

import collections
import logging
import math
import statistics
import time
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import StarworldsError
from .scenario import generate_random_scene
from .starworld import FormOptions, form_star_world

log = logging.getLogger(__name__)


@dataclass
class BenchRow:
    scene: int
    n: int
    iterations: int
    status: str
    ms: float


@dataclass
class BenchReport:
    rows: list
    exclude_obstacle_points: bool = False
    failures: list = field(default_factory=list)

    def buckets(self) -> dict:
        """``n -> (count, mean, stdev, median, max)`` of times in ms (successful rows)."""
        by = collections.defaultdict(list)
        for r in self.rows:
            if r.status != "error":
                by[r.n].append(r.ms)
        out = {}
        for n in sorted(by):
            t = by[n]
            sd = statistics.stdev(t) if len(t) > 1 else 0.0
            out[n] = (len(t), statistics.fmean(t), sd, statistics.median(t), max(t))
        return out

    def histogram(self) -> dict:
        return dict(sorted(collections.Counter(r.iterations for r in self.rows
                                               if r.status != "error").items()))

    def fraction_within(self, m: int) -> float:
        ok = [r for r in self.rows if r.status != "error"]
        return sum(r.iterations <= m for r in ok) / len(ok) if ok else 0.0

    def loglog_slope(self) -> float:
        """Least-squares slope of log(median ms) against log(n) over the buckets."""
        b = self.buckets()
        if len(b) < 2:
            return math.nan
        n = np.log(np.array(list(b), float))
        t = np.log(np.array([v[3] for v in b.values()]))
        return float(np.polyfit(n, t, 1)[0])

    def to_csv(self) -> str:
        lines = ["scene,n,M,status,ms"]
        lines += [f"{r.scene},{r.n},{r.iterations},{r.status},{r.ms:.3f}" for r in self.rows]
        return "\n".join(lines) + "\n"

    def summary(self) -> str:
        lines = [f"scenes={len(self.rows)} exclude_obstacle_points={str(self.exclude_obstacle_points).lower()}",
                 "M histogram: " + " ".join(f"{m}:{c}" for m, c in self.histogram().items()),
                 "n,count,mean_ms,stdev_ms,median_ms,max_ms"]
        for n, (c, mean, sd, med, mx) in self.buckets().items():
            lines.append(f"{n},{c},{mean:.3f},{sd:.3f},{med:.3f},{mx:.3f}")
        lines.append(f"loglog_slope={self.loglog_slope():.3f}")
        return "\n".join(lines) + "\n"


def bench(n_scenes: int, obstacle_range: tuple = (5, 50), seed: int = 0,
          counts: Optional[Sequence[int]] = None, opts: FormOptions | None = None,
          repeats: int = 1) -> BenchReport:
    """Generate ``n_scenes`` scenes and time :func:`form_star_world` on each.

    Obstacle counts are drawn uniformly from ``obstacle_range`` unless
    ``counts`` lists them per scene. Each time is the best of ``repeats``
    runs after one warm-up call.
    """
    if n_scenes < 1:
        raise ValueError("n_scenes must be at least 1")
    opts = opts or FormOptions()
    rng = np.random.default_rng(np.random.SeedSequence([seed, 2**31 - 1]))
    if counts is None:
        lo, hi = obstacle_range
        counts = [int(c) for c in rng.integers(lo, hi + 1, size=n_scenes)]
    else:
        counts = [int(counts[i % len(counts)]) for i in range(n_scenes)]
    rows, failures = [], []
    warm = False
    for i, n in enumerate(counts):
        try:
            sc = generate_random_scene(n, seed, i)
            if not warm:
                form_star_world(sc.obstacles, sc.robot, sc.goal, opts)
                warm = True
            best = math.inf
            for _ in range(max(1, repeats)):
                t0 = time.perf_counter()
                w = form_star_world(sc.obstacles, sc.robot, sc.goal, opts)
                best = min(best, (time.perf_counter() - t0) * 1e3)
            rows.append(BenchRow(i, n, w.iterations, w.status.value, best))
        except StarworldsError as exc:
            log.warning("scene %d (n=%d) failed: %s", i, n, exc)
            failures.append((i, n, str(exc)))
            rows.append(BenchRow(i, n, 0, "error", math.nan))
    return BenchReport(rows, opts.exclude_obstacle_points, failures)
