"""Compare the compiled kernels against the pure-Python fallback.

Run from the repository root after building the extension:

    python benchmarks/bench_kernels.py [--repeat N]

Both backends are imported directly, so no environment variable is needed.
"""
import argparse
import math
import timeit

import numpy as np

from starworlds._kernels import _pykernels

try:
    from starworlds._kernels import _ckernels
except ImportError:
    _ckernels = None


def _ngon(n, r=1.0, c=(0.0, 0.0)):
    a = np.linspace(0.0, 2 * math.pi, n, endpoint=False)
    return np.c_[c[0] + r * np.cos(a), c[1] + r * np.sin(a)]


def _star(n, seed=0):
    rng = np.random.default_rng(seed)
    a = np.linspace(0.0, 2 * math.pi, n, endpoint=False)
    r = rng.uniform(0.5, 1.0, n)
    return np.c_[r * np.cos(a), r * np.sin(a)]


def cases():
    sq = _ngon(30)
    other = _ngon(30, 0.8, (1.5, 0.2))
    star = _star(60)
    pts = np.random.default_rng(1).uniform(-1, 1, (2000, 2))
    mask = np.zeros((256, 256), dtype=np.uint8)
    return {
        "convex_intersect (30-gon pair)": lambda k: k.convex_intersect(sq, other),
        "ray_convex_interval (30-gon)": lambda k: k.ray_convex_interval(-2.0, 0.1, 1.0, 0.05, sq),
        "points_in_polygon (2000 pts, 60-gon)": lambda k: k.points_in_polygon(pts, star),
        "fill_polygon (256^2, 60-gon)": lambda k: k.fill_polygon(mask, star, -1.0, -1.0, 2.0 / 256),
        "segment_polygon_params (60-gon)": lambda k: k.segment_polygon_params(
            0.0, 0.0, 1.0, 0.3, math.inf, star, 1e-9),
    }


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    backends = [("python", _pykernels)]
    if _ckernels is not None:
        backends.append(("cython", _ckernels))
    else:
        print("compiled extension not built; timing the fallback only")
    print(f"{'kernel':40s} " + " ".join(f"{name:>12s}" for name, _ in backends) + "    speedup")
    for label, fn in cases().items():
        times = []
        for _, mod in backends:
            t = timeit.Timer(lambda: fn(mod))
            n, _ = t.autorange()
            best = min(t.repeat(args.repeat, n)) / n
            times.append(best)
        cols = " ".join(f"{t * 1e6:10.1f}us" for t in times)
        speed = f"{times[0] / times[1]:8.1f}x" if len(times) > 1 else ""
        print(f"{label:40s} {cols}  {speed}")


if __name__ == "__main__":
    main()
