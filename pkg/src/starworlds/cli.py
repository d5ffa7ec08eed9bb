"""Command line interface: ``starworlds {starify,simulate,gen,bench,validate}``."""
from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .bench import bench
from .errors import (GoalInsideObstacle, InsideObstacle, IterationLimit, MalformedInput,
                     ParseError, PointInsideShape, RobotInsideObstacle, StalledTrajectory,
                     StarworldsError)
from .planner import simulate
from .render import render_svg
from .scenario import generate_random_scene, load_scenario, save_scenario, write_atomic
from .starworld import FormOptions, form_star_world, validate_world

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_GEOMETRY = 3
EXIT_ITERATIONS = 4
EXIT_OTHER = 1

log = logging.getLogger("starworlds")


class ValidationFailed(StarworldsError):
    def __init__(self, report):
        super().__init__("star world failed validation")
        self.report = report


def _setup_logging() -> None:
    level = os.environ.get("STARWORLDS_LOG", "warn").lower()
    levels = {"error": logging.ERROR, "warn": logging.WARNING, "warning": logging.WARNING,
              "info": logging.INFO, "debug": logging.DEBUG}
    logging.basicConfig(level=levels.get(level, logging.WARNING),
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)


def _report_text(report) -> str:
    lines = []
    for k, v in report.as_dict().items():
        lines.append(f"{k}={'na' if v is None else str(v).lower()}")
    for m in report.messages:
        lines.append(f"message={m}")
    return "\n".join(lines) + "\n"


def _r(v) -> str:
    return repr(float(v))


def _world_text(world) -> str:
    lines = [f"status={world.status.value}", f"iterations={world.iterations}",
             f"stars={len(world.obstacles)}"]
    for i, S in enumerate(world.obstacles):
        kernel = " ".join(f"{_r(p[0])},{_r(p[1])}" for p in S.kernel.points)
        lines.append(f"star.{i}.members={','.join(S.members)}")
        lines.append(f"star.{i}.kernel={kernel}")
        lines.append(f"star.{i}.pieces={','.join(p.kind.value for p in S.pieces)}")
    return "\n".join(lines) + "\n"


def _form_options(sc, exclude: bool | None = None) -> FormOptions:
    opts = sc.options.form_options()
    if exclude:
        opts.exclude_obstacle_points = True
    return opts


def _formed(sc, opts):
    obstacles = sc.inflated_obstacles()
    world = form_star_world(obstacles, sc.robot, sc.goal, opts)
    report = validate_world(world, obstacles, sc.robot, sc.goal)
    return obstacles, world, report


def cmd_starify(args) -> int:
    sc = load_scenario(args.scenario)
    obstacles, world, report = _formed(sc, _form_options(sc, args.exclude_obstacle_points))
    if not report.ok:
        sys.stdout.write(_report_text(report))
        raise ValidationFailed(report)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    write_atomic(out / "world.txt", _world_text(world))
    write_atomic(out / "validation.txt", _report_text(report))
    write_atomic(out / "world.svg", render_svg(obstacles, sc.robot, sc.goal, world, region=sc.region))
    print(f"status={world.status.value} stars={len(world.obstacles)} iterations={world.iterations}")
    return EXIT_OK


def cmd_simulate(args) -> int:
    sc = load_scenario(args.scenario)
    o = sc.options
    dt = args.dt if args.dt is not None else o.dt
    vmax = args.vmax if args.vmax is not None else o.v_max
    steps = args.max_steps if args.max_steps is not None else o.max_steps
    obstacles = sc.inflated_obstacles()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    code = EXIT_OK
    try:
        trace = simulate(obstacles, sc.robot, sc.goal, dt=dt, v_max=vmax, max_steps=steps,
                         goal_tolerance=o.goal_tolerance, opts=_form_options(sc),
                         keep_worlds=True)
    except StalledTrajectory as exc:
        log.error("%s", exc)
        trace = exc.trace
        code = EXIT_OTHER
    rows = ["t,x,y"] + [f"{_r(t)},{_r(p[0])},{_r(p[1])}" for t, p in zip(trace.times, trace.positions)]
    write_atomic(out / "trajectory.csv", "\n".join(rows) + "\n")
    stats = ["t,n_obstacles,status,ms,min_gamma"]
    stats += [f"{_r(f.t)},{f.n_obstacles},{f.status},{f.compute_ms:.3f},{_r(f.min_gamma)}"
              for f in trace.frames]
    write_atomic(out / "frames.csv", "\n".join(stats) + "\n")
    every = max(1, args.frame_every)
    frames_dir = out / "frames"
    frames_dir.mkdir(exist_ok=True)
    for k, f in enumerate(trace.frames):
        if k % every and k != len(trace.frames) - 1:
            continue
        obs_t = [ob.at_time(f.t) for ob in obstacles]
        svg = render_svg(obs_t, f.position, sc.goal, f.world,
                         np.array([p for p in trace.positions[:k + 1]]), region=sc.region)
        write_atomic(frames_dir / f"frame_{k:05d}.svg", svg)
    print(f"termination={trace.termination} steps={len(trace.frames)} "
          f"final={_r(trace.positions[-1][0])},{_r(trace.positions[-1][1])}")
    return code


def cmd_gen(args) -> int:
    sc = generate_random_scene(args.n, args.seed)
    save_scenario(sc, args.out)
    return EXIT_OK


def cmd_bench(args) -> int:
    opts = FormOptions(exclude_obstacle_points=args.exclude_obstacle_points)
    report = bench(args.scenes, (args.min_obs, args.max_obs), args.seed, opts=opts)
    write_atomic(args.out, report.to_csv())
    sys.stdout.write(report.summary())
    return EXIT_OK


def cmd_validate(args) -> int:
    sc = load_scenario(args.scenario)
    _, world, report = _formed(sc, _form_options(sc, args.exclude_obstacle_points))
    sys.stdout.write(f"status={world.status.value}\n" + _report_text(report))
    return EXIT_OK if report.ok else EXIT_INPUT


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="starworlds", description=__doc__)
    p.add_argument("--version", action="version", version=f"starworlds {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("starify", help="form a star world and write world.txt/svg")
    s.add_argument("scenario")
    s.add_argument("--exclude-obstacle-points", action="store_true")
    s.add_argument("--out", default="out")
    s.set_defaults(func=cmd_starify)

    s = sub.add_parser("simulate", help="run the reactive planner")
    s.add_argument("scenario")
    s.add_argument("--dt", type=float)
    s.add_argument("--vmax", type=float)
    s.add_argument("--max-steps", type=int)
    s.add_argument("--frame-every", type=int, default=10, help="write every k-th frame SVG")
    s.add_argument("--out", default="out")
    s.set_defaults(func=cmd_simulate)

    s = sub.add_parser("gen", help="generate a random scenario")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_gen)

    s = sub.add_parser("bench", help="time star-world formation on random scenes")
    s.add_argument("--scenes", type=int, default=100)
    s.add_argument("--min-obs", type=int, default=5)
    s.add_argument("--max-obs", type=int, default=50)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--exclude-obstacle-points", action="store_true")
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_bench)

    s = sub.add_parser("validate", help="print the validation report for a scenario")
    s.add_argument("scenario")
    s.add_argument("--exclude-obstacle-points", action="store_true")
    s.set_defaults(func=cmd_validate)
    return p


def main(argv=None) -> int:
    _setup_logging()
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, MalformedInput, ValidationFailed) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (RobotInsideObstacle, GoalInsideObstacle, InsideObstacle, PointInsideShape) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_GEOMETRY
    except IterationLimit as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ITERATIONS
    except (StarworldsError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_OTHER


if __name__ == "__main__":
    sys.exit(main())
