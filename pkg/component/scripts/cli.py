"""Command line surface of the module: ``path-planner <command> [flags]``.

Exit codes: 0 success, 1 planning failure, 2 invalid input or I/O failure.
"""

import argparse
import json
import logging
import math
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from traitlets import TraitError

from component import parameter as cp
from component.message import cm
from component.model import InflationSchedule, KinodynParams, SimConfig
from .collision import MovingObstacle, load_obstacles
from .errors import PlanFailedError, PlannerError, ValidationError
from .export import (
    plan_cycles_csv,
    plan_rows_csv,
    profile_csv,
    report_json,
    steps_csv,
    sweep_csv,
    sweep_row,
)
from .gridworld import (
    ScenarioScript,
    bundled_grid,
    gen_maze,
    gen_scenario,
    load_grid,
    load_scenario,
    save_grid,
    save_scenario,
)
from .kinodyn import KinodynState, modified_astar
from .render import emit_svg
from .road import StaticMap, load_road, save_road, straight_road
from .sim_harness import VelocityEvent, run_dynamic_scenario, run_grid_scenario

__all__ = ["main", "build_parser"]

logger = logging.getLogger(__name__)


def _point(text):
    try:
        x, y = (float(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(cm.cli.bad_point.format(text))
    return (x, y)


def _floats(text):
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(cm.cli.bad_list.format(text))


def _ints(text):
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(cm.cli.bad_list.format(text))


def _bool(text):
    value = text.strip().lower()
    if value in ("1", "true", "yes", "y"):
        return True
    if value in ("0", "false", "no", "n"):
        return False
    raise argparse.ArgumentTypeError(cm.cli.bad_bool.format(text))


def _seed(args):
    """PLANNER_SEED wins over --seed"""
    return int(os.environ.get("PLANNER_SEED", args.seed))


def _schedule(args):
    return InflationSchedule(eps0=args.eps0, step=args.eps_step, eps_final=args.eps_final)


###############################################################################
##                               plan-grid                                   ##
###############################################################################


def _grid_inputs(args):
    seed = _seed(args)
    if args.generate is not None:
        width, height, density, goals = args.generate
        world = gen_maze(int(width), int(height), density, int(goals), seed)
    elif args.grid in cp.bundled_grids and not Path(args.grid).is_file():
        world, script = bundled_grid(args.grid)
        return world, script if args.scenario is None else load_scenario(args.scenario, world)
    elif args.grid is not None:
        world = load_grid(args.grid)
    else:
        raise ValidationError(cm.cli.no_grid)

    if args.scenario is not None:
        script = load_scenario(args.scenario, world)
    elif args.changes is not None:
        changes, per_change = args.changes
        script = gen_scenario(world, changes, per_change, seed)
    else:
        script = ScenarioScript()

    return world, script


def cmd_plan_grid(args):
    """run a grid planner through the scenario and write its metrics"""
    world, script = _grid_inputs(args)
    anytime = cp.planners[args.planner][2]
    schedule = _schedule(args) if anytime else None
    config = SimConfig(max_steps=args.max_steps)

    svg_dir = Path(args.svg_out) if args.svg_out else None

    def on_plan(step, session):
        emit_svg(session.world, session, svg_dir / f"step_{step:04d}.svg")

    def run(repetition):
        return run_grid_scenario(
            world,
            script,
            args.planner,
            config,
            schedule=schedule,
            reset_eps=args.reset_eps,
            on_plan=on_plan if (svg_dir and repetition == 0) else None,
        )

    # runs are independent, map keeps the input order
    with ThreadPoolExecutor(max_workers=min(args.repetitions, os.cpu_count() or 1)) as pool:
        reports = list(pool.map(run, range(args.repetitions)))

    plan_rows_csv(reports, args.metrics_out)
    if args.steps_out:
        steps_csv(reports[0], args.steps_out)
    if args.report_out:
        report_json(reports[0], args.report_out)

    report = reports[0]
    if not report.success:
        print(cm.cli.grid_failed.format(args.planner, report.failed_step))
        return 1

    print(
        cm.cli.grid_done.format(
            args.planner, report.moves, report.planning_calls, report.total_expansions
        )
    )
    return 0


###############################################################################
##                               plan-road                                   ##
###############################################################################


def _road(args):
    return load_road(args.road) if args.road else straight_road()


def _road_params(args, move_length, strict_ratio):
    return KinodynParams(
        move_length=move_length,
        cell_length=args.cell_length,
        theta_max=math.radians(args.theta_max),
        theta_step=math.radians(args.theta_step),
        dynamic=False,
        strict_ratio=strict_ratio,
    )


def cmd_plan_road(args):
    """plan on the road alone, or sweep moveLength values"""
    road = _road(args)
    start = KinodynState(args.start)

    if args.sweep_move_length:
        if not args.metrics_out:
            raise ValidationError(cm.cli.sweep_out)
        rows = []
        for move_length in args.sweep_move_length:
            params = _road_params(args, move_length, strict_ratio=False)
            t0 = time.perf_counter()
            result = modified_astar(start, args.goal, road, params, eps=args.eps)
            rows.append(sweep_row(move_length, result, time.perf_counter() - t0))
        sweep_csv(rows, args.metrics_out)
        return 0

    params = _road_params(args, args.move_length, strict_ratio=not args.allow_degenerate)
    result = modified_astar(start, args.goal, road, params, eps=args.eps)
    if args.svg_out:
        emit_svg(road, result, args.svg_out)

    if not result.success:
        print(cm.cli.road_failed.format(result.expansions))
        return 1

    print(
        cm.cli.road_done.format(
            result.node_count, result.path_length, result.cost, result.expansions
        )
    )
    return 0


###############################################################################
##                              plan-dynamic                                 ##
###############################################################################


def load_problem(path):
    """Read a dynamic problem file.

    Keys: road (CSV path relative to the file, or a dict of straight_road
    keywords), obstacles (JSON path relative to the file, or a list of
    obstacle dicts), start ({pos, speed, t}), goal ([x, y]), params
    (KinodynParams fields, angles in degrees), optional static_map ({size,
    resolution, origin, boxes}) and events (list of {at_time, index, vel}).

    Returns:
        dict with road, obstacles, start, goal, params, world and events
    """
    path = Path(path)
    try:
        data = json.loads(path.read_text())
        road = data.get("road", {})
        if isinstance(road, str):
            road = load_road(path.parent / road)
        else:
            road = straight_road(**road)

        params = dict(data.get("params", {}))
        for name in ("theta_max", "theta_step"):
            if name in params:
                params[name] = math.radians(params[name])

        world = None
        if "static_map" in data:
            m = data["static_map"]
            world = StaticMap.empty(m["size"], m.get("resolution", 1.0), m.get("origin", (0, 0)))
            for box in m.get("boxes", []):
                world = world.with_box(*box)

        obstacles = data.get("obstacles", [])
        if isinstance(obstacles, str):
            obstacles = load_obstacles(path.parent / obstacles)
        else:
            obstacles = [MovingObstacle.from_dict(o) for o in obstacles]

        start = data["start"]
        problem = {
            "road": road,
            "obstacles": obstacles,
            "start": KinodynState(start["pos"], start.get("speed", 0.0), start.get("t", 0.0)),
            "goal": tuple(data["goal"]),
            "params": params,
            "world": world,
            "events": [
                VelocityEvent(e["at_time"], e["index"], tuple(e["vel"]))
                for e in data.get("events", [])
            ],
        }
    except (ValidationError, TraitError):
        raise
    except (KeyError, TypeError, ValueError) as e:
        raise ValidationError(cm.error.problem_format.format(path, e))

    return problem


def cmd_plan_dynamic(args):
    """simulate the (position, speed, time) planner among the moving obstacles"""
    problem = load_problem(args.problem)

    overrides = {"dynamic": True}
    if args.wt is not None:
        overrides.update(w_t=args.wt, w_c=1 - args.wt if args.wc is None else args.wc)
    elif args.wc is not None:
        overrides.update(w_c=args.wc, w_t=1 - args.wc)
    if args.speed_range is not None:
        overrides["speed_range"] = args.speed_range
    params = KinodynParams(**{**problem["params"], **overrides})

    config = SimConfig(dt=args.dt, max_steps=args.max_steps, updater=args.updater)
    report = run_dynamic_scenario(
        problem["start"],
        problem["goal"],
        problem["road"],
        problem["obstacles"],
        params,
        config,
        planner=args.planner,
        eps=args.eps,
        schedule=_schedule(args),
        world=problem["world"],
        events=problem["events"],
    )

    profile_csv(report.followed, args.profile_out)
    if args.cycles_out:
        plan_cycles_csv(report, args.cycles_out)
    if args.steps_out:
        steps_csv(report, args.steps_out)
    if args.report_out:
        report_json(report, args.report_out)

    if not report.success:
        print(cm.cli.dynamic_failed.format(args.planner, report.failed_step))
        return 1

    path_time = report.followed[-1].t - report.followed[0].t
    print(cm.cli.dynamic_done.format(args.planner, path_time, report.planning_calls))
    return 0


###############################################################################
##                              export-grids                                 ##
###############################################################################


def cmd_export_grids(args):
    """write the bundled grids, their scenarios and the straight road"""
    out = Path(args.out) if args.out else cp.get_result_dir("grids")
    for name in cp.bundled_grids:
        world, script = bundled_grid(name)
        save_grid(world, out / f"{name}.txt")
        save_scenario(script, out / f"{name}_scenario.json")
        if args.svg:
            emit_svg(world, None, out / f"{name}.svg")
        print(cm.cli.exported.format(name, out))

    save_road(straight_road(), out / "straight.csv")

    return 0


def build_parser():
    parser = argparse.ArgumentParser(prog="path-planner", description=cm.cli.description)
    parser.add_argument("--verbose", action="store_true", help=cm.cli.help.verbose)
    sub = parser.add_subparsers(dest="command", required=True)

    # shared by the anytime planners
    anytime = argparse.ArgumentParser(add_help=False)
    anytime.add_argument("--eps0", type=float, default=cp.default_eps0, help=cm.cli.help.eps0)
    anytime.add_argument(
        "--eps-step", type=float, default=cp.default_eps_step, help=cm.cli.help.eps_step
    )
    anytime.add_argument(
        "--eps-final", type=float, default=cp.default_eps_final, help=cm.cli.help.eps_final
    )

    grid = sub.add_parser("plan-grid", parents=[anytime], help=cm.cli.help.plan_grid)
    grid.add_argument("--grid", help=cm.cli.help.grid)
    grid.add_argument("--generate", type=_floats, help=cm.cli.help.generate)
    grid.add_argument("--scenario", help=cm.cli.help.scenario)
    grid.add_argument("--changes", type=_ints, help=cm.cli.help.changes)
    grid.add_argument("--planner", choices=list(cp.planners), required=True)
    grid.add_argument("--reset-eps", type=_bool, default=None, help=cm.cli.help.reset_eps)
    grid.add_argument("--metrics-out", required=True, help=cm.cli.help.metrics_out)
    grid.add_argument("--steps-out", help=cm.cli.help.steps_out)
    grid.add_argument("--report-out", help=cm.cli.help.report_out)
    grid.add_argument("--svg-out", help=cm.cli.help.svg_dir)
    grid.add_argument("--repetitions", type=int, default=1, help=cm.cli.help.repetitions)
    grid.add_argument("--max-steps", type=int, default=10_000, help=cm.cli.help.max_steps)
    grid.add_argument("--seed", type=int, default=0, help=cm.cli.help.seed)
    grid.set_defaults(func=cmd_plan_grid)

    road = sub.add_parser("plan-road", help=cm.cli.help.plan_road)
    road.add_argument("--road", help=cm.cli.help.road)
    road.add_argument("--start", type=_point, required=True, help=cm.cli.help.point)
    road.add_argument("--goal", type=_point, required=True, help=cm.cli.help.point)
    road.add_argument("--move-length", type=float, default=cp.move_length)
    road.add_argument("--cell-length", type=float, default=cp.cell_length)
    road.add_argument(
        "--theta-max", type=float, default=math.degrees(cp.theta_max), help=cm.cli.help.deg
    )
    road.add_argument(
        "--theta-step", type=float, default=math.degrees(cp.theta_step), help=cm.cli.help.deg
    )
    road.add_argument("--eps", type=float, default=1.0, help=cm.cli.help.eps)
    road.add_argument("--allow-degenerate", action="store_true", help=cm.cli.help.degenerate)
    road.add_argument("--sweep-move-length", type=_floats, help=cm.cli.help.sweep)
    road.add_argument("--metrics-out", help=cm.cli.help.sweep_out)
    road.add_argument("--svg-out", help=cm.cli.help.svg_file)
    road.set_defaults(func=cmd_plan_road)

    dyn = sub.add_parser("plan-dynamic", parents=[anytime], help=cm.cli.help.plan_dynamic)
    dyn.add_argument("--problem", required=True, help=cm.cli.help.problem)
    dyn.add_argument("--planner", choices=["astar", "arastar"], default="astar")
    dyn.add_argument("--wt", type=float, help=cm.cli.help.wt)
    dyn.add_argument("--wc", type=float, help=cm.cli.help.wc)
    dyn.add_argument("--speed-range", type=float, help=cm.cli.help.speed_range)
    dyn.add_argument("--eps", type=float, default=1.0, help=cm.cli.help.eps)
    dyn.add_argument("--dt", type=float, default=0.1, help=cm.cli.help.dt)
    dyn.add_argument("--updater", choices=["bounce", "repeat"], default="bounce")
    dyn.add_argument("--max-steps", type=int, default=10_000, help=cm.cli.help.max_steps)
    dyn.add_argument("--profile-out", required=True, help=cm.cli.help.profile_out)
    dyn.add_argument("--cycles-out", help=cm.cli.help.cycles_out)
    dyn.add_argument("--steps-out", help=cm.cli.help.steps_out)
    dyn.add_argument("--report-out", help=cm.cli.help.report_out)
    dyn.set_defaults(func=cmd_plan_dynamic)

    export = sub.add_parser("export-grids", help=cm.cli.help.export_grids)
    export.add_argument("--out", help=cm.cli.help.out)
    export.add_argument("--svg", action="store_true", help=cm.cli.help.svg_grids)
    export.set_defaults(func=cmd_export_grids)

    return parser


def main(argv=None):
    """entry point of the path-planner console script, returns the exit code"""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code

    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )

    try:
        return args.func(args)
    except (ValidationError, TraitError, ValueError) as e:
        logger.error(cm.cli.invalid.format(e))
        return 2
    except OSError as e:
        logger.error(cm.cli.io.format(e))
        return 2
    except PlanFailedError as e:
        logger.error(cm.cli.failed.format(e))
        return 1
    except PlannerError as e:
        logger.error(cm.cli.invalid.format(e))
        return 2


if __name__ == "__main__":
    sys.exit(main())
