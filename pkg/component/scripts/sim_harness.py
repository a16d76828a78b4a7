"""Fixed step simulations: grid movement scenarios and moving obstacle runs."""

import logging
import math
import time
from dataclasses import asdict, dataclass, field

from component import parameter as cp
from component.message import cm
from component.model import InflationSchedule, SimConfig
from .collision import MovingObstacle
from .gridworld import ScenarioEvent, apply_event, changed_cells, with_start
from .kinodyn import KinodynState, modified_arastar, modified_astar
from .static_planners import is_anytime, is_incremental, plan

__all__ = [
    "VelocityEvent",
    "RunStep",
    "RunReport",
    "update_obstacles",
    "detect_change",
    "run_grid_scenario",
    "run_dynamic_scenario",
    "road_bounds",
]

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class VelocityEvent:
    """obstacle index changes its velocity at at_time"""

    at_time: float
    index: int
    vel: tuple


@dataclass
class RunStep:
    step: int
    time: float = 0.0
    x: float = 0.0
    y: float = 0.0
    speed: float = 0.0
    replans: int = 0
    expansions: int = 0
    wall_time: float = 0.0
    cost: float = math.inf
    eps: float = 1.0


@dataclass
class RunReport:
    """Per step records of a run and the planning calls it made.

    plan_rows holds one dict per planning call (per cycle for the anytime
    planners) in the order they happened.
    """

    planner: str
    steps: list = field(default_factory=list)
    plan_rows: list = field(default_factory=list)
    followed: list = field(default_factory=list)
    step_size: float = 1.0
    success: bool = False
    failed_step: int = None

    @property
    def planning_calls(self):
        return sum(s.replans for s in self.steps)

    @property
    def total_expansions(self):
        return sum(s.expansions for s in self.steps)

    @property
    def total_wall_time(self):
        return sum(s.wall_time for s in self.steps)

    @property
    def moves(self):
        return max(len(self.followed) - 1, 0)

    @property
    def followed_length(self):
        return self.moves * self.step_size

    def to_dict(self):
        return {
            "planner": self.planner,
            "success": self.success,
            "failed_step": self.failed_step,
            "planning_calls": self.planning_calls,
            "total_expansions": self.total_expansions,
            "total_wall_time": self.total_wall_time,
            "followed_length": self.followed_length,
            "steps": [asdict(s) for s in self.steps],
            "plan_rows": self.plan_rows,
        }


def _session_rows(session, step):
    rows = []
    for i, c in enumerate(session.metrics.cycles):
        rows.append(
            {
                "step": step,
                "planner": session.kind,
                "cycle": i,
                "eps": c.eps,
                "eps_prime": c.eps_prime,
                "expansions": c.expansions,
                "inserts": c.inserts,
                "rhs_updates": c.rhs_updates,
                "incons": c.incons,
                "cost": c.cost,
                "path_length": session.metrics.path_length,
                "from_scratch": c.from_scratch,
                "wall_time": c.wall_time,
            }
        )

    return rows


def run_grid_scenario(
    world,
    script,
    kind,
    config=None,
    schedule=None,
    reset_eps=None,
    max_expansions=None,
    on_plan=None,
):
    """Move an agent cell by cell while the scripted changes happen.

    The agent takes one step of its current plan per simulation step. After
    the move the events of that step are applied and the planner is called
    again if the grid changed, if an anytime planner has not reached its final
    eps yet, or on every step with the every-step policy. Planners that cannot
    repair start from scratch.

    Args:
        world (GridWorld): the initial grid
        script (ScenarioScript): obstacle changes
        kind (str): planner name
        config (SimConfig): max_steps and replan policy
        schedule (InflationSchedule): anytime planners schedule
        reset_eps (bool): anytime planners behaviour after a change, None for the planner default
        max_expansions (int): repair budget of the incremental planners
        on_plan (callable): called with (step, session) after every planning call

    Returns:
        the RunReport
    """
    config = config or SimConfig()
    script.validate(world)
    options = {"max_expansions": max_expansions}
    if is_anytime(kind):
        options["schedule"] = schedule or InflationSchedule()
        if reset_eps is not None:
            options["reset_eps"] = reset_eps

    report = RunReport(kind, followed=[world.start])
    goals = set(world.goals)

    def call(step, session, agent):
        session = plan(kind, world, session, **options)
        record = RunStep(
            step,
            time=float(step),
            x=agent[0],
            y=agent[1],
            replans=1,
            expansions=session.metrics.expansions,
            wall_time=session.metrics.wall_time,
            cost=session.metrics.path_cost,
            eps=session.eps.eps_current if session.eps is not None else 1.0,
        )
        report.plan_rows.extend(_session_rows(session, step))
        if on_plan is not None:
            on_plan(step, session)
        return session, record

    session, record = call(0, None, world.start)
    report.steps.append(record)
    path, index, agent = session.path, 0, world.start

    for step in range(1, config.max_steps + 1):
        if agent in goals:
            break
        if not session.success:
            report.failed_step = step - 1
            logger.info(cm.log.failed.format(kind, step - 1))
            return report

        index += 1
        agent = path[index]
        report.followed.append(agent)
        world = with_start(world, agent)

        before = world
        for event in script.at(step):
            add = tuple(c for c in event.add if c != agent)
            if len(add) != len(event.add):
                logger.warning(cm.log.skip_add.format(agent, step))
            world = apply_event(world, ScenarioEvent(step, add, event.remove))
        changed = bool(changed_cells(before, world))

        anytime_pending = is_anytime(kind) and not session.eps.done
        if agent in goals:
            record = RunStep(step, time=float(step), x=agent[0], y=agent[1])
        elif changed or anytime_pending or config.replan_policy == "every-step":
            prior = session if (is_incremental(kind) or is_anytime(kind)) else None
            if changed:
                logger.info(cm.log.replan.format(kind, step))
            session, record = call(step, prior, agent)
            path, index = session.path, 0
        else:
            record = RunStep(step, time=float(step), x=agent[0], y=agent[1])
        report.steps.append(record)

    report.success = agent in goals
    if not report.success and report.failed_step is None:
        report.failed_step = config.max_steps

    return report


def road_bounds(road):
    """bounding box of the road, used as the obstacle arena"""
    w = road.half_width
    return (
        float(road.xy[:, 0].min() - w),
        float(road.xy[:, 1].min() - w),
        float(road.xy[:, 0].max() + w),
        float(road.xy[:, 1].max() + w),
    )


def update_obstacles(obstacles, bounds, t, mode="bounce"):
    """Advance the obstacles to time t inside the arena.

    Args:
        obstacles (list): MovingObstacle snapshots
        bounds (tuple): (xmin, ymin, xmax, ymax) of the arena
        t (float): new time
        mode (str): "bounce" reflects at the borders, "repeat" re-enters from
            the opposite side with the same velocity

    Returns:
        list of MovingObstacle snapshots at t
    """
    lower, upper = (bounds[0], bounds[1]), (bounds[2], bounds[3])
    updated = []

    for o in obstacles:
        if o.vel == (0.0, 0.0):
            updated.append(o)
            continue

        pos, vel = list(o.at(t)), list(o.vel)
        for axis in (0, 1):
            lo, hi = lower[axis], upper[axis]
            if mode == "bounce":
                if pos[axis] + o.radius >= hi and vel[axis] > 0:
                    pos[axis] = 2 * (hi - o.radius) - pos[axis]
                    vel[axis] = -vel[axis]
                elif pos[axis] - o.radius <= lo and vel[axis] < 0:
                    pos[axis] = 2 * (lo + o.radius) - pos[axis]
                    vel[axis] = -vel[axis]
            elif mode == "repeat":
                if pos[axis] > hi:
                    pos[axis] = lo + (pos[axis] - hi)
                elif pos[axis] < lo:
                    pos[axis] = hi - (lo - pos[axis])
            else:
                raise ValueError(cm.error.updater.format(mode))
        updated.append(MovingObstacle(tuple(pos), tuple(vel), o.radius, t))

    return updated


def _position(o):
    return o.pos0 if isinstance(o, MovingObstacle) else o


def detect_change(observed, predicted, tolerance=cp.change_tolerance):
    """True when an obstacle left its predicted position or the count changed"""
    if len(observed) != len(predicted):
        return True

    for o, p in zip(observed, predicted):
        (ox, oy), (px, py) = _position(o), _position(p)
        if math.hypot(ox - px, oy - py) > tolerance:
            return True

    return False


def _agent_at(path, t):
    """position and speed along a timed path, piecewise constant speed"""
    if t <= path[0].t:
        return path[0].pos, path[0].speed
    for u, v in zip(path, path[1:]):
        if t <= v.t:
            f = (t - u.t) / (v.t - u.t)
            x = u.pos[0] + f * (v.pos[0] - u.pos[0])
            y = u.pos[1] + f * (v.pos[1] - u.pos[1])
            return (x, y), v.speed

    return path[-1].pos, path[-1].speed


def _segment_end(path, t):
    """index of the node the agent is heading to at time t"""
    for i, state in enumerate(path):
        if state.t > t:
            return i
    return len(path) - 1


def run_dynamic_scenario(
    start,
    goal_pos,
    road,
    obstacles,
    params,
    config=None,
    planner="astar",
    eps=1.0,
    schedule=None,
    world=None,
    events=(),
    bounds=None,
):
    """Follow a timed plan while the moving obstacles are simulated.

    The obstacles are advanced every dt with the configured updater and the
    scripted velocity events. Whenever an obstacle leaves the trajectory the
    plan predicted for it, a new search starts from scratch at the node the
    agent is currently heading to.

    Args:
        start (KinodynState): start state
        goal_pos (tuple): goal position
        road (RoadModel): the road
        obstacles (list): MovingObstacle snapshots at start.t
        params (KinodynParams): planner settings
        config (SimConfig): dt, max_steps, updater, policy and tolerance
        planner (str): "astar" or "arastar"
        eps (float): inflation of the A* planner
        schedule (InflationSchedule): schedule of the ARA* planner
        world (StaticMap): static obstacles
        events (list): VelocityEvent list
        bounds (tuple): obstacle arena, defaults to the road bounding box

    Returns:
        the RunReport, followed holds the KinodynState of the traveled nodes
    """
    config = config or SimConfig()
    bounds = bounds or road_bounds(road)
    events = sorted(events, key=lambda e: e.at_time)
    report = RunReport(planner, step_size=params.move_length)

    def search(state, snapshot, step):
        t0 = time.perf_counter()
        if planner == "arastar":
            result = modified_arastar(state, goal_pos, road, params, world, snapshot, schedule)
        elif planner == "astar":
            result = modified_astar(state, goal_pos, road, params, world, snapshot, eps)
        else:
            raise ValueError(cm.error.unknown_planner.format(planner, ["astar", "arastar"]))
        wall = time.perf_counter() - t0
        for i, c in enumerate(result.cycles):
            report.plan_rows.append(
                {
                    "step": step,
                    "planner": planner,
                    "cycle": i,
                    "eps": c.eps,
                    "expansions": c.expanded,
                    "inserts": c.inserted,
                    "incons": c.incons,
                    "cost": c.cost,
                    "path_length": result.path_length,
                    "wall_time": c.wall_time,
                }
            )
        return result, wall

    current = list(obstacles)
    result, wall = search(start, current, 0)
    report.steps.append(
        RunStep(0, start.t, *start.pos, start.speed, 1, result.expansions, wall, result.cost)
    )
    if not result.success:
        report.failed_step = 0
        return report

    path, model, t = list(result.path), list(current), start.t
    for step in range(1, config.max_steps + 1):
        t_next = start.t + step * config.dt
        current = update_obstacles(current, bounds, t_next, config.updater)
        for event in events:
            if t < event.at_time <= t_next:
                o = current[event.index]
                current[event.index] = MovingObstacle(
                    o.at(t_next), tuple(event.vel), o.radius, t_next
                )
        t = t_next

        if t >= path[-1].t:
            break

        predicted = [o.at(t) for o in model]
        changed = detect_change(current, predicted, config.change_tolerance)
        pos, speed = _agent_at(path, t)
        record = RunStep(step, t, pos[0], pos[1], speed)

        if changed or config.replan_policy == "every-step":
            i = _segment_end(path, t)
            committed = path[i]
            logger.info(cm.log.replan_dynamic.format(planner, t, committed.t))
            snapshot = [o.extrapolate(t) for o in current]
            result, wall = search(committed, snapshot, step)
            record.replans, record.expansions, record.wall_time = 1, result.expansions, wall
            record.cost = result.cost
            if not result.success:
                report.steps.append(record)
                report.followed = path[: i + 1]
                report.failed_step = step
                return report
            path, model = path[:i] + list(result.path), snapshot

        report.steps.append(record)

    report.followed = path if t >= path[-1].t else path[: _segment_end(path, t)]
    report.success = t >= path[-1].t
    if not report.success:
        report.failed_step = config.max_steps

    return report
