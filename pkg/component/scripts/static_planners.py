"""One replanning interface over the grid planners."""

from functools import partial

from component import parameter as cp
from component.message import cm
from .adstar import plan_adstar
from .arastar import plan_arastar
from .astar import plan_astar, plan_dijkstra
from .dstar_lite import plan_dstar_lite
from .errors import ValidationError
from .session import PlanMetrics, PlanSession, trace_path

__all__ = [
    "PLANNERS",
    "plan",
    "plan_dijkstra",
    "plan_astar",
    "plan_dstar_lite",
    "plan_arastar",
    "plan_adstar",
    "trace_path",
    "PlanSession",
    "PlanMetrics",
]

PLANNERS = {
    "dijkstra": plan_dijkstra,
    "astar": partial(plan_astar, direction="forward"),
    "astar-back": partial(plan_astar, direction="backward"),
    "dstar-lite": partial(plan_dstar_lite, optimized=False),
    "dstar-lite-opt": partial(plan_dstar_lite, optimized=True),
    "arastar": plan_arastar,
    "adstar": partial(plan_adstar, optimized=False),
    "adstar-opt": partial(plan_adstar, optimized=True),
}


def is_incremental(kind):
    return cp.planners[kind][1]


def is_anytime(kind):
    return cp.planners[kind][2]


def plan(kind, world, prior=None, **options):
    """Plan with the named planner.

    Args:
        kind (str): a key of PLANNERS
        world (GridWorld): the current grid
        prior (PlanSession): the previous session, reused when the planner can
        options: planner specific keywords (schedule, reset_eps, max_expansions, cycles)

    Returns:
        the PlanSession
    """
    if kind not in PLANNERS:
        raise ValidationError(cm.error.unknown_planner.format(kind, list(PLANNERS)))

    return PLANNERS[kind](world, prior, **options)
