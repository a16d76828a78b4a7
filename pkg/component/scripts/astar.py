"""Dijkstra and A* (forward or backward) on 8-connected grids."""

import logging

from component.message import cm
from .gridworld import cost8, h_diagonal, neighbors8
from .search_core import INF, PriorityQueue, SearchKey
from .session import PlanSession, Stopwatch

__all__ = ["plan_dijkstra", "plan_astar"]

logger = logging.getLogger(__name__)


def plan_dijkstra(world, prior=None, **kwargs):
    """Uniform cost search from the start over every reachable cell.

    The whole reachable region is expanded so that g holds the exact optimal
    cost from the start everywhere, the plan goes to the cheapest goal.

    Args:
        world (GridWorld): the grid
        prior (PlanSession): ignored, Dijkstra always plans from scratch

    Returns:
        the PlanSession
    """
    session = PlanSession("dijkstra", world, direction="forward", open=PriorityQueue(arity=1))
    cycle = session.start_cycle(from_scratch=True)
    records, queue, closed = session.records, session.open, session.closed

    with Stopwatch(cycle):
        records[world.start].g = 0.0
        queue.insert(world.start, SearchKey(0.0, arity=1))
        cycle.inserts += 1

        while queue:
            u, _ = queue.pop()
            closed.add(u)
            cycle.expansions += 1
            g_u = records[u].g

            for v in neighbors8(world, u):
                if v in closed:
                    continue
                g_v = g_u + cost8(u, v)
                if g_v < records[v].g:
                    records[v].g = g_v
                    records[v].pred_link = u
                    queue.insert(v, SearchKey(g_v, arity=1))
                    cycle.inserts += 1

        best = min(world.goals, key=lambda goal: records.g(goal))
        session.success = records.g(best) < INF
        session.plan_start = best

    return session.publish()


def plan_astar(world, prior=None, direction="forward", **kwargs):
    """A* with the diagonal heuristic and a closed set.

    The forward search goes from the start to the nearest goal (heuristic is
    the minimum over the goals), the backward search is seeded with every goal
    and stores in g the cost to the goal set.

    Args:
        world (GridWorld): the grid
        prior (PlanSession): ignored, A* always plans from scratch
        direction (str): "forward" or "backward"

    Returns:
        the PlanSession
    """
    if direction not in ("forward", "backward"):
        raise ValueError(cm.error.direction.format(direction))

    kind = "astar" if direction == "forward" else "astar-back"
    session = PlanSession(kind, world, direction=direction, open=PriorityQueue(arity=1))
    cycle = session.start_cycle(from_scratch=True)
    records, queue, closed = session.records, session.open, session.closed

    if direction == "forward":
        origins, targets = [world.start], set(world.goals)

        def h(cell):
            return min(h_diagonal(cell, goal) for goal in world.goals)

    else:
        origins, targets = list(world.goals), {world.start}

        def h(cell):
            return h_diagonal(cell, world.start)

    with Stopwatch(cycle):
        for origin in origins:
            records[origin].g = 0.0
            queue.insert(origin, SearchKey(h(origin), arity=1))
            cycle.inserts += 1

        while queue:
            u, _ = queue.pop()
            closed.add(u)
            cycle.expansions += 1
            if u in targets:
                session.success = True
                session.plan_start = u
                break

            g_u = records[u].g
            for v in neighbors8(world, u):
                if v in closed:
                    continue
                g_v = g_u + cost8(u, v)
                if g_v < records[v].g:
                    records[v].g = g_v
                    records[v].pred_link = u
                    queue.insert(v, SearchKey(g_v + h(v), arity=1))
                    cycle.inserts += 1

    if not session.success:
        logger.debug(cm.log.no_path.format(kind, world.start))

    return session.publish()
