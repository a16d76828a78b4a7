"""Backward ARA*: anytime A* with an inflated heuristic and Incons reuse."""

import logging

from component.message import cm
from component.model import InflationSchedule
from .gridworld import changed_cells, cost8, h_diagonal, neighbors8
from .search_core import INF, PriorityQueue, SearchKey
from .session import PlanSession, Stopwatch

__all__ = ["plan_arastar", "suboptimality_bound"]

logger = logging.getLogger(__name__)


def suboptimality_bound(session, g_start):
    """eps' = min(eps, g(start) / min(g + h) over Open and Incons), at least 1"""
    eps = session.eps.eps_current
    if g_start == INF:
        return eps

    records, start = session.records, session.world.start
    nodes = [*session.open, *session.incons]
    lower = min((records.g(s) + h_diagonal(start, s) for s in nodes), default=INF)
    if lower == INF or lower <= 0:
        return 1.0 if lower == INF else eps

    return max(1.0, min(eps, g_start / lower))


class AraStar:
    def __init__(self, session):
        self.session = session

    def fvalue(self, u):
        session = self.session
        h = h_diagonal(session.world.start, u)
        return SearchKey(session.records.g(u) + session.eps.eps_current * h, arity=1)

    def improve_path(self):
        session = self.session
        records, queue, closed, incons = (
            session.records,
            session.open,
            session.closed,
            session.incons,
        )
        world, start, cycle = session.world, session.world.start, session.cycle

        while queue and records.g(start) > queue.top_key().k1:
            u, _ = queue.pop()
            records[u].in_open = False
            closed.add(u)
            records[u].in_closed = True
            cycle.expansions += 1

            g_u = records[u].g
            for s in neighbors8(world, u):
                g_s = g_u + cost8(u, s)
                if g_s < records[s].g:
                    records[s].g = g_s
                    records[s].pred_link = u
                    if s not in closed:
                        if s not in queue:
                            cycle.inserts += 1
                        queue.insert(s, self.fvalue(s))
                        records[s].in_open = True
                    else:
                        incons[s] = None
                        records[s].in_incons = True

        session.success = records.g(start) < INF
        session.plan_start = start

    def reopen(self):
        """move Incons into Open, recompute every key and empty Closed"""
        session = self.session
        for s in session.incons:
            session.records[s].in_incons = False
            if s not in session.open:
                session.cycle.inserts += 1
            session.open.insert(s, self.fvalue(s))
            session.records[s].in_open = True
        session.incons.clear()
        session.open.rebuild(self.fvalue)
        for s in session.closed:
            session.records[s].in_closed = False
        session.closed.clear()


def _fresh(world, schedule):
    session = PlanSession("arastar", world, direction="backward", open=PriorityQueue(arity=1))
    session.eps = schedule
    return session


def plan_arastar(world, prior=None, schedule=None, reset_eps=True, cycles=1, **kwargs):
    """Run ARA* improvement cycles.

    A call without a usable prior starts a search at the schedule's current
    inflation. A call on an unchanged grid lowers eps by one step (unless it is
    already final), moves Incons into Open and improves the solution. Any
    change of the grid discards the session: eps goes back to eps0 when
    reset_eps is set, otherwise the search restarts at the current eps.

    Args:
        world (GridWorld): the current grid, start is the agent position
        prior (PlanSession): the previous session, if any
        schedule (InflationSchedule): the inflation schedule of a new session
        reset_eps (bool): reset eps to eps0 after a change of the grid
        cycles (int): number of cycles to run, None runs until eps is final

    Returns:
        the PlanSession
    """
    if prior is not None and prior.kind == "arastar":
        changed = bool(changed_cells(prior.world, world)) or prior.world.goals != world.goals
        if changed:
            schedule = prior.eps.copy()
            if reset_eps:
                schedule.reset()
            logger.debug(cm.log.restart.format("arastar", schedule.eps_current))
            metrics = prior.metrics
            session = _fresh(world, schedule)
            session.metrics = metrics
            first = True
        else:
            session, first = prior, False
            session.world = world
        session.new_call()
    else:
        schedule = schedule.copy() if schedule is not None else InflationSchedule()
        session, first = _fresh(world, schedule), True

    search, ran = AraStar(session), 0
    while True:
        if not first and not session.eps.done:
            session.eps.decrease()

        cycle = session.start_cycle(from_scratch=first)
        with Stopwatch(cycle):
            if first:
                for goal in world.goals:
                    session.records[goal].g = 0.0
                    session.open.insert(goal, search.fvalue(goal))
                    cycle.inserts += 1
            else:
                search.reopen()
            search.improve_path()
        session.publish(suboptimality_bound(session, session.records.g(world.start)))

        first, ran = False, ran + 1
        if not session.success or (cycles is None and session.eps.done):
            break
        if cycles is not None and ran >= cycles:
            break

    return session
