"""Anytime D* (AD*), plain and optimized, searching backward from the goal set.

Every call runs one improvement cycle: the grid changes are applied to the
rhs values, eps is lowered when nothing changed, Incons is merged into Open,
all keys are recomputed against the current start and Closed is emptied.
"""

import logging

from component.message import cm
from component.model import InflationSchedule
from .arastar import suboptimality_bound
from .dstar_lite import BudgetExceeded, RhsSearch
from .gridworld import changed_cells
from .search_core import INF, PriorityQueue, SearchKey
from .session import PlanSession, Stopwatch

__all__ = ["plan_adstar"]

logger = logging.getLogger(__name__)


class AdStar(RhsSearch):
    def key(self, u):
        record = self.session.records[u]
        h = self.h(u)
        if record.g > record.rhs:
            return SearchKey(record.rhs + self.session.eps.eps_current * h, record.rhs)

        return SearchKey(record.g + h, record.g)

    def queue_state(self, u):
        """inconsistent nodes go to Open, or to Incons once closed in this cycle"""
        session = self.session
        record = session.records[u]

        if record.g != record.rhs:
            if u not in session.closed:
                if u not in session.open:
                    session.cycle.inserts += 1
                session.open.insert(u, self.key(u))
                record.in_open = True
            else:
                session.incons[u] = None
                record.in_incons = True
        else:
            session.open.remove(u)
            session.incons.pop(u, None)
            record.in_open = record.in_incons = False

    def compute_or_improve_path(self):
        session = self.session
        records, queue, start = session.records, session.open, self.world.start

        while queue.top_key() < self.key(start) or records.rhs(start) != records.g(start):
            u, _ = queue.pop()
            records[u].in_open = False
            self.count_expansion()

            if records[u].g > records[u].rhs:
                session.closed.add(u)
                records[u].in_closed = True
                self.expand_overconsistent(u)
            else:
                self.expand_underconsistent(u)

        session.success = records.rhs(start) < INF
        session.plan_start = start

    def reopen(self):
        session = self.session
        for s in list(session.incons):
            session.records[s].in_incons = False
            if session.records[s].g != session.records[s].rhs:
                if s not in session.open:
                    session.cycle.inserts += 1
                session.open.insert(s, self.key(s))
                session.records[s].in_open = True
        session.incons.clear()
        session.open.rebuild(self.key)
        for s in session.closed:
            session.records[s].in_closed = False
        session.closed.clear()


def _fresh(kind, world, schedule, optimized, max_expansions):
    session = PlanSession(
        kind, world, direction="backward", open=PriorityQueue(arity=2), descend_g=True
    )
    session.eps = schedule
    session.options = {"optimized": optimized, "max_expansions": max_expansions}
    return session


def _first_cycle(session, optimized):
    cycle = session.start_cycle(from_scratch=True)
    search = AdStar(session, optimized)
    with Stopwatch(cycle):
        search.seed_goals()
        search.compute_or_improve_path()

    return session.publish(suboptimality_bound(session, session.records.g(session.world.start)))


def plan_adstar(
    world,
    prior=None,
    schedule=None,
    optimized=False,
    reset_eps=False,
    max_expansions=None,
    **kwargs,
):
    """Run one AD* cycle.

    Args:
        world (GridWorld): the current grid, start is the agent position
        prior (PlanSession): the previous session of this planner, if any
        schedule (InflationSchedule): the inflation schedule of a new session
        optimized (bool): use the optimized rhs updates
        reset_eps (bool): go back to eps0 when the grid changed
        max_expansions (int): expansion budget of a cycle, None for no limit

    Returns:
        the PlanSession
    """
    kind = "adstar-opt" if optimized else "adstar"
    reuse = (
        prior is not None
        and prior.kind == kind
        and prior.world.goals == world.goals
        and prior.world.shape == world.shape
    )
    if not reuse:
        schedule = schedule.copy() if schedule is not None else InflationSchedule()
        return _first_cycle(_fresh(kind, world, schedule, optimized, max_expansions), optimized)

    session = prior
    session.new_call()
    cycle = session.start_cycle()
    search = AdStar(session, optimized, max_expansions)

    try:
        with Stopwatch(cycle):
            old_world = session.world
            session.world = world
            changes = bool(changed_cells(old_world, world))
            if changes and reset_eps:
                session.eps.reset()
            elif not changes and not session.eps.done:
                session.eps.decrease()
            cycle.eps = cycle.eps_prime = session.eps.eps_current

            search.apply_changes(old_world, world)
            search.reopen()
            search.compute_or_improve_path()
    except BudgetExceeded:
        logger.info(cm.log.abort.format(kind, max_expansions))
        metrics = session.metrics
        metrics.cumulative_expansions += cycle.expansions
        fresh = _fresh(kind, world, session.eps, optimized, max_expansions)
        fresh.metrics = metrics
        return _first_cycle(fresh, optimized)

    return session.publish(suboptimality_bound(session, session.records.g(world.start)))
