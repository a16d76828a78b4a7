"""D* Lite, plain and optimized, searching backward from the goal set.

The plain variant recomputes rhs as a full minimum over the successors every
time a vertex is updated. The optimized variant lowers rhs in place after an
overconsistent expansion and only recomputes the predecessors whose rhs went
through the expanded vertex after an underconsistent one, which is counted
in the rhs_updates metric.
"""

import logging

from component.message import cm
from .gridworld import adjacent8, changed_cells, edge_cost, h_diagonal
from .search_core import INF, PriorityQueue, SearchKey
from .session import PlanSession, Stopwatch

__all__ = ["RhsSearch", "BudgetExceeded", "plan_dstar_lite"]

logger = logging.getLogger(__name__)


class BudgetExceeded(Exception):
    """raised internally when a repair goes over its expansion budget"""


class RhsSearch:
    """rhs bookkeeping shared by D* Lite and AD*"""

    def __init__(self, session, optimized=False, max_expansions=None):
        self.session = session
        self.optimized = optimized
        self.max_expansions = max_expansions
        self.goals = set(session.world.goals)

    @property
    def world(self):
        return self.session.world

    def h(self, cell):
        return h_diagonal(self.world.start, cell)

    def seed_goals(self):
        records = self.session.records
        for goal in self.world.goals:
            records[goal].rhs = 0.0
            self.queue_state(goal)

    def recompute_rhs(self, u):
        """rhs(u) = min over successors of c(u, s) + g(s)"""
        if u in self.goals:
            return

        records, world = self.session.records, self.world
        records[u].rhs = min(
            (edge_cost(world, u, s) + records.g(s) for s in adjacent8(world, u)), default=INF
        )
        self.session.cycle.rhs_updates += 1

    def lower_rhs(self, s, u):
        """rhs(s) = min(rhs(s), c(s, u) + g(u)) after g(u) went down"""
        if s in self.goals:
            return

        records = self.session.records
        value = edge_cost(self.world, s, u) + records.g(u)
        if value < records[s].rhs:
            records[s].rhs = value

    def key(self, u):
        raise NotImplementedError

    def queue_state(self, u):
        """put u in Open with its current key when inconsistent, drop it otherwise"""
        session = self.session
        record = session.records[u]

        if record.g != record.rhs:
            if u not in session.open:
                session.cycle.inserts += 1
            session.open.insert(u, self.key(u))
            record.in_open = True
        else:
            session.open.remove(u)
            record.in_open = False

    def update_vertex(self, u):
        self.recompute_rhs(u)
        self.queue_state(u)

    def apply_changes(self, old_world, new_world):
        """update the rhs of every vertex whose outgoing edges changed cost"""
        changed = changed_cells(old_world, new_world)
        self.session.world = new_world
        if not changed:
            return changed

        edges = {}
        for cell in changed:
            for n in adjacent8(new_world, cell):
                edges[(n, cell)] = None
                edges[(cell, n)] = None

        records, touched = self.session.records, {}
        for u, v in edges:
            c_old, c_new = edge_cost(old_world, u, v), edge_cost(new_world, u, v)
            if c_old == c_new or u in self.goals:
                continue
            if not self.optimized:
                touched[u] = None
            elif c_old > c_new:
                self.lower_rhs(u, v)
                self.queue_state(u)
            elif records.rhs(u) == c_old + records.g(v):
                self.update_vertex(u)

        for u in touched:
            self.update_vertex(u)

        logger.debug(cm.log.changes.format(self.session.kind, len(changed), len(edges)))

        return changed

    def count_expansion(self):
        cycle = self.session.cycle
        cycle.expansions += 1
        if self.max_expansions is not None and cycle.expansions > self.max_expansions:
            raise BudgetExceeded()

    def expand_overconsistent(self, u):
        records = self.session.records
        records[u].g = records[u].rhs
        for s in adjacent8(self.world, u):
            if self.optimized:
                self.lower_rhs(s, u)
                self.queue_state(s)
            else:
                self.update_vertex(s)

    def expand_underconsistent(self, u):
        records = self.session.records
        g_old = records[u].g
        records[u].g = INF
        for s in adjacent8(self.world, u):
            if not self.optimized or records.rhs(s) == edge_cost(self.world, s, u) + g_old:
                self.update_vertex(s)
            else:
                self.queue_state(s)
        if self.optimized:
            self.queue_state(u)
        else:
            self.update_vertex(u)


class DStarLite(RhsSearch):
    def key(self, u):
        record = self.session.records[u]
        k2 = min(record.g, record.rhs)
        return SearchKey(k2 + self.h(u) + self.session.km, k2)

    def compute_shortest_path(self):
        session = self.session
        records, queue, start = session.records, session.open, self.world.start

        while queue.top_key() < self.key(start) or records.rhs(start) != records.g(start):
            u, k_old = queue.pop()
            records[u].in_open = False
            k_new = self.key(u)
            if k_old < k_new:
                queue.insert(u, k_new)
                records[u].in_open = True
                continue

            self.count_expansion()
            if records[u].g > records[u].rhs:
                self.expand_overconsistent(u)
            else:
                self.expand_underconsistent(u)

        session.success = records.rhs(start) < INF
        session.plan_start = start


def _fresh(kind, world, optimized, max_expansions):
    session = PlanSession(
        kind, world, direction="backward", open=PriorityQueue(arity=2), descend_g=True
    )
    session.last_start = world.start
    session.options = {"optimized": optimized, "max_expansions": max_expansions}
    return session


def plan_dstar_lite(world, prior=None, optimized=False, max_expansions=None, **kwargs):
    """Plan or repair with D* Lite.

    The prior session is reused in place when it comes from the same planner
    and the same goal set: the heuristic offset km absorbs the start moves and
    only the cells that changed occupancy are updated. A repair going over
    max_expansions is dropped and the search restarts from scratch.

    Args:
        world (GridWorld): the current grid, start is the agent position
        prior (PlanSession): the previous session of this planner, if any
        optimized (bool): use the optimized rhs updates
        max_expansions (int): expansion budget of a repair, None for no limit

    Returns:
        the PlanSession
    """
    kind = "dstar-lite-opt" if optimized else "dstar-lite"
    reuse = (
        prior is not None
        and prior.kind == kind
        and prior.world.goals == world.goals
        and prior.world.shape == world.shape
    )

    if reuse:
        session = prior
        session.new_call()
        cycle = session.start_cycle()
        search = DStarLite(session, optimized, max_expansions)
        try:
            with Stopwatch(cycle):
                session.km += h_diagonal(session.last_start, world.start)
                session.last_start = world.start
                search.apply_changes(session.world, world)
                search.compute_shortest_path()
            return session.publish()
        except BudgetExceeded:
            logger.info(cm.log.abort.format(kind, max_expansions))
            metrics = session.metrics
            metrics.cumulative_expansions += cycle.expansions
            session = _fresh(kind, world, optimized, max_expansions)
            session.metrics = metrics
    else:
        session = _fresh(kind, world, optimized, max_expansions)

    cycle = session.start_cycle(from_scratch=True)
    search = DStarLite(session, optimized)
    with Stopwatch(cycle):
        search.seed_goals()
        search.compute_shortest_path()

    return session.publish()
