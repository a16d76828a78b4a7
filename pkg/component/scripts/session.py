"""Search session shared by the grid planners and the path tracing."""

import logging
import time
from dataclasses import dataclass, field

from component.message import cm
from .errors import PlanFailedError
from .gridworld import adjacent8, edge_cost, grid_path_cost
from .search_core import INF, PriorityQueue, RecordTable

__all__ = ["CycleMetrics", "PlanMetrics", "PlanSession", "trace_path", "Stopwatch"]

logger = logging.getLogger(__name__)


@dataclass
class CycleMetrics:
    """one search cycle: a full search, a repair or an anytime improvement"""

    eps: float = 1.0
    eps_prime: float = 1.0
    expansions: int = 0
    inserts: int = 0
    rhs_updates: int = 0
    incons: int = 0
    cost: float = INF
    wall_time: float = 0.0
    from_scratch: bool = False


@dataclass
class PlanMetrics:
    cycles: list = field(default_factory=list)
    cumulative_expansions: int = 0
    path_length: int = 0
    path_cost: float = INF

    @property
    def expansions(self):
        return sum(c.expansions for c in self.cycles)

    @property
    def rhs_updates(self):
        return sum(c.rhs_updates for c in self.cycles)

    @property
    def inserts(self):
        return sum(c.inserts for c in self.cycles)

    @property
    def wall_time(self):
        return sum(c.wall_time for c in self.cycles)


@dataclass
class PlanSession:
    """State of one planner across replanning calls.

    plan_start is the cell where path tracing begins: the agent start for
    backward searches, the reached goal for forward ones.
    The rhs based planners set descend_g: their predecessor links go stale
    once a repair changes g, so the path follows the g values instead.
    """

    kind: str
    world: object
    direction: str = "forward"
    success: bool = False
    records: RecordTable = field(default_factory=RecordTable)
    open: PriorityQueue = field(default_factory=PriorityQueue)
    closed: set = field(default_factory=set)
    incons: dict = field(default_factory=dict)
    plan_start: tuple = None
    eps: object = None
    metrics: PlanMetrics = field(default_factory=PlanMetrics)
    path: list = field(default_factory=list)
    km: float = 0.0
    last_start: tuple = None
    options: dict = field(default_factory=dict)
    descend_g: bool = False

    def new_call(self):
        """reset the per call metrics, the cumulative count carries over"""
        self.metrics = PlanMetrics(cumulative_expansions=self.metrics.cumulative_expansions)

    def start_cycle(self, from_scratch=False):
        eps = self.eps.eps_current if self.eps is not None else 1.0
        cycle = CycleMetrics(eps=eps, eps_prime=eps, from_scratch=from_scratch)
        self.metrics.cycles.append(cycle)
        return cycle

    @property
    def cycle(self):
        return self.metrics.cycles[-1]

    def publish(self, eps_prime=None):
        """trace the current solution and close the running cycle"""
        cycle = self.cycle
        self.metrics.cumulative_expansions += cycle.expansions
        cycle.incons = len(self.incons)

        if self.success:
            self.path = trace_path(self)
            self.metrics.path_length = len(self.path) - 1
            self.metrics.path_cost = grid_path_cost(self.path)
        else:
            self.path = []
            self.metrics.path_length = 0
            self.metrics.path_cost = INF

        cycle.cost = self.metrics.path_cost
        if eps_prime is not None:
            cycle.eps_prime = eps_prime

        logger.debug(
            cm.log.cycle.format(
                self.kind, cycle.eps, cycle.expansions, cycle.cost, cycle.wall_time
            )
        )

        return self


def _descend(session):
    """from the start, step to the neighbor minimizing c(u, s) + g(s)"""
    world, records = session.world, session.records
    node, path, seen = world.start, [world.start], {world.start}
    while node not in world.goals:
        best, step = INF, None
        for s in adjacent8(world, node):
            value = edge_cost(world, node, s) + records.g(s)
            if value < best:
                best, step = value, s
        if step is None or step in seen:
            raise PlanFailedError(cm.error.trace_broken.format(session.kind, node))
        node = step
        seen.add(node)
        path.append(node)

    return path


def trace_path(session):
    """Extract the path of a successful session.

    Searches built on rhs descend the g values from the start, the others
    follow the predecessor links.

    Args:
        session (PlanSession): a session with success set

    Returns:
        list of cells from the agent start to a goal
    """
    if not session.success:
        raise PlanFailedError(cm.error.trace_failed.format(session.kind))

    if session.descend_g:
        return _descend(session)

    world, records = session.world, session.records
    terminal = set(world.goals) if session.direction == "backward" else {world.start}

    node, path = session.plan_start, [session.plan_start]
    while node not in terminal:
        node = records[node].pred_link if node in records else None
        if node is None or len(path) > world.cells:
            raise PlanFailedError(cm.error.trace_broken.format(session.kind, path[-1]))
        path.append(node)

    return path if session.direction == "backward" else path[::-1]


class Stopwatch:
    """context manager adding the elapsed time to a cycle"""

    def __init__(self, cycle):
        self.cycle = cycle

    def __enter__(self):
        self._t0 = time.perf_counter()
        return self

    def __exit__(self, *args):
        self.cycle.wall_time += time.perf_counter() - self._t0
        return False
