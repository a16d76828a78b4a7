"""Road constrained planning over (position, speed, time).

The roadmap is built while searching: successors lie moveLength away from
their parent, within theta_max of the road heading. Only one node per block
(cell, speed band) may sit in Open and one in Closed, time is carried along
to check moving obstacles with the analytic collision time.
"""

import logging
import math
import time
from dataclasses import dataclass, field

from component import parameter as cp
from component.message import cm
from component.model import InflationSchedule
from .collision import collision_time
from .road import phi_at
from .search_core import INF, PriorityQueue, SearchKey

__all__ = [
    "KinodynState",
    "Block",
    "KinodynNode",
    "KinodynCycle",
    "PlanResult",
    "KinodynSearch",
    "cell_of",
    "block_of",
    "is_free",
    "succ_static",
    "dyn_succ",
    "is_dyn_free",
    "h_kinodyn",
    "modified_astar",
    "modified_arastar",
]

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class KinodynState:
    pos: tuple
    speed: float = 0.0
    t: float = 0.0

    def __post_init__(self):
        if self.speed < 0:
            raise ValueError(cm.error.not_negative.format("speed", self.speed))
        object.__setattr__(self, "pos", (float(self.pos[0]), float(self.pos[1])))


@dataclass(frozen=True)
class Block:
    cell: tuple
    speed_band: int = 0


@dataclass(eq=False)
class KinodynNode:
    """search node, identity is the object, the block is its search identity"""

    state: KinodynState
    g: float = INF
    parent: "KinodynNode" = None
    theta: float = 0.0
    block: Block = None


@dataclass
class KinodynCycle:
    eps: float = 1.0
    wall_time: float = 0.0
    inserted: int = 0
    expanded: int = 0
    incons: int = 0
    cost: float = INF


@dataclass
class PlanResult:
    success: bool = False
    path: list = field(default_factory=list)
    cost: float = INF
    cycles: list = field(default_factory=list)
    move_length: float = cp.move_length

    @property
    def expansions(self):
        return sum(c.expanded for c in self.cycles)

    @property
    def node_count(self):
        return len(self.path)

    @property
    def path_length(self):
        return (len(self.path) - 1) * self.move_length if self.path else 0.0

    @property
    def path_time(self):
        return self.path[-1].t - self.path[0].t if self.path else 0.0


def cell_of(pos, cell_length):
    return (math.floor(pos[0] / cell_length), math.floor(pos[1] / cell_length))


def block_of(state, params):
    band = math.floor(state.speed / params.speed_range) if params.dynamic else 0
    return Block(cell_of(state.pos, params.cell_length), band)


def _points_to_check(u, v, params):
    """v alone, or evenly spaced points up to v when the move exceeds safe_step"""
    n = max(1, math.ceil(params.move_length / params.safe_step - cp.geometry_tol))
    return [
        (u[0] + (v[0] - u[0]) * k / n, u[1] + (v[1] - u[1]) * k / n) for k in range(1, n + 1)
    ]


def is_free(u, v, road, world, params):
    """Static check of the move u -> v.

    The center of the agent has to stay on the road and off the static
    obstacles. In strict mode the four axis extreme points of the agent circle
    are checked as well.

    Args:
        u (tuple): origin position
        v (tuple): target position
        road (RoadModel): the road, None for no road constraint
        world (StaticMap): static obstacles, None for none
        params (KinodynParams): lattice and collision settings

    Returns:
        True if the move is free
    """
    r = road.agent_radius if road is not None else cp.agent_radius

    for p in _points_to_check(u, v, params):
        samples = [p]
        if params.strict_free:
            samples += [(p[0] + r, p[1]), (p[0] - r, p[1]), (p[0], p[1] + r), (p[0], p[1] - r)]
        for q in samples:
            if road is not None and not road.contains(q):
                return False
            if world is not None and world.blocked(q):
                return False

    return True


def _heading(road, pos):
    return phi_at(road, pos) if road is not None else 0.0


def succ_static(u, road, params, world):
    """Successors of a position on the road.

    Args:
        u (tuple): the position
        road (RoadModel): the road
        params (KinodynParams): lattice settings
        world (StaticMap): static obstacles

    Returns:
        list of (position, cost, theta)
    """
    phi, L = _heading(road, u), params.move_length
    successors = []
    for theta in params.thetas():
        v = (u[0] + L * math.cos(phi + theta), u[1] + L * math.sin(phi + theta))
        if is_free(u, v, road, world, params):
            successors.append((v, params.cost_of_path(u, v, theta), theta))

    return successors


def _transit_speed(u_speed, a, params):
    """speed held from u to reach the average acceleration a over moveLength"""
    if a == 0:
        return u_speed

    disc = u_speed * u_speed + 4 * a * params.move_length
    if disc < 0:
        return None

    return (u_speed + math.sqrt(disc)) / 2


def _snapshot(obstacles, t, params, start_time):
    """obstacles moved to t and the growth of the agent radius since start_time"""
    return [o.extrapolate(t) for o in obstacles], params.radius_growth * max(t - start_time, 0.0)


def _dyn_free(u, v, snapshot, extra_radius, road, world, params):
    if not is_free(u.pos, v.pos, road, world, params):
        return False

    move_time = v.t - u.t
    scale = v.speed / params.move_length
    vel = ((v.pos[0] - u.pos[0]) * scale, (v.pos[1] - u.pos[1]) * scale)
    r_a = (road.agent_radius if road is not None else cp.agent_radius) + extra_radius

    for obstacle in snapshot:
        tc = collision_time(u.pos, vel, obstacle, r_a)
        if tc is not None and tc <= move_time:
            return False

    return True


def is_dyn_free(u, v, obstacles, road, world, params, start_time=0.0):
    """Static check plus the collision times of the moving obstacles.

    The obstacles are extrapolated to u.t and the agent moves from u to v at
    v.speed. The move is rejected as soon as one collision time is not larger
    than the transit time.

    Args:
        u (KinodynState): origin
        v (KinodynState): successor generated from u
        obstacles (list): MovingObstacle snapshots
        road (RoadModel): the road
        world (StaticMap): static obstacles
        params (KinodynParams): settings
        start_time (float): time the radius growth starts from

    Returns:
        True if the move is safe
    """
    snapshot, extra = _snapshot(obstacles, u.t, params, start_time)
    return _dyn_free(u, v, snapshot, extra, road, world, params)


def dyn_succ(u, road, params, world, obstacles, start_time=0.0):
    """Successors of a (position, speed, time) state.

    Zero speed candidates are dropped, they would never arrive.

    Args:
        u (KinodynState): the state
        road (RoadModel): the road
        params (KinodynParams): settings
        world (StaticMap): static obstacles
        obstacles (list): MovingObstacle snapshots
        start_time (float): time the radius growth starts from

    Returns:
        list of (KinodynState, cost, theta)
    """
    phi, L = _heading(road, u.pos), params.move_length
    snapshot, extra = _snapshot(obstacles, u.t, params, start_time)
    thetas = params.thetas()

    successors = []
    for a in params.accelerations():
        speed = _transit_speed(u.speed, a, params)
        if speed is None or not 0 < speed <= params.max_speed:
            continue
        move_time = L / speed
        t = u.t + move_time
        for theta in thetas:
            pos = (u.pos[0] + L * math.cos(phi + theta), u.pos[1] + L * math.sin(phi + theta))
            v = KinodynState(pos, speed, t)
            if _dyn_free(u, v, snapshot, extra, road, world, params):
                cost = params.w_t * move_time + params.w_c * params.cost_of_path(u.pos, pos, theta)
                successors.append((v, cost, theta))

    return successors


def h_kinodyn(u, goal_pos, params):
    if cell_of(u.pos, params.cell_length) == cell_of(goal_pos, params.cell_length):
        return 0.0

    d = math.hypot(goal_pos[0] - u.pos[0], goal_pos[1] - u.pos[1])
    return params.w_t * d / params.max_speed + params.w_c * d


def h_centerline(u, goal_pos, road, params):
    """s distance along the center line, used by the road only planner"""
    if cell_of(u.pos, params.cell_length) == cell_of(goal_pos, params.cell_length):
        return 0.0
    if road is None:
        return math.hypot(goal_pos[0] - u.pos[0], goal_pos[1] - u.pos[1])

    return max(0.0, road.project(goal_pos)[1] - road.project(u.pos)[1])


class KinodynSearch:
    """Open, Closed and Incons keyed by block, expanded one node at a time.

    With anytime set, the search follows the modified ARA*: the best goal
    arrival is tracked at generation and a cheaper successor falling in a
    closed block waits in Incons, the cheapest one per block. Otherwise it is
    the modified A* that stops when a node of the goal cell is popped.

    best_g keeps the cheapest g ever admitted per block and outlives the
    emptying of Closed, so a later cycle only reopens blocks it improves.
    """

    def __init__(
        self,
        start,
        goal_pos,
        road,
        params,
        world=None,
        obstacles=(),
        eps=1.0,
        anytime=False,
    ):
        self.road, self.params, self.world = road, params, world
        self.obstacles = list(obstacles)
        self.goal_pos = (float(goal_pos[0]), float(goal_pos[1]))
        self.goal_cell = cell_of(self.goal_pos, params.cell_length)
        self.eps = eps
        self.anytime = anytime
        self.start_time = start.t

        self.open = PriorityQueue(arity=1)
        self.open_nodes = {}
        self.closed = {}
        self.incons = {}
        self.best_g = {}
        self.g_goal = INF
        self.goal_node = None
        self.expanded = 0
        self.inserted = 0
        self.last_generated = 0

        root = KinodynNode(start, 0.0, block=block_of(start, params))
        self._insert(root)
        if anytime and self.in_goal_cell(root):
            self.g_goal, self.goal_node = 0.0, root

    def h(self, state):
        if self.params.dynamic:
            return h_kinodyn(state, self.goal_pos, self.params)
        return h_centerline(state, self.goal_pos, self.road, self.params)

    def key(self, node):
        return SearchKey(node.g + self.eps * self.h(node.state), arity=1)

    def in_goal_cell(self, node):
        return cell_of(node.state.pos, self.params.cell_length) == self.goal_cell

    def _insert(self, node):
        self.open_nodes[node.block] = node
        self.best_g[node.block] = node.g
        self.open.insert(node.block, self.key(node))
        self.inserted += 1

    def successors(self, node):
        state = node.state
        if self.params.dynamic:
            return dyn_succ(
                state, self.road, self.params, self.world, self.obstacles, self.start_time
            )

        return [
            (KinodynState(pos), cost, theta)
            for pos, cost, theta in succ_static(state.pos, self.road, self.params, self.world)
        ]

    def pop(self):
        block, _ = self.open.pop()
        node = self.open_nodes.pop(block)
        self.closed[block] = node
        self.expanded += 1
        return node

    def expand(self, node):
        """generate the successors of a closed node and admit the ones improving their block"""
        successors = self.successors(node)
        self.last_generated = len(successors)

        for state, cost, theta in successors:
            block = block_of(state, self.params)
            child = KinodynNode(state, node.g + cost, node, theta, block)
            if child.g >= self.best_g.get(block, INF):
                continue

            if block in self.closed:
                if self.anytime:
                    self.best_g[block] = child.g
                    self.incons[block] = child
                continue

            if self.anytime and self.in_goal_cell(child) and self.g_goal > child.g:
                self.g_goal, self.goal_node = child.g, child
            self._insert(child)

    def expand_next(self):
        """pop the best node of Open, expand it and return it, None when Open is empty"""
        if not self.open:
            return None

        node = self.pop()
        self.expand(node)
        return node

    def run_astar(self):
        """modified A*: stop when a node of the goal cell is popped"""
        while self.open:
            node = self.pop()
            if self.in_goal_cell(node):
                self.goal_node, self.g_goal = node, node.g
                return True
            self.expand(node)

        return False

    def improve_path(self):
        """modified ARA* improvement at the current eps"""
        while self.open and self.g_goal > self.open.top_key().k1:
            self.expand_next()

        return self.g_goal < INF

    def reopen(self, eps):
        """new eps: Incons into Open, Closed emptied, every key recomputed"""
        self.eps = eps
        for block, node in self.incons.items():
            current = self.open_nodes.get(block)
            if current is None or current.g > node.g:
                self._insert(node)
        self.incons.clear()
        self.closed.clear()
        self.open.rebuild(lambda block: self.key(self.open_nodes[block]))

    def trace(self):
        path, node = [], self.goal_node
        while node is not None:
            path.append(node.state)
            node = node.parent

        return path[::-1]


def modified_astar(start, goal_pos, road, params, world=None, obstacles=(), eps=1.0):
    """Modified A* over blocks, eps > 1 inflates the heuristic.

    Args:
        start (KinodynState): start state
        goal_pos (tuple): goal position, reached by any node in its cell
        road (RoadModel): the road
        params (KinodynParams): settings, params.dynamic selects the planner
        world (StaticMap): static obstacles
        obstacles (list): moving obstacles
        eps (float): heuristic inflation, at least 1

    Returns:
        the PlanResult
    """
    if eps < 1:
        raise ValueError(cm.error.eps_below_one.format("eps", eps))

    search = KinodynSearch(start, goal_pos, road, params, world, obstacles, eps)
    cycle = KinodynCycle(eps=eps)

    t0 = time.perf_counter()
    success = search.run_astar()
    cycle.wall_time = time.perf_counter() - t0
    cycle.expanded, cycle.inserted = search.expanded, search.inserted

    result = PlanResult(success=success, cycles=[cycle], move_length=params.move_length)
    if success:
        result.path, result.cost = search.trace(), search.g_goal
        cycle.cost = result.cost
    logger.debug(cm.log.kinodyn.format("astar", eps, cycle.expanded, cycle.cost))

    return result


def modified_arastar(
    start, goal_pos, road, params, world=None, obstacles=(), schedule=None, max_cycles=None
):
    """Modified ARA*: one solution per eps value, until eps reaches eps_final.

    Args:
        start (KinodynState): start state
        goal_pos (tuple): goal position
        road (RoadModel): the road
        params (KinodynParams): settings
        world (StaticMap): static obstacles
        obstacles (list): moving obstacles
        schedule (InflationSchedule): eps0, step and eps_final
        max_cycles (int): stop after this many cycles, None for no limit

    Returns:
        the PlanResult with one cycle row per eps value
    """
    schedule = schedule.copy() if schedule is not None else InflationSchedule()
    schedule.reset()
    search = KinodynSearch(
        start, goal_pos, road, params, world, obstacles, schedule.eps_current, anytime=True
    )
    result = PlanResult(move_length=params.move_length)

    while True:
        expanded, inserted = search.expanded, search.inserted
        cycle = KinodynCycle(eps=schedule.eps_current)
        t0 = time.perf_counter()
        if result.cycles:
            search.reopen(schedule.eps_current)
        success = search.improve_path()
        cycle.wall_time = time.perf_counter() - t0
        cycle.expanded = search.expanded - expanded
        cycle.inserted = search.inserted - inserted
        cycle.incons = len(search.incons)
        cycle.cost = search.g_goal
        result.cycles.append(cycle)
        logger.debug(cm.log.kinodyn.format("arastar", cycle.eps, cycle.expanded, cycle.cost))

        if not success:
            break
        result.success, result.path, result.cost = True, search.trace(), search.g_goal
        if schedule.done or (max_cycles is not None and len(result.cycles) >= max_cycles):
            break
        schedule.decrease()

    return result
