"""Independent reference implementations the planners are checked against.

They favour plainness over speed and share no code with the planners except
the grid and collision data types.
"""

import math
from dataclasses import dataclass

import numpy as np

from component import parameter as cp
from component.message import cm
from .errors import ValidationError

__all__ = [
    "oracle_dijkstra",
    "oracle_optimum",
    "Violation",
    "oracle_collision_replay",
    "stepping_collision_time",
    "oracle_enumerate",
]


def oracle_dijkstra(world):
    """Exact cost from the start to every cell.

    Quadratic Dijkstra without a heap. Costs are rebuilt from the number of
    straight and diagonal steps so that they match the canonical path cost.

    Args:
        world (GridWorld): the grid

    Returns:
        np.ndarray of shape (width, height), +inf on unreachable cells
    """
    w, h = world.shape
    dist = np.full((w, h), np.inf)
    straight = np.zeros((w, h), dtype=int)
    diagonal = np.zeros((w, h), dtype=int)
    done = np.zeros((w, h), dtype=bool)
    blocked = world.obstacles

    sx, sy = world.start[0] - 1, world.start[1] - 1
    dist[sx, sy] = 0.0

    while True:
        masked = np.where(done, np.inf, dist)
        i = int(np.argmin(masked))
        x, y = divmod(i, h)
        if masked[x, y] == np.inf:
            break
        done[x, y] = True

        for dx in (-1, 0, 1):
            for dy in (-1, 0, 1):
                nx, ny = x + dx, y + dy
                if (dx, dy) == (0, 0) or not (0 <= nx < w and 0 <= ny < h):
                    continue
                if blocked[nx, ny] or done[nx, ny]:
                    continue
                ns = straight[x, y] + (0 if dx and dy else 1)
                nd = diagonal[x, y] + (1 if dx and dy else 0)
                cost = ns * cp.STRAIGHT_COST + nd * cp.DIAGONAL_COST
                if cost < dist[nx, ny]:
                    dist[nx, ny], straight[nx, ny], diagonal[nx, ny] = cost, ns, nd

    return dist


def oracle_optimum(world):
    """cheapest cost from the start to any goal"""
    dist = oracle_dijkstra(world)
    return min(float(dist[g[0] - 1, g[1] - 1]) for g in world.goals)


@dataclass(frozen=True)
class Violation:
    time: float
    obstacle: int
    distance: float


def _agent_track(path, times):
    t = np.array([s.t for s in path])
    x = np.array([s.pos[0] for s in path])
    y = np.array([s.pos[1] for s in path])
    return np.interp(times, t, x), np.interp(times, t, y)


def oracle_collision_replay(path, obstacles, r_a, dt):
    """Step the agent along a timed path against linearly moving obstacles.

    Args:
        path (list): KinodynState list, constant speed between nodes
        obstacles (list): MovingObstacle list
        r_a (float): agent radius
        dt (float): time step, at most the shortest transit time / 100

    Returns:
        the first Violation (center distance below the sum of radii) or None
    """
    if len(path) < 2 or not obstacles:
        return None

    shortest = min(v.t - u.t for u, v in zip(path, path[1:]))
    if dt > shortest / 100 + cp.geometry_tol:
        raise ValidationError(cm.error.replay_dt.format(dt, shortest / 100))

    times = np.append(np.arange(path[0].t, path[-1].t, dt), path[-1].t)
    ax, ay = _agent_track(path, times)

    first = None
    for k, o in enumerate(obstacles):
        ox = o.pos0[0] + o.vel[0] * (times - o.t0)
        oy = o.pos0[1] + o.vel[1] * (times - o.t0)
        d = np.hypot(ax - ox, ay - oy)
        hits = np.flatnonzero(d < r_a + o.radius - cp.geometry_tol)
        if hits.size and (first is None or times[hits[0]] < first.time):
            first = Violation(float(times[hits[0]]), k, float(d[hits[0]]))

    return first


def stepping_collision_time(agent_pos, agent_vel, obstacle, r_a, dt=1e-4, horizon=100.0):
    """first sampled time the center distance is at most r_a + r_o, None within horizon"""
    times = np.arange(0.0, horizon + dt / 2, dt)
    dx = agent_pos[0] - obstacle.pos0[0] + (agent_vel[0] - obstacle.vel[0]) * times
    dy = agent_pos[1] - obstacle.pos0[1] + (agent_vel[1] - obstacle.vel[1]) * times
    hits = np.flatnonzero(np.hypot(dx, dy) <= r_a + obstacle.radius)

    return float(times[hits[0]]) if hits.size else None


def oracle_enumerate(start, goal_pos, params, successors, depth):
    """Cheapest cost of any lattice path of at most depth moves reaching the goal cell.

    Args:
        start: start state
        goal_pos (tuple): goal position
        params (KinodynParams): cell_length for the goal test
        successors (callable): state -> list of (state, cost, theta)
        depth (int): maximum number of moves

    Returns:
        the optimum, +inf when no path of that depth exists
    """
    cl = params.cell_length
    goal_cell = (math.floor(goal_pos[0] / cl), math.floor(goal_pos[1] / cl))

    def in_goal(state):
        pos = state.pos if hasattr(state, "pos") else state
        return (math.floor(pos[0] / cl), math.floor(pos[1] / cl)) == goal_cell

    best = math.inf
    frontier = [(start, 0.0)]
    for level in range(depth + 1):
        following = []
        for state, cost in frontier:
            if in_goal(state):
                best = min(best, cost)
                continue
            if level < depth:
                following.extend((v, cost + c) for v, c, _ in successors(state))
        frontier = following

    return best
