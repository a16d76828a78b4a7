import math

import numpy as np
import pytest

from component import parameter as cp
from component.model import KinodynParams
from component.scripts.collision import MovingObstacle, collision_time
from component.scripts.errors import ValidationError
from component.scripts.gridworld import GridWorld, h_diagonal
from component.scripts.kinodyn import KinodynState
from component.scripts.oracles import (
    oracle_collision_replay,
    oracle_dijkstra,
    oracle_enumerate,
    oracle_optimum,
    stepping_collision_time,
)


def _closest_approach(pos, vel, obstacle):
    """smallest center distance over t >= 0"""
    dp = np.subtract(pos, obstacle.pos0)
    dv = np.subtract(vel, obstacle.vel)
    speed2 = float(dv @ dv)
    t = max(0.0, -float(dp @ dv) / speed2) if speed2 else 0.0
    return float(np.hypot(*(dp + dv * t))), t


def test_dijkstra_on_an_empty_grid():
    world = GridWorld.empty(6, 6)
    dist = oracle_dijkstra(world)

    for x in range(1, 7):
        for y in range(1, 7):
            assert dist[x - 1, y - 1] == h_diagonal((1, 1), (x, y))
    assert oracle_optimum(world) == 5 * cp.SQRT2


def test_dijkstra_marks_unreachable_cells(sealed_world):
    dist = oracle_dijkstra(sealed_world)

    assert np.isinf(dist[2:, :]).all()
    assert np.isfinite(dist[:2, :]).all()
    assert oracle_optimum(sealed_world) == math.inf


def test_analytic_collision_time_matches_stepping():
    rng = np.random.default_rng(2024)
    checked = 0
    for _ in range(1000):
        pos, vel, opos, ovel = rng.uniform(-10, 10, size=(4, 2))
        obstacle = MovingObstacle(tuple(opos), tuple(ovel), float(rng.uniform(0.5, 2.0)))
        reach = 1.0 + obstacle.radius
        closest, t_closest = _closest_approach(pos, vel, obstacle)
        # near tangent pairs touch for less than one sample
        if abs(closest - reach) < 0.05 or t_closest > 19:
            continue

        exact = collision_time(tuple(pos), tuple(vel), obstacle, 1.0)
        stepped = stepping_collision_time(
            tuple(pos), tuple(vel), obstacle, 1.0, dt=1e-3, horizon=20.0
        )
        if exact is None or exact > 20:
            assert stepped is None
        else:
            assert stepped == pytest.approx(exact, abs=2e-3)
        checked += 1

    assert checked > 900


def test_replay_of_a_clear_path():
    path = [KinodynState((float(x), 0.0), 2.0, x / 2) for x in range(11)]
    obstacle = MovingObstacle((5.0, 5.0), (0.0, 0.0), 1.0)

    assert oracle_collision_replay(path, [obstacle], 1.0, 0.005) is None
    assert oracle_collision_replay(path[:1], [obstacle], 1.0, 0.005) is None


def test_replay_reports_the_earliest_obstacle():
    path = [KinodynState((float(x), 0.0), 1.0, float(x)) for x in range(11)]
    obstacles = [MovingObstacle((9.0, 0.0)), MovingObstacle((6.0, 0.0))]

    violation = oracle_collision_replay(path, obstacles, 1.0, 0.01)

    assert violation.obstacle == 1
    assert violation.time == pytest.approx(4.0, abs=0.02)
    assert violation.distance < 2.0


def test_replay_follows_moving_obstacles():
    path = [KinodynState((float(x), 0.0), 1.0, float(x)) for x in range(11)]
    obstacle = MovingObstacle((10.0, 0.0), (-1.0, 0.0), 1.0)

    violation = oracle_collision_replay(path, [obstacle], 1.0, 0.01)
    assert violation.time == pytest.approx(
        collision_time((0.0, 0.0), (1.0, 0.0), obstacle, 1.0), abs=0.02
    )


def test_replay_step_limit():
    path = [KinodynState((0.0, 0.0), 10.0, 0.0), KinodynState((1.0, 0.0), 10.0, 0.1)]
    with pytest.raises(ValidationError):
        oracle_collision_replay(path, [MovingObstacle((5.0, 0.0))], 1.0, 0.01)


def test_enumeration_on_a_chain():
    params = KinodynParams(dynamic=False)

    def successors(pos):
        return [((pos[0] + 1.0, pos[1]), 1.0, 0.0), ((pos[0] + 1.0, pos[1] + 1.0), 0.5, 0.0)]

    assert oracle_enumerate((0.0, 0.0), (3.0, 0.0), params, successors, 3) == 3.0
    assert oracle_enumerate((0.0, 0.0), (3.0, 3.0), params, successors, 3) == 1.5
    assert oracle_enumerate((0.0, 0.0), (3.0, 0.0), params, successors, 2) == math.inf
