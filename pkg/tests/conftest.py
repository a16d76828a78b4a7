import numpy as np
import pytest

from component.model import KinodynParams
from component.scripts.collision import MovingObstacle
from component.scripts.gridworld import GridWorld, bundled_grid
from component.scripts.road import straight_road


@pytest.fixture
def empty_world():
    """empty 5x5 grid from corner to corner"""
    return GridWorld.empty(5, 5)


@pytest.fixture
def small_grid():
    return bundled_grid("small")


@pytest.fixture
def sealed_world():
    """the goal sits behind a full wall"""
    obstacles = np.zeros((5, 3), dtype=bool)
    obstacles[2, :] = True
    return GridWorld(obstacles, (1, 1), [(5, 3)])


@pytest.fixture
def road():
    """110 m straight road centered on y = 6.25"""
    return straight_road()


@pytest.fixture
def short_road():
    return straight_road(length=40.0)


@pytest.fixture
def road_params():
    """road only planner with the default lattice"""
    return KinodynParams(dynamic=False)


@pytest.fixture
def crossing_obstacles():
    """two parked obstacles on the lane borders and one crossing the road"""
    return [
        MovingObstacle((12.0, 2.0), (0.0, 0.0), 1.0),
        MovingObstacle((12.0, 10.5), (0.0, 0.0), 1.0),
        MovingObstacle((20.0, 5.0), (0.0, 1.0), 1.0),
    ]


@pytest.fixture
def grid_file(tmp_path):
    def write(text, name="grid.txt"):
        path = tmp_path / name
        path.write_text(text)
        return path

    return write
