import itertools
import math

import numpy as np
import pytest

from component import parameter as cp
from component.scripts.errors import GridFormatError, ValidationError
from component.scripts.gridworld import (
    GridWorld,
    ScenarioEvent,
    ScenarioScript,
    add_goal,
    apply_event,
    bundled_grid,
    changed_cells,
    cost8,
    gen_maze,
    gen_scenario,
    grid_metrics,
    grid_path_cost,
    h_diagonal,
    inverse_event,
    load_grid,
    load_scenario,
    neighbors8,
    remove_goal,
    save_grid,
    save_scenario,
    with_start,
)
from component.scripts.oracles import oracle_dijkstra, oracle_optimum


def test_neighbors8():
    world = GridWorld.empty(3, 3)
    assert len(neighbors8(world, (2, 2))) == 8
    assert sorted(neighbors8(world, (1, 1))) == [(1, 2), (2, 1), (2, 2)]

    blocked = apply_event(world, ScenarioEvent(1, add=[(2, 1)]))
    assert len(neighbors8(blocked, (2, 2))) == 7
    assert (2, 1) not in neighbors8(blocked, (2, 2))


def test_neighbors8_out_of_bounds():
    with pytest.raises(ValidationError):
        neighbors8(GridWorld.empty(3, 3), (4, 1))


def test_cost8():
    assert cost8((2, 2), (3, 2)) == 1
    assert cost8((2, 2), (3, 3)) == cp.SQRT2
    assert cost8((2, 2), (4, 2)) == math.inf
    assert cost8((2, 2), (2, 2)) == math.inf


def test_h_diagonal():
    assert h_diagonal((0, 0), (0, 0)) == 0
    assert h_diagonal((0, 0), (5, 0)) == 5
    assert h_diagonal((0, 0), (3, 4)) == pytest.approx(3 * math.sqrt(2) + 1)


def test_h_diagonal_matches_the_empty_grid_optimum():
    world = GridWorld.empty(6, 6, start=(1, 1))
    dist = oracle_dijkstra(world)
    for x, y in itertools.product(range(1, 7), repeat=2):
        assert h_diagonal((1, 1), (x, y)) == pytest.approx(dist[x - 1, y - 1])


def test_h_diagonal_is_consistent():
    world = GridWorld.empty(6, 6)
    goal = (5, 2)
    for u in itertools.product(range(1, 7), repeat=2):
        for v in neighbors8(world, u):
            assert h_diagonal(v, goal) - h_diagonal(u, goal) <= cost8(u, v) + 1e-12


def test_grid_path_cost():
    assert grid_path_cost([(1, 1), (2, 2), (3, 3)]) == 2 * cp.SQRT2
    assert grid_path_cost([(1, 1), (2, 1), (3, 2)]) == 1 + cp.SQRT2
    assert grid_path_cost([(1, 1)]) == 0


def test_apply_event_and_its_inverse():
    world = GridWorld.empty(4, 4)
    event = ScenarioEvent(1, add=[(2, 2)])

    blocked = apply_event(world, event)
    assert blocked.is_obstacle((2, 2))
    assert not world.is_obstacle((2, 2))
    assert changed_cells(world, blocked) == [(2, 2)]

    assert apply_event(blocked, inverse_event(event)) == world


def test_apply_event_protects_start_and_goals():
    world = GridWorld.empty(4, 4)
    with pytest.raises(ValidationError):
        apply_event(world, ScenarioEvent(1, add=[world.start]))
    with pytest.raises(ValidationError):
        apply_event(world, ScenarioEvent(1, add=[(5, 1)]))


def test_world_validation():
    obstacles = np.zeros((3, 3), dtype=bool)
    obstacles[0, 0] = True
    with pytest.raises(ValidationError):
        GridWorld(obstacles, (1, 1), [(3, 3)])
    with pytest.raises(ValidationError):
        GridWorld(np.zeros((3, 3)), (1, 1), [])
    with pytest.raises(ValidationError):
        GridWorld(np.zeros((3, 3)), (1, 1), [(4, 3)])


def test_world_is_read_only():
    world = GridWorld.empty(3, 3)
    with pytest.raises(ValueError):
        world.obstacles[0, 0] = True


def test_modification_helpers():
    world = GridWorld.empty(4, 4)
    moved = with_start(world, (2, 3))
    assert moved.start == (2, 3) and world.start == (1, 1)

    two = add_goal(world, (1, 4))
    assert two.goals == ((4, 4), (1, 4))
    assert remove_goal(two, (4, 4)).goals == ((1, 4),)


def test_scenario_order_and_validation():
    with pytest.raises(ValidationError):
        ScenarioScript((ScenarioEvent(3), ScenarioEvent(2)))
    with pytest.raises(ValidationError):
        ScenarioEvent(0)

    world = GridWorld.empty(4, 4)
    script = ScenarioScript((ScenarioEvent(2, add=[(4, 4)]),))
    with pytest.raises(ValidationError):
        script.validate(world)


def test_gen_maze_matches_the_requested_statistics():
    world = gen_maze(7, 6, 35.71, 1, seed=1)
    metrics = grid_metrics(world)

    assert (metrics.width, metrics.height, metrics.cells) == (7, 6, 42)
    assert metrics.obstacles == 15
    assert metrics.density == pytest.approx(35.71, abs=0.01)
    assert metrics.goals == 1
    assert oracle_optimum(world) < math.inf


def test_gen_maze_is_deterministic():
    assert gen_maze(12, 9, 30, 2, seed=5) == gen_maze(12, 9, 30, 2, seed=5)
    assert not gen_maze(4, 4, 0, 1, seed=3).obstacles.any()


def test_gen_maze_rejects_bad_parameters():
    with pytest.raises(ValidationError):
        gen_maze(3, 8, 10, 1, seed=0)
    with pytest.raises(ValidationError):
        gen_maze(8, 8, 60, 1, seed=0)


@pytest.mark.parametrize("seed", range(10))
def test_gen_scenario_keeps_a_goal_reachable(seed):
    world = gen_maze(15, 12, 30, 2, seed)
    script = gen_scenario(world, 4, 6, seed)

    assert len(script) == 4
    script.validate(world)
    for event in script.events:
        world = apply_event(world, event)
        assert oracle_optimum(world) < math.inf


def test_small_grid(small_grid):
    world, script = small_grid
    metrics = grid_metrics(world, script)

    assert (world.width, world.height) == (6, 7)
    assert world.start == (1, 6)
    assert world.goals == ((6, 1),)
    assert metrics.obstacles == 15
    assert metrics.changes == 1


@pytest.mark.parametrize("name", ["complex", "large"])
def test_generated_bundled_grids(name):
    width, height, density, goals, _, changes, _ = cp.bundled_grids[name]
    world, script = bundled_grid(name)
    metrics = grid_metrics(world, script)

    assert (metrics.width, metrics.height) == (width, height)
    assert metrics.goals == goals
    assert metrics.changes == changes
    assert metrics.density == pytest.approx(density, abs=0.05)


def test_unknown_bundled_grid():
    with pytest.raises(ValidationError):
        bundled_grid("nope")


def test_grid_file_round_trip(tmp_path, small_grid):
    world, script = small_grid
    assert load_grid(save_grid(world, tmp_path / "g.txt")) == world
    assert load_scenario(save_scenario(script, tmp_path / "s.json"), world) == script


def test_saving_a_start_on_a_goal_is_rejected(tmp_path):
    world = GridWorld.empty(3, 3, start=(3, 3), goals=[(1, 1), (3, 3)])
    with pytest.raises(ValidationError, match="also a goal"):
        save_grid(world, tmp_path / "g.txt")
    assert not (tmp_path / "g.txt").exists()


@pytest.mark.parametrize(
    "text, line",
    [
        ("S..\n..\n..G\n", 2),
        ("S..\n.x.\n..G\n", 2),
        ("S..\n...\nS.G\n", 3),
        ("S..\n...\n...\n", 3),
        ("", 1),
    ],
)
def test_malformed_grid_names_the_line(grid_file, text, line):
    with pytest.raises(GridFormatError) as info:
        load_grid(grid_file(text))
    assert info.value.line == line


def test_malformed_scenario(tmp_path):
    path = tmp_path / "s.json"
    path.write_text('{"events": [{"add": []}]}')
    with pytest.raises(ValidationError):
        load_scenario(path)
