import math

import numpy as np
import pytest

from component import parameter as cp
from component.model import InflationSchedule
from component.scripts.errors import PlanFailedError, ValidationError
from component.scripts.gridworld import (
    GridWorld,
    ScenarioEvent,
    apply_event,
    bundled_grid,
    cost8,
    adjacent8,
    edge_cost,
    gen_maze,
    gen_scenario,
    grid_path_cost,
    with_start,
)
from component.scripts.oracles import oracle_dijkstra, oracle_optimum
from component.scripts.session import trace_path
from component.scripts.static_planners import PLANNERS, is_anytime, plan


def random_world(seed, max_size=20):
    rng = np.random.default_rng(seed)
    width, height = (int(v) for v in rng.integers(4, max_size + 1, size=2))
    density = float(rng.uniform(0, 35))
    goals = int(rng.integers(1, 3))
    return gen_maze(width, height, density, goals, seed)


def exact(eps):
    return InflationSchedule(eps0=eps, step=0.5, eps_final=1.0)


def assert_valid_path(world, path):
    assert path[0] == world.start
    assert path[-1] in world.goals
    for a, b in zip(path, path[1:]):
        assert not world.is_obstacle(b)
        assert cost8(a, b) < math.inf


def test_dijkstra_costs(empty_world):
    session = plan("dijkstra", empty_world)

    assert session.records.g((1, 1)) == 0
    assert session.records.g((5, 5)) == pytest.approx(4 * cp.SQRT2)
    assert session.metrics.path_cost == 4 * cp.SQRT2
    assert session.path == [(1, 1), (2, 2), (3, 3), (4, 4), (5, 5)]


def test_dijkstra_leaves_walled_cells_infinite(sealed_world):
    session = plan("dijkstra", sealed_world)

    assert not session.success
    assert session.records.g((5, 3)) == math.inf
    assert session.metrics.path_cost == math.inf


def test_trace_path_on_a_small_grid():
    session = plan("astar", GridWorld.empty(3, 3))
    assert session.path == [(1, 1), (2, 2), (3, 3)]
    assert session.metrics.path_cost == 2 * cp.SQRT2
    assert grid_path_cost(session.path) == pytest.approx(session.metrics.path_cost)


@pytest.mark.parametrize("kind", list(PLANNERS))
def test_start_on_a_goal(kind):
    world = GridWorld.empty(3, 3, start=(2, 2), goals=[(2, 2)])
    session = plan(kind, world, schedule=exact(2.0)) if is_anytime(kind) else plan(kind, world)

    assert session.success
    assert session.path == [(2, 2)]
    assert session.metrics.path_cost == 0


@pytest.mark.parametrize("kind", list(PLANNERS))
def test_sealed_goal_fails(kind, sealed_world):
    session = plan(kind, sealed_world)

    assert not session.success
    assert session.path == []
    with pytest.raises(PlanFailedError):
        trace_path(session)


def test_unknown_planner(empty_world):
    with pytest.raises(ValidationError):
        plan("bfs", empty_world)


def test_optimal_planners_match_the_oracle():
    kinds = ["dijkstra", "astar", "astar-back", "dstar-lite", "dstar-lite-opt"]
    for seed in range(100):
        world = random_world(seed)
        optimum = oracle_optimum(world)
        for kind in kinds:
            session = plan(kind, world)
            assert session.metrics.path_cost == optimum, (seed, kind)
            assert_valid_path(world, session.path)
        for kind in ["adstar", "adstar-opt", "arastar"]:
            session = plan(kind, world, schedule=exact(1.0))
            assert session.metrics.path_cost == optimum, (seed, kind)


def test_dijkstra_matches_the_oracle_everywhere():
    for seed in range(20):
        world = random_world(seed, max_size=12)
        session = plan("dijkstra", world)
        dist = oracle_dijkstra(world)
        for x in range(1, world.width + 1):
            for y in range(1, world.height + 1):
                assert session.records.g((x, y)) == pytest.approx(dist[x - 1, y - 1])


def _scripted_runs(count):
    for seed in range(count):
        world = random_world(1000 + seed)
        yield world, gen_scenario(world, 10, 4, seed)


@pytest.mark.parametrize("kind", ["dstar-lite", "dstar-lite-opt"])
def test_dstar_lite_repairs_match_a_fresh_search(kind):
    for world, script in _scripted_runs(50):
        session = plan(kind, world)
        for event in script.events:
            if session.success and len(session.path) > 1:
                world = with_start(world, session.path[1])
            add = [c for c in event.add if c != world.start]
            world = apply_event(world, ScenarioEvent(event.at_step, add, event.remove))

            session = plan(kind, world, session)
            fresh = plan("astar-back", world)
            assert session.metrics.path_cost == fresh.metrics.path_cost
            if session.success:
                assert_valid_path(world, session.path)


def test_adstar_at_eps_one_follows_dstar_lite():
    for world, script in _scripted_runs(20):
        dstar, adstar = plan("dstar-lite", world), plan("adstar", world, schedule=exact(1.0))
        for event in script.events:
            add = [c for c in event.add if c != world.start]
            world = apply_event(world, ScenarioEvent(event.at_step, add, event.remove))
            dstar, adstar = plan("dstar-lite", world, dstar), plan("adstar", world, adstar)
            assert adstar.metrics.path_cost == dstar.metrics.path_cost
            assert adstar.metrics.path_cost == oracle_optimum(world)


def _follow_script(kind, world, script, **options):
    """replan after every event, the agent moving one cell along the path in between"""
    session = plan(kind, world, **options)
    yield world, session
    for event in script.events:
        if session.success and len(session.path) > 1:
            world = with_start(world, session.path[1])
        add = [c for c in event.add if c != world.start]
        world = apply_event(world, ScenarioEvent(event.at_step, add, event.remove))
        session = plan(kind, world, session)
        yield world, session


@pytest.mark.parametrize("kind", ["adstar", "adstar-opt"])
@pytest.mark.parametrize("eps", [1.5, 2.5, 4.5])
def test_adstar_repairs_with_a_moving_start_respect_eps(kind, eps):
    for seed in range(60):
        world = random_world(5000 + seed)
        script = gen_scenario(world, 8, 4, seed)
        for current, session in _follow_script(kind, world, script, schedule=exact(eps)):
            optimum = oracle_optimum(current)
            assert session.success == (optimum < math.inf), (seed, session.cycle.eps)
            if session.success:
                assert_valid_path(current, session.path)
                assert session.metrics.path_cost <= session.cycle.eps * optimum + 1e-9


def test_repaired_path_cost_equals_the_start_value():
    for seed in range(60):
        world = random_world(5000 + seed)
        script = gen_scenario(world, 8, 4, seed)
        for current, session in _follow_script("dstar-lite-opt", world, script):
            start_g = session.records.g(current.start)
            assert session.metrics.path_cost == pytest.approx(start_g), seed
            assert session.metrics.path_cost == pytest.approx(oracle_optimum(current)), seed


def test_unchanged_world_replan_expands_nothing(small_grid):
    world, _ = small_grid
    for kind in ["dstar-lite", "dstar-lite-opt"]:
        session = plan(kind, world)
        cost = session.metrics.path_cost
        session = plan(kind, world, session)
        assert session.metrics.expansions == 0
        assert session.metrics.path_cost == cost


def test_removed_obstacle_opens_a_shortcut():
    obstacles = np.zeros((5, 5), dtype=bool)
    obstacles[2, :4] = True
    world = GridWorld(obstacles, (1, 1), [(5, 1)])
    session = plan("dstar-lite", world)
    before = session.metrics.path_cost

    changed = apply_event(world, ScenarioEvent(1, remove=[(3, 1)]))
    session = plan("dstar-lite", changed, session)

    assert session.metrics.path_cost < before
    assert session.metrics.path_cost == 4.0
    assert session.metrics.path_cost == oracle_optimum(changed)


def test_obstacle_on_the_path_is_repaired(small_grid):
    world, _ = small_grid
    for kind in ["dstar-lite", "dstar-lite-opt", "adstar"]:
        session = plan(kind, world, schedule=exact(1.0)) if is_anytime(kind) else plan(kind, world)
        blocked = session.path[len(session.path) // 2]
        changed = apply_event(world, ScenarioEvent(1, add=[blocked]))

        session = plan(kind, changed, session)
        assert session.metrics.path_cost == oracle_optimum(changed)


def test_rhs_is_the_one_step_lookahead(small_grid):
    world, script = small_grid
    for kind in ["dstar-lite", "dstar-lite-opt"]:
        session = plan(kind, world)
        session = plan(kind, apply_event(world, script.events[0]), session)
        current = session.world
        for cell, record in session.records.items():
            if cell in current.goals:
                assert record.rhs == 0
                continue
            lookahead = min(
                edge_cost(current, cell, s) + session.records.g(s)
                for s in adjacent8(current, cell)
            )
            assert record.rhs == pytest.approx(lookahead)


def test_optimized_variant_recomputes_fewer_rhs():
    world, script = bundled_grid("complex")
    totals = {}
    for kind in ["dstar-lite", "dstar-lite-opt"]:
        current, session = world, plan(kind, world)
        total = session.metrics.rhs_updates
        for event in script.events:
            current = apply_event(current, event)
            session = plan(kind, current, session)
            total += session.metrics.rhs_updates
        totals[kind] = total

    assert totals["dstar-lite-opt"] < totals["dstar-lite"]


@pytest.mark.parametrize("eps", [1.5, 2.5, 4.5])
def test_arastar_solutions_respect_eps(eps):
    for seed in range(50):
        world = random_world(2000 + seed)
        optimum = oracle_optimum(world)
        session = plan("arastar", world, schedule=exact(eps), cycles=None)

        for cycle in session.metrics.cycles:
            assert cycle.cost <= cycle.eps * optimum + 1e-9
            assert 1 <= cycle.eps_prime <= cycle.eps
            assert cycle.cost <= cycle.eps_prime * optimum + 1e-9
        assert session.eps.eps_current == 1
        assert session.metrics.path_cost == optimum


@pytest.mark.parametrize("eps", [1.5, 2.5, 4.5])
def test_adstar_solutions_respect_eps(eps):
    for seed in range(50):
        world = random_world(3000 + seed)
        optimum = oracle_optimum(world)
        session = plan("adstar", world, schedule=exact(eps))
        costs = [(session.cycle.eps, session.metrics.path_cost)]
        while not session.eps.done:
            session = plan("adstar", world, session)
            costs.append((session.cycle.eps, session.metrics.path_cost))

        for cycle_eps, cost in costs:
            assert cost <= cycle_eps * optimum + 1e-9
        assert session.metrics.path_cost == optimum


def test_arastar_three_on_random_grids():
    for seed in range(100):
        world = random_world(4000 + seed)
        session = plan("arastar", world, schedule=exact(3.0))
        assert session.metrics.path_cost <= 3 * oracle_optimum(world) + 1e-9


def test_arastar_resets_eps_after_a_change(small_grid):
    world, script = small_grid
    session = plan("arastar", world, schedule=exact(2.5))
    session = plan("arastar", world, session)
    assert session.eps.eps_current == 2.0

    session = plan("arastar", apply_event(world, script.events[0]), session)
    assert session.eps.eps_current == 2.5
    assert session.metrics.cycles[-1].from_scratch


def test_adstar_keeps_eps_after_a_change_by_default(small_grid):
    world, script = small_grid
    session = plan("adstar", world, schedule=exact(2.5))
    session = plan("adstar", world, session)
    assert session.eps.eps_current == 2.0

    changed = apply_event(world, script.events[0])
    session = plan("adstar", changed, session)
    assert session.eps.eps_current == 2.0

    session = plan("adstar", world, session, reset_eps=True)
    assert session.eps.eps_current == 2.5


def test_adstar_after_eps_one_replans_optimally(small_grid):
    world, script = small_grid
    session = plan("adstar", world, schedule=exact(2.0))
    while not session.eps.done:
        session = plan("adstar", world, session)

    changed = apply_event(world, script.events[0])
    session = plan("adstar", changed, session)
    assert session.metrics.path_cost == oracle_optimum(changed)


def test_repair_budget_restarts_from_scratch(small_grid):
    world, _ = small_grid
    session = plan("dstar-lite", world)
    blocked = session.path[len(session.path) // 2]
    changed = apply_event(world, ScenarioEvent(1, add=[blocked]))

    session = plan("dstar-lite", changed, session, max_expansions=0)
    cycles = session.metrics.cycles

    assert len(cycles) == 2
    assert not cycles[0].from_scratch
    assert cycles[-1].from_scratch
    assert session.metrics.path_cost == oracle_optimum(changed)


def test_adstar_first_cycle_is_cheaper_than_dstar_lite():
    world, _ = bundled_grid("large")
    dstar = plan("dstar-lite", world)
    adstar = plan("adstar", world, schedule=InflationSchedule(eps0=4.5, step=0.08))

    first = dstar.metrics.expansions
    assert adstar.metrics.expansions < 0.5 * first
