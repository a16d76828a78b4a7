"""Occupancy grids, 8-connectivity, scripted obstacle changes and bundled test grids.

Cells are 1-based (x, y) tuples, x is the column and y the row. The obstacle
matrix is stored with shape (width, height) and indexed obstacles[x - 1, y - 1].
"""

import json
import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path

import numpy as np
from scipy import ndimage

from component import parameter as cp
from component.message import cm
from .errors import GenerationError, GridFormatError, ValidationError

__all__ = [
    "GridWorld",
    "ScenarioEvent",
    "ScenarioScript",
    "GridMetricsTarget",
    "neighbors8",
    "adjacent8",
    "cost8",
    "edge_cost",
    "h_diagonal",
    "grid_path_cost",
    "apply_event",
    "inverse_event",
    "changed_cells",
    "with_start",
    "add_goal",
    "remove_goal",
    "gen_maze",
    "gen_scenario",
    "grid_metrics",
    "load_grid",
    "save_grid",
    "grid_to_text",
    "load_scenario",
    "save_scenario",
    "bundled_grid",
]

logger = logging.getLogger(__name__)

OFFSETS = [(-1, -1), (0, -1), (1, -1), (-1, 0), (1, 0), (-1, 1), (0, 1), (1, 1)]

# 8-connected structuring element for the flood fill
CONNECTIVITY = np.ones((3, 3), dtype=int)


def _cell(value):
    x, y = value
    return (int(x), int(y))


@dataclass(frozen=True, eq=False)
class GridWorld:
    """Immutable occupancy grid with a start and a nonempty goal list."""

    obstacles: np.ndarray
    start: tuple
    goals: tuple

    def __post_init__(self):
        obstacles = np.array(self.obstacles, dtype=bool)
        if obstacles.ndim != 2 or 0 in obstacles.shape:
            raise ValidationError(cm.error.grid_shape.format(obstacles.shape))
        obstacles.setflags(write=False)
        object.__setattr__(self, "obstacles", obstacles)
        object.__setattr__(self, "start", _cell(self.start))
        object.__setattr__(self, "goals", tuple(_cell(g) for g in self.goals))

        if not self.goals:
            raise ValidationError(cm.error.no_goal)
        for cell in (self.start, *self.goals):
            if not self.in_bounds(cell):
                raise ValidationError(cm.error.out_of_bounds.format(cell, *self.shape))
        if self.is_obstacle(self.start):
            raise ValidationError(cm.error.start_on_obstacle.format(self.start))
        for goal in self.goals:
            if self.is_obstacle(goal):
                raise ValidationError(cm.error.goal_on_obstacle.format(goal))

    @classmethod
    def empty(cls, width, height, start=(1, 1), goals=None):
        goals = goals or [(width, height)]
        return cls(np.zeros((width, height), dtype=bool), start, goals)

    @property
    def width(self):
        return self.obstacles.shape[0]

    @property
    def height(self):
        return self.obstacles.shape[1]

    @property
    def shape(self):
        return self.obstacles.shape

    @property
    def cells(self):
        return self.obstacles.size

    @property
    def density(self):
        """obstacle density in percent"""
        return 100 * int(self.obstacles.sum()) / self.cells

    def in_bounds(self, cell):
        x, y = cell
        return 1 <= x <= self.width and 1 <= y <= self.height

    def is_obstacle(self, cell):
        x, y = cell
        return bool(self.obstacles[x - 1, y - 1])

    def is_goal(self, cell):
        return cell in self.goals

    def __eq__(self, other):
        if not isinstance(other, GridWorld):
            return NotImplemented
        return (
            self.start == other.start
            and self.goals == other.goals
            and np.array_equal(self.obstacles, other.obstacles)
        )

    def __hash__(self):
        return hash((self.obstacles.tobytes(), self.shape, self.start, self.goals))

    def __repr__(self):
        size = f"{self.width}x{self.height}"
        return f"GridWorld({size}, start={self.start}, goals={list(self.goals)})"


@dataclass(frozen=True)
class ScenarioEvent:
    at_step: int
    add: tuple = ()
    remove: tuple = ()

    def __post_init__(self):
        if int(self.at_step) < 1:
            raise ValidationError(cm.error.event_step.format(self.at_step))
        object.__setattr__(self, "at_step", int(self.at_step))
        object.__setattr__(self, "add", tuple(_cell(c) for c in self.add))
        object.__setattr__(self, "remove", tuple(_cell(c) for c in self.remove))


@dataclass(frozen=True)
class ScenarioScript:
    """ordered obstacle change events"""

    events: tuple = ()

    def __post_init__(self):
        events = tuple(self.events)
        steps = [e.at_step for e in events]
        if steps != sorted(steps):
            raise ValidationError(cm.error.event_order.format(steps))
        object.__setattr__(self, "events", events)

    def __len__(self):
        return len(self.events)

    def at(self, step):
        """events firing at the given step"""
        return [e for e in self.events if e.at_step == step]

    def validate(self, world):
        """reject events that leave the grid or cover the start or a goal"""
        protected = {world.start, *world.goals}
        for event in self.events:
            for cell in (*event.add, *event.remove):
                if not world.in_bounds(cell):
                    raise ValidationError(
                        cm.error.out_of_bounds.format(cell, *world.shape)
                    )
            blocked = protected.intersection(event.add)
            if blocked:
                raise ValidationError(
                    cm.error.add_on_protected.format(sorted(blocked), event.at_step)
                )

        return self


@dataclass(frozen=True)
class GridMetricsTarget:
    width: int
    height: int
    cells: int
    goals: int
    obstacles: int
    density: float
    changes: int


def neighbors8(world, cell):
    """in-bounds, obstacle free cells around cell"""
    if not world.in_bounds(cell):
        raise ValidationError(cm.error.out_of_bounds.format(cell, *world.shape))

    x, y = cell
    obstacles, w, h = world.obstacles, world.width, world.height

    return [
        (x + dx, y + dy)
        for dx, dy in OFFSETS
        if 1 <= x + dx <= w and 1 <= y + dy <= h and not obstacles[x + dx - 1, y + dy - 1]
    ]


def adjacent8(world, cell):
    """in-bounds cells around cell, obstacles included"""
    x, y = cell
    w, h = world.width, world.height

    return [(x + dx, y + dy) for dx, dy in OFFSETS if 1 <= x + dx <= w and 1 <= y + dy <= h]


def cost8(a, b, world=None):
    """1 for a 4-neighbour, sqrt(2) for a diagonal one, +inf otherwise.

    With a world, any move touching an obstacle also costs +inf.
    """
    dx, dy = abs(a[0] - b[0]), abs(a[1] - b[1])
    if dx > 1 or dy > 1 or dx + dy == 0:
        return math.inf
    if world is not None and (world.is_obstacle(a) or world.is_obstacle(b)):
        return math.inf

    return cp.DIAGONAL_COST if dx and dy else cp.STRAIGHT_COST


def edge_cost(world, a, b):
    return cost8(a, b, world)


def h_diagonal(a, b):
    dx, dy = abs(a[0] - b[0]), abs(a[1] - b[1])
    return min(dx, dy) * cp.SQRT2 + abs(dx - dy)


def grid_path_cost(path):
    """canonical cost of a cell path: straight steps + diagonal steps * sqrt(2)"""
    straight = diagonal = 0
    for a, b in zip(path, path[1:]):
        if abs(a[0] - b[0]) + abs(a[1] - b[1]) == 2:
            diagonal += 1
        else:
            straight += 1

    return straight * cp.STRAIGHT_COST + diagonal * cp.DIAGONAL_COST


def apply_event(world, event):
    """Return a copy of world with the event applied.

    Args:
        world (GridWorld): the grid to modify, left untouched
        event (ScenarioEvent): cells to block and to free

    Returns:
        the modified GridWorld
    """
    protected = {world.start, *world.goals}
    obstacles = world.obstacles.copy()

    for cell in (*event.add, *event.remove):
        if not world.in_bounds(cell):
            raise ValidationError(cm.error.out_of_bounds.format(cell, *world.shape))
    for cell in event.add:
        if cell in protected:
            raise ValidationError(cm.error.add_on_protected.format([cell], event.at_step))
        obstacles[cell[0] - 1, cell[1] - 1] = True
    for cell in event.remove:
        obstacles[cell[0] - 1, cell[1] - 1] = False

    return GridWorld(obstacles, world.start, world.goals)


def inverse_event(event):
    return ScenarioEvent(event.at_step, add=event.remove, remove=event.add)


def changed_cells(old, new):
    """cells whose occupancy differs between two worlds of the same shape"""
    if old.shape != new.shape:
        raise ValidationError(cm.error.shape_mismatch.format(old.shape, new.shape))

    diff = np.argwhere(old.obstacles != new.obstacles)

    return [(int(x) + 1, int(y) + 1) for x, y in diff]


def with_start(world, cell):
    return GridWorld(world.obstacles, cell, world.goals)


def add_goal(world, cell):
    cell = _cell(cell)
    if cell in world.goals:
        return world
    return GridWorld(world.obstacles, world.start, (*world.goals, cell))


def remove_goal(world, cell):
    goals = tuple(g for g in world.goals if g != _cell(cell))
    return GridWorld(world.obstacles, world.start, goals)


def _component(obstacles, cell):
    """boolean mask of the free cells 8-connected to cell"""
    labels, _ = ndimage.label(~obstacles, structure=CONNECTIVITY)
    label = labels[cell[0] - 1, cell[1] - 1]

    return labels == label if label else np.zeros_like(obstacles)


def gen_maze(width, height, density, goal_count, seed, start=(1, 1)):
    """Random obstacle field with reachable goals.

    Exactly round(density% of the cells) obstacles are drawn, goals are picked
    among the reachable free cells that lie in the far half (diagonal distance)
    from the start.

    Args:
        width (int): number of columns, at least 4
        height (int): number of rows, at least 4
        density (float): obstacle density in percent, below 60
        goal_count (int): number of goals
        seed (int): seed of the numpy generator
        start (tuple): start cell

    Returns:
        the GridWorld
    """
    if width < 4 or height < 4:
        raise ValidationError(cm.error.maze_size.format(width, height))
    if not 0 <= density < cp.max_density:
        raise ValidationError(cm.error.maze_density.format(density, cp.max_density))
    if goal_count < 1:
        raise ValidationError(cm.error.no_goal)

    rng = np.random.default_rng(seed)
    cells = width * height
    n_obstacles = round(density * cells / 100)
    start_index = (start[0] - 1) * height + (start[1] - 1)
    candidates = np.delete(np.arange(cells), start_index)

    for attempt in range(cp.max_generation_retries):
        flat = np.zeros(cells, dtype=bool)
        flat[rng.choice(candidates, size=n_obstacles, replace=False)] = True
        obstacles = flat.reshape(width, height)

        region = _component(obstacles, start)
        region[start[0] - 1, start[1] - 1] = False
        reachable = np.argwhere(region)
        if len(reachable) < goal_count:
            continue

        dist = np.array([h_diagonal(start, (x + 1, y + 1)) for x, y in reachable])
        far = reachable[dist >= 0.5 * dist.max()]
        if len(far) < goal_count:
            far = reachable[np.argsort(-dist, kind="stable")[:goal_count]]

        picked = rng.choice(len(far), size=goal_count, replace=False)
        goals = [(int(far[i][0]) + 1, int(far[i][1]) + 1) for i in picked]
        logger.debug(cm.log.maze.format(width, height, seed, attempt + 1))

        return GridWorld(obstacles, start, goals)

    raise GenerationError(cm.error.generation.format(cp.max_generation_retries, seed))


def gen_scenario(world, changes, cells_per_change, seed, first_step=2, spacing=3):
    """Scripted obstacle changes that keep the goals reachable.

    Every event blocks about half of its cells and frees the rest, it never
    touches the start or a goal and never separates the free region of the
    start from every goal.

    Args:
        world (GridWorld): the initial grid
        changes (int): number of events
        cells_per_change (int): cells modified by each event
        seed (int): seed of the numpy generator
        first_step (int): step of the first event
        spacing (int): steps between two events

    Returns:
        the ScenarioScript
    """
    rng = np.random.default_rng(seed)
    protected = {world.start, *world.goals}
    n_add = math.ceil(cells_per_change / 2)
    n_remove = cells_per_change - n_add
    events, current = [], world

    for i in range(changes):
        step = first_step + i * spacing
        region = _component(current.obstacles, current.start)

        free = [
            (int(x) + 1, int(y) + 1)
            for x, y in np.argwhere(~current.obstacles)
            if (int(x) + 1, int(y) + 1) not in protected
        ]
        blocked = [(int(x) + 1, int(y) + 1) for x, y in np.argwhere(current.obstacles)]

        for _ in range(cp.max_generation_retries if len(free) >= n_add else 0):
            add = [free[j] for j in rng.choice(len(free), size=n_add, replace=False)]
            k = min(n_remove, len(blocked))
            remove = [blocked[j] for j in rng.choice(len(blocked), size=k, replace=False)]
            event = ScenarioEvent(step, add=sorted(add), remove=sorted(remove))
            candidate = apply_event(current, event)

            # the former start region must stay in one piece that holds a goal
            after = _component(candidate.obstacles, candidate.start)
            kept = region & ~candidate.obstacles
            if np.all(after[kept]) and any(after[g[0] - 1, g[1] - 1] for g in world.goals):
                events.append(event)
                current = candidate
                break
        else:
            raise GenerationError(
                cm.error.generation.format(cp.max_generation_retries, seed)
            )

    return ScenarioScript(tuple(events))


def grid_metrics(world, script=None):
    return GridMetricsTarget(
        width=world.width,
        height=world.height,
        cells=world.cells,
        goals=len(world.goals),
        obstacles=int(world.obstacles.sum()),
        density=world.density,
        changes=len(script) if script is not None else 0,
    )


def grid_to_text(world):
    rows = []
    for y in range(1, world.height + 1):
        row = []
        for x in range(1, world.width + 1):
            if (x, y) == world.start:
                row.append("S")
            elif (x, y) in world.goals:
                row.append("G")
            else:
                row.append("#" if world.is_obstacle((x, y)) else ".")
        rows.append("".join(row))

    return "\n".join(rows) + "\n"


def save_grid(world, path):
    """write the ASCII map, a start sitting on a goal cannot be written"""
    if world.start in world.goals:
        raise ValidationError(cm.error.grid_save_start_goal.format(world.start))

    path = Path(path)
    path.write_text(grid_to_text(world))

    return path


def load_grid(path):
    """Read an ASCII map.

    '.' free, '#' obstacle, 'S' start (exactly one), 'G' goal (at least one),
    one row per line, the first line is y = 1.

    Args:
        path (str|Path): the map file

    Returns:
        the GridWorld
    """
    lines = Path(path).read_text().splitlines()
    while lines and not lines[-1].strip():
        lines.pop()
    if not lines:
        raise GridFormatError(cm.error.grid_empty.format(path), line=1)

    width = len(lines[0].rstrip())
    obstacles = np.zeros((width, len(lines)), dtype=bool)
    starts, goals = [], []

    for y, line in enumerate(lines, start=1):
        line = line.rstrip()
        if len(line) != width:
            raise GridFormatError(cm.error.grid_width.format(y, len(line), width), line=y)
        for x, char in enumerate(line, start=1):
            if char == "#":
                obstacles[x - 1, y - 1] = True
            elif char == "S":
                starts.append((x, y))
            elif char == "G":
                goals.append((x, y))
            elif char != ".":
                raise GridFormatError(cm.error.grid_char.format(y, x, char), line=y)

    if len(starts) != 1:
        line = starts[1][1] if len(starts) > 1 else len(lines)
        raise GridFormatError(cm.error.grid_start.format(len(starts)), line=line)
    if not goals:
        raise GridFormatError(cm.error.grid_goal, line=len(lines))

    return GridWorld(obstacles, starts[0], goals)


def load_scenario(path, world=None):
    """read a JSON scenario, validated against world when given"""
    try:
        data = json.loads(Path(path).read_text())
        events = [
            ScenarioEvent(e["at_step"], add=e.get("add", []), remove=e.get("remove", []))
            for e in data["events"]
        ]
    except ValidationError:
        raise
    except (KeyError, TypeError, ValueError) as e:
        raise ValidationError(cm.error.scenario_format.format(path, e))

    script = ScenarioScript(tuple(events))

    return script.validate(world) if world is not None else script


def save_scenario(script, path):
    data = {
        "events": [
            {
                "at_step": e.at_step,
                "add": [list(c) for c in e.add],
                "remove": [list(c) for c in e.remove],
            }
            for e in script.events
        ]
    }
    path = Path(path)
    path.write_text(json.dumps(data, indent=2) + "\n")

    return path


@lru_cache(maxsize=None)
def bundled_grid(name):
    """Grid and scenario shipped with the module.

    Args:
        name (str): one of cp.bundled_grids

    Returns:
        (GridWorld, ScenarioScript)
    """
    if name not in cp.bundled_grids:
        raise ValidationError(cm.error.unknown_grid.format(name, list(cp.bundled_grids)))

    params = cp.bundled_grids[name]
    if params is None:
        world = load_grid(cp.grid_dir / f"{name}.txt")
        script = load_scenario(cp.grid_dir / f"{name}_scenario.json", world)
        return world, script

    width, height, density, goals, seed, changes, per_change = params
    world = gen_maze(width, height, density, goals, seed)
    script = gen_scenario(world, changes, per_change, seed)

    return world, script
