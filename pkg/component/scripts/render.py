"""Deterministic SVG renderings of grids, explored cells, roads and paths."""

import math
from pathlib import Path

import matplotlib as mpl
import numpy as np
from matplotlib.collections import PatchCollection
from matplotlib.colors import LinearSegmentedColormap, Normalize, to_hex
from matplotlib.figure import Figure
from matplotlib.patches import Circle, Rectangle

from component import parameter as cp
from component.message import cm
from component.model import RenderSpec
from .errors import ValidationError
from .gridworld import GridWorld

__all__ = ["g_colormap", "g_color", "emit_svg", "emit_grid_svg", "emit_road_svg"]

# fixed ids in the svg output
mpl.rcParams["svg.hashsalt"] = cp.svg_hashsalt


def g_colormap(spec):
    return LinearSegmentedColormap.from_list("g", [spec.low_color, spec.high_color])


def g_color(g, g_max, spec):
    """hex color of a g-value, g_max maps to the high anchor"""
    norm = Normalize(0.0, g_max if g_max > 0 else 1.0)
    return to_hex(g_colormap(spec)(norm(g)))


def _save(fig, path):
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        fig.savefig(path, format="svg", metadata={"Date": None})
    except OSError as e:
        raise ValidationError(cm.error.write.format(path, e))

    return path


def _cells(cells, color, **kwargs):
    patches = [Rectangle((x - 0.5, y - 0.5), 1, 1) for x, y in cells]
    return PatchCollection(patches, facecolor=color, **kwargs)


def emit_grid_svg(world, session, spec, path):
    """Grid with its obstacles, explored cells colored by g, start, goals and path.

    Args:
        world (GridWorld): the grid
        session (PlanSession): the session to draw, None for the grid alone
        spec (RenderSpec): toggles and colors
        path (str|Path): svg destination

    Returns:
        the written path
    """
    colors = spec.colors
    size = min(cp.max_figure_inches, cp.cell_inches * max(world.width, world.height))
    aspect = world.height / world.width
    fig = Figure(figsize=(size, max(size * aspect, 1.0)))
    ax = fig.add_subplot()

    free = [(x, y) for x in range(1, world.width + 1) for y in range(1, world.height + 1)]
    blocked = [c for c in free if world.is_obstacle(c)]
    ax.add_collection(_cells(free, colors["free"], edgecolor="none"))

    if session is not None and spec.explored:
        explored = [
            (node, r.g)
            for node, r in session.records.items()
            if math.isfinite(r.g) and not world.is_obstacle(node)
        ]
        if explored:
            g_max = max(g for _, g in explored)
            patches = [Rectangle((x - 0.5, y - 0.5), 1, 1) for (x, y), _ in explored]
            face = [g_color(g, g_max, spec) for _, g in explored]
            ax.add_collection(PatchCollection(patches, facecolor=face, edgecolor="none"))

    ax.add_collection(_cells(blocked, colors["obstacle"], edgecolor="none"))
    ax.add_collection(_cells(world.goals, colors["goal"], edgecolor="none"))
    ax.add_collection(_cells([world.start], colors["start"], edgecolor="none"))

    if spec.grid_lines:
        for x in range(world.width + 1):
            ax.axvline(x + 0.5, color=colors["grid_line"], linewidth=0.3)
        for y in range(world.height + 1):
            ax.axhline(y + 0.5, color=colors["grid_line"], linewidth=0.3)

    if session is not None and spec.path and session.success:
        xs, ys = zip(*session.path)
        ax.plot(xs, ys, color=colors["path"], linewidth=1.5)

    ax.set_xlim(0.5, world.width + 0.5)
    ax.set_ylim(world.height + 0.5, 0.5)
    ax.set_aspect("equal")
    ax.set_axis_off()

    return _save(fig, path)


def emit_road_svg(road, result, spec, path, world=None, obstacles=()):
    """Road borders, center line, static and moving obstacles and the planned path.

    Args:
        road (RoadModel): the road
        result (PlanResult): the plan to draw, None for the road alone
        spec (RenderSpec): toggles and colors
        path (str|Path): svg destination
        world (StaticMap): static obstacles
        obstacles (list): MovingObstacle snapshots

    Returns:
        the written path
    """
    colors = spec.colors
    fig = Figure(figsize=(cp.max_figure_inches, cp.max_figure_inches / 3))
    ax = fig.add_subplot()

    x, y = road.xy[:, 0], road.xy[:, 1]
    nx, ny = -np.sin(road.phi), np.cos(road.phi)
    for side in (-1, 1):
        bx = x + side * road.half_width * nx
        by = y + side * road.half_width * ny
        ax.plot(bx, by, color=colors["border"], linewidth=1)
    ax.plot(x, y, color=colors["road"], linewidth=0.8, linestyle="--")

    if world is not None:
        res, (x0, y0) = world.resolution, world.origin
        cells = [
            Rectangle((x0 + i * res, y0 + j * res), res, res)
            for i, j in zip(*world.obstacles.nonzero())
        ]
        ax.add_collection(PatchCollection(cells, facecolor=colors["obstacle"], edgecolor="none"))

    for o in obstacles:
        color = colors["moving_obstacle"]
        ax.add_patch(Circle(o.pos0, o.radius, facecolor=color, edgecolor="none"))

    if result is not None and result.success and spec.path:
        px = [s.pos[0] for s in result.path]
        py = [s.pos[1] for s in result.path]
        ax.plot(px, py, color=colors["path"], linewidth=1.2, marker=".", markersize=2)
        ax.plot(*result.path[0].pos, marker="o", color=colors["start"])
        ax.plot(*result.path[-1].pos, marker="o", color=colors["goal"])

    ax.set_aspect("equal")
    ax.autoscale_view()
    ax.set_axis_off()

    return _save(fig, path)


def emit_svg(target, plan, path, spec=None, **kwargs):
    """render a grid (GridWorld + PlanSession) or a road (RoadModel + PlanResult)"""
    spec = spec or RenderSpec()
    if isinstance(target, GridWorld):
        return emit_grid_svg(target, plan, spec, path)

    return emit_road_svg(target, plan, spec, path, **kwargs)
