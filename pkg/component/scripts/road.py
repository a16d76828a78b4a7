"""Road center lines and static obstacle maps used by the kinodynamic planner."""

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import pandas as pd

from component import parameter as cp
from component.message import cm
from .errors import ValidationError

__all__ = [
    "RoadModel",
    "StaticMap",
    "phi_at",
    "straight_road",
    "load_road",
    "save_road",
]


def _frozen(array):
    array = np.array(array, dtype=float)
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class RoadModel:
    """Center line samples (s, x, y, phi) with a half width and the agent radius."""

    s: np.ndarray
    xy: np.ndarray
    phi: np.ndarray
    half_width: float = cp.road_half_width
    agent_radius: float = cp.agent_radius

    def __post_init__(self):
        s, xy, phi = _frozen(self.s), _frozen(self.xy).reshape(-1, 2), _frozen(self.phi)
        if len(s) == 0:
            raise ValidationError(cm.error.road_empty)
        if not len(s) == len(xy) == len(phi):
            raise ValidationError(cm.error.road_columns.format(len(s), len(xy), len(phi)))
        if np.any(np.diff(s) <= 0):
            raise ValidationError(cm.error.road_s)
        if np.any(np.abs(np.diff(phi)) >= math.pi):
            raise ValidationError(cm.error.road_phi)
        if not self.half_width > 0 or not self.agent_radius > 0:
            raise ValidationError(cm.error.road_width.format(self.half_width, self.agent_radius))

        object.__setattr__(self, "s", s)
        object.__setattr__(self, "xy", xy)
        object.__setattr__(self, "phi", phi)

    def __len__(self):
        return len(self.s)

    def nearest(self, pos):
        """index of the closest sample, the lowest s wins ties"""
        d2 = ((self.xy - np.asarray(pos, dtype=float)) ** 2).sum(axis=1)
        return int(np.argmin(d2))

    def project(self, pos):
        """(distance to the center line, s of the projection)"""
        p = np.asarray(pos, dtype=float)
        if len(self.s) == 1:
            return float(np.hypot(*(p - self.xy[0]))), float(self.s[0])

        a, b = self.xy[:-1], self.xy[1:]
        ab = b - a
        t = np.clip(((p - a) * ab).sum(axis=1) / (ab**2).sum(axis=1), 0.0, 1.0)
        foot = a + t[:, None] * ab
        dist = np.hypot(*(foot - p).T)
        i = int(np.argmin(dist))

        return float(dist[i]), float(self.s[i] + t[i] * (self.s[i + 1] - self.s[i]))

    def contains(self, pos):
        return self.project(pos)[0] <= self.half_width + cp.geometry_tol


@dataclass(frozen=True, eq=False)
class StaticMap:
    """Occupancy matrix with its own resolution, anything outside is blocked.

    obstacles[i, j] covers x in [x0 + i * res, x0 + (i + 1) * res) and the
    same along y.
    """

    obstacles: np.ndarray
    resolution: float = 1.0
    origin: tuple = (0.0, 0.0)

    def __post_init__(self):
        obstacles = np.array(self.obstacles, dtype=bool)
        obstacles.setflags(write=False)
        if obstacles.ndim != 2:
            raise ValidationError(cm.error.grid_shape.format(obstacles.shape))
        if not self.resolution > 0:
            raise ValidationError(cm.error.positive.format("resolution", self.resolution))
        object.__setattr__(self, "obstacles", obstacles)
        object.__setattr__(self, "origin", tuple(float(v) for v in self.origin))

    @classmethod
    def empty(cls, size, resolution=1.0, origin=(0.0, 0.0)):
        width, height = size
        shape = (math.ceil(width / resolution), math.ceil(height / resolution))
        return cls(np.zeros(shape, dtype=bool), resolution, origin)

    def index_of(self, pos):
        return (
            math.floor((pos[0] - self.origin[0]) / self.resolution),
            math.floor((pos[1] - self.origin[1]) / self.resolution),
        )

    def blocked(self, pos):
        i, j = self.index_of(pos)
        nx, ny = self.obstacles.shape
        if not (0 <= i < nx and 0 <= j < ny):
            return True

        return bool(self.obstacles[i, j])

    def with_box(self, xmin, ymin, xmax, ymax):
        """copy with every cell touching the box blocked"""
        obstacles = self.obstacles.copy()
        i0, j0 = self.index_of((xmin, ymin))
        i1, j1 = self.index_of((xmax, ymax))
        nx, ny = obstacles.shape
        obstacles[max(i0, 0) : min(i1 + 1, nx), max(j0, 0) : min(j1 + 1, ny)] = True

        return StaticMap(obstacles, self.resolution, self.origin)


def phi_at(road, pos):
    """heading of the road at the sample closest to pos"""
    if road is None or len(road) == 0:
        raise ValidationError(cm.error.road_empty)

    return float(road.phi[road.nearest(pos)])


def straight_road(
    length=cp.road_length,
    half_width=cp.road_half_width,
    agent_radius=cp.agent_radius,
    spacing=cp.road_spacing,
    y=cp.road_center_y,
    x0=0.0,
):
    """rightward straight road starting at (x0, y)"""
    s = np.arange(0.0, length + spacing / 2, spacing)
    xy = np.column_stack([x0 + s, np.full_like(s, y)])

    return RoadModel(s, xy, np.zeros_like(s), half_width, agent_radius)


def load_road(path):
    """Read a road CSV (s,x,y,phi) and its sidecar JSON.

    The sidecar has the same name with a .json suffix and holds half_width and
    agent_radius, defaults are used when it is missing.

    Args:
        path (str|Path): the CSV file

    Returns:
        the RoadModel
    """
    path = Path(path)
    try:
        df = pd.read_csv(path, float_precision="round_trip")
        s, x, y, phi = (df[c].to_numpy(dtype=float) for c in ["s", "x", "y", "phi"])
    except (KeyError, ValueError, pd.errors.ParserError) as e:
        raise ValidationError(cm.error.road_format.format(path, e))

    sidecar = path.with_suffix(".json")
    meta = json.loads(sidecar.read_text()) if sidecar.is_file() else {}

    return RoadModel(
        s,
        np.column_stack([x, y]),
        phi,
        meta.get("half_width", cp.road_half_width),
        meta.get("agent_radius", cp.agent_radius),
    )


def save_road(road, path):
    """write the road geometry at full precision, load_road reads it back unchanged"""
    path = Path(path)
    df = pd.DataFrame({"s": road.s, "x": road.xy[:, 0], "y": road.xy[:, 1], "phi": road.phi})
    df.to_csv(path, index=False)
    meta = {"half_width": road.half_width, "agent_radius": road.agent_radius}
    path.with_suffix(".json").write_text(json.dumps(meta, indent=2) + "\n")

    return path
