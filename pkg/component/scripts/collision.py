"""Moving circular obstacles and the analytic collision time."""

import json
import math
from dataclasses import dataclass
from pathlib import Path

from component.message import cm
from .errors import ValidationError

__all__ = ["MovingObstacle", "collision_time", "load_obstacles", "save_obstacles"]


@dataclass(frozen=True)
class MovingObstacle:
    """circle of radius at pos0 at time t0 moving with the constant velocity vel"""

    pos0: tuple
    vel: tuple = (0.0, 0.0)
    radius: float = 1.0
    t0: float = 0.0

    def __post_init__(self):
        if not self.radius > 0:
            raise ValidationError(cm.error.positive.format("radius", self.radius))
        object.__setattr__(self, "pos0", (float(self.pos0[0]), float(self.pos0[1])))
        object.__setattr__(self, "vel", (float(self.vel[0]), float(self.vel[1])))

    @property
    def speed(self):
        return math.hypot(*self.vel)

    def at(self, t):
        """position at time t"""
        dt = t - self.t0
        return (self.pos0[0] + self.vel[0] * dt, self.pos0[1] + self.vel[1] * dt)

    def extrapolate(self, t):
        """same obstacle with its snapshot moved to t"""
        return MovingObstacle(self.at(t), self.vel, self.radius, t)

    def to_dict(self):
        return {"pos": list(self.pos0), "vel": list(self.vel), "radius": self.radius, "t0": self.t0}

    @classmethod
    def from_dict(cls, data):
        return cls(
            tuple(data["pos"]),
            tuple(data.get("vel", (0, 0))),
            data["radius"],
            data.get("t0", 0.0),
        )


def collision_time(agent_pos, agent_vel, obstacle, r_a):
    """Smallest non-negative time at which the agent circle touches the obstacle.

    Both circles move with constant velocity from their positions at a common
    reference time (obstacle.pos0). The relative motion gives
    |dv|^2 t^2 + 2 (dv . dp) t + |dp|^2 - (r_a + r_o)^2 = 0.

    Args:
        agent_pos (tuple): agent center at the reference time
        agent_vel (tuple): agent velocity
        obstacle (MovingObstacle): obstacle snapshot at the reference time
        r_a (float): agent radius

    Returns:
        the collision time (0 when already overlapping) or None when the
        circles never touch
    """
    dpx, dpy = agent_pos[0] - obstacle.pos0[0], agent_pos[1] - obstacle.pos0[1]
    dvx, dvy = agent_vel[0] - obstacle.vel[0], agent_vel[1] - obstacle.vel[1]
    reach = r_a + obstacle.radius

    a = dvx * dvx + dvy * dvy
    b = 2 * (dvx * dpx + dvy * dpy)
    c = dpx * dpx + dpy * dpy - reach * reach

    if c <= 0:
        return 0.0
    if a == 0:
        return None

    disc = b * b - 4 * a * c
    # both roots share the sign of -b since their product c / a is positive
    if disc < 0 or b >= 0:
        return None

    return 2 * c / (-b + math.sqrt(disc))


def load_obstacles(path):
    try:
        data = json.loads(Path(path).read_text())
        return [MovingObstacle.from_dict(d) for d in data]
    except ValidationError:
        raise
    except (KeyError, TypeError, ValueError) as e:
        raise ValidationError(cm.error.obstacle_format.format(path, e))


def save_obstacles(obstacles, path):
    path = Path(path)
    path.write_text(json.dumps([o.to_dict() for o in obstacles], indent=2) + "\n")
    return path
