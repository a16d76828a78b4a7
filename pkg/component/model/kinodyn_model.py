import math

from traitlets import Any, Bool, Float, HasTraits, TraitError, validate

from component import parameter as cp
from component.message import cm
from component.scripts.errors import ValidationError

__all__ = ["KinodynParams"]


class KinodynParams(HasTraits):
    """Parameters of the road and (position, speed, time) planners.

    Angles are stored in radians.
    """

    ####################
    ##     lattice    ##
    ####################
    move_length = Float(cp.move_length).tag(sync=True)
    cell_length = Float(cp.cell_length).tag(sync=True)
    speed_range = Float(cp.speed_range).tag(sync=True)
    theta_max = Float(cp.theta_max).tag(sync=True)
    theta_step = Float(cp.theta_step).tag(sync=True)
    a_max = Float(cp.a_max).tag(sync=True)
    a_step = Float(cp.a_step).tag(sync=True)
    max_speed = Float(cp.max_speed).tag(sync=True)

    ####################
    ##      cost      ##
    ####################
    w_t = Float(cp.w_t).tag(sync=True)
    w_c = Float(cp.w_c).tag(sync=True)
    # callable (u_pos, v_pos, theta) -> float, None for moveLength + |theta|
    path_cost = Any(None).tag(sync=True)

    ####################
    ##   collisions   ##
    ####################
    dynamic = Bool(True).tag(sync=True)
    strict_free = Bool(False).tag(sync=True)
    strict_ratio = Bool(True).tag(sync=True)
    safe_step = Float(cp.safe_step).tag(sync=True)
    radius_growth = Float(0.0).tag(sync=True)

    def __init__(self, check=True, **kwargs):
        super().__init__(**kwargs)
        if check:
            self.check()

    @validate(
        "move_length",
        "cell_length",
        "speed_range",
        "theta_step",
        "a_step",
        "max_speed",
        "safe_step",
    )
    def _positive(self, proposal):
        if not proposal["value"] > 0:
            raise TraitError(cm.error.positive.format(proposal["trait"].name, proposal["value"]))
        return proposal["value"]

    @validate("theta_max", "a_max", "radius_growth")
    def _not_negative(self, proposal):
        if not proposal["value"] >= 0:
            name = proposal["trait"].name
            raise TraitError(cm.error.not_negative.format(name, proposal["value"]))
        return proposal["value"]

    @validate("w_t", "w_c")
    def _weight(self, proposal):
        if not 0 <= proposal["value"] <= 1:
            raise TraitError(cm.error.weight.format(proposal["trait"].name, proposal["value"]))
        return proposal["value"]

    @staticmethod
    def _steps(span, step):
        """number of steps of size step in span, None if it does not divide"""
        ratio = span / step
        n = round(ratio)
        return n if math.isclose(ratio, n, rel_tol=1e-9, abs_tol=1e-9) else None

    def check(self):
        """cross field invariants, raise ValidationError"""
        if not math.isclose(self.w_t + self.w_c, 1.0, abs_tol=cp.geometry_tol):
            raise ValidationError(cm.error.weights_sum.format(self.w_t, self.w_c))
        if self.strict_ratio and not self.move_length > cp.SQRT2 * self.cell_length:
            raise ValidationError(
                cm.error.move_ratio.format(self.move_length, self.cell_length)
            )
        if self._steps(2 * self.theta_max, self.theta_step) is None:
            raise ValidationError(
                cm.error.lattice.format(
                    "theta_step", math.degrees(self.theta_step), math.degrees(2 * self.theta_max)
                )
            )
        if self._steps(2 * self.a_max, self.a_step) is None:
            raise ValidationError(cm.error.lattice.format("a_step", self.a_step, 2 * self.a_max))

        return self

    def thetas(self):
        """deviation angles from -theta_max to theta_max, the middle one is exactly 0"""
        n = self._steps(2 * self.theta_max, self.theta_step)
        return [(i - n / 2) * self.theta_step for i in range(n + 1)]

    def accelerations(self):
        n = self._steps(2 * self.a_max, self.a_step)
        return [(i - n / 2) * self.a_step for i in range(n + 1)]

    def cost_of_path(self, u_pos, v_pos, theta):
        if self.path_cost is not None:
            return self.path_cost(u_pos, v_pos, theta)
        return self.move_length + abs(theta)

    def copy(self, **changes):
        names = [n for n in self.trait_names() if not n.startswith("_")]
        values = {name: getattr(self, name) for name in names}
        values.update(changes)
        return KinodynParams(**values)
