from traitlets import HasTraits, Float, TraitError, validate

from component import parameter as cp
from component.message import cm
from component.scripts.errors import ValidationError

__all__ = ["InflationSchedule"]


class InflationSchedule(HasTraits):
    """Inflation factor of the anytime planners.

    eps_current starts at eps0 and only goes down by step during one planning
    session, it never drops below eps_final (itself never below 1).
    """

    eps0 = Float(cp.default_eps0)
    step = Float(cp.default_eps_step)
    eps_final = Float(cp.default_eps_final)
    eps_current = Float(None, allow_none=True)

    def __init__(self, **kwargs):
        super().__init__(**kwargs)

        if self.eps_current is None:
            self.eps_current = self.eps0

        self.check()

    @validate("eps0", "eps_final", "eps_current")
    def _at_least_one(self, proposal):
        value = proposal["value"]
        if value is not None and not value >= 1:
            raise TraitError(cm.error.eps_below_one.format(proposal["trait"].name, value))
        return value

    @validate("step")
    def _positive_step(self, proposal):
        if not proposal["value"] > 0:
            raise TraitError(cm.error.eps_step.format(proposal["value"]))
        return proposal["value"]

    def check(self):
        """cross field invariants"""
        if self.eps_final > self.eps0:
            raise ValidationError(cm.error.eps_final.format(self.eps_final, self.eps0))
        if self.eps_current > self.eps0:
            raise ValidationError(cm.error.eps_final.format(self.eps_current, self.eps0))

        return self

    @property
    def done(self):
        return self.eps_current <= self.eps_final

    def decrease(self):
        """lower eps_current by one step, clipped at eps_final, and return it"""
        value = max(self.eps_final, self.eps_current - self.step)
        self.eps_current = round(value, cp.eps_decimals)

        return self.eps_current

    def reset(self):
        """start a new session at eps0"""
        self.eps_current = self.eps0

        return self.eps_current

    def copy(self):
        return InflationSchedule(
            eps0=self.eps0,
            step=self.step,
            eps_final=self.eps_final,
            eps_current=self.eps_current,
        )
