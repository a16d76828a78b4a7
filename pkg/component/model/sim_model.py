from traitlets import Enum, Float, HasTraits, Int, TraitError, validate

from component import parameter as cp
from component.message import cm

__all__ = ["SimConfig"]


class SimConfig(HasTraits):
    """fixed step simulation settings"""

    dt = Float(0.1).tag(sync=True)
    max_steps = Int(10_000).tag(sync=True)
    updater = Enum(["bounce", "repeat"], default_value="bounce").tag(sync=True)
    replan_policy = Enum(["on-change", "every-step"], default_value="on-change").tag(sync=True)
    change_tolerance = Float(cp.change_tolerance).tag(sync=True)

    @validate("dt")
    def _positive_dt(self, proposal):
        if not proposal["value"] > 0:
            raise TraitError(cm.error.positive.format("dt", proposal["value"]))
        return proposal["value"]

    @validate("max_steps")
    def _positive_steps(self, proposal):
        if not proposal["value"] > 0:
            raise TraitError(cm.error.positive.format("max_steps", proposal["value"]))
        return proposal["value"]

    @validate("change_tolerance")
    def _tolerance(self, proposal):
        if not proposal["value"] >= 0:
            raise TraitError(cm.error.not_negative.format("change_tolerance", proposal["value"]))
        return proposal["value"]
