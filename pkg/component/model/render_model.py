from traitlets import Bool, Dict, HasTraits, TraitError, Unicode, validate
from matplotlib.colors import is_color_like

from component import parameter as cp
from component.message import cm

__all__ = ["RenderSpec"]


class RenderSpec(HasTraits):
    """what the SVG renderings show and with which colors"""

    grid_lines = Bool(True).tag(sync=True)
    explored = Bool(True).tag(sync=True)
    path = Bool(True).tag(sync=True)
    low_color = Unicode(cp.g_low_color).tag(sync=True)
    high_color = Unicode(cp.g_high_color).tag(sync=True)
    colors = Dict(dict(cp.legend)).tag(sync=True)

    @validate("low_color", "high_color")
    def _color(self, proposal):
        if not is_color_like(proposal["value"]):
            raise TraitError(cm.error.color.format(proposal["value"]))
        return proposal["value"]

    @validate("colors")
    def _legend(self, proposal):
        colors = {**cp.legend, **proposal["value"]}
        for name, color in colors.items():
            if not is_color_like(color):
                raise TraitError(cm.error.color.format(color))
        return colors
