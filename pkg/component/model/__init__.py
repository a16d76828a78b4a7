from .inflation_model import *
from .kinodyn_model import *
from .sim_model import *
from .render_model import *
