from .directory import *
from .planner import *
from .kinodyn import *
from .ui import *
