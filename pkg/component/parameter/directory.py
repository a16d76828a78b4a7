import os
from pathlib import Path

# this directory is the root directory of all the results produced by the module
# it can be moved elsewhere with the PLANNER_RESULT_DIR environment variable
module_dir = Path(os.environ.get("PLANNER_RESULT_DIR", Path.home() / "module_results"))

result_dir = module_dir / "path_planning"

# bundled grids, scenarios and roads
utils_dir = Path(__file__).parents[2] / "utils"
grid_dir = utils_dir / "grids"
road_dir = utils_dir / "roads"


def get_result_dir(*parts):
    """create (if needed) and return a sub folder of the result directory"""
    folder = result_dir.joinpath(*parts)
    folder.mkdir(parents=True, exist_ok=True)
    return folder
