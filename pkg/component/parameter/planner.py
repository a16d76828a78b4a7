import math

# exact constants of the 8-connected grid
SQRT2 = math.sqrt(2)
STRAIGHT_COST = 1.0
DIAGONAL_COST = SQRT2

# name of the planners, value is (direction, incremental, anytime)
planners = {
    "dijkstra": ["forward", False, False],
    "astar": ["forward", False, False],
    "astar-back": ["backward", False, False],
    "dstar-lite": ["backward", True, False],
    "dstar-lite-opt": ["backward", True, False],
    "arastar": ["backward", False, True],
    "adstar": ["backward", True, True],
    "adstar-opt": ["backward", True, True],
}

# inflation schedule used in the large maze experiments
default_eps0 = 4.5
default_eps_step = 0.08
default_eps_final = 1.0

# number of decimals kept when decreasing epsilon, avoids 1.0000000000000004
eps_decimals = 10

# bundled grids, value is (width, height, density %, goals, seed, changes, cells per change)
bundled_grids = {
    "small": None,  # hand laid, read from utils/grids/small.txt
    "complex": [26, 15, 21.54, 2, 7, 3, 4],
    "large": [55, 99, 37.25, 4, 11, 7, 12],
}

# maximum number of layouts drawn before giving up in gen_maze
max_generation_retries = 200

# maze generation is only sensible below this obstacle density
max_density = 60.0
