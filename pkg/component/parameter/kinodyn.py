import math

# road experiment defaults
move_length = 1.0  # m
cell_length = 0.5  # m
speed_range = 0.5  # m/s
theta_max = math.radians(30)
theta_step = math.radians(15)
a_max = 2.0  # m/s²
a_step = 0.5  # m/s²
max_speed = 17.0  # m/s
w_t = 0.5
w_c = 0.5

# on real roads a move of this length cannot jump over a static obstacle
safe_step = 1.0  # m

# synthetic straight road standing in for the proprietary road data
road_length = 110.0  # m
road_half_width = 6.0  # m
road_center_y = 6.25  # m
road_spacing = 1.0  # m
agent_radius = 1.0  # m

# tolerances of the geometric checks
geometry_tol = 1e-9

# change detection of the dynamic simulation
change_tolerance = 1e-6  # m
