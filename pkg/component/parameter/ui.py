# anchors of the g-value color map, low g is light
g_low_color = "#ffffcc"
g_high_color = "#bd0026"

legend = {
    "free": "#ffffff",
    "obstacle": "#303030",
    "start": "#1a9641",
    "goal": "#d7191c",
    "path": "#2c7bb6",
    "road": "#e0e0e0",
    "border": "#9ea7ad",
    "moving_obstacle": "#fdae61",
    "grid_line": "#bdbdbd",
}

# size of one grid cell in the svg renderings (inches)
cell_inches = 0.12
max_figure_inches = 12.0

# salt used by matplotlib to make svg ids reproducible
svg_hashsalt = "path-planning-module"

# csv float format, 6 significant digits
float_format = "%.6g"
