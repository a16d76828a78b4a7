"""CSV and JSON writers of the planning metrics.

Column orders are fixed, floats are written with 6 significant digits.
"""

import json
import math
from pathlib import Path

import pandas as pd

from component import parameter as cp
from component.message import cm
from .errors import ValidationError

__all__ = [
    "PLAN_COLUMNS",
    "DYNAMIC_PLAN_COLUMNS",
    "STEP_COLUMNS",
    "PROFILE_COLUMNS",
    "SWEEP_COLUMNS",
    "CYCLE_COLUMNS",
    "to_csv",
    "plan_rows_csv",
    "steps_csv",
    "profile_csv",
    "sweep_csv",
    "plan_cycles_csv",
    "report_json",
    "sweep_row",
    "TIME_COLUMNS",
    "profile_rows",
]

PLAN_COLUMNS = [
    "step",
    "planner",
    "cycle",
    "eps",
    "eps_prime",
    "expansions",
    "inserts",
    "rhs_updates",
    "incons",
    "cost",
    "path_length",
    "from_scratch",
    "wall_time",
]
DYNAMIC_PLAN_COLUMNS = [
    "step",
    "planner",
    "cycle",
    "eps",
    "expansions",
    "inserts",
    "incons",
    "cost",
    "path_length",
    "wall_time",
]
STEP_COLUMNS = [
    "step",
    "time",
    "x",
    "y",
    "speed",
    "replans",
    "expansions",
    "wall_time",
    "cost",
    "eps",
]
PROFILE_COLUMNS = ["t", "speed", "x", "y"]
SWEEP_COLUMNS = ["move_length", "time_ms", "nodes", "expanded", "path_length", "cost"]
CYCLE_COLUMNS = ["eps", "time_ms", "open", "expanded", "incons", "cost"]

# columns that change between identical runs
TIME_COLUMNS = ["wall_time", "time_ms"]


def to_csv(rows, columns, path):
    """write rows (list of dict) with the given column order

    Returns:
        the written path
    """
    path = Path(path)
    df = pd.DataFrame(rows, columns=columns)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        df.to_csv(path, index=False, float_format=cp.float_format)
    except OSError as e:
        raise ValidationError(cm.error.write.format(path, e))

    return path


def plan_rows_csv(reports, path):
    """one row per planning cycle of every report, the repetition index first"""
    rows = [{"repetition": i, **row} for i, r in enumerate(reports) for row in r.plan_rows]
    columns = PLAN_COLUMNS
    if rows and "rhs_updates" not in rows[0]:
        columns = DYNAMIC_PLAN_COLUMNS
    return to_csv(rows, ["repetition", *columns], path)


def steps_csv(report, path):
    rows = [{c: getattr(s, c) for c in STEP_COLUMNS} for s in report.steps]
    return to_csv(rows, STEP_COLUMNS, path)


def profile_rows(states):
    return [{"t": s.t, "speed": s.speed, "x": s.pos[0], "y": s.pos[1]} for s in states]


def profile_csv(states, path):
    """speed profile of a timed path (KinodynState list)"""
    return to_csv(profile_rows(states), PROFILE_COLUMNS, path)


def sweep_row(move_length, result, wall_time):
    """One row of a moveLength sweep.

    A failed plan keeps its expansion count, the path columns are left empty.
    """
    return {
        "move_length": move_length,
        "time_ms": wall_time * 1000,
        "nodes": result.node_count if result.success else None,
        "expanded": result.expansions,
        "path_length": result.path_length if result.success else None,
        "cost": result.cost if result.success else None,
    }


def sweep_csv(rows, path):
    return to_csv(rows, SWEEP_COLUMNS, path)


def plan_cycles_csv(report, path):
    """per cycle rows of the planning calls of a dynamic run"""
    rows = [
        {
            "step": row["step"],
            "cycle": row["cycle"],
            "eps": row["eps"],
            "time_ms": row["wall_time"] * 1000,
            "open": row["inserts"],
            "expanded": row["expansions"],
            "incons": row["incons"],
            "cost": row["cost"],
        }
        for row in report.plan_rows
    ]
    return to_csv(rows, ["step", "cycle", *CYCLE_COLUMNS], path)


def _finite(value):
    if isinstance(value, float) and not math.isfinite(value):
        return None
    if isinstance(value, dict):
        return {k: _finite(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_finite(v) for v in value]
    return value


def report_json(report, path):
    """RunReport as JSON, infinite costs become null"""
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(_finite(report.to_dict()), indent=2))
    except OSError as e:
        raise ValidationError(cm.error.write.format(path, e))

    return path
