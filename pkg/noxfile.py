"""All the process that can be run using nox.

The nox run are build in isolated environment that will be stored in .nox. to force the venv update, remove the .nox/xxx folder.
"""

from pathlib import Path

import nox


@nox.session(reuse_venv=True)
def lint(session):
    """Apply the pre-commits."""
    session.install("pre-commit")
    session.run("pre-commit", "run", "--a", *session.posargs)


@nox.session(reuse_venv=True)
def test(session):
    """Run the test suite."""
    session.install("-r", "requirements.txt")
    session.run("pytest", "--color=yes", "tests", *session.posargs)


@nox.session(reuse_venv=True)
def cli(session):
    """Run the three planning commands on the bundled data."""
    session.install(".")

    out = Path(session.create_tmp()) / "results"
    problem = Path("utils") / "roads" / "crossing_problem.json"

    session.run("path-planner", "export-grids", "--out", str(out / "grids"))
    session.run(
        "path-planner",
        "plan-grid",
        "--grid",
        "small",
        "--planner",
        "adstar",
        "--metrics-out",
        str(out / "small_adstar.csv"),
    )
    session.run(
        "path-planner",
        "plan-road",
        "--start",
        "0,6.25",
        "--goal",
        "100,6.25",
        "--sweep-move-length",
        "0.4,0.5,0.8,1,2,5",
        "--metrics-out",
        str(out / "sweep.csv"),
    )
    session.run(
        "path-planner",
        "plan-dynamic",
        "--problem",
        str(problem),
        "--profile-out",
        str(out / "profile.csv"),
        "--cycles-out",
        str(out / "cycles.csv"),
    )
