"""Goal reasoning with promises: scenario simulation, temporal planning, reports."""

from ._pledge import (
    ConfigError,
    ParseError,
    PledgeError,
    compare,
    gantt,
    makespan,
    plan,
    report,
    run_scenario,
)

__all__ = [
    "ConfigError",
    "ParseError",
    "PledgeError",
    "compare",
    "gantt",
    "makespan",
    "plan",
    "report",
    "run_scenario",
]
