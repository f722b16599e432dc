"""Exact A_e-codimension and related invariants of parametrized curve germs."""
from .germ import IdealSpec, Options, Parametrization, ProblemInstance
from .germ_io import ParseError, parse_instance, render_instance, render_report
from .report import RunOutcome, run

__all__ = [
    "IdealSpec",
    "Options",
    "Parametrization",
    "ParseError",
    "ProblemInstance",
    "RunOutcome",
    "parse_instance",
    "render_instance",
    "render_report",
    "run",
]
__version__ = "0.1.0"
