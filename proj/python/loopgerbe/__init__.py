"""Loop-group central extensions, lifting bundle gerbes and calorons."""

import json

from ._core import (
    REPORT_VERSION,
    ConventionError,
    DomainError,
    Error,
    UsageError,
    adjoint,
    basis,
    bracket,
    equation_registry,
    eval_alpha,
    eval_R,
    exp,
    gomi_cocycle_Z,
    inner,
    list_checks,
    omega3,
    omega3_volume,
    run_check,
    splitmix64,
)
from ._core import run as _run

__all__ = [
    "REPORT_VERSION",
    "ConventionError",
    "DomainError",
    "Error",
    "UsageError",
    "adjoint",
    "basis",
    "bracket",
    "equation_registry",
    "eval_alpha",
    "eval_R",
    "exp",
    "gomi_cocycle_Z",
    "inner",
    "list_checks",
    "omega3",
    "omega3_volume",
    "run",
    "run_check",
    "splitmix64",
]


def run(config=None):
    """Run the verification suites; returns the report as a dict."""
    text = json.dumps(config) if config else ""
    return json.loads(_run(text))
