"""Closed-form measure solutions of hypersonic-limit ramp flow."""

import json

from . import _core
from ._core import (
    ConvergenceError,
    DomainError,
    EntropyViolation,
    Error,
    InadmissibleError,
    SpecError,
)

__all__ = [
    "solve",
    "verify",
    "newton_busemann_pressure",
    "wall_weights",
    "classify_regime",
    "accrete_wall",
    "Error",
    "SpecError",
    "InadmissibleError",
    "EntropyViolation",
    "DomainError",
    "ConvergenceError",
]


def _text(doc):
    return doc if isinstance(doc, str) else json.dumps(doc)


def solve(spec, samples=0):
    """Solve a problem spec (dict or JSON text) and return the solution document."""
    return json.loads(_core.solve_json(_text(spec), samples))


def verify(spec=None, solution=None, levels=5):
    """Weak-form verification summary for a spec or a solution document."""
    if (spec is None) == (solution is None):
        raise ValueError("pass exactly one of spec, solution")
    if solution is not None:
        return json.loads(_core.verify_json(_text(solution), True, levels))
    return json.loads(_core.verify_json(_text(spec), False, levels))


def newton_busemann_pressure(ramp, x):
    """(pressure, admissible) on the wall at x."""
    return _core.newton_busemann_pressure(_text(ramp), x)


def wall_weights(ramp, x, E0=1.0):
    return _core.wall_weights(_text(ramp), x, E0)


def classify_regime(ramp, x_star, u, v):
    return _core.classify_regime(_text(ramp), x_star, u, v)


def accrete_wall(ramp, x_end, dx):
    return _core.accrete_wall(_text(ramp), x_end, dx)
