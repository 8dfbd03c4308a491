"""Conic solver: nontrivial zeros of a*y^2 + b*z^2 = w^2 over curve function fields."""

from conic.solver import (
    ConicConfig,
    ConicInstance,
    ConicSolution,
    NotFoundWithinBounds,
    conic_over,
    field_sqrt,
    ratfunc_sqrt,
    solve_conic,
    verify_solution,
)

__all__ = [
    "ConicConfig",
    "ConicInstance",
    "ConicSolution",
    "NotFoundWithinBounds",
    "conic_over",
    "field_sqrt",
    "ratfunc_sqrt",
    "solve_conic",
    "verify_solution",
]
