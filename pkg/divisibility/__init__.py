"""Divisibility engine: the quadratic equations for (m,1)|(n,r), their refutation and certification."""

from divisibility.config import EngineConfig
from divisibility.engine import (
    Certified,
    DivInstance,
    EquationBundle,
    Inconclusive,
    PreconditionError,
    Refuted,
    build_equations,
    certify,
    decide,
    lift_to_L,
    refute,
)
from divisibility.model import ModelElement, WindowExceeded, decode, encode_pair, halve_in_lane, window_collisions
from divisibility.templates import SFormulaTemplate, define_divides, define_W, define_W_unit

__all__ = [
    "Certified",
    "DivInstance",
    "EngineConfig",
    "EquationBundle",
    "Inconclusive",
    "ModelElement",
    "PreconditionError",
    "Refuted",
    "SFormulaTemplate",
    "WindowExceeded",
    "build_equations",
    "certify",
    "decide",
    "decode",
    "define_W",
    "define_W_unit",
    "define_divides",
    "encode_pair",
    "halve_in_lane",
    "lift_to_L",
    "refute",
    "window_collisions",
]
