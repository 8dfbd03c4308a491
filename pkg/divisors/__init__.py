"""Functions on the curve, their divisors, and square-class decisions."""

from divisors.function import CurveFunction, CurveFunctionField, pullback_x
from divisors.places import (
    INFINITY_PLACE,
    SQUARE,
    Divisor,
    NonSquareWitness,
    Place,
    Square,
    SquareClassReport,
    coprime_base,
    divisor_of,
    is_square_over_closure,
    square_classes_distinct,
)

__all__ = [
    "INFINITY_PLACE",
    "SQUARE",
    "CurveFunction",
    "CurveFunctionField",
    "Divisor",
    "NonSquareWitness",
    "Place",
    "Square",
    "SquareClassReport",
    "coprime_base",
    "divisor_of",
    "is_square_over_closure",
    "pullback_x",
    "square_classes_distinct",
]
