"""The curve E: y^2 = x^3 + a x + b, its group law, and the field L."""

from curve.errors import ExceptionalPoint
from curve.group import INFINITY, CurvePoint, ec_add, ec_double, ec_mul, ec_neg, ec_sub, on_curve
from curve.ltower import LElement, LTower, combination_point, x_combination
from curve.params import CurveParams

__all__ = [
    "INFINITY",
    "CurveParams",
    "CurvePoint",
    "ExceptionalPoint",
    "LElement",
    "LTower",
    "combination_point",
    "ec_add",
    "ec_double",
    "ec_mul",
    "ec_neg",
    "ec_sub",
    "on_curve",
    "x_combination",
]
