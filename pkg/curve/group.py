"""Group law on E over any field whose elements support + - * / and truthiness.

Coordinates may be sympy rationals, FracField elements, LElements,
CurveFunctions or truncated series; the formulas only need field operations
and a zero test (``not value``).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

from curve.params import CurveParams


@dataclass(frozen=True, eq=False)
class CurvePoint:
    x: Any = None
    y: Any = None

    @property
    def is_infinity(self) -> bool:
        return self.x is None

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CurvePoint):
            return NotImplemented
        if self.is_infinity or other.is_infinity:
            return self.is_infinity and other.is_infinity
        return not (self.x - other.x) and not (self.y - other.y)

    __hash__ = None

    def __repr__(self) -> str:
        if self.is_infinity:
            return "CurvePoint(O)"
        return f"CurvePoint({self.x}, {self.y})"


INFINITY = CurvePoint()

# multiples kept per tower or function field
POINT_CACHE_SIZE = 512


def on_curve(P: CurvePoint, params: CurveParams) -> bool:
    if P.is_infinity:
        return True
    return not (P.y * P.y - params.rhs(P.x))


def ec_neg(P: CurvePoint) -> CurvePoint:
    if P.is_infinity:
        return P
    return CurvePoint(P.x, -P.y)


def _divide(num, den):
    if not den:
        raise ZeroDivisionError("vertical line")
    return num / den


def _chord(P: CurvePoint, Q: CurvePoint) -> CurvePoint:
    slope = _divide(Q.y - P.y, Q.x - P.x)
    x3 = slope * slope - P.x - Q.x
    return CurvePoint(x3, slope * (P.x - x3) - P.y)


def ec_double(P: CurvePoint, params: CurveParams) -> CurvePoint:
    if P.is_infinity:
        return P
    try:
        slope = _divide(P.x * P.x * 3 + params.a, P.y * 2)
    except ZeroDivisionError:
        # 2-torsion
        return INFINITY
    x3 = slope * slope - P.x * 2
    return CurvePoint(x3, slope * (P.x - x3) - P.y)


def ec_add(P: CurvePoint, Q: CurvePoint, params: CurveParams) -> CurvePoint:
    if P.is_infinity:
        return Q
    if Q.is_infinity:
        return P
    try:
        return _chord(P, Q)
    except ZeroDivisionError:
        pass
    if not (P.y + Q.y):
        return INFINITY
    return ec_double(P, params)


def ec_sub(P: CurvePoint, Q: CurvePoint, params: CurveParams) -> CurvePoint:
    return ec_add(P, ec_neg(Q), params)


def ec_mul(n: int, P: CurvePoint, params: CurveParams) -> CurvePoint:
    """n * P by double-and-add."""
    if n < 0:
        return ec_mul(-n, ec_neg(P), params)
    result = INFINITY
    addend = P
    while n:
        if n & 1:
            result = ec_add(result, addend, params)
        n >>= 1
        if n:
            addend = ec_double(addend, params)
    return result
