"""The function field F(x)[y]/(y^2 - f(x)) of the curve and its elements."""

from __future__ import annotations

from functools import lru_cache

import sympy

from algebra.evaluate import evaluate
from algebra.polys import ratfunc_field, render_ratfunc
from algebra.tower import ConstTower
from curve.errors import ExceptionalPoint
from curve.group import POINT_CACHE_SIZE, CurvePoint, ec_add, ec_mul
from curve.params import CurveParams


class CurveFunctionField:
    """F(t)[h] with h^2 = t^3 + a t + b, F a constant tower.

    The variable is named z1 (and h1) for the residue field of the
    valuation machinery and u (and v) when it hosts conic coefficients.
    """

    def __init__(self, params: CurveParams, tower: ConstTower | None = None, var: str = "z1", hname: str = "h1"):
        self.params = params
        self.tower = tower or params.tower
        self.var = var
        self.hname = hname
        self.K, self.t = ratfunc_field(var, self.tower)
        self.ring = self.K.ring
        self.f = params.rhs(self.t)
        self.f_poly = self.f.numer
        self.symbol = sympy.Symbol(var)
        self.hsymbol = sympy.Symbol(hname)
        self.pullback_point = lru_cache(maxsize=POINT_CACHE_SIZE)(self._pullback_point)

    @classmethod
    def with_sqrt_b(cls, params: CurveParams, var: str = "z1", hname: str = "h1") -> CurveFunctionField:
        tower, _ = params.sqrt_b()
        return cls(params, tower, var, hname)

    def element(self, c=0, d=0) -> CurveFunction:
        return CurveFunction(self, self.K(c), self.K(d))

    def constant(self, value) -> CurveFunction:
        return self.element(value)

    @property
    def zero(self) -> CurveFunction:
        return self.element()

    @property
    def one(self) -> CurveFunction:
        return self.element(1)

    @property
    def x(self) -> CurveFunction:
        return self.element(self.t)

    @property
    def y(self) -> CurveFunction:
        return self.element(0, 1)

    @property
    def point(self) -> CurvePoint:
        """The generic point (x, y)."""
        return CurvePoint(self.x, self.y)

    def extend(self, tower: ConstTower) -> CurveFunctionField:
        return CurveFunctionField(self.params, tower, self.var, self.hname)

    def convert(self, g: CurveFunction) -> CurveFunction:
        """Image of an element of a field over a smaller tower."""
        if g.field is self:
            return g
        return self.element(self.K.from_expr(g.c.as_expr()), self.K.from_expr(g.d.as_expr()))

    def from_expr(self, expr) -> CurveFunction:
        values = {self.symbol: self.x, self.hsymbol: self.y}
        return evaluate(sympy.sympify(expr), values, self.one)

    def sqrt_b_point(self) -> CurvePoint:
        """(0, sign * sqrt b); the tower must already contain sqrt b."""
        root = self.tower.sqrt(self.params.b)
        if root is None:
            raise ValueError(f"sqrt({self.params.b}) is not in {self.tower.describe()}")
        return CurvePoint(self.zero, self.constant(self.params.sqrt_b_sign * root))

    def _pullback_point(self, s: int, r: int) -> CurvePoint:
        return ec_add(
            ec_mul(s, self.point, self.params),
            ec_mul(r, self.sqrt_b_point(), self.params),
            self.params,
        )


def pullback_x(s: int, r: int, field: CurveFunctionField) -> CurveFunction:
    """x(s*(x, y) + r*(0, sqrt b)) as a function on the curve."""
    point = field.pullback_point(s, r)
    if point.is_infinity:
        raise ExceptionalPoint((s, r), "point at infinity")
    if not point.x:
        raise ExceptionalPoint((s, r), "x-coordinate is zero")
    return point.x


class CurveFunction:
    __slots__ = ("field", "c", "d")

    def __init__(self, field: CurveFunctionField, c, d):
        self.field = field
        self.c = c
        self.d = d

    def _coerce(self, other) -> CurveFunction | None:
        if isinstance(other, CurveFunction):
            if other.field is not self.field:
                raise ValueError("elements of different curve function fields")
            return other
        if isinstance(other, (int, sympy.Basic)) or getattr(other, "field", None) == self.field.K:
            return self.field.element(other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return CurveFunction(self.field, self.c + other.c, self.d + other.d)

    __radd__ = __add__

    def __neg__(self) -> CurveFunction:
        return CurveFunction(self.field, -self.c, -self.d)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return CurveFunction(self.field, self.c - other.c, self.d - other.d)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        c, d = self.c, self.d
        e, g = other.c, other.d
        return CurveFunction(self.field, c * e + d * g * self.field.f, c * g + d * e)

    __rmul__ = __mul__

    def conj(self) -> CurveFunction:
        return CurveFunction(self.field, self.c, -self.d)

    def norm(self):
        """c^2 - d^2 f, an element of F(x)."""
        return self.c * self.c - self.d * self.d * self.field.f

    def inverse(self) -> CurveFunction:
        if not self:
            raise ZeroDivisionError("inverse of zero function")
        n = self.norm()
        return CurveFunction(self.field, self.c / n, -self.d / n)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, exp: int) -> CurveFunction:
        if exp < 0:
            return self.inverse() ** (-exp)
        result = self.field.one
        base = self
        while exp:
            if exp & 1:
                result = result * base
            exp >>= 1
            if exp:
                base = base * base
        return result

    def __bool__(self) -> bool:
        return bool(self.c) or bool(self.d)

    def __eq__(self, other) -> bool:
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return not (self - other)

    __hash__ = None

    def is_constant(self) -> bool:
        return not self.d and self.c.numer.is_ground and self.c.denom.is_ground

    def degree(self) -> int:
        """Largest numerator/denominator degree among the two coordinates."""
        return max(p.degree() for p in (self.c.numer, self.c.denom, self.d.numer, self.d.denom))

    def as_expr(self) -> sympy.Expr:
        return self.c.as_expr() + self.d.as_expr() * self.field.hsymbol

    def render(self) -> str:
        c = render_ratfunc(self.c)
        if not self.d:
            return c
        return f"{c} + ({render_ratfunc(self.d)})*{self.field.hname}"

    def __repr__(self) -> str:
        return f"CurveFunction({self.render()})"
