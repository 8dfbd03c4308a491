"""The field L = F(z1, z2)[h1, h2] with h_i^2 = f_i = z_i^3 + a z_i + b.

Elements are 4-coordinate records over the rational function field
K = F(z1, z2) in the basis (1, h1, h2, h1*h2).
"""

from __future__ import annotations

from functools import lru_cache

import sympy

from algebra.evaluate import evaluate
from algebra.polys import ratfunc_field, render_ratfunc
from algebra.tower import ConstTower
from curve.errors import ExceptionalPoint
from curve.group import INFINITY, POINT_CACHE_SIZE, CurvePoint, ec_add, ec_mul
from curve.params import CurveParams

Z1, Z2, H1, H2 = sympy.symbols("z1 z2 h1 h2")


class LTower:
    """Arithmetic context for L over a constant tower."""

    def __init__(
        self,
        params: CurveParams,
        tower: ConstTower | None = None,
        names: tuple[str, str] = ("z1", "z2"),
        hnames: tuple[str, str] = ("h1", "h2"),
    ):
        self.params = params
        self.tower = tower or params.tower
        self.names = names
        self.hnames = hnames
        self.symbols = tuple(sympy.Symbol(n) for n in names + hnames)
        self.K, self.kz1, self.kz2 = ratfunc_field(names, self.tower)
        self.f1 = params.rhs(self.kz1)
        self.f2 = params.rhs(self.kz2)
        self.combination_point = lru_cache(maxsize=POINT_CACHE_SIZE)(self._combination_point)

    def element(self, c0=0, c1=0, c2=0, c3=0) -> LElement:
        return LElement(self, tuple(self.K(c) for c in (c0, c1, c2, c3)))

    @property
    def zero(self) -> LElement:
        return self.element()

    @property
    def one(self) -> LElement:
        return self.element(1)

    @property
    def z1(self) -> LElement:
        return self.element(self.kz1)

    @property
    def z2(self) -> LElement:
        return self.element(self.kz2)

    @property
    def h1(self) -> LElement:
        return self.element(0, 1)

    @property
    def h2(self) -> LElement:
        return self.element(0, 0, 1)

    @property
    def P1(self) -> CurvePoint:
        return CurvePoint(self.z1, self.h1)

    @property
    def P2(self) -> CurvePoint:
        return CurvePoint(self.z2, self.h2)

    def from_expr(self, expr) -> LElement:
        """Element for a sympy expression in z1, z2, h1, h2 and constants."""
        s1, s2, t1, t2 = self.symbols
        values = {s1: self.z1, s2: self.z2, t1: self.h1, t2: self.h2}
        return evaluate(sympy.sympify(expr), values, self.one)

    def _combination_point(self, n: int, r: int) -> CurvePoint:
        """n*P1 + r*P2, cached per tower."""
        return ec_add(ec_mul(n, self.P1, self.params), ec_mul(r, self.P2, self.params), self.params)

    def x_combination(self, n: int, r: int) -> LElement:
        point = self.combination_point(n, r)
        if point.is_infinity:
            raise ExceptionalPoint((n, r), "point at infinity")
        if not point.x:
            raise ExceptionalPoint((n, r), "x-coordinate is zero")
        return point.x


def x_combination(n: int, r: int, tower: LTower) -> LElement:
    """x(n*P1 + r*P2) in L."""
    return tower.x_combination(n, r)


class LElement:
    __slots__ = ("tower", "coords")

    def __init__(self, tower: LTower, coords: tuple):
        self.tower = tower
        self.coords = coords

    # ── coercion ──

    def _coerce(self, other) -> LElement | None:
        if isinstance(other, LElement):
            if other.tower is not self.tower:
                raise ValueError("elements of different L towers")
            return other
        if isinstance(other, (int, sympy.Basic)) or getattr(other, "field", None) == self.tower.K:
            return self.tower.element(other)
        return None

    # ── ring operations ──

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return LElement(self.tower, tuple(a + b for a, b in zip(self.coords, other.coords)))

    __radd__ = __add__

    def __neg__(self) -> LElement:
        return LElement(self.tower, tuple(-c for c in self.coords))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return LElement(self.tower, tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        c0, c1, c2, c3 = self.coords
        d0, d1, d2, d3 = other.coords
        f1, f2 = self.tower.f1, self.tower.f2
        return LElement(
            self.tower,
            (
                c0 * d0 + f1 * c1 * d1 + f2 * c2 * d2 + f1 * f2 * c3 * d3,
                c0 * d1 + c1 * d0 + f2 * (c2 * d3 + c3 * d2),
                c0 * d2 + c2 * d0 + f1 * (c1 * d3 + c3 * d1),
                c0 * d3 + c3 * d0 + c1 * d2 + c2 * d1,
            ),
        )

    __rmul__ = __mul__

    def conj1(self) -> LElement:
        c0, c1, c2, c3 = self.coords
        return LElement(self.tower, (c0, -c1, c2, -c3))

    def conj2(self) -> LElement:
        c0, c1, c2, c3 = self.coords
        return LElement(self.tower, (c0, c1, -c2, -c3))

    def norm(self):
        """Norm down to K = F(z1, z2)."""
        half = self * self.conj2()
        return (half * half.conj1()).coords[0]

    def inverse(self) -> LElement:
        if not self:
            raise ZeroDivisionError("inverse of zero in L")
        half = self.conj2()
        v = self * half
        vbar = v.conj1()
        n = (v * vbar).coords[0]
        return (half * vbar).scale(1 / n)

    def scale(self, k) -> LElement:
        return LElement(self.tower, tuple(c * k for c in self.coords))

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

    def __pow__(self, exp: int) -> LElement:
        if exp < 0:
            return self.inverse() ** (-exp)
        result = self.tower.one
        base = self
        while exp:
            if exp & 1:
                result = result * base
            exp >>= 1
            if exp:
                base = base * base
        return result

    # ── comparisons ──

    def __bool__(self) -> bool:
        return any(bool(c) for c in self.coords)

    def __eq__(self, other) -> bool:
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return not (self - other)

    __hash__ = None

    def is_base(self) -> bool:
        """True when the element lies in K (no h1, h2 components)."""
        return not any(bool(c) for c in self.coords[1:])

    def base_value(self):
        if not self.is_base():
            raise ValueError("element has h-components")
        return self.coords[0]

    def render(self) -> str:
        return "(" + ", ".join(render_ratfunc(c) for c in self.coords) + ")"

    def __repr__(self) -> str:
        return f"LElement{self.render()}"


def combination_point(n: int, r: int, tower: LTower) -> CurvePoint:
    """n*P1 + r*P2; INFINITY when (n, r) = (0, 0)."""
    if (n, r) == (0, 0):
        return INFINITY
    return tower.combination_point(n, r)
