"""Curve parameters for E: y^2 = x^3 + a*x + b."""

from __future__ import annotations

from dataclasses import dataclass, field

import sympy

from algebra.tower import ConstTower


@dataclass(frozen=True)
class CurveParams:
    a: sympy.Expr = sympy.Integer(1)
    b: sympy.Expr = sympy.Integer(1)
    sqrt_b_sign: int = 1
    tower: ConstTower = field(default_factory=ConstTower)

    def __post_init__(self) -> None:
        object.__setattr__(self, "a", sympy.nsimplify(self.a))
        object.__setattr__(self, "b", sympy.nsimplify(self.b))
        if self.b == 0:
            raise ValueError("curve parameter b must be nonzero")
        if self.discriminant == 0:
            raise ValueError(f"singular curve: 4a^3 + 27b^2 = 0 for a={self.a}, b={self.b}")
        if self.sqrt_b_sign not in (1, -1):
            raise ValueError(f"sqrt_b_sign must be 1 or -1, got {self.sqrt_b_sign}")
        if not (self.tower.contains(self.a) and self.tower.contains(self.b)):
            raise ValueError(f"a and b must lie in {self.tower.describe()}")

    @classmethod
    def from_config(cls, curve_config: dict | None) -> CurveParams:
        curve_config = curve_config or {}
        return cls(
            a=sympy.sympify(curve_config.get("a", 1)),
            b=sympy.sympify(curve_config.get("b", 1)),
            sqrt_b_sign=int(curve_config.get("sqrt_b_sign", 1)),
        )

    @property
    def discriminant(self) -> sympy.Expr:
        return -16 * (4 * self.a**3 + 27 * self.b**2)

    def rhs(self, x):
        return x**3 + x * self.a + self.b

    def sqrt_b(self, tower: ConstTower | None = None) -> tuple[ConstTower, sympy.Expr]:
        """(tower, sign * sqrt(b)), extending the tower when b is not a square in it."""
        tower, root = (tower or self.tower).with_sqrt(self.b)
        return tower, self.sqrt_b_sign * root

    def to_dict(self) -> dict:
        return {"a": str(self.a), "b": str(self.b), "sqrt_b_sign": self.sqrt_b_sign}
