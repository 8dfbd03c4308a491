"""Constant fields: towers of quadratic extensions of QQ grown on demand.

Every adjoined square root carries a certificate that it was missing from
the tower below, so a result computed over an extended tower can be replayed
by anyone holding the same adjunction trail.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations

import sympy
from sympy import QQ, Poly
from sympy.polys.polyerrors import CoercionFailed

log = logging.getLogger(__name__)

_X = sympy.Symbol("X")


@dataclass(frozen=True)
class Adjunction:
    """One adjoined square root and the proof that it was needed."""

    radicand: sympy.Expr
    certificate: str

    @property
    def generator(self) -> sympy.Expr:
        return sympy.sqrt(self.radicand)

    def to_dict(self) -> dict:
        return {"radicand": str(self.radicand), "certificate": self.certificate}


@dataclass(frozen=True)
class ConstTower:
    """QQ(sqrt(r1), sqrt(r2), ...) where each r_i is a non-square below it."""

    adjunctions: tuple[Adjunction, ...] = ()

    @property
    def generators(self) -> tuple[sympy.Expr, ...]:
        return tuple(adj.generator for adj in self.adjunctions)

    @property
    def degree(self) -> int:
        return 2 ** len(self.adjunctions)

    @cached_property
    def domain(self):
        if not self.adjunctions:
            return QQ
        return QQ.algebraic_field(*self.generators)

    def basis(self) -> list[sympy.Expr]:
        """Products of generator subsets, in the order 1, g1, g2, g1*g2, ..."""
        gens = self.generators
        out = [sympy.Integer(1)]
        for size in range(1, len(gens) + 1):
            for subset in combinations(gens, size):
                out.append(sympy.Mul(*subset))
        return out

    def contains(self, value) -> bool:
        try:
            self.domain.from_sympy(sympy.sympify(value))
        except CoercionFailed:
            return False
        return True

    def convert(self, value):
        """Domain element for a sympy number; ValueError when it lies outside."""
        try:
            return self.domain.from_sympy(sympy.sympify(value))
        except CoercionFailed as e:
            raise ValueError(f"{value} is not an element of {self.describe()}") from e

    def to_expr(self, element) -> sympy.Expr:
        return self.domain.to_sympy(element)

    def sqrt(self, value) -> sympy.Expr | None:
        """A square root of value inside the tower, or None if there is none."""
        value = sympy.sympify(value)
        if value == 0:
            return sympy.Integer(0)
        if self.domain == QQ:
            if not value.is_Rational:
                raise ValueError(f"{value} is not rational")
            root = QQ.exsqrt(QQ.from_sympy(value))
            return None if root is None else QQ.to_sympy(root)

        candidate = sympy.radsimp(sympy.sqrtdenest(sympy.sqrt(value)))
        if self.contains(candidate):
            return candidate
        poly = Poly(_X**2 - value, _X, domain=self.domain)
        for factor, _ in poly.factor_list()[1]:
            if factor.degree() == 1:
                lead, tail = factor.all_coeffs()
                return sympy.radsimp(-tail / lead)
        return None

    def adjoin_sqrt(self, value) -> ConstTower:
        """The tower with sqrt(value) adjoined; self when it is already there."""
        value = _squarefree_radicand(sympy.sympify(value))
        if self.sqrt(value) is not None:
            return self
        certificate = f"X**2 - ({value}) has no root over {self.describe()}"
        log.debug("adjoining sqrt(%s)", value)
        return ConstTower(self.adjunctions + (Adjunction(value, certificate),))

    def with_sqrt(self, value) -> tuple[ConstTower, sympy.Expr]:
        """(tower, root) with the root of value available in the tower."""
        root = self.sqrt(value)
        if root is not None:
            return self, root
        tower = self.adjoin_sqrt(value)
        root = tower.sqrt(value)
        if root is None:
            raise RuntimeError(f"sqrt({value}) missing after adjunction")
        return tower, root

    def coordinates(self, value) -> list[sympy.Rational]:
        """Rational coordinates of value over basis()."""
        value = sympy.sympify(value)
        if self.domain == QQ:
            return [sympy.Rational(value)]
        dom = self.domain
        columns = [dom.from_sympy(b).to_list() for b in self.basis()]
        target = dom.from_sympy(value).to_list()
        size = self.degree
        columns = [[sympy.Integer(0)] * (size - len(c)) + [dom.dom.to_sympy(x) for x in c] for c in columns]
        target = [sympy.Integer(0)] * (size - len(target)) + [dom.dom.to_sympy(x) for x in target]
        matrix = sympy.Matrix(size, size, lambda i, j: columns[j][i])
        return list(matrix.LUsolve(sympy.Matrix(target)))

    def describe(self) -> str:
        if not self.adjunctions:
            return "QQ"
        return "QQ(" + ", ".join(f"sqrt({adj.radicand})" for adj in self.adjunctions) + ")"

    def to_dict(self) -> dict:
        return {"field": self.describe(), "adjunctions": [adj.to_dict() for adj in self.adjunctions]}


def _squarefree_radicand(value: sympy.Expr) -> sympy.Expr:
    """Strip square factors from a rational radicand; others pass through."""
    if not value.is_Rational or value == 0:
        return value
    num = int(value.p) * int(value.q)
    sign = -1 if num < 0 else 1
    kernel = 1
    for prime, exp in sympy.factorint(abs(num)).items():
        if exp % 2:
            kernel *= prime
    return sympy.Integer(sign * kernel)
