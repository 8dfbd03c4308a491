"""Odd-order witnesses proving a rational function is not a square."""

from __future__ import annotations

from dataclasses import dataclass

import sympy
from sympy import Poly

from algebra.polys import render

Z1, Z2 = sympy.symbols("z1 z2")


@dataclass(frozen=True)
class NonSquareWitness:
    """An irreducible polynomial at which the function has odd order."""

    place: Poly
    order: int

    def describe(self) -> str:
        return f"({render(self.place)}) order {self.order}"


@dataclass(frozen=True)
class NonSquareFailure:
    reason: str


def _fraction(d, gens: tuple[sympy.Symbol, ...]) -> tuple[Poly, Poly]:
    if hasattr(d, "numer") and hasattr(d, "denom"):
        num, den = d.numer.as_expr(), d.denom.as_expr()
    else:
        num, den = sympy.fraction(sympy.cancel(sympy.sympify(d)))
    return Poly(num, *gens), Poly(den, *gens)


def order_at(d, place: Poly, gens: tuple[sympy.Symbol, ...] = (Z1, Z2)) -> int:
    """Exponent of place in d, counted by repeated exact division."""
    num, den = _fraction(d, gens)
    place = Poly(place.as_expr(), *gens)
    return _multiplicity(num, place) - _multiplicity(den, place)


def _multiplicity(p: Poly, place: Poly) -> int:
    count = 0
    while True:
        quotient, remainder = p.div(place)
        if not remainder.is_zero:
            return count
        p = quotient
        count += 1


def certify_nonsquare(d, gens: tuple[sympy.Symbol, ...] = (Z1, Z2)) -> NonSquareWitness | NonSquareFailure:
    """Witness that d is not a square over any constant extension, if one exists."""
    num, den = _fraction(d, gens)
    if num.is_zero:
        raise ValueError("certify_nonsquare needs a nonzero function")
    candidates = []
    for sign, poly in ((1, num), (-1, den)):
        for chunk, mult in poly.sqf_list()[1]:
            if mult % 2:
                candidates.append((mult, sign, chunk))
    if not candidates:
        return NonSquareFailure("every irreducible factor has even order")
    candidates.sort(key=lambda c: (c[0], -c[1], render(c[2])))
    mult, sign, chunk = candidates[0]
    _, factors = chunk.factor_list()
    factors = sorted((f for f, _ in factors), key=lambda f: (f.total_degree(), render(f)))
    return NonSquareWitness(place=factors[0].monic() if factors[0].domain.is_Field else factors[0], order=sign * mult)
