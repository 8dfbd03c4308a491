"""Polynomials and rational functions over a constant tower.

Multivariate polynomials are sympy ``Poly`` objects; rational functions are
elements of a sympy ``FracField``. The canonical term order everywhere is
graded lexicographic with the generators in the order given (z1 > z2 >
auxiliaries).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import sympy
from sympy import QQ, Poly
from sympy.parsing.sympy_parser import convert_xor, parse_expr, standard_transformations
from sympy.polys.fields import field

from algebra.tower import ConstTower

DEFAULT_FACTOR_DEGREE_BOUND = 64

_TRANSFORMS = standard_transformations + (convert_xor,)


class DegreeBoundExceeded(ValueError):
    """A univariate polynomial is too large for the factorizer."""

    def __init__(self, degree: int, bound: int):
        super().__init__(f"degree {degree} exceeds factorization bound {bound}")
        self.degree = degree
        self.bound = bound


@dataclass(frozen=True)
class FactorList:
    """p = unit * prod(f ** k for f, k in factors), factors monic and irreducible."""

    unit: sympy.Expr
    factors: tuple[tuple[Poly, int], ...]

    def __iter__(self):
        return iter(self.factors)

    def __len__(self) -> int:
        return len(self.factors)

    def expand(self) -> Poly:
        gens = self.factors[0][0].gens if self.factors else ()
        if not gens:
            raise ValueError("empty factorization has no generators")
        out = Poly(self.unit, *gens, domain=self.factors[0][0].domain)
        for factor, mult in self.factors:
            out = out * factor**mult
        return out


def as_poly(value, gens: Sequence[sympy.Symbol], tower: ConstTower | None = None) -> Poly:
    if isinstance(value, Poly) and tower is None and tuple(value.gens) == tuple(gens):
        return value
    expr = value.as_expr() if isinstance(value, Poly) else value
    if tower is not None:
        return Poly(expr, *gens, domain=tower.domain)
    return Poly(expr, *gens)


def poly_arith(p: Poly, q: Poly, op: str):
    """Exact add, sub, mul, or divmod by a univariate divisor."""
    if tuple(p.gens) != tuple(q.gens):
        raise ValueError(f"variable universes differ: {p.gens} vs {q.gens}")
    if op == "add":
        return p + q
    if op == "sub":
        return p - q
    if op == "mul":
        return p * q
    if op == "divmod":
        if q.is_zero:
            raise ZeroDivisionError("division by the zero polynomial")
        used = [g for g in q.gens if q.degree(g) > 0]
        if len(used) > 1:
            raise ValueError(f"divisor {q.as_expr()} is not univariate")
        return p.div(q)
    raise ValueError(f"unknown operation: {op}")


def _univariate(p: Poly, what: str) -> None:
    if len(p.gens) != 1:
        raise ValueError(f"{what} expects a univariate polynomial, got gens {p.gens}")


def _over_field(p: Poly) -> Poly:
    return p if p.domain.is_Field else p.to_field()


def upoly_gcd(p: Poly, q: Poly) -> Poly:
    """Monic gcd; gcd(0, 0) = 0."""
    _univariate(p, "upoly_gcd")
    _univariate(q, "upoly_gcd")
    g = _over_field(p).gcd(_over_field(q))
    return g if g.is_zero else g.monic()


def upoly_factor(p: Poly, degree_bound: int = DEFAULT_FACTOR_DEGREE_BOUND) -> FactorList:
    """Irreducible factorization over the coefficient domain of p."""
    _univariate(p, "upoly_factor")
    if p.is_zero:
        raise ValueError("cannot factor the zero polynomial")
    if p.degree() > degree_bound:
        raise DegreeBoundExceeded(p.degree(), degree_bound)
    p = _over_field(p)
    coeff, factors = p.factor_list()
    unit = sympy.sympify(coeff)
    monic = []
    for factor, mult in factors:
        lc = factor.LC()
        unit = unit * lc**mult
        monic.append((factor.monic(), mult))
    monic.sort(key=lambda fm: (fm[0].degree(), str(fm[0].as_expr())))
    return FactorList(unit, tuple(monic))


def squarefree_part(p: Poly) -> Poly:
    """Monic product of the distinct irreducible factors of p."""
    _univariate(p, "squarefree_part")
    if p.is_zero:
        raise ValueError("squarefree part of the zero polynomial")
    return _over_field(p).sqf_part().monic()


# ── Rational functions ─────────────────────────────────────────────────


def ratfunc_field(names: str | Sequence[str], tower: ConstTower | None = None):
    """(K, *generators) for the rational function field over the tower."""
    if not isinstance(names, str):
        names = ",".join(names)
    return field(names, tower.domain if tower is not None else QQ)


def normalize_ratfunc(f):
    """(numerator, denominator) with a monic denominator under grlex order."""
    lc = f.denom.LC
    return f.numer.quo_ground(lc), f.denom.quo_ground(lc)


# ── Canonical text ─────────────────────────────────────────────────────


def _coeff_text(coeff: sympy.Expr) -> tuple[bool, str]:
    negative = coeff.could_extract_minus_sign()
    magnitude = -coeff if negative else coeff
    text = sympy.sstr(magnitude)
    if isinstance(magnitude, sympy.Add) or (magnitude.is_Rational and not magnitude.is_Integer):
        text = f"({text})"
    return negative, text


def _monomial_text(monom: Iterable[int], names: Sequence[str]) -> str:
    parts = []
    for name, exp in zip(names, monom):
        if exp == 1:
            parts.append(name)
        elif exp > 1:
            parts.append(f"{name}^{exp}")
    return "*".join(parts)


def render(value, gens: Sequence[sympy.Symbol] | None = None) -> str:
    """Sparse text of a polynomial, terms in descending grlex order."""
    if isinstance(value, Poly) and gens is None:
        poly = value
    else:
        expr = value.as_expr() if isinstance(value, Poly) else sympy.sympify(value)
        if gens is None:
            gens = sorted(expr.free_symbols, key=lambda s: s.name)
        if not gens:
            return sympy.sstr(sympy.nsimplify(expr) if expr.is_Float else expr)
        poly = Poly(expr, *gens)
    if poly.is_zero:
        return "0"
    names = [g.name for g in poly.gens]
    pieces = []
    for index, (monom, coeff) in enumerate(poly.terms(order="grlex")):
        negative, ctext = _coeff_text(coeff)
        mono = _monomial_text(monom, names)
        if not mono:
            body = ctext
        elif ctext == "1":
            body = mono
        else:
            body = f"{ctext}*{mono}"
        if index == 0:
            pieces.append(f"-{body}" if negative else body)
        else:
            pieces.append(f" - {body}" if negative else f" + {body}")
    return "".join(pieces)


def render_ratfunc(f) -> str:
    numer, denom = normalize_ratfunc(f)
    top = render(numer.as_expr(), list(f.field.symbols))
    if denom == 1:
        return top
    return f"({top})/({render(denom.as_expr(), list(f.field.symbols))})"


def parse_poly(text: str, gens: Sequence[sympy.Symbol], tower: ConstTower | None = None) -> Poly:
    """Inverse of render for the given generators."""
    local = {g.name: g for g in gens}
    expr = parse_expr(text, local_dict=local, transformations=_TRANSFORMS)
    unknown = expr.free_symbols - set(gens)
    if unknown:
        raise ValueError(f"unknown symbols in polynomial text: {sorted(s.name for s in unknown)}")
    return as_poly(expr, gens, tower)
