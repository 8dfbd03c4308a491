"""Exact algebra: quadratic constant towers, polynomials, rational functions."""

from algebra.nonsquare import NonSquareFailure, NonSquareWitness, certify_nonsquare
from algebra.polys import (
    DegreeBoundExceeded,
    FactorList,
    normalize_ratfunc,
    parse_poly,
    poly_arith,
    ratfunc_field,
    render,
    render_ratfunc,
    squarefree_part,
    upoly_factor,
    upoly_gcd,
)
from algebra.tower import Adjunction, ConstTower

__all__ = [
    "Adjunction",
    "ConstTower",
    "DegreeBoundExceeded",
    "FactorList",
    "NonSquareFailure",
    "NonSquareWitness",
    "certify_nonsquare",
    "normalize_ratfunc",
    "parse_poly",
    "poly_arith",
    "ratfunc_field",
    "render",
    "render_ratfunc",
    "squarefree_part",
    "upoly_factor",
    "upoly_gcd",
]
