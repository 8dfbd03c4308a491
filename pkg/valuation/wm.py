"""The valuation w_m on L at the place where x(m*P1 + P2) vanishes.

With P2' = m*P1 + P2 = (z2p, h2p) the field L is generated by z1, h1, z2p,
h2p, and z2p is a uniformizer at the chosen place (h2p takes the value
sign*sqrt(b) there, a unit because b != 0). Orders and residues are read off
truncated Laurent expansions in z2p whose coefficients live in the curve
function field F(z1)[h1].
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

from algebra.evaluate import evaluate
from curve.errors import ExceptionalPoint
from curve.group import CurvePoint, ec_add, ec_mul, ec_sub
from curve.ltower import LElement, LTower
from curve.params import CurveParams
from divisors.function import CurveFunction, CurveFunctionField
from divisors.places import NonSquareWitness, is_square_over_closure
from valuation.series import LaurentSeries, PrecisionLost, sqrt_series

log = logging.getLogger(__name__)

MAX_PRECISION = 256


class NotApplicable(ValueError):
    """The valuation pattern v(a) = 0, v(b) odd does not hold."""


@dataclass(frozen=True)
class XCombination:
    """x(n*P1 + r*P2) ** power, kept symbolic so w_m can work in shifted generators."""

    n: int
    r: int
    power: int = 1

    def __pow__(self, exp: int) -> XCombination:
        return XCombination(self.n, self.r, self.power * exp)


@dataclass(frozen=True)
class ReexpressedL:
    """An element of L written over z1, h1, z2p, h2p."""

    m: int
    element: LElement

    def substitute_back(self, tower: LTower) -> LElement:
        """Replace z2p, h2p by the coordinates of m*P1 + P2 in the original tower."""
        shifted = ec_add(ec_mul(self.m, tower.P1, tower.params), tower.P2, tower.params)
        return _substitute(self.element, tower, shifted)


@dataclass(frozen=True)
class ValuationOutcome:
    order: int
    unit_residue: CurveFunction

    def to_dict(self) -> dict:
        return {"order": self.order, "unit_residue": self.unit_residue.render()}


@dataclass(frozen=True)
class RefutationWitness:
    """The residue of a is a non-square, so a*y^2 + b*z^2 = 1 has no solution in L."""

    m: int
    k: int
    order_a: int
    order_b: int
    residue: CurveFunction
    witness: NonSquareWitness

    def to_dict(self) -> dict:
        return {
            "m": self.m,
            "k": self.k,
            "orders": {"a": self.order_a, "b": self.order_b},
            "residue": self.residue.render(),
            "nonsquare": self.witness.to_dict(),
        }


@dataclass(frozen=True)
class Possible:
    """The residue is a square; the gate does not refute."""

    residue: CurveFunction


class ValuationLab:
    """Shared fields for one curve: L, the shifted tower L', and the residue field."""

    def __init__(self, params: CurveParams, sign: int | None = None):
        if sign is not None and sign != params.sqrt_b_sign:
            params = CurveParams(params.a, params.b, sign, params.tower)
        self.params = params
        tower, self.sqrt_b = params.sqrt_b()
        self.L = LTower(params, tower)
        self.shifted = LTower(params, tower, names=("z1", "z2p"), hnames=("h1", "h2p"))
        self.residue = CurveFunctionField(params, tower)

    # ── generator change ──

    def change_generators(self, m: int, f: LElement) -> ReexpressedL:
        """Rewrite f with z2 = x(P2' - m*P1) and h2 = y(P2' - m*P1)."""
        Lp = self.shifted
        back = ec_sub(Lp.P2, ec_mul(m, Lp.P1, self.params), self.params)
        if back.is_infinity:
            raise ExceptionalPoint((-m, 1), "point at infinity")
        return ReexpressedL(m, _substitute(f, Lp, back))

    # ── expansions ──

    def _h2p(self, precision: int) -> LaurentSeries:
        fld = self.residue
        zero = fld.zero
        c = [fld.constant(self.params.b), fld.constant(self.params.a), zero, fld.one]
        return sqrt_series(c, fld.constant(self.sqrt_b), zero, precision)

    def _t(self, precision: int) -> LaurentSeries:
        return LaurentSeries.variable(self.residue.zero, self.residue.one, precision)

    def _coordinate_series(self, c, precision: int) -> LaurentSeries:
        """Expansion in z2p of an element of F(z1, z2p)."""
        num = self._poly_series(c.numer, precision)
        den = self._poly_series(c.denom, precision)
        return num / den

    def _poly_series(self, p, precision: int) -> LaurentSeries:
        fld = self.residue
        ring = fld.ring
        (z,) = ring.gens
        by_power: dict[int, object] = {}
        for (i, j), coeff in p.terms():
            by_power[j] = by_power.get(j, ring.zero) + ring.ground_new(coeff) * z**i
        low = min(by_power)
        top = low + precision
        coeffs = [fld.element(fld.K(by_power.get(j, ring.zero))) for j in range(low, top)]
        return LaurentSeries(fld.zero, low, coeffs)

    def _element_series(self, g: LElement, precision: int) -> LaurentSeries:
        h1 = self.residue.y
        h2p = self._h2p(precision)
        total = None
        for c, unit in zip(g.coords, (None, h1, h2p, h2p * h1)):
            if not c:
                continue
            term = self._coordinate_series(c, precision)
            if unit is not None:
                term = term * unit
            total = term if total is None else total + term
        if total is None:
            raise ValueError("w_m of zero")
        return total

    def _combination_series(self, m: int, n: int, r: int, precision: int) -> LaurentSeries:
        s = n - m * r
        fld = self.residue
        zero = fld.zero
        exact = fld.pullback_point(s, 0)
        moving = CurvePoint(self._t(precision), self._h2p(precision))
        moving = ec_mul(r, moving, self.params)
        if exact.is_infinity:
            total = moving
        else:
            fixed = CurvePoint(
                LaurentSeries.constant(exact.x, zero, precision),
                LaurentSeries.constant(exact.y, zero, precision),
            )
            total = ec_add(fixed, moving, self.params) if not moving.is_infinity else fixed
        if total.is_infinity:
            raise ExceptionalPoint((n, r), "point at infinity")
        return total.x

    # ── the valuation ──

    def w_m(self, m: int, f, precision: int = 4) -> ValuationOutcome:
        """Order at the place z2p = 0, h2p = sign*sqrt(b), and the unit residue."""
        if isinstance(f, LElement):
            if not f:
                raise ValueError("w_m of zero")
            f = self.change_generators(m, f)
        while precision <= MAX_PRECISION:
            try:
                series = self._series_of(m, f, precision)
                leading = series.leading()
            except PrecisionLost:
                precision *= 2
                log.debug("w_%d: deepening expansion to %d terms", m, precision)
                continue
            order = series.val
            if isinstance(f, XCombination) and f.power != 1:
                return ValuationOutcome(order * f.power, leading**f.power)
            return ValuationOutcome(order, leading)
        raise RuntimeError(f"w_{m}: no nonzero coefficient within {MAX_PRECISION} terms")

    def _series_of(self, m: int, f, precision: int) -> LaurentSeries:
        if isinstance(f, XCombination):
            if (f.n, f.r) == (0, 0):
                raise ExceptionalPoint((0, 0), "point at infinity")
            return self._combination_series(m, f.n, f.r, precision)
        if isinstance(f, ReexpressedL):
            if f.m != m:
                raise ValueError(f"element is written for m={f.m}, not m={m}")
            return self._element_series(f.element, precision)
        raise TypeError(f"w_m cannot handle {type(f).__name__}")

    def lemma_square_gate(self, a, b, m: int, k: int = 1) -> Possible | RefutationWitness:
        """Refute a*y^2 + b*z^2 = 1 when v(a) = 0, v(b) is odd and the residue of a is a non-square."""
        va = self.w_m(m, a)
        vb = self.w_m(m, b)
        if va.order != 0 or vb.order % 2 == 0:
            raise NotApplicable(f"valuation pattern ({va.order}, {vb.order}) is not (0, odd)")
        verdict = is_square_over_closure(va.unit_residue)
        if isinstance(verdict, NonSquareWitness):
            return RefutationWitness(m, k, va.order, vb.order, va.unit_residue, verdict)
        return Possible(va.unit_residue)


def _substitute(f: LElement, target: LTower, point: CurvePoint) -> LElement:
    """f with (z2, h2) replaced by the coordinates of point, computed in target."""
    source = f.tower
    s1, s2 = source.K.symbols
    values = {s1: target.z1, s2: point.x}
    coords = [evaluate(c.as_expr(), values, target.one) for c in f.coords]
    h1 = target.h1
    h2 = point.y
    return coords[0] + coords[1] * h1 + coords[2] * h2 + coords[3] * h1 * h2


def change_generators(m: int, f: LElement, lab: ValuationLab | None = None) -> ReexpressedL:
    lab = lab or ValuationLab(f.tower.params)
    return lab.change_generators(m, f)


def w_m(m: int, f, lab: ValuationLab) -> ValuationOutcome:
    return lab.w_m(m, f)


def lemma_square_gate(a, b, m: int, lab: ValuationLab, k: int = 1) -> Possible | RefutationWitness:
    return lab.lemma_square_gate(a, b, m, k)


__all__ = [
    "NotApplicable",
    "Possible",
    "ReexpressedL",
    "RefutationWitness",
    "ValuationLab",
    "ValuationOutcome",
    "XCombination",
    "change_generators",
    "lemma_square_gate",
    "w_m",
]
