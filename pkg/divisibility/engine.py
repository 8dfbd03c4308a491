"""Deciding (m,1) | (n,r) through the quadratic equations

    x(k*n*P1 + k*r*P2) * y_k^2 + x(m*P1 + P2) * z_k^2 = 1,   k = 1, 2, ..., 2^alpha.

For n != m*r the equations are refuted at the place of L where x(m*P1 + P2)
vanishes. For n = m*r they are certified by solving each conic over the
function field of the point m*P1 + P2.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Any

import sympy

from algebra.evaluate import evaluate
from algebra.polys import DegreeBoundExceeded
from conic.solver import ConicConfig, ConicInstance, ConicSolution, NotFoundWithinBounds, solve_conic
from curve.errors import ExceptionalPoint
from curve.group import CurvePoint, ec_mul
from curve.ltower import LElement, LTower
from curve.params import CurveParams
from divisibility.config import EngineConfig
from divisors.function import CurveFunction, CurveFunctionField
from divisors.places import SquareClassReport, square_classes_distinct
from valuation.wm import NotApplicable, RefutationWitness, ValuationLab, XCombination

log = logging.getLogger(__name__)


class PreconditionError(ValueError):
    """The instance is outside the operation's domain (wrong side of n = m*r, or m in U)."""


@dataclass(frozen=True)
class DivInstance:
    m: int
    n: int
    r: int

    @property
    def s(self) -> int:
        return self.n - self.m * self.r

    @property
    def divides(self) -> bool:
        return self.s == 0

    def __str__(self) -> str:
        return f"({self.m},1)|({self.n},{self.r})"


@dataclass(frozen=True)
class EquationEntry:
    """One equation a*y^2 + b*z^2 = 1 with a = x(kn P1 + kr P2), b = x(m P1 + P2)."""

    k: int
    a_pair: tuple[int, int]
    b_pair: tuple[int, int]

    def a(self, tower: LTower) -> LElement:
        return tower.x_combination(*self.a_pair)

    def b(self, tower: LTower) -> LElement:
        return tower.x_combination(*self.b_pair)

    def symbolic(self) -> tuple[XCombination, XCombination]:
        return XCombination(*self.a_pair), XCombination(*self.b_pair)


@dataclass(frozen=True)
class EquationBundle:
    instance: DivInstance
    entries: tuple[EquationEntry, ...]

    def __len__(self) -> int:
        return len(self.entries)

    def materialize(self, tower: LTower) -> list[tuple[int, LElement, LElement]]:
        """Exact coefficients in L; costly for large multiples."""
        return [(e.k, e.a(tower), e.b(tower)) for e in self.entries]


def build_equations(cfg: EngineConfig, inst: DivInstance) -> EquationBundle:
    cfg.check_modulus(inst.m)
    entries = []
    for k in cfg.ks:
        pair = (k * inst.n, k * inst.r)
        if pair == (0, 0):
            raise ExceptionalPoint(pair, "point at infinity")
        entries.append(EquationEntry(k, pair, (inst.m, 1)))
    return EquationBundle(inst, tuple(entries))


# ── verdicts ──


@dataclass(frozen=True)
class Refuted:
    instance: DivInstance
    k: int
    witness: RefutationWitness
    square_classes: SquareClassReport | None = None

    def to_dict(self) -> dict:
        out: dict[str, Any] = {
            "verdict": "refuted",
            "instance": str(self.instance),
            "k": self.k,
            "witness": self.witness.to_dict(),
        }
        if self.square_classes is not None:
            out["square_classes"] = self.square_classes.to_dict()
        return out


@dataclass(frozen=True)
class Certified:
    instance: DivInstance
    solutions: tuple[tuple[int, ConicSolution], ...]
    field: CurveFunctionField

    def to_dict(self) -> dict:
        return {
            "verdict": "certified",
            "instance": str(self.instance),
            "solutions": [{"k": k, **sol.to_dict()} for k, sol in self.solutions],
        }


@dataclass(frozen=True)
class Inconclusive:
    instance: DivInstance
    reason: str
    detail: dict | None = None

    def to_dict(self) -> dict:
        out: dict[str, Any] = {"verdict": "inconclusive", "instance": str(self.instance), "reason": self.reason}
        if self.detail:
            out["detail"] = self.detail
        return out


Verdict = Refuted | Certified | Inconclusive


# ── refutation ──


def refute(
    cfg: EngineConfig,
    inst: DivInstance,
    lab: ValuationLab | None = None,
    *,
    record_square_classes: bool = True,
) -> Verdict:
    """Refuted with the first non-square residue, when n != m*r."""
    if inst.divides:
        raise PreconditionError(f"{inst}: n = m*r, nothing to refute")
    try:
        bundle = build_equations(cfg, inst)
    except ExceptionalPoint as e:
        return Inconclusive(inst, str(e))
    lab = lab or ValuationLab(CurveParams())
    first: tuple[int, RefutationWitness] | None = None
    residues: list[CurveFunction] = []
    for entry in bundle.entries:
        a, b = entry.symbolic()
        try:
            gate = lab.lemma_square_gate(a, b, inst.m, entry.k)
        except NotApplicable as e:
            log.debug("%s, k=%d: %s", inst, entry.k, e)
            continue
        except (ExceptionalPoint, DegreeBoundExceeded) as e:
            return Inconclusive(inst, str(e))
        residues.append(gate.residue)
        if isinstance(gate, RefutationWitness) and first is None:
            first = (entry.k, gate)
    if first is None:
        return Inconclusive(inst, "every residue is a square over the closure")
    report = None
    if record_square_classes and len(residues) > 1:
        try:
            report = square_classes_distinct(residues)
        except DegreeBoundExceeded as e:
            log.warning("square-class report skipped for %s: %s", inst, e)
    return Refuted(inst, first[0], first[1], report)


# ── certification ──


def conic_field(params: CurveParams) -> CurveFunctionField:
    """F(u)[v], v^2 = u^3 + a u + b: the function field of the point m*P1 + P2."""
    return CurveFunctionField(params, var="u", hname="v")


def certify(
    cfg: EngineConfig,
    inst: DivInstance,
    conic_cfg: ConicConfig | None = None,
    params: CurveParams | None = None,
) -> Verdict:
    """Certified when every equation has a verified solution with y*z*w != 0."""
    if not inst.divides:
        raise PreconditionError(f"{inst}: n != m*r, nothing to certify")
    cfg.check_modulus(inst.m)
    if (inst.n, inst.r) == (0, 0):
        return Inconclusive(inst, "(n, r) = (0, 0): the point is the identity")
    params = params or CurveParams()
    conic_cfg = conic_cfg or ConicConfig()
    fld = conic_field(params)
    Q = fld.point
    b = fld.x
    solutions = []
    for k in cfg.ks:
        point = ec_mul(k * inst.r, Q, params)
        if point.is_infinity:
            return Inconclusive(inst, f"{k * inst.r}*Q is the identity")
        conic = ConicInstance(point.x, b, context=f"{inst}, k={k}")
        sol = solve_conic(conic, conic_cfg)
        if isinstance(sol, NotFoundWithinBounds):
            if sol.obstructions:
                first = sol.obstructions[0]
                reason = f"no conic solution for k={k}: residue {first.residue} at {first.var} = {first.point}"
                return Inconclusive(inst, reason, sol.to_dict())
            return Inconclusive(inst, f"no conic solution for k={k} within bounds", sol.to_dict())
        solutions.append((k, sol))
    return Certified(inst, tuple(solutions), fld)


def lift_to_L(g: CurveFunction, point: CurvePoint, tower: LTower) -> LElement:
    """g(u, v) evaluated at (u, v) = point, a point of E(L)."""
    fld = g.field
    values = {fld.symbol: point.x, fld.hsymbol: point.y}
    return evaluate(sympy.sympify(g.as_expr()), values, tower.one)


def decide(cfg: EngineConfig, inst: DivInstance, lab: ValuationLab | None = None, conic_cfg=None, params=None) -> Verdict:
    """refute or certify, whichever side of n = m*r the instance is on."""
    if inst.divides:
        return certify(cfg, inst, conic_cfg, params)
    return refute(cfg, inst, lab)


__all__ = [
    "Certified",
    "DivInstance",
    "EquationBundle",
    "EquationEntry",
    "Inconclusive",
    "PreconditionError",
    "Refuted",
    "Verdict",
    "build_equations",
    "certify",
    "conic_field",
    "decide",
    "lift_to_L",
    "refute",
]
