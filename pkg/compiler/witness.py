"""Replay an integer witness through every stage down to the polynomial systems.

The integer values fix the source pairs; the remaining pairs come from the
bounded pair search. Every point of the point formula is then an integer
combination a*P1 + b*P2, which gives its coordinates in L; slopes follow the
addition case that applies, conic solutions from certification fill the
quadratic equations, and auxiliary variables are evaluated in definition
order. The assignment is checked exactly against each system.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import sympy

from algebra.evaluate import evaluate
from algebra.tower import ConstTower
from compiler.lower import H1, H2, L_SORT, Z1, Z2, PolySystem
from compiler.oracle import solve_sformula
from compiler.points import BASE, HALF1, HALF2, IDENTITY, GroundDivides, Membership, PointFormula, PointNeg, PointSum
from compiler.restrict import component_names
from compiler.sformula import SFormula, pair_value
from compiler.syntax import Conj, Disj
from conic.solver import ConicConfig
from curve.ltower import LElement, LTower, combination_point
from curve.params import CurveParams
from divisibility.config import EngineConfig
from divisibility.engine import Certified, DivInstance, certify, lift_to_L
from divisibility.model import halve_in_lane

log = logging.getLogger(__name__)

Multiple = tuple[int, int]


class WitnessError(RuntimeError):
    """The integer witness does not extend to a solution of some stage."""


@dataclass
class Witness:
    pairs: dict[str, tuple[int, int]]
    multiples: dict[str, Multiple]
    tower: LTower
    values: dict[str, LElement] = field(default_factory=dict)

    def restricted_values(self, system: PolySystem) -> dict[str, LElement]:
        """Component values for the variables of the restricted system."""
        out = {}
        parent_sorts = system.parent.sorts if system.parent is not None else {}
        for name, sort in parent_sorts.items():
            value = self.values[name]
            if sort == L_SORT:
                for component, coord in zip(component_names(name), value.coords):
                    out[component] = self.tower.element(coord)
            else:
                out[name] = value
        return out


def _walk(node):
    if isinstance(node, (Conj, Disj)):
        for item in node.items:
            yield from _walk(item)
    elif isinstance(node, (Membership, GroundDivides)):
        yield node
        yield from _walk(node.body)
    else:
        yield node


def _point_multiples(pf: PointFormula, pairs: dict[str, tuple[int, int]]) -> dict[str, Multiple]:
    known: dict[str, Multiple] = {IDENTITY: (0, 0), BASE[1]: (1, 0), BASE[2]: (0, 1)}
    for name, (lane1, lane2) in pf.lanes.items():
        n, r = pairs[name]
        known[lane1] = (n, 0)
        known[lane2] = (0, r)
    nodes = list(_walk(pf.body))
    for node in nodes:
        if isinstance(node, Membership):
            k = known[node.point][node.lane - 1]
            unit = (1, 0) if node.lane == 1 else (0, 1)
            j = k // 2
            known[node.half] = (j * unit[0], j * unit[1])
            known[node.double] = (2 * j * unit[0], 2 * j * unit[1])
            known[node.shifted] = ((2 * j + 1) * unit[0], (2 * j + 1) * unit[1])
    changed = True
    while changed:
        changed = False
        for node in nodes:
            if isinstance(node, PointSum) and node.target not in known:
                if node.left in known and node.right in known:
                    a, b = known[node.left], known[node.right]
                    known[node.target] = (a[0] + b[0], a[1] + b[1])
                    changed = True
            elif isinstance(node, PointNeg) and node.target not in known and node.source in known:
                a = known[node.source]
                known[node.target] = (-a[0], -a[1])
                changed = True
    missing = [name for name, _ in pf.points if name not in known]
    if missing:
        raise WitnessError(f"points without a value: {missing[:5]}")
    return known


def _certify_all(
    pf: PointFormula,
    pairs: dict[str, tuple[int, int]],
    cfg: EngineConfig,
    conic_cfg: ConicConfig,
    params: CurveParams,
) -> list[tuple[GroundDivides, DivInstance, Certified | None]]:
    out = []
    for node in _walk(pf.body):
        if not isinstance(node, GroundDivides):
            continue
        m, one = pair_value(node.atom.p, pairs)
        n, r = pair_value(node.atom.q, pairs)
        inst = DivInstance(m, n, r)
        if one != 1 or not inst.divides:
            raise WitnessError(f"{inst} with second modulus component {one} does not hold")
        if (n, r) == (0, 0):
            out.append((node, inst, None))
            continue
        verdict = certify(cfg, inst, conic_cfg, params)
        if not isinstance(verdict, Certified):
            raise WitnessError(f"{inst}: certification failed ({verdict.reason})")
        out.append((node, inst, verdict))
    return out


def _merged_tower(params: CurveParams, certificates) -> ConstTower:
    tower = params.tower
    for _, _, verdict in certificates:
        if verdict is None:
            continue
        for _, sol in verdict.solutions:
            for adj in sol.tower.adjunctions:
                tower = tower.adjoin_sqrt(adj.radicand)
    return tower


def _sum_case(A, B, tower: LTower) -> tuple[str, LElement, LElement]:
    zero = tower.zero
    if A.is_infinity:
        return "left-identity", zero, zero
    if B.is_infinity:
        return "right-identity", zero, zero
    if A.x != B.x:
        iota = (B.x - A.x).inverse()
        return "chord", (B.y - A.y) * iota, iota
    if A.y == B.y and A.y:
        iota = (A.y * 2).inverse()
        return "tangent", (A.x * A.x * 3 + tower.params.a) * iota, iota
    return "inverse", zero, zero


def build_witness(
    s_formula: SFormula,
    pf: PointFormula,
    system: PolySystem,
    cfg: EngineConfig,
    sources: dict[str, int],
    *,
    params: CurveParams | None = None,
    conic_cfg: ConicConfig | None = None,
    witness_bound: int = 10,
) -> Witness:
    """Values for every stage-4 variable from integer values of the sources."""
    params = params or system.params
    conic_cfg = conic_cfg or ConicConfig()
    fixed = {name: (value, 0) for name, value in sources.items()}
    bound = max([abs(v) for v in sources.values()] + [0])
    pairs = solve_sformula(s_formula, bound, witness_bound, fixed)
    if pairs is None:
        raise WitnessError(f"no pair assignment extends {sources} within bound {witness_bound}")
    multiples = _point_multiples(pf, pairs)
    certificates = _certify_all(pf, pairs, cfg, conic_cfg, params)
    tower = LTower(params, _merged_tower(params, certificates))
    witness = Witness(pairs, multiples, tower)
    values = witness.values
    record = system.record

    points = {}
    for name, role in [(IDENTITY, "constant"), (BASE[1], "constant"), (BASE[2], "constant"), *pf.points]:
        points[name] = combination_point(*multiples[name], tower)
        if role == "constant":
            continue
        point = points[name]
        selector = tower.one if point.is_infinity else tower.zero
        values[f"{name}_s"] = selector
        if role in (HALF1, HALF2):
            lane = 1 if role == HALF1 else 2
            k = 2 * multiples[name][lane - 1]
            half = halve_in_lane(k, lane, tower)
            values[f"{name}_wx"] = tower.element(half.wx)
            values[f"{name}_wy"] = tower.element(half.wy)
        else:
            values[f"{name}_x"] = tower.zero if point.is_infinity else point.x
            values[f"{name}_y"] = tower.zero if point.is_infinity else point.y

    for node, aux in record.sums:
        case, lam, iota = _sum_case(points[node.left], points[node.right], tower)
        for name, (lam_symbol, iota_symbol) in aux.items():
            chosen = name == case
            values[lam_symbol.name] = lam if chosen else tower.zero
            values[iota_symbol.name] = iota if chosen else tower.zero

    for node, inst, verdict in certificates:
        solutions = dict(verdict.solutions) if verdict is not None else {}
        D = points[node.d]
        for quad in (q for q in record.quads if q.d == node.d):
            sol = solutions.get(quad.k)
            if sol is None:
                values[quad.y] = values[quad.z] = tower.zero
                continue
            y, z = sol.dehomogenize()
            values[quad.y] = lift_to_L(y, D, tower)
            values[quad.z] = lift_to_L(z, D, tower)
            log.debug("%s, k=%d: conic solution by %s", inst, quad.k, sol.strategy)

    env = witness_env(values, tower)
    for symbol, expr in record.definitions:
        value = evaluate(expr, env, tower.one)
        values[symbol.name] = value
        env[symbol] = value
    return witness


def witness_env(values: dict[str, LElement], tower: LTower) -> dict[sympy.Symbol, LElement]:
    env = {Z1: tower.z1, Z2: tower.z2, H1: tower.h1, H2: tower.h2}
    env.update({sympy.Symbol(name): value for name, value in values.items()})
    return env


def check_system(system: PolySystem, values: dict[str, LElement], tower: LTower) -> list[str]:
    """Provenance of every equation the values do not satisfy."""
    missing = [name for name, _ in system.variables if name not in values]
    if missing:
        raise WitnessError(f"no value for {len(missing)} variables, e.g. {missing[:5]}")
    env = witness_env(values, tower)
    failed = []
    for expr, origin in zip(system.equations, system.provenance):
        if evaluate(expr, env, tower.one):
            failed.append(origin)
    return failed


def replay(
    s_formula: SFormula,
    pf: PointFormula,
    stage4: PolySystem,
    stage5: PolySystem,
    cfg: EngineConfig,
    sources: dict[str, int],
    *,
    combined: PolySystem | None = None,
    conic_cfg: ConicConfig | None = None,
    witness_bound: int = 10,
) -> Witness:
    """build_witness, then demand that every equation of every stage vanishes."""
    witness = build_witness(s_formula, pf, stage4, cfg, sources, conic_cfg=conic_cfg, witness_bound=witness_bound)
    checks = [("stage 4", stage4, witness.values)]
    restricted = witness.restricted_values(stage5)
    checks.append(("stage 5", stage5, restricted))
    if combined is not None:
        checks.append(("combined", combined, restricted if combined.restricted else witness.values))
    for label, system, values in checks:
        failed = check_system(system, values, witness.tower)
        if failed:
            raise WitnessError(f"{label}: {len(failed)} equations fail, first: {failed[0]}")
        log.info("%s: all %d equations vanish", label, len(system.equations))
    return witness


__all__ = ["Witness", "WitnessError", "build_witness", "check_system", "replay", "witness_env"]
