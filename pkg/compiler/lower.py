"""Points to polynomials over L.

A point variable X is the triple (X_x, X_y, X_s) with the selector X_s in
{0, 1}: X_s = 1 means X is the identity and forces X_x = X_y = 0, X_s = 0
puts (X_x, X_y) on the curve. Addition T = A + B is the disjunction of five
selector cases (identity left, identity right, chord, tangent, inverse pair),
each a conjunction of polynomial leaves with its own slope and inverse
symbols, so no division survives.

Nested connectives are flattened by auxiliary variables: a leaf e becomes
t - e = 0, a conjunction p = 0 and q = 0 becomes u - (p^2 - d q^2) = 0 with d
a non-square of L, a disjunction becomes v - p q = 0.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import sympy
from sympy import Poly

from algebra.nonsquare import NonSquareWitness, certify_nonsquare
from compiler.points import (
    BASE,
    HALF1,
    HALF2,
    IDENTITY,
    GroundDivides,
    HalfLift,
    IsIdentity,
    Membership,
    PointEq,
    PointFormula,
    PointNeg,
    PointSum,
    QuadEq,
    describe_node,
)
from compiler.syntax import FALSE, TRUE, Conj, Disj
from curve.params import CurveParams

log = logging.getLogger(__name__)

Z1, Z2, H1, H2 = sympy.symbols("z1 z2 h1 h2")
FIELD_SYMBOLS = frozenset({Z1, Z2, H1, H2})
K_SORT, L_SORT = "K", "L"

CASES = ("left-identity", "right-identity", "chord", "tangent", "inverse")


class CombinerRejected(ValueError):
    """The proposed combiner is not provably a non-square."""


def h_components(expr, params: CurveParams) -> tuple[sympy.Expr, sympy.Expr, sympy.Expr, sympy.Expr]:
    """Coordinates of expr in the basis (1, h1, h2, h1*h2) after h_i^2 -> f_i."""
    expr = sympy.expand(expr)
    out = [sympy.Integer(0)] * 4
    if not expr.has(H1, H2):
        out[0] = expr
        return tuple(out)
    f1, f2 = params.rhs(Z1), params.rhs(Z2)
    for (i, j), coeff in Poly(expr, H1, H2).terms():
        out[(i % 2) + 2 * (j % 2)] += coeff * f1 ** (i // 2) * f2 ** (j // 2)
    return tuple(sympy.expand(c) for c in out)


def h_reduce(expr, params: CurveParams) -> sympy.Expr:
    c0, c1, c2, c3 = h_components(expr, params)
    return sympy.expand(c0 + c1 * H1 + c2 * H2 + c3 * H1 * H2)


def clear_denominators(expr) -> sympy.Expr:
    """A multiple of expr with integer coefficients."""
    expr = sympy.expand(expr)
    if expr.is_number:
        return sympy.Integer(0) if expr == 0 else sympy.Integer(1)
    gens = sorted(expr.free_symbols, key=lambda s: s.name)
    _, poly = Poly(expr, *gens).clear_denoms()
    return poly.as_expr()


@dataclass(frozen=True)
class Leaf:
    expr: sympy.Expr
    origin: str


@dataclass
class LoweringRecord:
    """What the witness builder needs to assign every stage-4 variable."""

    coords: dict[str, tuple] = field(default_factory=dict)
    roles: dict[str, str] = field(default_factory=dict)
    sums: list[tuple[PointSum, dict[str, tuple[sympy.Symbol, sympy.Symbol]]]] = field(default_factory=list)
    quads: list[QuadEq] = field(default_factory=list)
    divides: list[GroundDivides] = field(default_factory=list)
    memberships: list[Membership] = field(default_factory=list)
    definitions: list[tuple[sympy.Symbol, sympy.Expr]] = field(default_factory=list)
    combiner: sympy.Expr | None = None


@dataclass
class PolySystem:
    """Equations expr = 0 over the named variables; provenance[i] explains equations[i]."""

    variables: list[tuple[str, str]]
    equations: list[sympy.Expr]
    provenance: list[str]
    params: CurveParams = field(default_factory=CurveParams)
    restricted: bool = False
    form: str = "system"
    record: LoweringRecord | None = None
    parent: PolySystem | None = None
    meta: dict = field(default_factory=dict)

    @property
    def symbols(self) -> list[sympy.Symbol]:
        return [sympy.Symbol(name) for name, _ in self.variables]

    @property
    def sorts(self) -> dict[str, str]:
        return dict(self.variables)

    @property
    def gens(self) -> tuple[sympy.Symbol, ...]:
        base = (Z1, Z2) if self.restricted else (Z1, Z2, H1, H2)
        return base + tuple(self.symbols)

    @property
    def relations(self) -> tuple[sympy.Expr, ...]:
        if self.restricted:
            return ()
        return (H1**2 - self.params.rhs(Z1), H2**2 - self.params.rhs(Z2))

    def counts(self) -> dict[str, int]:
        sorts = [s for _, s in self.variables]
        return {
            "variables": len(self.variables),
            "K": sorts.count(K_SORT),
            "L": sorts.count(L_SORT),
            "equations": len(self.equations),
        }


def check_combiner(d, params: CurveParams) -> NonSquareWitness:
    """d must stay a non-square after adjoining h1 and h2: d*c is a non-square in K for c | f1*f2."""
    d = sympy.sympify(d)
    if d.free_symbols - {Z1, Z2}:
        raise CombinerRejected(f"combiner {d} must be a function of z1, z2")
    f1, f2 = params.rhs(Z1), params.rhs(Z2)
    first = None
    for twist in (1, f1, f2, f1 * f2):
        verdict = certify_nonsquare(sympy.expand(d * twist))
        if not isinstance(verdict, NonSquareWitness):
            raise CombinerRejected(f"combiner {d} times {twist}: {verdict.reason}")
        if verdict.order % 2 == 0:
            raise CombinerRejected(f"combiner {d} times {twist}: even order {verdict.order}")
        first = first or verdict
    return first


class _Lowerer:
    def __init__(self, pf: PointFormula, params: CurveParams, combiner):
        self.pf = pf
        self.params = params
        self.combiner = sympy.sympify(combiner)
        self.sorts: dict[str, str] = {}
        self.record = LoweringRecord(roles=dict(pf.points), combiner=self.combiner)
        self.sum_ids = 0
        self.counters = {"t": 0, "u": 0, "v": 0}
        self.equations: list[sympy.Expr] = []
        self.provenance: list[str] = []
        self._declare_points()

    # ── variables ──

    def declare(self, name: str, sort: str) -> sympy.Symbol:
        self.sorts[name] = sort
        return sympy.Symbol(name)

    def _declare_points(self) -> None:
        coords = self.record.coords
        coords[IDENTITY] = (sympy.Integer(0), sympy.Integer(0), sympy.Integer(1))
        coords[BASE[1]] = (Z1, H1, sympy.Integer(0))
        coords[BASE[2]] = (Z2, H2, sympy.Integer(0))
        for name, role in self.pf.points:
            if role in (HALF1, HALF2):
                h = H1 if role == HALF1 else H2
                wx = self.declare(f"{name}_wx", K_SORT)
                wy = self.declare(f"{name}_wy", K_SORT)
                s = self.declare(f"{name}_s", K_SORT)
                coords[name] = (wx, h * wy, s)
            else:
                x = self.declare(f"{name}_x", L_SORT)
                y = self.declare(f"{name}_y", L_SORT)
                s = self.declare(f"{name}_s", K_SORT)
                coords[name] = (x, y, s)
        for name in self.pf.quad_vars:
            self.declare(name, L_SORT)

    def fresh(self, kind: str, sort: str) -> sympy.Symbol:
        self.counters[kind] += 1
        return self.declare(f"_{kind}{self.counters[kind]}", sort)

    def sort_of(self, expr) -> str:
        if expr.has(H1, H2):
            return L_SORT
        if any(self.sorts.get(s.name) == L_SORT for s in expr.free_symbols):
            return L_SORT
        return K_SORT

    # ── leaves and connectives ──

    def leaf(self, expr, origin: str):
        e = h_reduce(expr, self.params)
        if not (e.free_symbols - FIELD_SYMBOLS):
            return TRUE if e == 0 else FALSE
        return Leaf(e, origin)

    @staticmethod
    def all_of(*items):
        out = []
        for item in items:
            if item == FALSE:
                return FALSE
            if isinstance(item, Conj):
                out.extend(item.items)
            else:
                out.append(item)
        return out[0] if len(out) == 1 else Conj(tuple(out))

    @staticmethod
    def any_of(*items):
        out = []
        for item in items:
            if item == TRUE:
                return TRUE
            if isinstance(item, Disj):
                out.extend(item.items)
            else:
                out.append(item)
        return out[0] if len(out) == 1 else Disj(tuple(out))

    # ── point nodes ──

    def well_formed(self) -> list:
        a, b = self.params.a, self.params.b
        out = []
        for name, _ in self.pf.points:
            x, y, s = self.record.coords[name]
            origin = f"{name} is a point"
            out.extend(
                [
                    self.leaf(s * (s - 1), origin),
                    self.leaf(s * x, origin),
                    self.leaf(s * y, origin),
                    self.leaf((1 - s) * (y**2 - x**3 - a * x - b), origin),
                ]
            )
        return out

    def point_sum(self, node: PointSum):
        self.sum_ids += 1
        sid = self.sum_ids
        xa, ya, sa = self.record.coords[node.left]
        xb, yb, sb = self.record.coords[node.right]
        xt, yt, st = self.record.coords[node.target]
        origin = describe_node(node)
        a = self.params.a
        aux: dict[str, tuple[sympy.Symbol, sympy.Symbol]] = {}

        def case(name: str, *exprs):
            return self.all_of(*(self.leaf(e, f"{origin} [{name}]") for e in exprs))

        cases = [
            case("left-identity", sa - 1, st - sb, xt - xb, yt - yb),
            case("right-identity", sb - 1, st - sa, xt - xa, yt - ya),
        ]
        for name, number in (("chord", 3), ("tangent", 4)):
            lam = sympy.Symbol(f"_l{sid}c{number}")
            iota = sympy.Symbol(f"_i{sid}c{number}")
            if name == "chord":
                body = case(
                    name,
                    sa,
                    sb,
                    st,
                    iota * (xb - xa) - 1,
                    lam * (xb - xa) - (yb - ya),
                    xt - (lam**2 - xa - xb),
                    yt - (lam * (xa - xt) - ya),
                )
            else:
                body = case(
                    name,
                    sa,
                    sb,
                    st,
                    xa - xb,
                    ya - yb,
                    2 * iota * ya - 1,
                    2 * lam * ya - (3 * xa**2 + a),
                    xt - (lam**2 - 2 * xa),
                    yt - (lam * (xa - xt) - ya),
                )
            if body != FALSE:
                self.declare(lam.name, L_SORT)
                self.declare(iota.name, L_SORT)
                aux[name] = (lam, iota)
            cases.append(body)
        cases.append(case("inverse", sa, sb, xa - xb, ya + yb, st - 1))
        self.record.sums.append((node, aux))
        return self.any_of(*cases)

    def point_neg(self, node: PointNeg):
        xa, ya, sa = self.record.coords[node.source]
        xt, yt, st = self.record.coords[node.target]
        origin = describe_node(node)
        return self.all_of(self.leaf(st - sa, origin), self.leaf(xt - xa, origin), self.leaf(yt + ya, origin))

    def point_eq(self, node: PointEq):
        left, right = self.record.coords[node.left], self.record.coords[node.right]
        origin = describe_node(node)
        return self.all_of(*(self.leaf(u - v, origin) for u, v in zip(left, right)))

    def node(self, node):
        if isinstance(node, Conj):
            return self.all_of(*(self.node(i) for i in node.items))
        if isinstance(node, Disj):
            return self.any_of(*(self.node(i) for i in node.items))
        if isinstance(node, PointSum):
            return self.point_sum(node)
        if isinstance(node, PointNeg):
            return self.point_neg(node)
        if isinstance(node, PointEq):
            return self.point_eq(node)
        if isinstance(node, IsIdentity):
            return self.leaf(self.record.coords[node.point][2] - 1, describe_node(node))
        if isinstance(node, HalfLift):
            # the half point's coordinates already have the form (wx, h*wy)
            return TRUE
        if isinstance(node, QuadEq):
            self.record.quads.append(node)
            xq, xd = self.record.coords[node.q][0], self.record.coords[node.d][0]
            y, z = sympy.Symbol(node.y), sympy.Symbol(node.z)
            return self.leaf(xq * y**2 + xd * z**2 - 1, describe_node(node))
        if isinstance(node, Membership):
            self.record.memberships.append(node)
            return self.node(node.body)
        if isinstance(node, GroundDivides):
            self.record.divides.append(node)
            return self.node(node.body)
        raise TypeError(f"cannot lower {type(node).__name__}")

    # ── emission ──

    def add(self, expr, origin: str) -> None:
        self.equations.append(expr)
        self.provenance.append(origin)

    def define(self, kind: str, expr, origin: str) -> sympy.Symbol:
        symbol = self.fresh(kind, self.sort_of(expr))
        self.record.definitions.append((symbol, expr))
        self.add(symbol - expr, origin)
        return symbol

    def encode(self, node) -> sympy.Expr:
        """An expression vanishing exactly when node holds."""
        if isinstance(node, Leaf):
            return self.define("t", node.expr, node.origin)
        if node == TRUE:
            return sympy.Integer(0)
        if node == FALSE:
            return sympy.Integer(1)
        parts = [self.encode(i) for i in node.items]
        kind = "u" if isinstance(node, Conj) else "v"
        while len(parts) > 1:
            folded = []
            for i in range(0, len(parts) - 1, 2):
                p, q = parts[i], parts[i + 1]
                expr = p**2 - self.combiner * q**2 if kind == "u" else p * q
                folded.append(self.define(kind, expr, "conjunction" if kind == "u" else "disjunction"))
            if len(parts) % 2:
                folded.append(parts[-1])
            parts = folded
        return parts[0]

    def emit(self, root) -> None:
        if root == FALSE:
            self.add(sympy.Integer(1), "false")
            return
        items = root.items if isinstance(root, Conj) else (root,)
        for item in items:
            if isinstance(item, Leaf):
                self.add(item.expr, item.origin)
            else:
                self.add(self.encode(item), "root")


def stage4_lower(pf: PointFormula, params: CurveParams | None = None, combiner="z1") -> PolySystem:
    params = params or CurveParams()
    check_combiner(combiner, params)
    lowerer = _Lowerer(pf, params, combiner)
    root = lowerer.all_of(*lowerer.well_formed(), lowerer.node(pf.body))
    lowerer.emit(root)
    variables = list(lowerer.sorts.items())
    equations = [clear_denominators(e) for e in lowerer.equations]
    log.debug("stage 4: %d variables, %d equations", len(variables), len(equations))
    return PolySystem(variables, equations, lowerer.provenance, params, record=lowerer.record)


__all__ = [
    "CASES",
    "CombinerRejected",
    "K_SORT",
    "L_SORT",
    "Leaf",
    "LoweringRecord",
    "PolySystem",
    "check_combiner",
    "clear_denominators",
    "h_components",
    "h_reduce",
    "stage4_lower",
]
