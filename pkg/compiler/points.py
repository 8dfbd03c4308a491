"""Pairs to points: (n, r) is carried by two lane points n*P1 and r*P2 of E(L).

Every pair variable p gets lane points _p_1, _p_2 with membership constraints

    X in Z*P  <=>  exists H = (wx, h*wy), wx, wy in K :  X = 2H  or  X = 2H + P,

Plus is lane-wise point addition, Z(p) says the second lane point is the
identity, and a ground divisibility (M,1) | (N,R) becomes

    p_2 = P2,  D = p_1 + P2,  Q = q_1 + q_2,
    Q = O  or  x(k*Q) y_k^2 + x(D) z_k^2 = 1 for k = 1, 2, ..., 2^alpha.

Constant and scaled lane points are built by double-and-add chains of
auxiliary points, so every coordinate stays polynomial in z1, z2, h1, h2.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from compiler.sformula import Divides, IsZ, NameSupply, PairAdd, PairConst, PairScale, PairVar, Plus, SFormula
from compiler.syntax import Conj, Disj, conj, describe_tree
from divisibility.config import EngineConfig

IDENTITY = "O"
BASE = {1: "P1", 2: "P2"}
CONSTANT_POINTS = frozenset({IDENTITY, "P1", "P2"})

LANE1, LANE2, GENERAL, HALF1, HALF2 = "lane1", "lane2", "general", "half1", "half2"


@dataclass(frozen=True)
class PointSum:
    """target = left + right"""

    target: str
    left: str
    right: str


@dataclass(frozen=True)
class PointNeg:
    target: str
    source: str


@dataclass(frozen=True)
class PointEq:
    left: str
    right: str


@dataclass(frozen=True)
class IsIdentity:
    point: str


@dataclass(frozen=True)
class HalfLift:
    """point = (wx, h_lane * wy) with wx, wy in K, or the identity."""

    point: str
    lane: int


@dataclass(frozen=True)
class QuadEq:
    """x(q)*y^2 + x(d)*z^2 = 1, y and z in L."""

    k: int
    q: str
    d: str
    y: str
    z: str


@dataclass(frozen=True)
class Membership:
    point: str
    lane: int
    half: str
    double: str
    shifted: str
    body: Any


@dataclass(frozen=True)
class GroundDivides:
    atom: Divides
    d: str
    q: str
    chain: tuple[str, ...]
    body: Any


@dataclass(frozen=True)
class PointFormula:
    points: tuple[tuple[str, str], ...]
    quad_vars: tuple[str, ...]
    body: Any
    lanes: dict = field(default_factory=dict)

    def role(self, name: str) -> str:
        return dict(self.points)[name]

    def describe(self) -> str:
        return describe_tree(self.body, describe_node)


def describe_node(node) -> str:
    if isinstance(node, PointSum):
        return f"{node.target} = {node.left} + {node.right}"
    if isinstance(node, PointNeg):
        return f"{node.target} = -{node.source}"
    if isinstance(node, PointEq):
        return f"{node.left} = {node.right}"
    if isinstance(node, IsIdentity):
        return f"{node.point} = O"
    if isinstance(node, HalfLift):
        return f"{node.point} = (wx, h{node.lane}*wy)"
    if isinstance(node, QuadEq):
        return f"x({node.q})*{node.y}^2 + x({node.d})*{node.z}^2 = 1"
    if isinstance(node, Membership):
        return f"{node.point} in Z*P{node.lane}"
    if isinstance(node, GroundDivides):
        return f"ground divisibility via {node.d}, {node.q}"
    return type(node).__name__


class _PointBuilder:
    def __init__(self, f: SFormula, cfg: EngineConfig):
        self.cfg = cfg
        self.supply = NameSupply()
        self.points: list[tuple[str, str]] = []
        self.quad_vars: list[str] = []
        self.definitions: list = []
        self.cache: dict[tuple, str] = {}
        self.lanes: dict[str, tuple[str, str]] = {}
        for name in f.variables:
            lane_points = (f"_{name}_1", f"_{name}_2")
            self.points.extend([(lane_points[0], LANE1), (lane_points[1], LANE2)])
            self.lanes[name] = lane_points

    def aux(self, stem: str, role: str = GENERAL) -> str:
        name = self.supply.fresh(stem)
        self.points.append((name, role))
        return name

    # ── lane points of pair terms ──

    def slot(self, term, lane: int) -> str:
        key = (term, lane)
        hit = self.cache.get(key)
        if hit is not None:
            return hit
        if isinstance(term, PairVar):
            out = self.lanes[term.name][lane - 1]
        elif isinstance(term, PairConst):
            out = self.multiple(term.n if lane == 1 else term.r, BASE[lane])
        elif isinstance(term, PairAdd):
            left, right = self.slot(term.left, lane), self.slot(term.right, lane)
            out = self.sum(left, right)
        else:
            assert isinstance(term, PairScale)
            out = self.multiple(term.k1 if lane == 1 else term.k2, self.slot(term.term, lane))
        self.cache[key] = out
        return out

    def sum(self, left: str, right: str) -> str:
        if left == IDENTITY:
            return right
        if right == IDENTITY:
            return left
        key = ("sum", *sorted((left, right)))
        hit = self.cache.get(key)
        if hit is None:
            hit = self.aux("s")
            self.definitions.append(PointSum(hit, left, right))
            self.cache[key] = hit
        return hit

    def negate(self, point: str) -> str:
        if point == IDENTITY:
            return point
        key = ("neg", point)
        hit = self.cache.get(key)
        if hit is None:
            hit = self.aux("n")
            self.definitions.append(PointNeg(hit, point))
            self.cache[key] = hit
        return hit

    def multiple(self, k: int, point: str) -> str:
        """k*point by double-and-add over auxiliary points."""
        if k == 0 or point == IDENTITY:
            return IDENTITY
        if k < 0:
            return self.negate(self.multiple(-k, point))
        result = IDENTITY
        addend = point
        while k:
            if k & 1:
                result = self.sum(result, addend)
            k >>= 1
            if k:
                addend = self.sum(addend, addend)
        return result

    # ── atoms ──

    def membership(self, point: str, lane: int) -> Membership:
        half = self.aux("h", HALF1 if lane == 1 else HALF2)
        double = self.aux("d")
        shifted = self.aux("e")
        body = conj(
            HalfLift(half, lane),
            PointSum(double, half, half),
            Disj((PointEq(point, double), conj(PointSum(shifted, double, BASE[lane]), PointEq(point, shifted)))),
        )
        return Membership(point, lane, half, double, shifted, body)

    def atom(self, atom):
        if isinstance(atom, Plus):
            return conj(*(PointSum(self.slot(atom.s, lane), self.slot(atom.p, lane), self.slot(atom.q, lane)) for lane in (1, 2)))
        if isinstance(atom, IsZ):
            return IsIdentity(self.slot(atom.p, 2))
        if isinstance(atom, Divides):
            return self.divides(atom)
        raise TypeError(f"stage 3 expects ground atoms, got {type(atom).__name__}")

    def divides(self, atom: Divides) -> GroundDivides:
        p1, p2 = self.slot(atom.p, 1), self.slot(atom.p, 2)
        q1, q2 = self.slot(atom.q, 1), self.slot(atom.q, 2)
        d = self.aux("D")
        q = self.aux("Q")
        parts = [PointEq(p2, "P2"), PointSum(d, p1, "P2"), PointSum(q, q1, q2)]
        chain = [q]
        for _ in self.cfg.ks[1:]:
            nxt = self.aux("Q")
            parts.append(PointSum(nxt, chain[-1], chain[-1]))
            chain.append(nxt)
        quads = []
        for k, qk in zip(self.cfg.ks, chain):
            y, z = self.supply.fresh("y"), self.supply.fresh("z")
            self.quad_vars.extend([y, z])
            quads.append(QuadEq(k, qk, d, y, z))
        parts.append(Disj((IsIdentity(q), conj(*quads))))
        return GroundDivides(atom, d, q, tuple(chain), conj(*parts))

    def walk(self, node):
        if isinstance(node, Conj):
            return conj(*(self.walk(i) for i in node.items))
        if isinstance(node, Disj):
            return Disj(tuple(self.walk(i) for i in node.items))
        return self.atom(node)


def stage3_points(f: SFormula, cfg: EngineConfig) -> PointFormula:
    builder = _PointBuilder(f, cfg)
    memberships = []
    for name in f.variables:
        for lane, point in enumerate(builder.lanes[name], start=1):
            memberships.append(builder.membership(point, lane))
    body = builder.walk(f.body)
    # definitions first: they only name sums and are always satisfiable
    full = conj(*builder.definitions, *memberships, body)
    return PointFormula(tuple(builder.points), tuple(builder.quad_vars), full, dict(builder.lanes))
