"""Places, divisors and square decisions on the curve y^2 = f(x).

Finite places are grouped by a base polynomial b(x). Bases come from a
coprime squarefree refinement of every polynomial the function touches, and
are split into irreducible factors when small enough to factor. Above an
unramified base the two branches h = +-g (mod b) are told apart by the
special branch g, where c + d*h vanishes to higher order; when both branches
carry the same order and no branch datum is needed they are kept together as
one "pair" place.
"""

from __future__ import annotations

import logging
import math
from collections import deque
from dataclasses import dataclass, field
from typing import Any

import sympy

from algebra.polys import DEFAULT_FACTOR_DEGREE_BOUND, render
from algebra.tower import ConstTower
from divisors.function import CurveFunction, CurveFunctionField

log = logging.getLogger(__name__)

INFINITE = "infinite"
RAMIFIED = "finite-ramified"
SPLIT = "finite-split"
PAIR = "finite-pair"

_KIND_RANK = {INFINITE: 0, RAMIFIED: 1, SPLIT: 2, PAIR: 3}


@dataclass(frozen=True)
class Place:
    kind: str
    base: Any = None
    branch: Any = None
    irreducible: bool = True
    var: str = "z1"
    hname: str = "h1"

    @property
    def degree(self) -> int:
        if self.kind == INFINITE:
            return 1
        deg = self.base.degree()
        return 2 * deg if self.kind == PAIR else deg

    def describe(self) -> str:
        if self.kind == INFINITE:
            return "O"
        base = render(self.base.as_expr())
        if self.kind == RAMIFIED:
            return f"({base}, {self.hname}=0)"
        if self.kind == PAIR:
            return f"({base}, {self.hname}=+-)"
        branch = render(self.branch.as_expr()) if hasattr(self.branch, "as_expr") else str(self.branch)
        return f"({base}, {self.hname}={branch})"

    def sort_key(self) -> tuple:
        return (_KIND_RANK[self.kind], self.degree, self.describe())

    def __repr__(self) -> str:
        return f"Place{self.describe()}"


INFINITY_PLACE = Place(INFINITE)


@dataclass(frozen=True)
class NonSquareWitness:
    """A place where the function has odd order."""

    place: Place
    order: int

    def to_dict(self) -> dict:
        return {"place": self.place.describe(), "order": self.order, "place_degree": self.place.degree}


@dataclass(frozen=True)
class Square:
    """Every order is even: a square over the algebraically closed constants."""


SQUARE = Square()


@dataclass(frozen=True)
class Divisor:
    entries: tuple[tuple[Place, int], ...] = ()
    tower: ConstTower = field(default_factory=ConstTower)

    def as_dict(self) -> dict[Place, int]:
        return dict(self.entries)

    def order_at(self, place: Place) -> int:
        return self.as_dict().get(place, 0)

    @property
    def degree(self) -> int:
        return sum(order * place.degree for place, order in self.entries)

    def zero_count(self) -> int:
        """Zeros counted with multiplicity over the closure."""
        return sum(order * place.degree for place, order in self.entries if order > 0)

    def pole_count(self) -> int:
        return sum(-order * place.degree for place, order in self.entries if order < 0)

    def zeros(self) -> list[tuple[Place, int]]:
        return [(p, o) for p, o in self.entries if o > 0]

    def poles(self) -> list[tuple[Place, int]]:
        return [(p, o) for p, o in self.entries if o < 0]

    def odd_places(self) -> list[tuple[Place, int]]:
        return [(p, o) for p, o in self.entries if o % 2]

    def is_even(self) -> bool:
        return not self.odd_places()

    def __neg__(self) -> Divisor:
        return Divisor(tuple((p, -o) for p, o in self.entries), self.tower)

    def __add__(self, other: Divisor) -> Divisor:
        if not isinstance(other, Divisor):
            return NotImplemented
        if any(not p.irreducible for p, _ in self.entries + other.entries):
            raise ValueError("divisors with unfactored places cannot be added")
        left = _expand_pairs(self.entries, other.entries)
        right = _expand_pairs(other.entries, self.entries)
        merged: dict[Place, int] = dict(left)
        for place, order in right:
            merged[place] = merged.get(place, 0) + order
        return Divisor(_normalize(list(merged.items())), self.tower)

    def __sub__(self, other: Divisor) -> Divisor:
        return self + (-other)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Divisor):
            return NotImplemented
        return self.as_dict() == other.as_dict()

    __hash__ = None

    def to_list(self) -> list[tuple[str, int]]:
        return [(p.describe(), o) for p, o in sorted(self.entries, key=lambda e: e[0].sort_key())]

    def to_dict(self) -> dict:
        return {"tower": self.tower.describe(), "degree": self.degree, "places": self.to_list()}


def _expand_pairs(entries, partner) -> list[tuple[Place, int]]:
    """Rewrite pair places as two split places where the partner splits the base."""
    branches: dict[Any, Any] = {}
    for place, _ in partner:
        if place.kind == SPLIT and place.base not in branches:
            branches[place.base] = place.branch
    out = []
    for place, order in entries:
        g = branches.get(place.base) if place.kind == PAIR else None
        if g is None:
            out.append((place, order))
            continue
        for branch in (g, _negate_branch(g, place.base)):
            out.append((Place(SPLIT, place.base, branch, place.irreducible, place.var, place.hname), order))
    return out


def _negate_branch(g, base):
    if hasattr(g, "rem"):
        return (-g).rem(base)
    return -g


def _normalize(entries: list[tuple[Place, int]]) -> tuple[tuple[Place, int], ...]:
    """Drop zero orders; merge equal-order split branches over bases of degree > 1."""
    by_base: dict[Any, list[tuple[Place, int]]] = {}
    for place, order in entries:
        if place.kind == SPLIT and place.base.degree() > 1:
            by_base.setdefault(place.base, []).append((place, order))
    merged_bases = set()
    for base, items in by_base.items():
        if len(items) == 2 and items[0][1] == items[1][1]:
            merged_bases.add(base)
    out = []
    emitted = set()
    for place, order in entries:
        if order == 0:
            continue
        if place.kind == SPLIT and place.base in merged_bases:
            if place.base in emitted:
                continue
            emitted.add(place.base)
            place = Place(PAIR, place.base, None, place.irreducible, place.var, place.hname)
        out.append((place, order))
    return tuple(out)


# ── Local orders ───────────────────────────────────────────────────────


def _poly_order(p, b) -> float:
    if not p:
        return math.inf
    count = 0
    while True:
        quotient, remainder = divmod(p, b)
        if remainder:
            return count
        p = quotient
        count += 1


def _frac_order(f, b) -> float:
    if not f:
        return math.inf
    return _poly_order(f.numer, b) - _poly_order(f.denom, b)


def _infinite_order(f: CurveFunction) -> int:
    orders = []
    if f.c:
        orders.append(-2 * (f.c.numer.degree() - f.c.denom.degree()))
    if f.d:
        orders.append(-2 * (f.d.numer.degree() - f.d.denom.degree()) - 3)
    return min(orders)


def _strip(f, b, times: int):
    """f / b**times as a pair of polynomials coprime to b."""
    num, den = f.numer, f.denom
    for _ in range(max(times, 0)):
        num = num.quo(b)
    for _ in range(max(-times, 0)):
        den = den.quo(b)
    return num, den


def _inverse_mod(p, b):
    s, _, h = p.gcdex(b)
    if h.degree() != 0:
        raise ArithmeticError("element is not invertible modulo the base")
    return s.quo_ground(h.LC).rem(b)


def _residue(f, b, order: int):
    num, den = _strip(f, b, order)
    return (num.rem(b) * _inverse_mod(den.rem(b), b)).rem(b)


def tame_symbol(f, g, b):
    """(-1)^(ef*eg) * f^eg / g^ef at x = theta, for f, g in F(x) and b = x - theta.

    ef and eg are the orders of f and g at theta; the value is a nonzero constant.
    """
    if b.degree() != 1:
        raise ValueError("tame symbols are taken at linear bases only")
    ef = int(_frac_order(f, b))
    eg = int(_frac_order(g, b))
    dom = b.ring.domain
    fv = dom.to_sympy(_residue(f, b, ef).coeff(1))
    gv = dom.to_sympy(_residue(g, b, eg).coeff(1))
    return sympy.radsimp((-1) ** (ef * eg) * fv**eg / gv**ef)


# ── Base decomposition ─────────────────────────────────────────────────


def coprime_base(polys) -> list:
    """Pairwise coprime, squarefree, monic polynomials generating every input."""
    queue = deque()
    for p in polys:
        if not p or p.degree() <= 0:
            continue
        for chunk, _ in p.sqf_list()[1]:
            queue.append(chunk.monic())
    base: list = []
    while queue:
        a = queue.popleft()
        if a.degree() <= 0:
            continue
        for index, b in enumerate(base):
            h = a.gcd(b)
            if h.degree() > 0:
                del base[index]
                queue.extend([h.monic(), b.quo(h).monic(), a.quo(h).monic()])
                break
        else:
            base.append(a)
    base.sort(key=lambda q: (q.degree(), str(q.as_expr())))
    return base


def _factor_base(base: list, degree_bound: int) -> list[tuple[Any, bool]]:
    out = []
    for b in base:
        if b.degree() == 1:
            out.append((b, True))
        elif b.degree() <= degree_bound:
            _, factors = b.factor_list()
            for g, _ in sorted(factors, key=lambda fm: (fm[0].degree(), str(fm[0].as_expr()))):
                out.append((g.monic(), True))
        else:
            log.debug("keeping base block of degree %d unfactored", b.degree())
            out.append((b, False))
    return out


def _linear_value(b, fld: CurveFunctionField):
    """f(theta) as a sympy number, where b = x - theta."""
    theta = -b.coeff(1)
    return fld.ring.domain.to_sympy(fld.f_poly.evaluate(fld.ring.gens[0], theta))


def divisor_of(
    f: CurveFunction,
    *,
    factor_places: bool = True,
    degree_bound: int = DEFAULT_FACTOR_DEGREE_BOUND,
    extend_constants: bool = False,
) -> Divisor:
    """Complete divisor of a nonzero function over the closure of its constants.

    With extend_constants, a linear base whose branch value sqrt(f(theta)) is
    missing from the tower gets it adjoined; the grown tower is recorded on
    the result. Otherwise such bases stay as pair places.
    """
    if not f:
        raise ValueError("the zero function has no divisor")
    fld = f.field
    norm = f.norm()
    polys = [f.c.numer, f.c.denom, f.d.numer, f.d.denom, norm.numer, norm.denom, fld.f_poly]
    base = coprime_base(polys)
    if factor_places:
        blocks = _factor_base(base, degree_bound)
    else:
        blocks = [(b, b.degree() == 1) for b in base]

    tower = fld.tower
    entries: list[tuple[Place, int]] = [(INFINITY_PLACE, _infinite_order(f))]
    for b, irreducible in blocks:
        found, tower = _orders_over_base(f, norm, b, irreducible, tower, extend_constants)
        entries.extend(found)
    return Divisor(_normalize(entries), tower)


def _orders_over_base(f: CurveFunction, norm, b, irreducible: bool, tower: ConstTower, extend: bool):
    fld = f.field
    place = dict(irreducible=irreducible, var=fld.var, hname=fld.hname)
    if not fld.f_poly.rem(b):
        order = min(2 * _frac_order(f.c, b), 2 * _frac_order(f.d, b) + 1)
        return [(Place(RAMIFIED, b, None, **place), int(order))], tower

    e = min(_frac_order(f.c, b), _frac_order(f.d, b))
    n = _frac_order(norm, b)
    if n == 2 * e:
        if e == 0:
            return [], tower
        if b.degree() != 1:
            return [(Place(PAIR, b, None, **place), int(e))], tower
        value = _linear_value(b, fld)
        root = tower.sqrt(value)
        if root is None and not extend:
            return [(Place(PAIR, b, None, **place), int(e))], tower
        if root is None:
            tower, root = tower.with_sqrt(value)
        if fld.tower.contains(root):
            g = fld.ring.ground_new(fld.ring.domain.from_sympy(root))
            branches = (g, _negate_branch(g, b))
        else:
            branches = (root, -root)
        return [(Place(SPLIT, b, branch, **place), int(e)) for branch in branches], tower

    # n > 2e: c and d are both units after removing b**e
    c_res = _residue(f.c, b, int(e))
    d_res = _residue(f.d, b, int(e))
    g = (-c_res * _inverse_mod(d_res, b)).rem(b)
    return [
        (Place(SPLIT, b, g, **place), int(n - e)),
        (Place(SPLIT, b, _negate_branch(g, b), **place), int(e)),
    ], tower


# ── Square decisions ───────────────────────────────────────────────────


def is_square_over_closure(f: CurveFunction, **kwargs) -> Square | NonSquareWitness:
    """SQUARE when the divisor is even, else the first odd-order place."""
    inf = _infinite_order(f)
    if inf % 2:
        return NonSquareWitness(INFINITY_PLACE, inf)
    kwargs.setdefault("factor_places", False)
    divisor = divisor_of(f, **kwargs)
    odd = divisor.odd_places()
    if not odd:
        return SQUARE
    place, order = odd[0]
    return NonSquareWitness(place, order)


@dataclass(frozen=True)
class SquareClassReport:
    distinct: bool
    witnesses: tuple[tuple[int, int, NonSquareWitness | None], ...]

    def __bool__(self) -> bool:
        return self.distinct

    def failing_pairs(self) -> list[tuple[int, int]]:
        return [(i, j) for i, j, w in self.witnesses if w is None]

    def to_dict(self) -> dict:
        return {
            "distinct": self.distinct,
            "pairs": [
                {"i": i, "j": j, "witness": None if w is None else w.to_dict()} for i, j, w in self.witnesses
            ],
        }


def square_classes_distinct(fs: list[CurveFunction], **kwargs) -> SquareClassReport:
    """Whether no ratio f_i / f_j is a square; pairs are 1-based."""
    witnesses = []
    for i in range(len(fs)):
        for j in range(i + 1, len(fs)):
            verdict = is_square_over_closure(fs[i] / fs[j], **kwargs)
            witness = verdict if isinstance(verdict, NonSquareWitness) else None
            witnesses.append((i + 1, j + 1, witness))
    return SquareClassReport(all(w is not None for _, _, w in witnesses), tuple(witnesses))
