"""Nontrivial zeros of a*y^2 + b*z^2 = w^2 over a curve function field.

Cheap closed forms are tried first: equal coefficients and the doubling
identity for the x-coordinate of a point and of its double. Otherwise, for
coefficients in F(u), the tame symbol of (a, b) is checked at the places above
rational points of the line; a non-square residue there rules out every
solution until its square root is adjoined. What survives goes to a
coefficient-elimination search: y = u^i and z = u^j + lam*u^k, with the
coefficients of w solved from the top down and the leftover equations forcing
lam. Coefficients with an h-part fall back to a bounded search over small
candidates. Every adjunction is recorded on the solution so a checker can
rebuild the field.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import reduce
from itertools import combinations
from typing import Iterator

import sympy
from sympy import QQ, Poly
from sympy.polys.polyerrors import BasePolynomialError
from sympy.polys.rings import ring

from algebra.tower import ConstTower
from curve.group import CurvePoint, ec_double
from divisors.function import CurveFunction, CurveFunctionField
from divisors.places import tame_symbol

log = logging.getLogger(__name__)

# radicands tried when the search is allowed to grow the tower
EXTENSION_POOL = (-1, 2, -2, 3, -3, 5)


@dataclass(frozen=True)
class ConicConfig:
    degree_bound: int = 6
    max_tower_extensions: int = 2
    step_budget: int = 4000
    coefficient_height: int = 5

    def __post_init__(self) -> None:
        if self.degree_bound < 1:
            raise ValueError(f"conic.degree_bound must be >= 1, got {self.degree_bound}")
        if self.max_tower_extensions < 0:
            raise ValueError(f"conic.max_tower_extensions must be >= 0, got {self.max_tower_extensions}")
        if self.step_budget < 1:
            raise ValueError(f"conic.step_budget must be >= 1, got {self.step_budget}")
        if self.coefficient_height < 1:
            raise ValueError(f"conic.coefficient_height must be >= 1, got {self.coefficient_height}")

    @classmethod
    def from_config(cls, conic_config: dict | None) -> ConicConfig:
        conic_config = conic_config or {}
        return cls(
            degree_bound=int(conic_config.get("degree_bound", 6)),
            max_tower_extensions=int(conic_config.get("max_tower_extensions", 2)),
            step_budget=int(conic_config.get("step_budget", 4000)),
            coefficient_height=int(conic_config.get("coefficient_height", 5)),
        )


@dataclass(frozen=True)
class ConicInstance:
    a: CurveFunction
    b: CurveFunction
    context: str = ""

    def __post_init__(self) -> None:
        if not self.a or not self.b:
            raise ValueError("conic coefficients must be nonzero")
        if self.a.field is not self.b.field:
            raise ValueError("conic coefficients live in different fields")

    @property
    def field(self) -> CurveFunctionField:
        return self.a.field


@dataclass(frozen=True)
class ConicSolution:
    """a*y^2 + b*z^2 = w^2 over the field of y, z, w."""

    y: CurveFunction
    z: CurveFunction
    w: CurveFunction
    strategy: str
    strong: bool = True
    homogeneous: bool = True

    @property
    def tower(self) -> ConstTower:
        return self.y.field.tower

    def dehomogenize(self) -> tuple[CurveFunction, CurveFunction]:
        """(y/w, z/w), a solution of a*y^2 + b*z^2 = 1."""
        if not self.w:
            raise ZeroDivisionError("w = 0: the solution does not dehomogenize")
        return self.y / self.w, self.z / self.w

    def scaled(self, factor) -> ConicSolution:
        return ConicSolution(self.y * factor, self.z * factor, self.w * factor, self.strategy, self.strong)

    def to_dict(self) -> dict:
        return {
            "strategy": self.strategy,
            "strong": self.strong,
            "y": self.y.render(),
            "z": self.z.render(),
            "w": self.w.render(),
            "tower": self.tower.to_dict(),
        }


@dataclass(frozen=True)
class LocalObstruction:
    """A place above u = point where the residue of (a, b) is not a square."""

    point: sympy.Expr
    residue: sympy.Expr
    var: str = "u"

    def to_dict(self) -> dict:
        return {"place": f"{self.var} = {self.point}", "residue": str(self.residue)}


@dataclass(frozen=True)
class NotFoundWithinBounds:
    """The bounded search gave up.

    With no obstructions this says nothing about solvability. Listed
    obstructions hold over the final tower: no solution exists there.
    """

    steps: int
    config: ConicConfig
    strategies: tuple[str, ...] = field(default_factory=tuple)
    obstructions: tuple[LocalObstruction, ...] = ()

    def __bool__(self) -> bool:
        return False

    def to_dict(self) -> dict:
        return {
            "status": "not-found-within-bounds",
            "steps": self.steps,
            "degree_bound": self.config.degree_bound,
            "max_tower_extensions": self.config.max_tower_extensions,
            "strategies": list(self.strategies),
            "obstructions": [o.to_dict() for o in self.obstructions],
        }


# ── Square roots in the function field ────────────────────────────────


def _poly_sqrt(p, tower: ConstTower):
    """A square root of a univariate PolyElement, or None."""
    if not p:
        return p
    coeff, factors = p.sqf_list()
    if any(mult % 2 for _, mult in factors):
        return None
    dom = p.ring.domain
    root = tower.sqrt(dom.to_sympy(coeff))
    if root is None:
        return None
    out = p.ring(dom.from_sympy(root))
    for factor, mult in factors:
        out = out * factor ** (mult // 2)
    return out


def ratfunc_sqrt(g, tower: ConstTower):
    """A square root in F(t) of a FracField element, or None."""
    if not g:
        return g
    root = _poly_sqrt(g.numer * g.denom, tower)
    if root is None:
        return None
    return g.field(root) / g.field(g.denom)


def field_sqrt(s: CurveFunction) -> CurveFunction | None:
    """A square root of c + d*h in F(t)[h], or None.

    (p + q h)^2 = s forces c^2 - d^2 f = (p^2 - q^2 f)^2, so the norm must be a
    square r^2, and then p^2 is one of (c + r)/2, (c - r)/2.
    """
    fld = s.field
    tower = fld.tower
    if not s:
        return fld.zero
    if not s.d:
        p = ratfunc_sqrt(s.c, tower)
        if p is not None:
            return fld.element(p)
        q = ratfunc_sqrt(s.c / fld.f, tower)
        return None if q is None else fld.element(0, q)
    r = ratfunc_sqrt(s.norm(), tower)
    if r is None:
        return None
    for half in ((s.c + r) / 2, (s.c - r) / 2):
        p = ratfunc_sqrt(half, tower)
        if not p:
            continue
        root = fld.element(p, s.d / (2 * p))
        if root * root == s:
            return root
    return None


def verify_solution(inst: ConicInstance, sol: ConicSolution) -> bool:
    """Exact substitution check of a*y^2 + b*z^2 = w^2 and the nonvanishing flags."""
    fld = sol.y.field
    if sol.z.field is not fld or sol.w.field is not fld:
        return False
    try:
        a = fld.convert(inst.a)
        b = fld.convert(inst.b)
    except (ValueError, TypeError):
        return False
    if not (sol.y or sol.z or sol.w):
        return False
    if sol.strong and not (sol.y and sol.z and sol.w):
        return False
    return a * sol.y * sol.y + b * sol.z * sol.z == sol.w * sol.w


# ── Strategies ─────────────────────────────────────────────────────────


def _equal_coefficients(inst: ConicInstance, cfg: ConicConfig) -> ConicSolution | None:
    """a = b: (y + i z)(y - i z) = 1/a with y = (1/a + 1)/2, z = -i(1/a - 1)/2."""
    if inst.a != inst.b:
        return None
    fld = inst.field
    tower, i = fld.tower.with_sqrt(-1)
    if len(tower.adjunctions) - len(fld.tower.adjunctions) > cfg.max_tower_extensions:
        return None
    big = fld.extend(tower) if tower is not fld.tower else fld
    inv = 1 / big.convert(inst.a)
    y = (inv + 1) / 2
    z = big.constant(-i) * (inv - 1) / 2
    if not (y and z):
        return None
    return ConicSolution(y, z, big.one, "equal-coefficients")


def _doubling_identity(inst: ConicInstance, cfg: ConicConfig) -> ConicSolution | None:
    """x(2R)(2y_R)^2 + 8b x(R) = (x_R^2 - a)^2 for R on the curve."""
    for swapped in (False, True):
        big_x, small_x = (inst.b, inst.a) if swapped else (inst.a, inst.b)
        sol = _doubling_for(big_x, small_x, inst, cfg, swapped)
        if sol is not None:
            return sol
    return None


def _doubling_for(double_x, base_x, inst: ConicInstance, cfg: ConicConfig, swapped: bool) -> ConicSolution | None:
    fld = inst.field
    params = fld.params
    y_base = field_sqrt(params.rhs(base_x))
    if y_base is None or not y_base:
        return None
    doubled = ec_double(CurvePoint(base_x, y_base), params)
    if doubled.is_infinity or doubled.x != double_x:
        return None
    tower, root = fld.tower.with_sqrt(8 * params.b)
    if len(tower.adjunctions) - len(fld.tower.adjunctions) > cfg.max_tower_extensions:
        return None
    big = fld.extend(tower) if tower is not fld.tower else fld
    two_y = big.convert(y_base) * 2
    const = big.constant(root)
    w = big.convert(base_x) ** 2 - params.a
    if not w:
        return None
    y, z = (const, two_y) if swapped else (two_y, const)
    return ConicSolution(y, z, w, "doubling-identity")


def _candidate_elements(fld: CurveFunctionField, degree_bound: int) -> list[CurveFunction]:
    """1, t, v, t^2, t v, ... ordered by pole order at infinity (t has 2, h has 3)."""
    out = []
    for pole in range(0, 2 * degree_bound + 1):
        if pole % 2 == 0:
            out.append(fld.x ** (pole // 2))
        elif pole >= 3:
            out.append(fld.y * fld.x ** ((pole - 3) // 2))
    return out


def _constant_pairs(height: int) -> Iterator[tuple[int, int]]:
    for top in range(1, height + 1):
        for y in range(1, top + 1):
            zs = range(1, top + 1) if y == top else (top,)
            for z in zs:
                yield y, z


def _search_pairs(fld: CurveFunctionField, cfg: ConicConfig) -> Iterator[tuple[CurveFunction, CurveFunction]]:
    h = cfg.coefficient_height
    for y, z in _constant_pairs(h * h):
        yield fld.constant(y), fld.constant(z)
    elements = _candidate_elements(fld, cfg.degree_bound)
    coefficients = [c for k in range(1, h + 1) for c in (k, -k)]
    for e1 in elements:
        for e2 in elements:
            if e1.is_constant() and e2.is_constant():
                continue
            for c in coefficients:
                yield e1, e2 * c
    for e1, e2 in combinations(elements, 2):
        for c in coefficients:
            yield e1 + e2 * c, fld.one


def _towers(base: ConstTower, room: int) -> Iterator[ConstTower]:
    yield base
    seen = {base.describe()}
    for size in range(1, room + 1):
        for radicands in combinations(EXTENSION_POOL, size):
            tower = base
            for value in radicands:
                tower = tower.adjoin_sqrt(value)
            if len(tower.adjunctions) - len(base.adjunctions) != size or tower.describe() in seen:
                continue
            seen.add(tower.describe())
            yield tower


def _bounded_search(inst: ConicInstance, cfg: ConicConfig, room: int) -> tuple[ConicSolution | None, int]:
    fld = inst.field
    steps = 0
    for tower in _towers(fld.tower, room):
        big = fld.extend(tower) if tower is not fld.tower else fld
        a = big.convert(inst.a)
        b = big.convert(inst.b)
        for y, z in _search_pairs(big, cfg):
            if steps >= cfg.step_budget:
                return None, steps
            steps += 1
            w = field_sqrt(a * y * y + b * z * z)
            if w:
                log.debug("conic search hit after %d steps over %s", steps, tower.describe())
                return ConicSolution(y, z, w, "bounded-search"), steps
    return None, steps


# ── Local residues ─────────────────────────────────────────────────────


def _odd_rational_points(fs, fld: CurveFunctionField) -> list[sympy.Expr]:
    """Rational roots of the odd-multiplicity parts of numerators and denominators."""
    points = set()
    for g in fs:
        for p in (g.numer, g.denom):
            for factor, mult in p.sqf_list()[1]:
                if mult % 2 == 0 or factor.degree() < 1:
                    continue
                try:
                    rational = Poly(factor.as_expr(), fld.symbol, domain=QQ)
                except BasePolynomialError:
                    continue
                points.update(rational.ground_roots())
    return sorted(points)


def local_obstructions(inst: ConicInstance) -> list[LocalObstruction]:
    """Places above rational u = theta where the tame symbol of (a, b) is not a square.

    The residue field there is the tower, or the tower with sqrt f(theta)
    adjoined. Only coefficients in F(u) are examined; an empty list proves
    nothing.
    """
    a, b = inst.a, inst.b
    if a.d or b.d:
        return []
    fld = inst.field
    tower = fld.tower
    dom = fld.ring.domain
    u = fld.ring.gens[0]
    out = []
    for theta in _odd_rational_points((a.c, b.c), fld):
        value = fld.params.rhs(theta)
        if value == 0:
            # ramified: both orders are even there
            continue
        residue = tame_symbol(a.c, b.c, u - dom.from_sympy(theta))
        if tower.sqrt(residue) is not None:
            continue
        if tower.sqrt(value) is None and tower.sqrt(residue * value) is not None:
            continue
        out.append(LocalObstruction(theta, residue, fld.var))
    return out


def _clear_obstructions(inst: ConicInstance, room: int) -> tuple[ConicInstance, list[LocalObstruction]]:
    """Adjoin the square roots local residues demand, up to room of them."""
    work = inst
    while True:
        found = local_obstructions(work)
        if not found or room == 0:
            return work, found
        fld = work.field
        tower = fld.tower.adjoin_sqrt(found[0].residue)
        log.debug("residue %s at %s needs sqrt over %s", found[0].residue, found[0].point, fld.tower.describe())
        big = fld.extend(tower)
        work = ConicInstance(big.convert(inst.a), big.convert(inst.b), inst.context)
        room -= 1


# ── Coefficient elimination ────────────────────────────────────────────

_LAM = sympy.Symbol("lam")


def _shapes(degree_bound: int) -> Iterator[tuple[bool, int, int, int]]:
    """(swapped, i, j, k): one side is u^i, the other u^j + lam*u^k."""
    for swapped in (False, True):
        for i in range(degree_bound + 1):
            for j in range(degree_bound + 1):
                for k in range(degree_bound + 1):
                    if k != j:
                        yield swapped, i, j, k


def _lift(p, R, source_dom):
    dom = R.domain
    return R.from_dict({(exp[0], 0): dom.from_sympy(source_dom.to_sympy(c)) for exp, c in p.terms()})


def _lam_coefficients(s, dom) -> dict[int, Poly]:
    """s(u, lam) as {degree in u: coefficient in dom[lam]}."""
    grouped: dict[int, dict] = {}
    for (du, dl), c in s.terms():
        grouped.setdefault(du, {})[(dl,)] = c
    return {du: Poly.from_dict(rep, _LAM, domain=dom) for du, rep in grouped.items()}


def _lam_roots(g: Poly, tower: ConstTower, room: int) -> list[tuple[ConstTower, sympy.Expr]]:
    out = []
    for factor, _ in g.factor_list()[1]:
        if factor.degree() == 1:
            c1, c0 = factor.all_coeffs()
            out.append((tower, sympy.radsimp(-c0 / c1)))
        elif factor.degree() == 2 and room > 0:
            c2, c1, c0 = factor.all_coeffs()
            bigger, root = tower.with_sqrt(sympy.radsimp(c1**2 - 4 * c2 * c0))
            out.append((bigger, sympy.radsimp((-c1 + root) / (2 * c2))))
    return out


def _pivot_values(first, second, shape, with_f: bool, fld, tower: ConstTower, room: int):
    """Values of lam making first*u^(2i) + second*(u^j + lam*u^k)^2 (times f) a square.

    The square root w is solved coefficient by coefficient from the top; that
    needs a leading coefficient free of lam. The coefficients below the middle
    are then polynomial conditions on lam, and their gcd gives its values.
    """
    _, i, j, k = shape
    source = fld.ring.domain
    dom = tower.domain
    R, U, L = ring("u,lam", dom)
    s = _lift(first, R, source) * U ** (2 * i) + _lift(second, R, source) * (U**j + L * U**k) ** 2
    if with_f:
        s = s * _lift(fld.f_poly, R, source)
    t = _lam_coefficients(s, dom)
    if not t:
        return []
    top = max(t)
    if top % 2 or not t[top].is_ground:
        return []
    lead = t[top].LC()
    root = tower.sqrt(lead)
    if root is None:
        if room == 0:
            return []
        bigger, _ = tower.with_sqrt(lead)
        return _pivot_values(first, second, shape, with_f, fld, bigger, room - 1)

    zero = Poly(0, _LAM, domain=dom)
    half = top // 2
    inv = Poly(sympy.radsimp(1 / (2 * root)), _LAM, domain=dom)
    omega = {half: Poly(root, _LAM, domain=dom)}
    for step in range(1, half + 1):
        acc = t.get(top - step, zero)
        for jj in range(1, step):
            acc = acc - omega[half - jj] * omega[half - step + jj]
        omega[half - step] = acc * inv
    conditions = []
    for n in range(half):
        acc = t.get(n, zero)
        for p in range(n + 1):
            acc = acc - omega[p] * omega[n - p]
        if not acc.is_zero:
            conditions.append(acc)
    if not conditions:
        return [(tower, sympy.Integer(0))]
    g = reduce(lambda p, q: p.gcd(q), conditions)
    if g.is_ground:
        return []
    return _lam_roots(g, tower, room)


def _assemble(inst: ConicInstance, tower: ConstTower, shape, lam) -> ConicSolution | None:
    swapped, i, j, k = shape
    fld = inst.field
    big = fld.extend(tower) if tower is not fld.tower else fld
    a = big.convert(inst.a)
    b = big.convert(inst.b)
    u = big.x
    fixed = u**i
    moving = u**j + big.constant(lam) * u**k
    y, z = (moving, fixed) if swapped else (fixed, moving)
    y = y * big.element(a.c.denom)
    z = z * big.element(b.c.denom)
    w = field_sqrt(a * y * y + b * z * z)
    if not w:
        return None
    sol = ConicSolution(y, z, w, "elimination")
    return sol if verify_solution(inst, sol) else None


def _elimination_search(inst: ConicInstance, cfg: ConicConfig, room: int) -> tuple[ConicSolution | None, int]:
    """y, z in F[u] after clearing denominators; w in F[u] or h*F[u]."""
    fld = inst.field
    cleared = {side: g.c.numer * g.c.denom for side, g in (("a", inst.a), ("b", inst.b))}
    steps = 0
    for shape in _shapes(cfg.degree_bound):
        first, second = (cleared["b"], cleared["a"]) if shape[0] else (cleared["a"], cleared["b"])
        for with_f in (False, True):
            if steps >= cfg.step_budget:
                return None, steps
            steps += 1
            for tower, lam in _pivot_values(first, second, shape, with_f, fld, fld.tower, room):
                sol = _assemble(inst, tower, shape, lam)
                if sol is not None:
                    log.debug("elimination hit after %d steps with shape %s over %s", steps, shape, tower.describe())
                    return sol, steps
    return None, steps


def solve_conic(inst: ConicInstance, cfg: ConicConfig | None = None) -> ConicSolution | NotFoundWithinBounds:
    """A verified strong solution, or NotFoundWithinBounds."""
    cfg = cfg or ConicConfig()
    tried = []
    for name, strategy in (("equal-coefficients", _equal_coefficients), ("doubling-identity", _doubling_identity)):
        tried.append(name)
        sol = strategy(inst, cfg)
        if sol is not None and verify_solution(inst, sol):
            return sol

    work, obstructions = _clear_obstructions(inst, cfg.max_tower_extensions)
    if obstructions:
        first = obstructions[0]
        log.info("no conic solution for %s: residue %s at %s", inst.context or "instance", first.residue, first.point)
        return NotFoundWithinBounds(0, cfg, tuple(tried), tuple(obstructions))
    room = cfg.max_tower_extensions - (len(work.field.tower.adjunctions) - len(inst.field.tower.adjunctions))
    if work.a.d or work.b.d:
        tried.append("bounded-search")
        sol, steps = _bounded_search(work, cfg, room)
    else:
        tried.append("elimination")
        sol, steps = _elimination_search(work, cfg, room)
    if sol is not None and verify_solution(inst, sol):
        return sol
    log.info("no conic solution for %s within %d steps", inst.context or "instance", steps)
    return NotFoundWithinBounds(steps, cfg, tuple(tried))


def conic_over(field: CurveFunctionField, a, b, context: str = "") -> ConicInstance:
    """Instance with coefficients given as field elements or sympy expressions in the field variables."""
    a = a if isinstance(a, CurveFunction) else field.from_expr(sympy.sympify(a))
    b = b if isinstance(b, CurveFunction) else field.from_expr(sympy.sympify(b))
    return ConicInstance(a, b, context)


__all__ = [
    "ConicConfig",
    "ConicInstance",
    "ConicSolution",
    "LocalObstruction",
    "NotFoundWithinBounds",
    "conic_over",
    "field_sqrt",
    "local_obstructions",
    "ratfunc_sqrt",
    "solve_conic",
    "verify_solution",
]
