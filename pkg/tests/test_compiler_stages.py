import random

import pytest
import sympy
from sympy import Poly, Rational

from compiler.lower import (
    FIELD_SYMBOLS,
    H1,
    H2,
    K_SORT,
    L_SORT,
    Z1,
    Z2,
    CombinerRejected,
    check_combiner,
    clear_denominators,
    h_components,
    stage4_lower,
)
from compiler.parser import parse
from compiler.points import (
    HALF1,
    HALF2,
    LANE1,
    LANE2,
    GroundDivides,
    IsIdentity,
    Membership,
    PointSum,
    QuadEq,
    stage3_points,
)
from compiler.restrict import component_names, stage5_restrict
from compiler.sformula import Divides, PairConst, PairVar, SFormula
from compiler.stage1 import stage1_int_to_S
from compiler.stage2 import stage2_eliminate
from compiler.syntax import Conj, Disj, atoms
from curve.ltower import LTower
from curve.params import CurveParams
from divisibility.config import EngineConfig

CFG = EngineConfig()
PARAMS = CurveParams()
F1 = Z1**3 + Z1 + 1


def _points(text: str):
    s2 = stage2_eliminate(stage1_int_to_S(parse(text)), CFG)
    return stage3_points(s2, CFG)


@pytest.fixture(scope="module")
def simple():
    pf = _points("exists x . x = 1")
    sys4 = stage4_lower(pf, PARAMS)
    return pf, sys4, stage5_restrict(sys4)


# ── stage 3 ──


def test_lane_points_and_memberships(simple) -> None:
    pf, _, _ = simple
    assert pf.lanes == {"x": ("_x_1", "_x_2")}
    assert pf.role("_x_1") == LANE1
    assert pf.role("_x_2") == LANE2
    memberships = [n for n in atoms(pf.body) if isinstance(n, Membership)]
    assert [(m.point, m.lane) for m in memberships] == [("_x_1", 1), ("_x_2", 2)]
    assert pf.role(memberships[0].half) == HALF1
    assert pf.role(memberships[1].half) == HALF2


def test_z_becomes_identity_of_the_second_lane(simple) -> None:
    pf, _, _ = simple
    assert IsIdentity("_x_2") in list(atoms(pf.body))


def test_plus_becomes_lane_sums(simple) -> None:
    pf, _, _ = simple
    sums = [n for n in atoms(pf.body) if isinstance(n, PointSum)]
    assert PointSum("P1", "_x_1", "O") in sums
    assert PointSum("O", "_x_2", "O") in sums


def test_constants_use_doubling_chains() -> None:
    pf = _points("exists x . x + x = 4")
    sums = [n for n in atoms(pf.body) if isinstance(n, PointSum)]
    assert PointSum("_s1", "P1", "P1") in sums
    assert PointSum("_s2", "_s1", "_s1") in sums
    assert PointSum("_s2", "_x_1", "_x_1") in sums


def test_ground_divisibility_expansion() -> None:
    f = SFormula(("n",), Divides(PairConst(2, 1), PairVar("n"), safe=True))
    pf = stage3_points(f, CFG)
    (ground,) = [n for n in atoms(pf.body) if isinstance(n, GroundDivides)]
    assert ground.atom == f.body
    quads = [n for n in _walk(ground.body) if isinstance(n, QuadEq)]
    assert [q.k for q in quads] == [1, 2]
    assert len(ground.chain) == 2
    assert PointSum(ground.chain[1], ground.chain[0], ground.chain[0]) in list(_walk(ground.body))
    assert len(pf.quad_vars) == 4


def _walk(node):
    if isinstance(node, (Conj, Disj)):
        for item in node.items:
            yield from _walk(item)
    elif isinstance(node, (Membership, GroundDivides)):
        yield node
        yield from _walk(node.body)
    else:
        yield node


# ── stage 4 ──


def test_stage4_sorts(simple) -> None:
    pf, sys4, _ = simple
    sorts = sys4.sorts
    assert sorts["_x_1_x"] == L_SORT
    assert sorts["_x_1_s"] == K_SORT
    half = [name for name, role in pf.points if role == HALF1][0]
    assert sorts[f"{half}_wx"] == K_SORT
    assert sorts[f"{half}_wy"] == K_SORT
    assert not sys4.restricted
    assert sys4.relations == (H1**2 - F1, H2**2 - (Z2**3 + Z2 + 1))


def test_stage4_equations_are_integral_polynomials(simple) -> None:
    _, sys4, _ = simple
    assert len(sys4.equations) == len(sys4.provenance) > 0
    gens = sys4.gens
    for expr in sys4.equations:
        assert expr.free_symbols <= set(gens)
        poly = Poly(expr, *gens)
        assert all(c.is_Integer for c in poly.coeffs())


def test_stage4_auxiliaries_are_declared(simple) -> None:
    _, sys4, _ = simple
    declared = set(sys4.sorts)
    for symbol, _ in sys4.record.definitions:
        assert symbol.name in declared
    for _, aux in sys4.record.sums:
        for lam, iota in aux.values():
            assert lam.name in declared and iota.name in declared


def test_stage4_sum_cases_are_pruned(simple) -> None:
    _, sys4, _ = simple
    # P1 = _x_1 + O: the right operand is the identity, so no slope is ever needed
    node, aux = next((n, a) for n, a in sys4.record.sums if n == PointSum("P1", "_x_1", "O"))
    assert aux == {}


def test_h_components_reduce_powers() -> None:
    assert h_components(H1**3, PARAMS) == (0, sympy.expand(F1), 0, 0)
    assert h_components(H1**2 * H2, PARAMS) == (0, 0, sympy.expand(F1), 0)
    assert h_components(Z1 + Z2, PARAMS) == (Z1 + Z2, 0, 0, 0)


def test_clear_denominators() -> None:
    assert clear_denominators(Z1 / 2 + Rational(1, 3)) == 3 * Z1 + 2
    assert clear_denominators(sympy.Integer(0)) == 0
    assert clear_denominators(Rational(1, 2)) == 1


def test_combiner_checks() -> None:
    witness = check_combiner(Z1, PARAMS)
    assert witness.order % 2 == 1
    for bad in (sympy.Integer(1), Z1**2, -sympy.Integer(1), Z1 * H1):
        with pytest.raises(CombinerRejected):
            check_combiner(bad, PARAMS)


def test_stage4_rejects_bad_combiner(simple) -> None:
    pf, _, _ = simple
    with pytest.raises(CombinerRejected):
        stage4_lower(pf, PARAMS, combiner="z1**2")


# ── stage 5 ──


def test_restricted_system_lives_over_k(simple) -> None:
    _, sys4, sys5 = simple
    assert sys5.restricted and sys5.parent is sys4
    assert all(sort == K_SORT for _, sort in sys5.variables)
    names = {name for name, _ in sys5.variables}
    assert set(component_names("_x_1_x")) <= names
    assert "_x_1_s" in names
    for expr in sys5.equations:
        assert not expr.has(H1, H2)
        assert expr.free_symbols <= set(sys5.gens)
    assert all(origin.endswith(">") for origin in sys5.provenance)
    with pytest.raises(ValueError):
        stage5_restrict(sys5)


def test_component_names() -> None:
    assert component_names("v") == ("v_0", "v_1", "v_2", "v_3")


def test_defining_relation_restricts_to_nothing() -> None:
    assert all(part == 0 for part in h_components(H1**2 - F1, PARAMS))


def test_components_respect_multiplication() -> None:
    rng = random.Random(7)
    L = LTower(PARAMS)
    basis = (1, H1, H2, H1 * H2)
    for _ in range(10):
        u = sum(rng.randint(-3, 3) * Z1 ** rng.randint(0, 2) * Z2 ** rng.randint(0, 1) * b for b in basis)
        v = sum(rng.randint(-3, 3) * Z2 ** rng.randint(0, 2) * b for b in basis)
        product = L.from_expr(u) * L.from_expr(v)
        for part, coord in zip(h_components(u * v, PARAMS), product.coords):
            assert sympy.cancel(part - coord.as_expr()) == 0


def test_stage4_field_symbols_only_in_coefficients(simple) -> None:
    _, sys4, _ = simple
    variables = {sympy.Symbol(name) for name, _ in sys4.variables}
    for expr in sys4.equations:
        assert expr.free_symbols - variables <= FIELD_SYMBOLS
