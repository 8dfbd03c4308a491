import random

import pytest
import sympy
from sympy import Integer, Rational

from curve.errors import ExceptionalPoint
from curve.group import INFINITY, POINT_CACHE_SIZE, CurvePoint, ec_add, ec_double, ec_mul, ec_neg, ec_sub, on_curve
from curve.ltower import LTower, combination_point
from curve.params import CurveParams

PARAMS = CurveParams()
P = CurvePoint(Integer(0), Integer(1))


def test_doubling_the_rational_point() -> None:
    assert ec_double(P, PARAMS) == CurvePoint(Rational(1, 4), Rational(-9, 8))


def test_first_multiples_are_distinct_and_on_curve() -> None:
    multiples = [ec_mul(k, P, PARAMS) for k in range(1, 13)]
    assert all(on_curve(Q, PARAMS) for Q in multiples)
    assert all(not Q.is_infinity for Q in multiples)
    xs = {(Q.x, Q.y) for Q in multiples}
    assert len(xs) == 12


def test_identity_and_inverse() -> None:
    assert ec_add(P, INFINITY, PARAMS) == P
    assert ec_add(INFINITY, P, PARAMS) == P
    assert ec_add(P, ec_neg(P), PARAMS).is_infinity
    assert ec_sub(P, P, PARAMS).is_infinity
    assert ec_mul(0, P, PARAMS).is_infinity
    assert ec_mul(-2, P, PARAMS) == ec_neg(ec_mul(2, P, PARAMS))


def test_addition_is_associative_and_matches_multiplication() -> None:
    P2, P3 = ec_mul(2, P, PARAMS), ec_mul(3, P, PARAMS)
    left = ec_add(ec_add(P, P2, PARAMS), P3, PARAMS)
    right = ec_add(P, ec_add(P2, P3, PARAMS), PARAMS)
    assert left == right == ec_mul(6, P, PARAMS)


@pytest.mark.parametrize(
    "a, b, sign",
    [(1, 0, 1), (-3, 2, 1), (1, 1, 2)],
)
def test_invalid_curve_params(a, b, sign) -> None:
    with pytest.raises(ValueError):
        CurveParams(a=Integer(a), b=Integer(b), sqrt_b_sign=sign)


def test_params_from_config_and_sqrt_b() -> None:
    params = CurveParams.from_config({"a": 2, "b": 3, "sqrt_b_sign": -1})
    assert params.to_dict() == {"a": "2", "b": "3", "sqrt_b_sign": -1}
    tower, root = params.sqrt_b()
    assert tower.degree == 2
    assert sympy.simplify(root + sympy.sqrt(3)) == 0
    assert CurveParams().sqrt_b() == (CurveParams().tower, 1)


def test_l_tower_relations() -> None:
    L = LTower(PARAMS)
    assert L.h1 * L.h1 == L.element(L.f1)
    assert L.h2 * L.h2 == L.element(L.f2)
    u = L.z1 + L.h1 * L.h2
    assert u * u.inverse() == L.one
    assert L.from_expr(sympy.Symbol("h1") ** 2 - sympy.Symbol("z1") ** 3) == L.element(L.kz1 + 1)


def test_base_points_are_on_the_curve() -> None:
    L = LTower(PARAMS)
    assert on_curve(L.P1, PARAMS)
    assert on_curve(L.P2, PARAMS)
    assert on_curve(combination_point(1, 1, L), PARAMS)
    assert combination_point(0, 0, L).is_infinity


def test_combination_commutes_with_lanes() -> None:
    L = LTower(PARAMS)
    lhs = ec_add(combination_point(1, 0, L), combination_point(0, 1, L), PARAMS)
    assert lhs == combination_point(1, 1, L)
    assert combination_point(2, 0, L) == ec_double(L.P1, PARAMS)


def test_x_combination_rejects_infinity() -> None:
    L = LTower(PARAMS)
    with pytest.raises(ExceptionalPoint) as info:
        L.x_combination(0, 0)
    assert info.value.pair == (0, 0)


def _random_l_element(rng: random.Random, L: LTower):
    z1, z2, h1, h2 = L.z1, L.z2, L.h1, L.h2
    monomials = (L.one, z1, z2, h1, h2, z1 * h2, h1 * h2, z2 * z2)
    return sum((rng.randint(-3, 3) * m for m in rng.sample(monomials, 3)), L.zero)


def test_l_arithmetic_satisfies_the_field_axioms() -> None:
    rng = random.Random(2)
    L = LTower(PARAMS)
    for _ in range(8):
        a, b, c = (_random_l_element(rng, L) for _ in range(3))
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert a * b == b * a
        assert a - a == L.zero
        if a:
            assert a * a.inverse() == L.one


def test_combination_points_add_like_their_pairs() -> None:
    rng = random.Random(4)
    L = LTower(PARAMS)
    for _ in range(4):
        pairs = [(rng.randint(-1, 1), rng.randint(-1, 1)) for _ in range(3)]
        A, B, C = (combination_point(n, r, L) for n, r in pairs)
        left = ec_add(ec_add(A, B, PARAMS), C, PARAMS)
        right = ec_add(A, ec_add(B, C, PARAMS), PARAMS)
        total = (sum(n for n, _ in pairs), sum(r for _, r in pairs))
        assert left == right == combination_point(*total, L)


@pytest.mark.parametrize("n, r", [(1, 0), (0, 1), (1, 1), (2, -1), (-1, 2)])
def test_x_combination_is_even(n, r) -> None:
    L = LTower(PARAMS)
    assert L.x_combination(n, r) == L.x_combination(-n, -r)


def test_combination_points_are_cached_within_a_bound() -> None:
    L = LTower(PARAMS)
    first = L.combination_point(1, 1)
    assert L.combination_point(1, 1) is first
    info = L.combination_point.cache_info()
    assert (info.hits, info.misses) == (1, 1)
    assert info.maxsize == POINT_CACHE_SIZE
    assert LTower(PARAMS).combination_point.cache_info().currsize == 0
