import random

import pytest

from curve.errors import ExceptionalPoint
from curve.group import POINT_CACHE_SIZE
from curve.params import CurveParams
from divisors.function import CurveFunctionField, pullback_x
from divisors.places import INFINITY_PLACE, SPLIT, NonSquareWitness, Square, divisor_of, is_square_over_closure, square_classes_distinct


@pytest.fixture
def fld() -> CurveFunctionField:
    return CurveFunctionField.with_sqrt_b(CurveParams())


def test_function_field_relation(fld) -> None:
    assert fld.y * fld.y == fld.x**3 + fld.x + 1
    g = fld.x + fld.y
    assert g * g.inverse() == fld.one
    assert fld.from_expr("z1^2 + h1") == fld.x * fld.x + fld.y


def test_divisor_of_x(fld) -> None:
    divisor = divisor_of(fld.x)
    assert divisor.degree == 0
    assert divisor.order_at(INFINITY_PLACE) == -2
    zeros = divisor.zeros()
    assert [order for _, order in zeros] == [1, 1]
    assert all(place.kind == SPLIT for place, _ in zeros)
    assert divisor.zero_count() == 2
    assert divisor.pole_count() == 2


def test_divisor_of_y_is_ramified(fld) -> None:
    divisor = divisor_of(fld.y)
    assert divisor.degree == 0
    assert divisor.order_at(INFINITY_PLACE) == -3
    assert divisor.zero_count() == 3


@pytest.mark.parametrize("s, r", [(1, 0), (2, 0), (1, 1)])
def test_pullback_has_two_s_squared_simple_zeros(fld, s, r) -> None:
    divisor = divisor_of(pullback_x(s, r, fld))
    assert divisor.degree == 0
    assert divisor.zero_count() == 2 * s * s
    assert all(order == 1 for _, order in divisor.zeros())


def test_pullback_exceptional(fld) -> None:
    with pytest.raises(ExceptionalPoint):
        pullback_x(0, 0, fld)
    with pytest.raises(ExceptionalPoint):
        pullback_x(0, 1, fld)


def test_divisor_arithmetic(fld) -> None:
    dx = divisor_of(fld.x)
    assert divisor_of(fld.x * fld.x) == dx + dx
    assert divisor_of(fld.one / fld.x) == -dx
    assert (dx - dx).degree == 0
    with pytest.raises(ValueError):
        divisor_of(fld.zero)


def test_square_decisions(fld) -> None:
    verdict = is_square_over_closure(fld.x)
    assert isinstance(verdict, NonSquareWitness)
    assert verdict.order == 1
    assert isinstance(is_square_over_closure(fld.x * fld.x), Square)
    assert isinstance(is_square_over_closure(fld.y), NonSquareWitness)


def test_square_classes(fld) -> None:
    report = square_classes_distinct([fld.x, fld.x**3])
    assert not report
    assert report.failing_pairs() == [(1, 2)]

    report = square_classes_distinct([fld.x, fld.x + 1, fld.y])
    assert report
    assert report.to_dict()["distinct"] is True
    assert len(report.witnesses) == 3


def test_divisor_to_dict(fld) -> None:
    data = divisor_of(fld.x).to_dict()
    assert data["degree"] == 0
    assert data["places"][0] == ("O", -2)


def _random_function(rng: random.Random, fld):
    f = fld.one * rng.choice([1, -2, 3])
    for t in rng.sample(range(-3, 4), 2):
        f = f * (fld.x - t) ** rng.choice([-1, 1, 2])
    if rng.random() < 0.5:
        f = f * fld.y
    return f


def test_divisor_of_a_product_is_the_sum(fld) -> None:
    rng = random.Random(5)
    for _ in range(8):
        f, g = _random_function(rng, fld), _random_function(rng, fld)
        assert divisor_of(f * g) == divisor_of(f) + divisor_of(g)
        assert divisor_of(f * g).degree == 0


def test_squares_of_random_functions_are_squares(fld) -> None:
    rng = random.Random(6)
    for _ in range(8):
        f = _random_function(rng, fld) + rng.randint(1, 3) * fld.y
        assert isinstance(is_square_over_closure(f * f), Square)


def test_pullback_points_are_cached_within_a_bound(fld) -> None:
    point = fld.pullback_point(1, 1)
    assert fld.pullback_point(1, 1) is point
    assert fld.pullback_point.cache_info().maxsize == POINT_CACHE_SIZE
