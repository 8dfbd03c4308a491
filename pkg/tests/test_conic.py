import random

import pytest
from sympy import Integer, Rational, Symbol

from conic.solver import (
    ConicConfig,
    ConicInstance,
    ConicSolution,
    LocalObstruction,
    NotFoundWithinBounds,
    conic_over,
    field_sqrt,
    local_obstructions,
    solve_conic,
    verify_solution,
)
from curve.group import ec_mul
from curve.params import CurveParams
from divisibility.engine import conic_field

PARAMS = CurveParams()


@pytest.fixture
def fld():
    return conic_field(PARAMS)


def test_field_sqrt(fld) -> None:
    root = field_sqrt(fld.x * fld.x)
    assert root * root == fld.x * fld.x
    assert field_sqrt(fld.y * fld.y) * field_sqrt(fld.y * fld.y) == fld.y * fld.y
    assert field_sqrt(fld.x) is None
    assert field_sqrt(fld.zero) == fld.zero
    s = (fld.x + fld.y) * (fld.x + fld.y)
    assert field_sqrt(s) * field_sqrt(s) == s


def test_equal_coefficients(fld) -> None:
    inst = ConicInstance(fld.x, fld.x, context="equal")
    sol = solve_conic(inst)
    assert sol.strategy == "equal-coefficients"
    assert verify_solution(inst, sol)
    assert sol.tower.describe() == "QQ(sqrt(-1))"


@pytest.mark.parametrize("j", [2, 4])
def test_doubling_identity(fld, j) -> None:
    R = ec_mul(j // 2, fld.point, PARAMS)
    inst = ConicInstance(ec_mul(2, R, PARAMS).x, R.x)
    sol = solve_conic(inst)
    assert sol.strategy == "doubling-identity"
    assert verify_solution(inst, sol)
    y, z = sol.dehomogenize()
    a, b = sol.y.field.convert(inst.a), sol.y.field.convert(inst.b)
    assert a * y * y + b * z * z == sol.y.field.one


def test_doubling_identity_with_swapped_coefficients(fld) -> None:
    inst = ConicInstance(fld.x, ec_mul(2, fld.point, PARAMS).x)
    sol = solve_conic(inst)
    assert sol.strategy == "doubling-identity"
    assert verify_solution(inst, sol)


def test_elimination_over_the_base_field(fld) -> None:
    inst = conic_over(fld, "u", 1)
    sol = solve_conic(inst)
    assert sol.strategy == "elimination"
    assert sol.tower.describe() == "QQ"
    assert verify_solution(inst, sol)


def test_elimination_after_adjoining_the_residue_root(fld) -> None:
    inst = conic_over(fld, "u", -1)
    sol = solve_conic(inst)
    assert sol.strategy == "elimination"
    assert sol.tower.describe() == "QQ(sqrt(-1))"
    assert verify_solution(inst, sol)


def test_residue_obstruction_without_room_to_extend(fld) -> None:
    result = solve_conic(conic_over(fld, "u", -1), ConicConfig(max_tower_extensions=0))
    assert isinstance(result, NotFoundWithinBounds)
    assert result.steps == 0
    assert result.obstructions == (LocalObstruction(Integer(0), Integer(-1)),)
    assert result.to_dict()["obstructions"] == [{"place": "u = 0", "residue": "-1"}]


def test_local_residues_of_multiple_coefficients(fld) -> None:
    Q = fld.point
    doubled = ConicInstance(ec_mul(2, Q, PARAMS).x, Q.x)
    quadrupled = ConicInstance(ec_mul(4, Q, PARAMS).x, Q.x)
    assert local_obstructions(doubled) == []
    assert LocalObstruction(Integer(0), Rational(-287, 1296)) in local_obstructions(quadrupled)


def test_bounded_search_for_coefficients_with_an_h_part(fld) -> None:
    inst = conic_over(fld, "v", "u**3 + u + 1 - v")
    sol = solve_conic(inst)
    assert sol.strategy == "bounded-search"
    assert verify_solution(inst, sol)


def test_search_gives_up_within_budget(fld) -> None:
    cfg = ConicConfig(step_budget=1, max_tower_extensions=0)
    result = solve_conic(ConicInstance(fld.x, -fld.x), cfg)
    assert isinstance(result, NotFoundWithinBounds)
    assert not result
    assert result.steps == 1
    assert result.obstructions == ()
    assert result.to_dict()["status"] == "not-found-within-bounds"
    assert result.strategies == ("equal-coefficients", "doubling-identity", "elimination")


def test_verify_pythagorean_constants(fld) -> None:
    inst = conic_over(fld, 1, 1)
    y, z = fld.from_expr(Rational(3, 5)), fld.from_expr(Rational(4, 5))
    assert verify_solution(inst, ConicSolution(y, z, fld.one, "manual"))
    assert not verify_solution(inst, ConicSolution(y + fld.one, z, fld.one, "manual"))


def test_scaled_solutions_still_verify(fld) -> None:
    inst = ConicInstance(fld.x, fld.x)
    sol = solve_conic(inst)
    factor = sol.y.field.convert(fld.x + fld.one)
    assert verify_solution(inst, sol.scaled(factor))


def test_verify_rejects_wrong_and_trivial_solutions(fld) -> None:
    inst = ConicInstance(fld.x, fld.x)
    assert not verify_solution(inst, ConicSolution(fld.one, fld.one, fld.one, "manual"))
    assert not verify_solution(inst, ConicSolution(fld.zero, fld.zero, fld.zero, "manual", strong=False))


def test_zero_coefficient_rejected(fld) -> None:
    with pytest.raises(ValueError):
        ConicInstance(fld.zero, fld.x)


@pytest.mark.parametrize(
    "key, value",
    [("degree_bound", 0), ("max_tower_extensions", -1), ("step_budget", 0), ("coefficient_height", 0)],
)
def test_config_validation(key, value) -> None:
    with pytest.raises(ValueError):
        ConicConfig.from_config({key: value})


def test_equal_coefficients_for_random_coefficients(fld) -> None:
    rng = random.Random(11)
    u, v = Symbol("u"), Symbol("v")
    for _ in range(20):
        num = sum(rng.randint(-4, 4) * u**e for e in range(3)) + rng.randint(-2, 2) * v
        a = num / (u + rng.randint(1, 5))
        if a in (0, 1, -1):
            continue
        inst = conic_over(fld, a, a)
        sol = solve_conic(inst)
        assert sol.strategy == "equal-coefficients"
        assert verify_solution(inst, sol)
