from itertools import product

import pytest

from algebra.tower import ConstTower
from compiler.oracle import solve_sformula
from compiler.sformula import formula_holds
from conic.solver import ConicConfig
from curve.errors import ExceptionalPoint
from curve.ltower import LTower
from curve.params import CurveParams
from divisibility.config import EngineConfig
from divisibility.engine import (
    Certified,
    DivInstance,
    Inconclusive,
    PreconditionError,
    Refuted,
    build_equations,
    certify,
    decide,
    refute,
)
from divisibility.model import WindowExceeded, decode, encode_pair, halve_in_lane, window_collisions
from divisibility.templates import define_divides, define_W, define_W_unit
from valuation.wm import ValuationLab

CFG = EngineConfig()
GRID = range(-2, 3)


@pytest.fixture(scope="module")
def lab() -> ValuationLab:
    return ValuationLab(CurveParams())


@pytest.fixture(scope="module")
def tower() -> LTower:
    return LTower(CurveParams())


# ── configuration ──


def test_default_engine_config() -> None:
    assert CFG.ks == (1, 2)
    assert CFG.safe_modulus(3) == 4
    assert EngineConfig(alpha=3).ks == (1, 2, 4, 8)


@pytest.mark.parametrize(
    "kwargs",
    [
        {"alpha": 0},
        {"d": 0},
        {"m0": 0},
        {"U": frozenset({1}), "m0": 1},
        {"U": frozenset({5}), "m0": 1, "d": 2},
    ],
)
def test_engine_config_validation(kwargs) -> None:
    with pytest.raises(ValueError):
        EngineConfig(**kwargs)


def test_exceptional_modulus_rejected() -> None:
    cfg = EngineConfig(U=frozenset({2}), m0=1, d=2)
    with pytest.raises(ValueError):
        build_equations(cfg, DivInstance(2, 4, 2))


def test_from_config_reads_yaml_shapes() -> None:
    cfg = EngineConfig.from_config({"alpha": 2, "U": [0], "m0": 1, "d": 2})
    assert cfg.to_dict() == {"alpha": 2, "U": [0], "m0": 1, "d": 2}


# ── equations ──


def test_build_equations() -> None:
    bundle = build_equations(CFG, DivInstance(1, 2, 1))
    assert len(bundle) == 2
    assert [(e.k, e.a_pair, e.b_pair) for e in bundle.entries] == [(1, (2, 1), (1, 1)), (2, (4, 2), (1, 1))]


def test_build_equations_rejects_identity() -> None:
    with pytest.raises(ExceptionalPoint):
        build_equations(CFG, DivInstance(1, 0, 0))


def test_materialized_coefficients(tower) -> None:
    k, a, b = build_equations(CFG, DivInstance(1, 1, 1)).materialize(tower)[0]
    assert k == 1
    assert a == b == tower.x_combination(1, 1)


# ── verdicts ──


def test_refute_non_divisible(lab) -> None:
    verdict = refute(CFG, DivInstance(1, 2, 1), lab)
    assert isinstance(verdict, Refuted)
    assert verdict.k == 1
    data = verdict.to_dict()
    assert data["verdict"] == "refuted"
    assert data["instance"] == "(1,1)|(2,1)"


def test_certify_divisible() -> None:
    verdict = certify(CFG, DivInstance(1, 1, 1))
    assert isinstance(verdict, Certified)
    strategies = [(k, sol.strategy) for k, sol in verdict.solutions]
    assert strategies == [(1, "equal-coefficients"), (2, "doubling-identity")]
    assert verdict.to_dict()["verdict"] == "certified"


@pytest.mark.parametrize("m", [1, 2, -1])
def test_certify_doubled_lane_reports_the_residue_obstruction(m) -> None:
    params = CurveParams(tower=ConstTower().adjoin_sqrt(2))
    verdict = certify(CFG, DivInstance(m, 2 * m, 2), ConicConfig(max_tower_extensions=0), params)
    assert isinstance(verdict, Inconclusive)
    assert verdict.reason.startswith("no conic solution for k=2: residue")
    assert {"place": "u = 0", "residue": "-287/1296"} in verdict.detail["obstructions"]


def test_certify_identity_is_inconclusive() -> None:
    verdict = certify(CFG, DivInstance(3, 0, 0))
    assert isinstance(verdict, Inconclusive)
    assert verdict.to_dict()["verdict"] == "inconclusive"


def test_wrong_side_preconditions(lab) -> None:
    with pytest.raises(PreconditionError):
        refute(CFG, DivInstance(2, 4, 2), lab)
    with pytest.raises(PreconditionError):
        certify(CFG, DivInstance(1, 2, 1))


def test_decide_dispatches(lab) -> None:
    assert isinstance(decide(CFG, DivInstance(1, 1, 1), lab), Certified)
    assert isinstance(decide(CFG, DivInstance(1, 2, 1), lab), Refuted)


# ── templates ──


def test_w_template_defines_swap() -> None:
    tmpl = define_W(CFG)
    for a, b, c, d in product(GRID, repeat=4):
        f = tmpl.at({"p": (a, b), "q": (c, d)})
        assert formula_holds(f.body, {}) == (a == d and b == c)


def test_w_unit_template_defines_swap() -> None:
    tmpl = define_W_unit()
    for a, b, c, d in product(GRID, repeat=4):
        f = tmpl.at({"p": (a, b), "q": (c, d)})
        assert formula_holds(f.body, {}) == (a == d and b == c)


def test_divides_template_matches_divisibility() -> None:
    tmpl = define_divides(CFG)
    for m, n, r in product(GRID, repeat=3):
        f = tmpl.at({"p": (m, 1), "q": (n, r)})
        witness = tmpl.witness({"q": (n, r)})
        assert witness == {"ab": (r, 0)}
        assert formula_holds(f.body, witness) == (n == m * r)
        found = solve_sformula(f, 2, 3)
        assert (found is not None) == (n == m * r)


# ── the pair model ──


def test_encode_and_decode(tower) -> None:
    element = encode_pair(1, -1, tower, window=1)
    assert element.tag == (1, -1)
    assert decode(element, tower, window=1) == (1, -1)
    total = encode_pair(1, 0, tower, window=1) + encode_pair(0, 1, tower, window=1)
    assert total.tag == (1, 1)
    assert total == encode_pair(1, 1, tower, window=1)
    assert encode_pair(0, 0, tower).is_identity


def test_window_is_enforced(tower) -> None:
    with pytest.raises(WindowExceeded):
        encode_pair(4, 0, tower, window=3)


def test_small_window_is_injective(tower) -> None:
    assert window_collisions(tower, window=1) == []


def test_halve_in_lane(tower) -> None:
    half = halve_in_lane(5, 1, tower)
    assert (half.j, half.parity, half.identity) == (2, 1, False)
    doubled = tower.combination_point(2, 0)
    assert tower.element(half.wx) == doubled.x
    assert tower.element(0, half.wy) == doubled.y

    trivial = halve_in_lane(1, 2, tower)
    assert trivial.identity and trivial.parity == 1
    with pytest.raises(ValueError):
        halve_in_lane(2, 3, tower)
