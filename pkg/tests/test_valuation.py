import random

import pytest
from sympy import Integer, Rational

from curve.errors import ExceptionalPoint
from curve.params import CurveParams
from divisors.function import pullback_x
from valuation.series import LaurentSeries, PrecisionLost, sqrt_series
from valuation.wm import NotApplicable, Possible, RefutationWitness, ValuationLab, XCombination


@pytest.fixture(scope="module")
def lab() -> ValuationLab:
    return ValuationLab(CurveParams())


def test_series_strips_leading_zeros() -> None:
    s = LaurentSeries(Integer(0), -1, [Integer(0), Integer(2), Integer(3)])
    assert s.val == 0
    assert s.order() == 0
    assert s.leading() == 2
    assert s.coeff(1) == 3
    assert s.precision == 2


def test_vanishing_series_loses_precision() -> None:
    s = LaurentSeries(Integer(0), 0, [Integer(0), Integer(0)])
    with pytest.raises(PrecisionLost):
        s.leading()


def test_sqrt_series_of_one_plus_t() -> None:
    e = sqrt_series([Integer(1), Integer(1)], Integer(1), Integer(0), 4)
    assert e.coeffs == [1, Rational(1, 2), Rational(-1, 8), Rational(1, 16)]


def test_order_one_at_the_shifted_point(lab) -> None:
    out = lab.w_m(1, XCombination(1, 1))
    assert out.order == 1


def test_order_zero_residue_is_a_pullback(lab) -> None:
    out = lab.w_m(1, XCombination(2, 1))
    assert out.order == 0
    assert out.unit_residue == pullback_x(1, 1, lab.residue)


def test_power_scales_the_order(lab) -> None:
    assert lab.w_m(2, XCombination(2, 1) ** 2).order == 2


def test_w_m_of_l_elements(lab) -> None:
    L = lab.L
    z1 = lab.w_m(1, L.z1)
    assert z1.order == 0
    assert z1.unit_residue == lab.residue.x
    z2 = lab.w_m(1, L.z2)
    assert z2.order == 0
    assert z2.unit_residue == pullback_x(-1, 1, lab.residue)


def test_w_m_rejects_zero_and_identity(lab) -> None:
    with pytest.raises(ValueError):
        lab.w_m(1, lab.L.zero)
    with pytest.raises(ExceptionalPoint):
        lab.w_m(1, XCombination(0, 0))


def test_square_gate_refutes(lab) -> None:
    gate = lab.lemma_square_gate(XCombination(2, 1), XCombination(1, 1), 1)
    assert isinstance(gate, RefutationWitness)
    assert (gate.order_a, gate.order_b) == (0, 1)
    assert gate.to_dict()["orders"] == {"a": 0, "b": 1}


def test_square_gate_needs_the_valuation_pattern(lab) -> None:
    with pytest.raises(NotApplicable):
        lab.lemma_square_gate(XCombination(1, 1), XCombination(1, 1), 1)


def test_square_gate_passes_square_residue(lab) -> None:
    # a = x(P1)^2 has the square residue x^2
    gate = lab.lemma_square_gate(XCombination(1, 0) ** 2, XCombination(1, 1), 1)
    assert isinstance(gate, Possible)
    assert gate.residue == lab.residue.x * lab.residue.x


@pytest.mark.parametrize("m", [1, -1])
def test_change_generators_substitutes_back(lab, m) -> None:
    L = lab.L
    for f in (L.z2, L.h2, L.z1 * L.h2 + L.one):
        reexpressed = lab.change_generators(m, f)
        assert reexpressed.m == m
        assert reexpressed.substitute_back(L) == f


def test_change_generators_sends_the_shifted_point_to_a_generator(lab) -> None:
    reexpressed = lab.change_generators(1, lab.L.x_combination(1, 1))
    assert reexpressed.element == lab.shifted.z2
    assert not any(reexpressed.element.coords[1:])


@pytest.mark.parametrize("m", [1, 2, -1])
def test_w_m_of_the_modulus_element_is_one(lab, m) -> None:
    assert lab.w_m(m, lab.L.x_combination(m, 1)).order == 1


@pytest.mark.parametrize("m, n, r", [(1, 2, 1), (1, 0, 1), (2, 1, 1), (-1, 1, 1), (1, 1, 2), (2, 2, 0)])
def test_w_m_of_l_combinations_matches_the_pullback(lab, m, n, r) -> None:
    out = lab.w_m(m, lab.L.x_combination(n, r))
    assert out.order == 0
    assert out.unit_residue == pullback_x(n - m * r, r, lab.residue)
    symbolic = lab.w_m(m, XCombination(n, r))
    assert (symbolic.order, symbolic.unit_residue) == (out.order, out.unit_residue)


def _l_samples(lab):
    L = lab.L
    return [L.z1, L.z2, L.h1, L.h2, L.z1 + L.one, L.x_combination(1, 1), L.x_combination(2, 1), L.z2 - L.z1]


def test_w_m_is_additive_and_ultrametric(lab) -> None:
    rng = random.Random(3)
    samples = _l_samples(lab)
    for _ in range(6):
        f, g = rng.sample(samples, 2)
        vf, vg = lab.w_m(1, f), lab.w_m(1, g)
        product = lab.w_m(1, f * g)
        assert product.order == vf.order + vg.order
        assert product.unit_residue == vf.unit_residue * vg.unit_residue
        if f + g:
            assert lab.w_m(1, f + g).order >= min(vf.order, vg.order)
