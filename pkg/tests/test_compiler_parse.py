import pytest

from compiler.oracle import oracle_eval
from compiler.parser import ParseError, parse, tokenize
from compiler.sformula import Divides, IsZ, PairAdd, PairConst, PairVar, Plus, SFormula, W
from compiler.stage1 import stage1_int_to_S
from compiler.stage2 import stage2_eliminate
from compiler.syntax import FALSE, TRUE, IAdd, IConst, IntEq, IVar
from divisibility.config import EngineConfig

CFG = EngineConfig()

SENTENCES = [
    ("exists x . x + x = 4", True),
    ("exists x . x * x = 2", False),
    ("exists x y . x * y = 6 and x + y = 5", True),
    ("exists x . x * x = 4 and x + 2 = 0", True),
    ("exists x . x + 1 = 0 or x * x = 9", True),
    ("exists x y . x * y = 7 and x + y = 0", False),
    ("exists x . 2 * x = 3", False),
    ("exists x y . (x = 1 or x = 2) and x * y = 4", True),
    ("exists x . x - 3 = -5", True),
    ("0 = 0", True),
    ("1 = 2", False),
    ("exists x . x + x = 40", False),
]


# ── parsing ──


def test_parse_one_equation() -> None:
    f = parse("exists x . x + x = 4")
    assert f.variables == ("x",)
    assert f.body == IntEq(IAdd(IVar("x"), IVar("x")), IConst(4))
    assert f.describe() == "exists x . (x + x) = 4"


def test_parse_grammar_example() -> None:
    f = parse("exists x y . (x + x = 4) and (x * y = 6)")
    assert f.variables == ("x", "y")
    assert len(f.body.items) == 2


def test_negative_literals_fold() -> None:
    f = parse("exists x . x - 3 = -5")
    assert f.body == IntEq(IAdd(IVar("x"), IConst(-3)), IConst(-5))


def test_parse_error_position() -> None:
    with pytest.raises(ParseError) as info:
        parse("exists x . x + = 3")
    assert (info.value.line, info.value.col) == (1, 16)


def test_parse_error_on_second_line() -> None:
    with pytest.raises(ParseError) as info:
        parse("exists x .\n  x = y")
    assert info.value.line == 2
    assert info.value.col == 7


@pytest.mark.parametrize(
    "text",
    [
        "exists x . y = 1",
        "exists x x . x = 1",
        "exists and . 1 = 1",
        "exists x . not x = 1",
        "forall x . x = 1",
        "exists x . x = 1 $",
        "exists . x = 1",
        "exists x . x = 1 x",
    ],
)
def test_parse_rejects(text) -> None:
    with pytest.raises(ParseError):
        parse(text)


def test_tokenize_offsets() -> None:
    tokens = tokenize("x+12")
    assert [(t.kind, t.value, t.offset) for t in tokens] == [("name", "x", 0), ("op", "+", 1), ("int", "12", 2), ("end", "", 4)]


# ── oracle ──


def test_oracle_integer_examples() -> None:
    found = oracle_eval(parse("exists x . x + x = 4"), 5)
    assert found.holds and found.assignment == {"x": 2}
    assert found.label == "true-within-bound"
    assert oracle_eval(parse("exists x . x * x = 2"), 10).label == "false-within-bound"
    with pytest.raises(ValueError):
        oracle_eval(parse("0 = 0"), -1)


def test_oracle_on_stage1_of_a_product() -> None:
    result = oracle_eval(stage1_int_to_S(parse("exists x y . x * y = 6")), 10)
    assert result.holds
    x, y = result.assignment["x"], result.assignment["y"]
    assert x[0] * y[0] == 6 and x[1] == y[1] == 0


def test_oracle_keeps_propagated_sources_within_bound() -> None:
    f = parse("exists x . x + x = 40")
    s1 = stage1_int_to_S(f)
    assert not oracle_eval(f, 10).holds
    assert not oracle_eval(s1, 10).holds
    wide = oracle_eval(s1, 20)
    assert wide.holds and wide.assignment["x"] == (20, 0)


# ── stage 1 ──


def test_stage1_addition() -> None:
    s = stage1_int_to_S(parse("exists x . x + x = 4"))
    assert s.variables == ("x",)
    assert s.sources == frozenset({"x"})
    assert list(s.atoms()) == [IsZ(PairVar("x")), Plus(PairVar("x"), PairVar("x"), PairConst(4, 0))]


def test_stage1_constant_equations() -> None:
    assert stage1_int_to_S(parse("0 = 0")).body == TRUE
    assert stage1_int_to_S(parse("1 = 2")).body == FALSE


def test_stage1_product_encoding() -> None:
    s = stage1_int_to_S(parse("exists x y . x * y = 6"))
    assert s.variables == ("x", "y", "_pr1", "_ab1")
    atoms = list(s.atoms())
    divides = [a for a in atoms if isinstance(a, Divides)]
    assert divides == [
        Divides(PairAdd(PairVar("x"), PairConst(0, 1)), PairAdd(PairVar("_pr1"), PairVar("_ab1")))
    ]
    assert W(PairVar("_ab1"), PairVar("y")) in atoms
    assert Plus(PairVar("_pr1"), PairConst(0, 0), PairConst(6, 0)) in atoms


# ── stage 2 ──


def test_stage2_expands_w_into_two_divisibilities() -> None:
    f = SFormula(("p", "q"), W(PairVar("p"), PairVar("q")))
    out = stage2_eliminate(f, CFG)
    atoms = list(out.atoms())
    assert len(atoms) == 2
    assert all(isinstance(a, Divides) and a.safe for a in atoms)
    assert all(a.p == PairConst(CFG.m0, 1) for a in atoms)


def test_stage2_expands_divisibility_with_shifted_modulus() -> None:
    f = SFormula(("m", "n"), Divides(PairVar("m"), PairVar("n")))
    out = stage2_eliminate(f, CFG)
    assert len(out.variables) == 3
    atoms = list(out.atoms())
    assert not any(isinstance(a, W) for a in atoms)
    assert all(isinstance(a, Divides) and a.safe for a in atoms)
    assert len(atoms) == 3


def test_stage2_leaves_ground_formulas_alone() -> None:
    f = stage1_int_to_S(parse("exists x . x + x = 4"))
    assert stage2_eliminate(f, CFG) == f


# ── differential ──


@pytest.mark.parametrize("text, expected", SENTENCES)
def test_stages_preserve_oracle_truth(text, expected) -> None:
    f = parse(text)
    s1 = stage1_int_to_S(f)
    s2 = stage2_eliminate(s1, CFG)
    assert oracle_eval(f, 4).holds is expected
    assert oracle_eval(s1, 4).holds is expected
    assert oracle_eval(s2, 4, witness_bound=6).holds is expected
