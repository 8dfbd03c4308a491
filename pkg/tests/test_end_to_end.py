import pytest

from compiler.lower import CombinerRejected
from compiler.parser import ParseError
from compiler.pipeline import CompileOptions, compile_source, replay_witness
from compiler.witness import WitnessError


@pytest.fixture(scope="module")
def doubled():
    return compile_source("exists x . x + x = 4")


def test_summary_counts(doubled) -> None:
    summary = doubled.summary()
    assert summary["source_variables"] == 1
    assert summary["pair_variables"] == 1
    assert summary["form"] == "system"
    assert summary["equations"] == len(doubled.stage5.equations)
    assert summary["stage5"]["L"] == 0
    assert summary["stage4"]["L"] > 0
    assert summary["combiner"].startswith("z1: ")


def test_integer_witness_replays_through_every_stage(doubled) -> None:
    witness = replay_witness(doubled, {"x": 2})
    assert witness.pairs["x"] == (2, 0)
    assert witness.multiples["_x_1"] == (2, 0)
    assert witness.multiples["_x_2"] == (0, 0)


def test_wrong_witness_is_rejected(doubled) -> None:
    with pytest.raises(WitnessError):
        replay_witness(doubled, {"x": 1})


def test_single_equation_witness() -> None:
    result = compile_source("exists x . x = 1", single_equation=True)
    assert result.output is result.combined
    assert result.output.form == "single"
    assert len(result.output.equations) == 1
    replay_witness(result, {"x": 1})


def test_config_selects_single_equation() -> None:
    result = compile_source("0 = 0", {"compiler": {"single_equation": True}})
    assert result.output.form == "single"
    assert compile_source("0 = 0", {"compiler": {"single_equation": True}}, single_equation=False).combined is None


def test_false_sentence_compiles_to_an_unsolvable_system() -> None:
    result = compile_source("1 = 2")
    assert result.output.equations == [1]


def test_product_rejects_a_non_solution() -> None:
    result = compile_source("exists x y . x * y = 2")
    assert result.summary()["pair_variables"] == 5
    with pytest.raises(WitnessError):
        replay_witness(result, {"x": 1, "y": 3})


def test_errors_propagate() -> None:
    with pytest.raises(ParseError):
        compile_source("exists x . x +")
    with pytest.raises(CombinerRejected):
        compile_source("0 = 0", {"compiler": {"combiner_d": "z1**2"}})


def test_compile_options() -> None:
    assert CompileOptions.from_config(None) == CompileOptions()
    assert CompileOptions.from_config({"witness_bound": "3"}).witness_bound == 3
    with pytest.raises(ValueError):
        CompileOptions(witness_bound=-1)


def test_product_witness_reports_the_failed_certificate() -> None:
    result = compile_source("exists x y . (x + x = 4) and (x * y = 6)")
    assert result.summary()["source_variables"] == 2
    tight = {"conic": {"max_tower_extensions": 0, "step_budget": 1, "degree_bound": 1}}
    with pytest.raises(WitnessError, match="certification failed"):
        replay_witness(result, {"x": 2, "y": 3}, tight)
