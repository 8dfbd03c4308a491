import pytest
import sympy

from compiler.combine import combine_pair, combine_single
from compiler.emit import MAGIC, config_digest, dumps, emit, loads, read
from compiler.lower import K_SORT, Z1, CombinerRejected, PolySystem, check_combiner
from compiler.pipeline import compile_source
from curve.params import CurveParams

X, Y = sympy.symbols("x y")
PARAMS = CurveParams()


@pytest.fixture
def small() -> PolySystem:
    return PolySystem(
        [("x", K_SORT), ("y", K_SORT)],
        [X - 1, Y - 2, X * Y - 2],
        ["x is one", "y is two", "product"],
        PARAMS,
        restricted=True,
    )


@pytest.fixture(scope="module")
def compiled():
    return compile_source("exists x . x = 1")


# ── combiner ──


def test_combine_pair() -> None:
    assert combine_pair(X, Y, Z1) == X**2 - Z1 * Y**2


def test_combine_single_folds_to_one_equation(small) -> None:
    witness = check_combiner(Z1, PARAMS)
    single = combine_single(small, Z1, witness)
    assert single.form == "single"
    assert len(single.equations) == 1
    assert single.provenance == ["combined 3 equations with d = z1, depth 2"]
    assert single.parent is small
    (expr,) = single.equations
    assert sympy.expand(expr.subs({X: 1, Y: 2})) == 0
    assert sympy.expand(expr.subs({X: 1, Y: 3})) != 0


def test_combine_single_of_an_empty_system() -> None:
    empty = PolySystem([], [], [], PARAMS, restricted=True)
    single = combine_single(empty, Z1, check_combiner(Z1, PARAMS))
    assert single.equations == [0]


def test_combine_single_requires_a_matching_witness(small) -> None:
    witness = check_combiner(Z1, PARAMS)
    with pytest.raises(CombinerRejected):
        combine_single(small, Z1, None)
    with pytest.raises(CombinerRejected):
        combine_single(small, Z1**3, witness)


@pytest.mark.parametrize("d", ["1", "z1**2", "-1", "x"])
def test_check_combiner_rejects(d) -> None:
    with pytest.raises(CombinerRejected):
        check_combiner(sympy.sympify(d), PARAMS)


# ── file format ──


def test_dumps_header(compiled) -> None:
    system = compiled.output
    text = dumps(system, {"oracle": {"bound": 3}})
    lines = text.splitlines()
    assert lines[0] == MAGIC
    assert lines[1] == "version: 0.1.0"
    assert lines[2] == f"config-sha256: {config_digest({'oracle': {'bound': 3}})}"
    assert f"equations: {len(system.equations)}" in lines
    assert f"variables: {len(system.variables)}" in lines
    assert "restricted: true" in lines
    assert text.endswith("\n")


def test_config_digest_ignores_key_order() -> None:
    assert config_digest({"a": 1, "b": 2}) == config_digest({"b": 2, "a": 1})
    assert config_digest(None) == config_digest({})


def test_round_trip_is_byte_identical(compiled) -> None:
    text = dumps(compiled.output, {"compiler": {"combiner_d": "z1"}})
    again = loads(text)
    assert again.restricted
    assert again.variables == compiled.output.variables
    assert len(again.equations) == len(compiled.output.equations)
    assert dumps(again) == text


def test_loaded_equations_match(compiled) -> None:
    again = loads(dumps(compiled.output))
    for ours, theirs in zip(compiled.output.equations, again.equations):
        assert sympy.expand(ours - theirs) == 0


def test_empty_system_is_a_valid_file() -> None:
    empty = PolySystem([], [], [], PARAMS)
    text = dumps(empty)
    again = loads(text)
    assert again.variables == [] and again.equations == []
    assert dumps(again) == text


def test_single_equation_file(small) -> None:
    single = combine_single(small, Z1, check_combiner(Z1, PARAMS))
    again = loads(dumps(single))
    assert again.form == "single"
    assert len(again.equations) == 1
    assert sympy.expand(again.equations[0] - single.equations[0]) == 0


@pytest.mark.parametrize(
    "text",
    [
        "",
        "# some other file\n",
        f"{MAGIC}\nequations: 2\n\n[variables]\n\n[equations]\n1 = 0\n",
        f"{MAGIC}\nvariables: 0\n\n[variables]\n\n[equations]\nz1 - 1\n",
    ],
)
def test_loads_rejects(text) -> None:
    with pytest.raises(ValueError):
        loads(text)


def test_emit_and_read(tmp_path, compiled) -> None:
    path = emit(compiled.output, tmp_path / "out.h10", {"k": 1})
    assert path.exists()
    again = read(path)
    assert again.meta["config-sha256"] == config_digest({"k": 1})
    assert len(again.equations) == compiled.summary()["equations"]


def test_emit_into_missing_directory_fails(tmp_path, compiled) -> None:
    with pytest.raises(OSError):
        emit(compiled.output, tmp_path / "nowhere" / "out.h10")
