"""Source text to polynomial system, keeping every intermediate stage."""

from __future__ import annotations

import logging
from dataclasses import dataclass

import sympy

from algebra.nonsquare import NonSquareWitness
from compiler.combine import combine_single
from compiler.lower import PolySystem, check_combiner, stage4_lower
from compiler.parser import parse
from compiler.points import PointFormula, stage3_points
from compiler.restrict import stage5_restrict
from compiler.sformula import SFormula
from compiler.stage1 import stage1_int_to_S
from compiler.stage2 import stage2_eliminate
from compiler.syntax import IntFormula
from compiler.witness import Witness, replay
from conic.solver import ConicConfig
from curve.params import CurveParams
from divisibility.config import EngineConfig

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class CompileOptions:
    single_equation: bool = False
    combiner_d: str = "z1"
    witness_bound: int = 10

    def __post_init__(self) -> None:
        if self.witness_bound < 0:
            raise ValueError(f"compiler.witness_bound must be >= 0, got {self.witness_bound}")

    @classmethod
    def from_config(cls, compiler_config: dict | None) -> CompileOptions:
        compiler_config = compiler_config or {}
        return cls(
            single_equation=bool(compiler_config.get("single_equation", False)),
            combiner_d=str(compiler_config.get("combiner_d", "z1")),
            witness_bound=int(compiler_config.get("witness_bound", 10)),
        )


@dataclass
class CompileResult:
    source: IntFormula
    stage1: SFormula
    stage2: SFormula
    points: PointFormula
    stage4: PolySystem
    stage5: PolySystem
    combined: PolySystem | None
    combiner_witness: NonSquareWitness
    engine: EngineConfig
    options: CompileOptions

    @property
    def output(self) -> PolySystem:
        """The system that gets emitted."""
        return self.combined if self.combined is not None else self.stage5

    def summary(self) -> dict:
        return {
            "source_variables": len(self.source.variables),
            "pair_variables": len(self.stage2.variables),
            "points": len(self.points.points),
            "stage4": self.stage4.counts(),
            "stage5": self.stage5.counts(),
            "form": self.output.form,
            "equations": len(self.output.equations),
            "combiner": f"{self.options.combiner_d}: {self.combiner_witness.describe()}",
        }


def compile_formula(f: IntFormula, config: dict | None = None, *, single_equation: bool | None = None) -> CompileResult:
    config = config or {}
    engine = EngineConfig.from_config(config.get("engine"))
    params = CurveParams.from_config(config.get("curve"))
    options = CompileOptions.from_config(config.get("compiler"))
    if single_equation is not None:
        options = CompileOptions(single_equation, options.combiner_d, options.witness_bound)

    s1 = stage1_int_to_S(f)
    s2 = stage2_eliminate(s1, engine)
    pf = stage3_points(s2, engine)
    witness = check_combiner(sympy.sympify(options.combiner_d), params)
    sys4 = stage4_lower(pf, params, options.combiner_d)
    sys5 = stage5_restrict(sys4)
    combined = combine_single(sys5, options.combiner_d, witness) if options.single_equation else None
    log.info(
        "compiled %d source variables to %d equations over K",
        len(f.variables),
        len(sys5.equations),
    )
    return CompileResult(f, s1, s2, pf, sys4, sys5, combined, witness, engine, options)


def compile_source(text: str, config: dict | None = None, *, single_equation: bool | None = None) -> CompileResult:
    """parse, then every stage; ParseError and CombinerRejected propagate."""
    return compile_formula(parse(text), config, single_equation=single_equation)


def replay_witness(result: CompileResult, sources: dict[str, int], config: dict | None = None) -> Witness:
    """Check that integer values of the source variables solve every emitted system."""
    config = config or {}
    return replay(
        result.stage2,
        result.points,
        result.stage4,
        result.stage5,
        result.engine,
        sources,
        combined=result.combined,
        conic_cfg=ConicConfig.from_config(config.get("conic")),
        witness_bound=result.options.witness_bound,
    )


__all__ = ["CompileOptions", "CompileResult", "compile_formula", "compile_source", "replay_witness"]
