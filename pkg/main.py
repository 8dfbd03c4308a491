"""h10 command line: compile sentences, run the oracle, and exercise the divisibility engine."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import yaml

from compiler.emit import emit
from compiler.oracle import oracle_eval
from compiler.parser import parse
from compiler.pipeline import compile_source, replay_witness
from compiler.stage1 import stage1_int_to_S
from compiler.stage2 import stage2_eliminate
from compiler.witness import WitnessError
from conic.solver import ConicConfig, ConicInstance, NotFoundWithinBounds, solve_conic
from curve.group import ec_mul
from curve.params import CurveParams
from divisibility.config import EngineConfig
from divisibility.engine import Certified, DivInstance, Inconclusive, certify, conic_field, decide, refute
from divisors.function import CurveFunctionField, pullback_x
from divisors.places import divisor_of
from lab.metrics import MetricsLogger
from valuation.wm import ValuationLab

GREEN = "\033[32m"
YELLOW = "\033[33m"
RED = "\033[31m"
RESET = "\033[0m"

# a = x(j*Q), b = x(Q) over the function field of Q
CONIC_CASES = {"equal": 1, "doubling": 2, "quadruple": 4, "octuple": 8}


def load_config(path: str = "config.yaml") -> dict:
    config_path = Path(path)
    if not config_path.exists():
        print(f"{RED}Config file not found: {path}{RESET}")
        sys.exit(1)
    with open(config_path) as f:
        return yaml.safe_load(f) or {}


def _say(colour: str, text: str) -> None:
    print(f"{colour}{text}{RESET}")


def _sources(items: list[str]) -> dict[str, int]:
    out = {}
    for item in items:
        name, sep, value = item.partition("=")
        if not sep:
            raise ValueError(f"witness values look like NAME=INT, got {item!r}")
        out[name.strip()] = int(value)
    return out


# ── subcommands ──


def cmd_compile(args, config: dict, metrics: MetricsLogger) -> int:
    text = Path(args.file).read_text(encoding="utf-8")
    single = True if args.single_equation else None
    with metrics.timed("compile", file=args.file) as event:
        result = compile_source(text, config, single_equation=single)
        event.update(result.summary())
    summary = result.summary()
    _say(GREEN, f"compiled {args.file}: {summary['equations']} equations ({summary['form']})")
    print(json.dumps(summary, indent=2, default=str))
    if args.emit:
        path = emit(result.output, args.emit, config)
        _say(GREEN, f"wrote {path}")
    if args.witness:
        sources = _sources(args.witness)
        try:
            with metrics.timed("witness_replay", file=args.file, sources=sources):
                replay_witness(result, sources, config)
        except WitnessError as e:
            _say(RED, f"witness replay failed: {e}")
            return 1
        _say(GREEN, f"witness {sources} satisfies every emitted equation")
    return 0


def cmd_oracle(args, config: dict, metrics: MetricsLogger) -> int:
    bound = args.bound if args.bound is not None else int((config.get("oracle") or {}).get("bound", 10))
    f = parse(Path(args.file).read_text(encoding="utf-8"))
    target = f
    if args.stage in ("stage1", "stage2"):
        target = stage1_int_to_S(f)
        if args.stage == "stage2":
            target = stage2_eliminate(target, EngineConfig.from_config(config.get("engine")))
    with metrics.timed("oracle", file=args.file, stage=args.stage, bound=bound) as event:
        result = oracle_eval(target, bound)
        event["result"] = result.label
    _say(GREEN if result.holds else YELLOW, result.label)
    if result.assignment:
        print(json.dumps(result.assignment, default=str))
    return 0


def cmd_divcheck(args, config: dict, metrics: MetricsLogger) -> int:
    cfg = EngineConfig.from_config(config.get("engine"))
    params = CurveParams.from_config(config.get("curve"))
    conic_cfg = ConicConfig.from_config(config.get("conic"))
    record = bool((config.get("divisibility") or {}).get("record_square_classes", True))
    inst = DivInstance(args.m, args.n, args.r)
    with metrics.timed("verdict", instance=str(inst)) as event:
        if args.refute:
            verdict = refute(cfg, inst, ValuationLab(params), record_square_classes=record)
        elif args.certify:
            verdict = certify(cfg, inst, conic_cfg, params)
        else:
            verdict = decide(cfg, inst, ValuationLab(params), conic_cfg, params)
        event["verdict"] = verdict.to_dict()["verdict"]
    report = verdict.to_dict()
    if args.json:
        print(json.dumps(report, indent=2, default=str))
    colour = YELLOW if isinstance(verdict, Inconclusive) else GREEN
    _say(colour, f"{inst}: {report['verdict']}")
    if isinstance(verdict, Inconclusive):
        print(f"  reason: {verdict.reason}")
        return 1
    if isinstance(verdict, Certified):
        for k, sol in verdict.solutions:
            print(f"  k={k}: {sol.strategy} over {sol.tower.describe()}")
    else:
        print(f"  k={verdict.k}: residue {verdict.witness.residue.render()} is not a square")
    return 0


def cmd_divisor(args, config: dict, metrics: MetricsLogger) -> int:
    params = CurveParams.from_config(config.get("curve"))
    factor = bool((config.get("divisors") or {}).get("factor_places", True))
    degree_bound = int((config.get("algebra") or {}).get("factor_degree_bound", 64))
    fld = CurveFunctionField.with_sqrt_b(params)
    with metrics.timed("divisor", s=args.s, r=args.r) as event:
        g = pullback_x(args.s, args.r, fld)
        divisor = divisor_of(g, factor_places=factor, degree_bound=degree_bound)
        event.update(zeros=divisor.zero_count(), degree=divisor.degree)
    if args.json:
        print(json.dumps(divisor.to_dict(), indent=2, default=str))
    else:
        _say(GREEN, f"div x({args.s}*(x,y) + {args.r}*(0,sqrt b)): degree {divisor.degree}")
        for place, order in divisor.to_list():
            print(f"  {order:+d} {place}")
        print(f"  zeros: {divisor.zero_count()}, poles: {divisor.pole_count()}")
    return 0


def cmd_conic(args, config: dict, metrics: MetricsLogger) -> int:
    params = CurveParams.from_config(config.get("curve"))
    conic_cfg = ConicConfig.from_config(config.get("conic"))
    j = CONIC_CASES[args.case]
    fld = conic_field(params)
    a = ec_mul(j, fld.point, params).x
    inst = ConicInstance(a, fld.x, context=f"case {args.case}")
    with metrics.timed("conic", case=args.case) as event:
        sol = solve_conic(inst, conic_cfg)
        event["found"] = not isinstance(sol, NotFoundWithinBounds)
    if isinstance(sol, NotFoundWithinBounds):
        _say(YELLOW, f"{args.case}: not found within bounds ({sol.steps} steps)")
        return 1
    _say(GREEN, f"{args.case}: solved by {sol.strategy}")
    print(json.dumps(sol.to_dict(), indent=2, default=str))
    return 0


def _global_options(parser: argparse.ArgumentParser, subcommand: bool = False) -> argparse.ArgumentParser:
    """Options accepted before or after the subcommand; a subcommand only overrides what it is given."""
    flag = argparse.SUPPRESS if subcommand else False
    config = argparse.SUPPRESS if subcommand else "config.yaml"
    parser.add_argument("--config", default=config, help="YAML configuration file")
    parser.add_argument("--no-metrics", action="store_true", default=flag, help="do not append to the run log")
    parser.add_argument("-v", "--verbose", action="store_true", default=flag, help="debug logging")
    return parser


def build_parser() -> argparse.ArgumentParser:
    parser = _global_options(argparse.ArgumentParser(prog="h10", description=__doc__))
    common = _global_options(argparse.ArgumentParser(add_help=False), subcommand=True)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compile", parents=[common], help="compile a sentence to a polynomial system")
    p.add_argument("file")
    p.add_argument("--single-equation", action="store_true", help="fold the system into one equation")
    p.add_argument("--emit", help="write the system to this path")
    p.add_argument("--witness", nargs="*", default=[], metavar="NAME=INT", help="replay integer values")
    p.set_defaults(handler=cmd_compile)

    p = sub.add_parser("oracle", parents=[common], help="brute-force truth within a bound")
    p.add_argument("file")
    p.add_argument("--bound", type=int)
    p.add_argument("--stage", choices=("source", "stage1", "stage2"), default="source")
    p.set_defaults(handler=cmd_oracle)

    p = sub.add_parser("divcheck", parents=[common], help="refute or certify (m,1) | (n,r)")
    p.add_argument("m", type=int)
    p.add_argument("n", type=int)
    p.add_argument("r", type=int)
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--refute", action="store_true")
    mode.add_argument("--certify", action="store_true")
    p.add_argument("--json", action="store_true")
    p.set_defaults(handler=cmd_divcheck)

    p = sub.add_parser("divisor", parents=[common], help="divisor of x(s*(x,y) + r*(0,sqrt b))")
    p.add_argument("s", type=int)
    p.add_argument("r", type=int)
    p.add_argument("--json", action="store_true")
    p.set_defaults(handler=cmd_divisor)

    p = sub.add_parser("conic", parents=[common], help="solve a*y^2 + b*z^2 = w^2 with a = x(jQ), b = x(Q)")
    p.add_argument("--case", choices=sorted(CONIC_CASES), required=True)
    p.set_defaults(handler=cmd_conic)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    config = load_config(args.config)
    metrics_config = dict(config.get("metrics") or {})
    if args.no_metrics:
        metrics_config["enabled"] = False
    metrics = MetricsLogger(metrics_config)
    try:
        return args.handler(args, config, metrics)
    except (ValueError, OSError) as e:
        _say(RED, f"error: {e}")
        return 2
    finally:
        metrics.flush()


if __name__ == "__main__":
    sys.exit(main())
