#!/usr/bin/env python3
"""Run the long acceptance sweeps and judge them from the run log.

Every checked case is appended to the run log as a ``sweep_case`` event. At
the end the events written by this run are read back, summarized per group
and compared with thresholds, giving a pass/fail exit code for manual
validation and CI-style checks.
"""

from __future__ import annotations

import argparse
import random
import sys
import time
from dataclasses import dataclass, field
from itertools import product
from pathlib import Path

import sympy

sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

from algebra.nonsquare import certify_nonsquare  # noqa: E402
from compiler.combine import combine_pair  # noqa: E402
from compiler.lower import H1, H2, Z1, Z2, h_components  # noqa: E402
from compiler.oracle import oracle_eval, solve_sformula  # noqa: E402
from compiler.parser import parse  # noqa: E402
from compiler.pipeline import compile_source, replay_witness  # noqa: E402
from compiler.sformula import formula_holds  # noqa: E402
from compiler.stage1 import stage1_int_to_S  # noqa: E402
from compiler.stage2 import stage2_eliminate  # noqa: E402
from curve.errors import ExceptionalPoint  # noqa: E402
from curve.group import CurvePoint, ec_mul, on_curve  # noqa: E402
from curve.ltower import LTower  # noqa: E402
from curve.params import CurveParams  # noqa: E402
from divisibility.config import EngineConfig  # noqa: E402
from divisibility.engine import Certified, DivInstance, Refuted, certify, refute  # noqa: E402
from divisibility.templates import define_divides, define_W  # noqa: E402
from divisors.function import CurveFunctionField, pullback_x  # noqa: E402
from divisors.places import divisor_of, square_classes_distinct  # noqa: E402
from lab.metrics import MetricsLogger, read_events  # noqa: E402
from valuation.wm import ValuationLab, XCombination  # noqa: E402

GROUPS = ("group", "valuation", "divisor", "refute", "certify", "templates", "compiler", "combiner")
# certify also logs its r = 2 instances under their own group
REPORTED = GROUPS[:5] + ("certify-r2",) + GROUPS[5:]

SENTENCES = [
    "exists x . x + x = 4",
    "exists x . x + x = 3",
    "exists x . x * x = 2",
    "exists x . x * x = 4",
    "exists x y . x * y = 6",
    "exists x y . (x + y = 5) and (x + x = y + 1)",
    "exists x . x + 3 = 1",
    "exists x . 2 * x = 7",
    "exists x . (x = 2) or (x = 3)",
    "exists x . (x + x = 1) or (x + x = 2)",
    "0 = 0",
    "1 = 0",
    "exists x y . (x = y + 1) and (y = x + 1)",
    "exists x y . x * y = 0",
    "exists x . x * x + x = 6",
    "exists x . x * x = 0 - 1",
    "exists x y . (x + y = 0) and (x * y = 0 - 4)",
    "exists x y z . (x + y = z) and (z = 3) and (x = 1)",
    "exists x . 3 * x + 1 = 10",
    "exists x y . (x * y = 3) and (x + y = 4)",
    "exists x y . (x * x = y) and (y = 9)",
    "exists x . (x * x = 5) or (x + 1 = 0)",
]


@dataclass
class SweepStats:
    cases: dict[str, int] = field(default_factory=dict)
    failures: dict[str, int] = field(default_factory=dict)
    inconclusive: dict[str, int] = field(default_factory=dict)
    durations: dict[str, float] = field(default_factory=dict)
    first_failure: dict[str, str] = field(default_factory=dict)

    def add_event(self, event: dict) -> None:
        if event.get("event") != "sweep_case":
            return
        group = str(event.get("group"))
        self.cases[group] = self.cases.get(group, 0) + 1
        self.durations[group] = self.durations.get(group, 0.0) + float(event.get("duration_ms", 0.0)) / 1000.0
        status = event.get("status")
        if status == "fail":
            self.failures[group] = self.failures.get(group, 0) + 1
            self.first_failure.setdefault(group, f"{event.get('case')}: {event.get('detail', '')}")
        elif status == "inconclusive":
            self.inconclusive[group] = self.inconclusive.get(group, 0) + 1


class Sweep:
    def __init__(self, metrics: MetricsLogger, params: CurveParams, cfg: EngineConfig, rng: random.Random):
        self.metrics = metrics
        self.params = params
        self.cfg = cfg
        self.rng = rng

    def case(self, group: str, name: str, check) -> None:
        start = time.perf_counter()
        try:
            status, detail = check()
        except Exception as e:  # a crashing case is a failing case
            status, detail = "fail", f"{type(e).__name__}: {e}"
        elapsed = (time.perf_counter() - start) * 1000.0
        self.metrics.log("sweep_case", group=group, case=name, status=status, detail=detail, duration_ms=elapsed)

    # ── groups ──

    def group(self) -> None:
        base = CurvePoint(sympy.Integer(0), sympy.Integer(1))
        points = [ec_mul(k, base, self.params) for k in range(1, 13)]

        def check():
            if not all(on_curve(p, self.params) for p in points):
                return "fail", "a multiple is off the curve"
            keys = {(p.x, p.y) for p in points}
            return ("ok", "") if len(keys) == 12 else ("fail", "repeated multiple")

        self.case("group", "kP for k=1..12", check)

    def valuation(self, window: int) -> None:
        lab = ValuationLab(self.params)
        for m, n, r in product(range(-3, 4), range(-window, window + 1), range(-window, window + 1)):
            if n == m * r:
                continue
            self.case("valuation", f"m={m} n={n} r={r}", lambda m=m, n=n, r=r: self._claim_orders(lab, m, n, r))

    def _claim_orders(self, lab: ValuationLab, m: int, n: int, r: int):
        try:
            if lab.w_m(m, XCombination(m, 1)).order != 1:
                return "fail", "x(mP1 + P2) does not vanish to order 1"
            if lab.w_m(m, lab.L.x_combination(m, 1)).order != 1:
                return "fail", "x(mP1 + P2) in L does not vanish to order 1"
            for k in (1, 2):
                expected = pullback_x(k * (n - m * r), k * r, lab.residue)
                for label, f in (("pair", XCombination(k * n, k * r)), ("L", lab.L.x_combination(k * n, k * r))):
                    outcome = lab.w_m(m, f)
                    if outcome.order != 0:
                        return "fail", f"k={k} ({label}): order {outcome.order}"
                    if outcome.unit_residue != expected:
                        return "fail", f"k={k} ({label}): residue differs from the pullback"
        except ExceptionalPoint as e:
            return "skip", str(e)
        return "ok", ""

    def divisor(self) -> None:
        fld = CurveFunctionField.with_sqrt_b(self.params)
        for s, r in product((1, 2), (0, 1, 2)):
            self.case("divisor", f"s={s} r={r}", lambda s=s, r=r: self._zeros(fld, s, r))

    @staticmethod
    def _zeros(fld, s: int, r: int):
        try:
            g = pullback_x(s, r, fld)
        except ExceptionalPoint as e:
            return "skip", str(e)
        divisor = divisor_of(g, extend_constants=True)
        zeros = divisor.zeros()
        if divisor.zero_count() != 2 * s * s:
            return "fail", f"{divisor.zero_count()} zeros"
        if any(order != 1 for _, order in zeros):
            return "fail", "a zero is not simple"
        return "ok", ""

    def refute(self, window: int) -> None:
        lab = ValuationLab(self.params)
        fld = CurveFunctionField.with_sqrt_b(self.params)
        for m, n, r in product(range(-3, 4), range(-window, window + 1), range(-window, window + 1)):
            if n == m * r:
                continue
            self.case("refute", f"({m},1)|({n},{r})", lambda m=m, n=n, r=r: self._refute(lab, fld, m, n, r))

    def _refute(self, lab, fld, m: int, n: int, r: int):
        verdict = refute(self.cfg, DivInstance(m, n, r), lab)
        if not isinstance(verdict, Refuted):
            return "inconclusive", verdict.reason
        s = n - m * r
        try:
            pair = [pullback_x(s, r, fld), pullback_x(2 * s, 2 * r, fld)]
        except ExceptionalPoint:
            return "ok", "square classes skipped"
        if not square_classes_distinct(pair):
            return "fail", "x_{s,r} and x_{2s,2r} share a square class"
        return "ok", ""

    def certify(self) -> None:
        for m in range(-3, 4):
            self.case("certify", f"({m},1)|({m},1)", lambda m=m: self._certify(DivInstance(m, m, 1)))
        for m in (1, 2, -1):
            inst = DivInstance(m, 2 * m, 2)
            self.case("certify-r2", str(inst), lambda inst=inst: self._certify(inst))

    def _certify(self, inst: DivInstance):
        verdict = certify(self.cfg, inst, params=self.params)
        if not isinstance(verdict, Certified):
            return "inconclusive", verdict.reason
        return "ok", ", ".join(sol.strategy for _, sol in verdict.solutions)

    def templates(self, window: int) -> None:
        w = define_W(self.cfg)
        div = define_divides(self.cfg)
        span = range(-window, window + 1)
        for p, q in product(product(span, span), product(span, span)):
            self.case("templates", f"W({p},{q})", lambda p=p, q=q: self._w(w, p, q))
        for m, n, r in product(span, span, span):
            self.case("templates", f"({m},1)|({n},{r})", lambda m=m, n=n, r=r: self._div(div, m, n, r, window))

    @staticmethod
    def _w(template, p, q):
        holds = formula_holds(template.at({"p": p, "q": q}).body, {})
        return ("ok", "") if holds == (p == q[::-1]) else ("fail", f"W says {holds}")

    @staticmethod
    def _div(template, m, n, r, bound):
        f = template.at({"p": (m, 1), "q": (n, r)})
        holds = solve_sformula(f, bound, bound) is not None
        return ("ok", "") if holds == (n == m * r) else ("fail", f"definition says {holds}")

    def compiler(self, bound: int, pairs: int) -> None:
        for text in SENTENCES:
            self.case("compiler", text, lambda text=text: self._differential(text, bound))
        tower = LTower(self.params)
        for i in range(pairs):
            self.case("compiler", f"restriction {i}", lambda: self._restriction(tower))
        self.case("compiler", "replay x + x = 4", self._replay)

    def _differential(self, text: str, bound: int):
        f = parse(text)
        s1 = stage1_int_to_S(f)
        s2 = stage2_eliminate(s1, self.cfg)
        truth = [oracle_eval(g, bound).holds for g in (f, s1, s2)]
        return ("ok", "") if len(set(truth)) == 1 else ("fail", f"source/stage1/stage2 = {truth}")

    def _random_element(self, tower: LTower):
        def coeff():
            return sum(self.rng.randint(-3, 3) * Z1**i * Z2**j for i in range(2) for j in range(2))

        exprs = [coeff() for _ in range(4)]
        element = tower.from_expr(exprs[0] + exprs[1] * H1 + exprs[2] * H2 + exprs[3] * H1 * H2)
        return element, exprs

    def _restriction(self, tower: LTower):
        u, ue = self._random_element(tower)
        v, ve = self._random_element(tower)
        basis = (1, H1, H2, H1 * H2)
        product_expr = sum(c * b for c, b in zip(ue, basis)) * sum(c * b for c, b in zip(ve, basis))
        for got, want in zip(h_components(product_expr, self.params), (u * v).coords):
            if sympy.cancel(got - want.as_expr()) != 0:
                return "fail", "product components differ"
        for got, want in zip([a + b for a, b in zip(ue, ve)], (u + v).coords):
            if sympy.cancel(got - want.as_expr()) != 0:
                return "fail", "sum components differ"
        return "ok", ""

    def _replay(self):
        result = compile_source("exists x . x + x = 4", {}, single_equation=True)
        replay_witness(result, {"x": 2})
        return "ok", f"{len(result.stage5.equations)} equations"

    def combiner(self, samples: int) -> None:
        witness = certify_nonsquare(Z1)
        if not hasattr(witness, "order"):
            self.case("combiner", "witness", lambda: ("fail", "z1 has no non-square witness"))
            return
        for i in range(samples):
            self.case("combiner", f"sample {i}", self._combine_sample)

    def _combine_sample(self):
        def value():
            if self.rng.random() < 0.3:
                return sympy.Integer(0)
            return sum(self.rng.randint(-4, 4) * Z1**i * Z2**j for i in range(3) for j in range(2))

        p, q = value(), value()
        combined = sympy.expand(combine_pair(p, q, Z1))
        expected = p == 0 and q == 0
        return ("ok", "") if (combined == 0) == expected else ("fail", f"p={p}, q={q}")


# ── thresholds and report ──


def parse_args() -> argparse.Namespace:
    parser = argparse.ArgumentParser(description="Acceptance sweeps judged from the run log")
    parser.add_argument("--metrics-file", default="sweep.jsonl", help="Path to the run log")
    parser.add_argument("--groups", nargs="*", choices=GROUPS, default=list(GROUPS))
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--window", type=int, default=2, help="|n|, |r| window of the valuation sweeps")
    parser.add_argument("--template-window", type=int, default=10)
    parser.add_argument("--oracle-bound", type=int, default=10)
    parser.add_argument("--restriction-pairs", type=int, default=1000)
    parser.add_argument("--combiner-samples", type=int, default=1000)
    parser.add_argument("--max-failures", type=int, default=0)
    parser.add_argument("--min-certified", type=int, default=7, help="certified cases required in 'certify'")
    parser.add_argument("--min-certified-r2", type=int, default=3, help="certified r = 2 instances required")
    return parser.parse_args()


def build_summary(stats: SweepStats) -> str:
    lines = ["\nSweep Summary"]
    for group in REPORTED:
        if group not in stats.cases:
            continue
        lines.append(
            f"- {group}: cases={stats.cases[group]}"
            f" failures={stats.failures.get(group, 0)}"
            f" inconclusive={stats.inconclusive.get(group, 0)}"
            f" time={stats.durations.get(group, 0.0):.1f}s"
        )
    return "\n".join(lines) + "\n"


def evaluate_thresholds(stats: SweepStats, args: argparse.Namespace) -> list[str]:
    failures = []
    total = sum(stats.failures.values())
    if total > args.max_failures:
        for group, count in stats.failures.items():
            failures.append(f"{group}: {count} failing cases, first: {stats.first_failure[group]}")
    for group, needed in (("certify", args.min_certified), ("certify-r2", args.min_certified_r2)):
        if group not in stats.cases:
            continue
        certified = stats.cases[group] - stats.inconclusive.get(group, 0) - stats.failures.get(group, 0)
        if certified < needed:
            failures.append(f"{group}: {certified} certified < {needed} required")
    for group in ("refute", "compiler", "templates", "combiner"):
        if stats.inconclusive.get(group):
            failures.append(f"{group}: {stats.inconclusive[group]} inconclusive cases")
    return failures


def main() -> int:
    args = parse_args()
    metrics_path = Path(args.metrics_file)
    offset = metrics_path.stat().st_size if metrics_path.exists() else 0
    metrics = MetricsLogger({"enabled": True, "file": str(metrics_path), "flush_interval": 50})
    sweep = Sweep(metrics, CurveParams(), EngineConfig(), random.Random(args.seed))

    print(f"[sweep] groups={' '.join(args.groups)} log='{metrics_path}'")
    runners = {
        "group": sweep.group,
        "valuation": lambda: sweep.valuation(args.window),
        "divisor": sweep.divisor,
        "refute": lambda: sweep.refute(args.window),
        "certify": sweep.certify,
        "templates": lambda: sweep.templates(args.template_window),
        "compiler": lambda: sweep.compiler(args.oracle_bound, args.restriction_pairs),
        "combiner": lambda: sweep.combiner(args.combiner_samples),
    }
    try:
        for group in args.groups:
            start = time.monotonic()
            runners[group]()
            metrics.flush()
            print(f"[sweep] {group} done in {time.monotonic() - start:.1f}s")
    except KeyboardInterrupt:
        print("[sweep] interrupted by user")
    finally:
        metrics.flush()

    events, _ = read_events(metrics_path, offset)
    stats = SweepStats()
    for event in events:
        stats.add_event(event)

    print(build_summary(stats))
    failures = evaluate_thresholds(stats, args)
    if failures:
        print("Sweep Result: FAIL")
        for failure in failures:
            print(f"- {failure}")
        return 1
    print("Sweep Result: PASS")
    return 0


if __name__ == "__main__":
    sys.exit(main())
