"""Brute-force truth of sentences within a bound, for differential testing.

Integer sentences are decided by enumerating every assignment with
|value| <= bound. Pair formulas are decided by a small constraint search:
source pairs are enumerated within the bound, every other pair component is
solved by propagation through the linear atoms and the products of Divides,
and only components that stay undetermined are enumerated (within the
witness bound).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from itertools import product
from typing import Iterator

from compiler.sformula import Divides, IsZ, PairAdd, PairConst, PairScale, PairVar, Plus, SFormula, W
from compiler.syntax import Conj, Disj, IntFormula, holds, int_value

log = logging.getLogger(__name__)

Unknown = tuple[str, int]
# linear form: unknown -> coefficient, plus the constant under key None
Linear = dict


@dataclass(frozen=True)
class OracleResult:
    holds: bool
    bound: int
    assignment: dict = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.holds

    @property
    def label(self) -> str:
        return "true-within-bound" if self.holds else "false-within-bound"


def _span(limit: int) -> list[int]:
    return sorted(range(-limit, limit + 1), key=lambda v: (abs(v), -v))


# ── integer sentences ──


def _eval_int(f: IntFormula, bound: int) -> OracleResult:
    span = _span(bound)
    for values in product(span, repeat=len(f.variables)):
        env = dict(zip(f.variables, values))
        if holds(f.body, lambda eq: int_value(eq.left, env) == int_value(eq.right, env)):
            return OracleResult(True, bound, env)
    return OracleResult(False, bound)


# ── pair formulas ──


def _linear(term) -> tuple[Linear, Linear]:
    if isinstance(term, PairVar):
        return {(term.name, 0): 1}, {(term.name, 1): 1}
    if isinstance(term, PairConst):
        return {None: term.n}, {None: term.r}
    if isinstance(term, PairAdd):
        a, b = _linear(term.left)
        c, d = _linear(term.right)
        return _combine(a, c, 1), _combine(b, d, 1)
    a, b = _linear(term.term)
    return _scale(a, term.k1), _scale(b, term.k2)


def _combine(a: Linear, b: Linear, sign: int) -> Linear:
    out = dict(a)
    for key, coeff in b.items():
        out[key] = out.get(key, 0) + sign * coeff
    return {k: v for k, v in out.items() if v or k is None}


def _scale(a: Linear, k: int) -> Linear:
    return {key: k * coeff for key, coeff in a.items() if k * coeff or key is None}


@dataclass(frozen=True)
class _Eq:
    """form = 0"""

    form: tuple


@dataclass(frozen=True)
class _Prod:
    """c = a * b"""

    a: tuple
    b: tuple
    c: tuple


def _freeze(form: Linear) -> tuple:
    return tuple(sorted(form.items(), key=lambda kv: (kv[0] is not None, kv[0] or ("", 0))))


def _constraints(atom) -> list:
    if isinstance(atom, Plus):
        p, q, s = _linear(atom.p), _linear(atom.q), _linear(atom.s)
        return [_Eq(_freeze(_combine(_combine(p[i], q[i], 1), s[i], -1))) for i in (0, 1)]
    if isinstance(atom, IsZ):
        return [_Eq(_freeze(_linear(atom.p)[1]))]
    if isinstance(atom, W):
        p, q = _linear(atom.p), _linear(atom.q)
        return [_Eq(_freeze(_combine(p[0], q[1], -1))), _Eq(_freeze(_combine(p[1], q[0], -1)))]
    if isinstance(atom, Divides):
        p, q = _linear(atom.p), _linear(atom.q)
        return [_Eq(_freeze(_combine(p[1], {None: 1}, -1))), _Prod(_freeze(p[0]), _freeze(q[1]), _freeze(q[0]))]
    raise TypeError(f"unknown atom {type(atom).__name__}")


def _lower(node):
    if isinstance(node, Conj):
        return Conj(tuple(_lower(i) for i in node.items))
    if isinstance(node, Disj):
        return Disj(tuple(_lower(i) for i in node.items))
    return Conj(tuple(_constraints(node)))


def _value(form: tuple, env: dict) -> tuple[int, list[tuple[Unknown, int]]]:
    const = 0
    unknown = []
    for key, coeff in form:
        if key is None:
            const += coeff
        elif key in env:
            const += coeff * env[key]
        else:
            unknown.append((key, coeff))
    return const, unknown


class _Fail(Exception):
    pass


def _solve_linear(const: int, unknown: list, env: dict) -> bool:
    """Assign the single unknown of const + c*u = 0; False when more than one remains."""
    if not unknown:
        if const:
            raise _Fail
        return True
    if len(unknown) > 1:
        return False
    key, coeff = unknown[0]
    if const % coeff:
        raise _Fail
    env[key] = -const // coeff
    return True


def _propagate(goals: list, env: dict) -> list:
    """Solve what can be solved; return the goals still open. Raises _Fail."""
    changed = True
    while changed:
        changed = False
        pending = []
        stack = list(reversed(goals))
        while stack:
            g = stack.pop()
            if isinstance(g, Conj):
                stack.extend(reversed(g.items))
                continue
            if isinstance(g, Disj):
                if not g.items:
                    raise _Fail
                pending.append(g)
                continue
            if isinstance(g, _Eq):
                const, unknown = _value(g.form, env)
                if _solve_linear(const, unknown, env):
                    changed = changed or bool(unknown)
                else:
                    pending.append(g)
                continue
            done = _propagate_product(g, env)
            if done is None:
                pending.append(g)
            else:
                changed = changed or done
        goals = pending
    return goals


def _propagate_product(g: _Prod, env: dict) -> bool | None:
    """True when something was assigned, False when already satisfied, None when stuck."""
    ca, ua = _value(g.a, env)
    cb, ub = _value(g.b, env)
    if ua and ub:
        return None
    # one factor is known, so c - k*other = 0 is linear
    k, other = (ca, g.b) if not ua else (cb, g.a)
    form = _combine(dict(g.c), _scale(dict(other), k), -1)
    const, unknown = _value(_freeze(form), env)
    if _solve_linear(const, unknown, env):
        return bool(unknown)
    return None


def _unknowns(goals) -> Iterator[Unknown]:
    for g in goals:
        if isinstance(g, (Conj, Disj)):
            yield from _unknowns(g.items)
        elif isinstance(g, _Eq):
            yield from (k for k, _ in g.form if k is not None)
        else:
            for form in (g.a, g.b, g.c):
                yield from (k for k, _ in form if k is not None)


class _Search:
    def __init__(self, sources: frozenset[str], bound: int, witness_bound: int, step_limit: int):
        self.sources = sources
        self.bound = bound
        self.witness_bound = witness_bound
        self.steps = 0
        self.step_limit = step_limit

    def _out_of_bound(self, env: dict) -> bool:
        """A source pair component was propagated past the bound."""
        return any(abs(v) > self.bound for (name, _), v in env.items() if name in self.sources)

    def solve(self, goals: list, env: dict) -> dict | None:
        self.steps += 1
        if self.steps > self.step_limit:
            raise RuntimeError(f"oracle search exceeded {self.step_limit} steps")
        env = dict(env)
        try:
            goals = _propagate(goals, env)
        except _Fail:
            return None
        if self._out_of_bound(env):
            return None
        if not goals:
            return env
        open_vars = [k for k in _unknowns(goals) if k not in env]
        if open_vars:
            # prefer source pairs, then anything appearing in a non-disjunctive goal
            flat = [k for k in _unknowns([g for g in goals if not isinstance(g, Disj)]) if k not in env]
            pick = next((k for k in open_vars if k[0] in self.sources), None)
            if pick is None and flat:
                pick = flat[0]
            if pick is not None:
                limit = self.bound if pick[0] in self.sources else self.witness_bound
                for v in _span(limit):
                    found = self.solve(goals, {**env, pick: v})
                    if found is not None:
                        return found
                return None
        disj = next(g for g in goals if isinstance(g, Disj))
        rest = [g for g in goals if g is not disj]
        for item in disj.items:
            found = self.solve(rest + [item], env)
            if found is not None:
                return found
        return None


def solve_sformula(
    f: SFormula,
    bound: int,
    witness_bound: int | None = None,
    fixed: dict[str, tuple[int, int]] | None = None,
    step_limit: int = 200_000,
) -> dict[str, tuple[int, int]] | None:
    """A satisfying pair assignment within the bounds, or None."""
    witness_bound = bound if witness_bound is None else witness_bound
    env: dict[Unknown, int] = {}
    for name, (n, r) in (fixed or {}).items():
        env[(name, 0)] = n
        env[(name, 1)] = r
    found = _Search(f.sources, bound, witness_bound, step_limit).solve([_lower(f.body)], env)
    if found is None:
        return None
    out = {}
    for name in f.variables:
        out[name] = (found.get((name, 0), 0), found.get((name, 1), 0))
    return out


def oracle_eval(f: IntFormula | SFormula, bound: int, witness_bound: int | None = None) -> OracleResult:
    """true-within-bound when some assignment with |source values| <= bound satisfies f."""
    if bound < 0:
        raise ValueError(f"bound must be >= 0, got {bound}")
    if isinstance(f, IntFormula):
        return _eval_int(f, bound)
    assignment = solve_sformula(f, bound, witness_bound)
    if assignment is None:
        return OracleResult(False, bound)
    return OracleResult(True, bound, assignment)
