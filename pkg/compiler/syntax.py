"""Integer sentences: expressions, equations and positive connectives."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable, Mapping, Union


@dataclass(frozen=True)
class Conj:
    items: tuple = ()


@dataclass(frozen=True)
class Disj:
    items: tuple = ()


TRUE = Conj()
FALSE = Disj()


def conj(*items) -> Conj | Any:
    """Conjunction with nested conjunctions flattened and TRUE dropped."""
    out = []
    for item in items:
        if isinstance(item, Conj):
            out.extend(item.items)
        else:
            out.append(item)
    return out[0] if len(out) == 1 else Conj(tuple(out))


def disj(*items) -> Disj | Any:
    out = []
    for item in items:
        if isinstance(item, Disj):
            out.extend(item.items)
        else:
            out.append(item)
    return out[0] if len(out) == 1 else Disj(tuple(out))


def holds(node, atom_holds: Callable[[Any], bool]) -> bool:
    if isinstance(node, Conj):
        return all(holds(item, atom_holds) for item in node.items)
    if isinstance(node, Disj):
        return any(holds(item, atom_holds) for item in node.items)
    return atom_holds(node)


def atoms(node):
    """Atoms of a connective tree, left to right."""
    if isinstance(node, (Conj, Disj)):
        for item in node.items:
            yield from atoms(item)
    else:
        yield node


def describe_tree(node, describe: Callable[[Any], str]) -> str:
    if isinstance(node, Conj):
        if not node.items:
            return "true"
        return "(" + " and ".join(describe_tree(i, describe) for i in node.items) + ")"
    if isinstance(node, Disj):
        if not node.items:
            return "false"
        return "(" + " or ".join(describe_tree(i, describe) for i in node.items) + ")"
    return describe(node)


# ── integer expressions ──


@dataclass(frozen=True)
class IVar:
    name: str


@dataclass(frozen=True)
class IConst:
    value: int


@dataclass(frozen=True)
class IAdd:
    left: IntExpr
    right: IntExpr


@dataclass(frozen=True)
class IMul:
    left: IntExpr
    right: IntExpr


IntExpr = Union[IVar, IConst, IAdd, IMul]


@dataclass(frozen=True)
class IntEq:
    left: IntExpr
    right: IntExpr


@dataclass(frozen=True)
class IntFormula:
    """exists variables . body, body a positive combination of IntEq atoms."""

    variables: tuple[str, ...]
    body: Any

    def describe(self) -> str:
        head = f"exists {' '.join(self.variables)} . " if self.variables else ""
        return head + describe_tree(self.body, describe_int_eq)


def int_value(expr: IntExpr, env: Mapping[str, int]) -> int:
    if isinstance(expr, IConst):
        return expr.value
    if isinstance(expr, IVar):
        return env[expr.name]
    if isinstance(expr, IAdd):
        return int_value(expr.left, env) + int_value(expr.right, env)
    return int_value(expr.left, env) * int_value(expr.right, env)


def int_vars(expr: IntExpr) -> set[str]:
    if isinstance(expr, IVar):
        return {expr.name}
    if isinstance(expr, (IAdd, IMul)):
        return int_vars(expr.left) | int_vars(expr.right)
    return set()


def describe_int(expr: IntExpr) -> str:
    if isinstance(expr, IConst):
        return str(expr.value)
    if isinstance(expr, IVar):
        return expr.name
    if isinstance(expr, IAdd):
        return f"({describe_int(expr.left)} + {describe_int(expr.right)})"
    return f"{describe_int(expr.left)} * {describe_int(expr.right)}"


def describe_int_eq(eq: IntEq) -> str:
    return f"{describe_int(eq.left)} = {describe_int(eq.right)}"
