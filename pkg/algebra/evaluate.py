"""Evaluate sympy expression trees in an arbitrary field implementation."""

from __future__ import annotations

from typing import Any, Mapping

import sympy


def evaluate(expr: sympy.Expr, values: Mapping[sympy.Symbol, Any], one: Any) -> Any:
    """Value of expr with symbols replaced by values; numbers become one * number.

    `one` fixes the target field: any object supporting +, *, ** with int
    exponents (negative exponents need division) and scaling by sympy numbers.
    """
    cache: dict[sympy.Basic, Any] = {}

    def walk(node: sympy.Basic) -> Any:
        hit = cache.get(node)
        if hit is not None:
            return hit
        if node.is_Symbol:
            try:
                out = values[node]
            except KeyError as e:
                raise KeyError(f"no value for symbol {node}") from e
        elif node.is_Add:
            args = node.args
            out = walk(args[0])
            for arg in args[1:]:
                out = out + walk(arg)
        elif node.is_Mul:
            args = node.args
            out = walk(args[0])
            for arg in args[1:]:
                out = out * walk(arg)
        elif node.is_Pow and node.exp.is_Integer and not node.base.is_Number:
            base = walk(node.base)
            exp = int(node.exp)
            out = base**exp if exp >= 0 else one / base**(-exp)
        elif node.is_number:
            out = one * node
        else:
            raise TypeError(f"cannot evaluate {type(node).__name__}: {node}")
        cache[node] = out
        return out

    return walk(sympy.sympify(expr))
