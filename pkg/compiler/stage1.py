"""Integers to pairs: n becomes (n, 0), + becomes Plus, each product gets a fresh pair.

A product x*y is introduced as a fresh pair p with Z(p) and the encoding

    ((x,0) + (0,1)) | ((p,0) + (a,b))  and  W((a,b), (y,0)),

placed in the top-level conjunction so that it stays satisfiable whatever
branch of the sentence holds.
"""

from __future__ import annotations

from compiler.sformula import ORIGIN, IsZ, NameSupply, PairAdd, PairConst, PairScale, PairVar, Plus, SFormula
from compiler.syntax import FALSE, TRUE, Conj, Disj, IAdd, IConst, IMul, IntEq, IntFormula, IVar, conj, int_vars
from divisibility.templates import product_encoding


class _Translator:
    def __init__(self, f: IntFormula):
        self.supply = NameSupply(f.variables)
        self.variables: list[str] = list(f.variables)
        self.definitions: list = []

    def constant(self, expr) -> int | None:
        if int_vars(expr):
            return None
        if isinstance(expr, IConst):
            return expr.value
        left, right = self.constant(expr.left), self.constant(expr.right)
        return left + right if isinstance(expr, IAdd) else left * right

    def term(self, expr):
        value = self.constant(expr)
        if value is not None:
            return PairConst(value, 0)
        if isinstance(expr, IVar):
            return PairVar(expr.name)
        if isinstance(expr, IAdd):
            return PairAdd(self.term(expr.left), self.term(expr.right))
        k = self.constant(expr.left)
        if k is not None:
            return PairScale(k, k, self.term(expr.right))
        k = self.constant(expr.right)
        if k is not None:
            return PairScale(k, k, self.term(expr.left))
        return self.product(self.term(expr.left), self.term(expr.right))

    def product(self, m, r):
        n = self.supply.fresh("pr")
        ab = self.supply.fresh("ab")
        self.variables.extend([n, ab])
        self.definitions.append(IsZ(PairVar(n)))
        self.definitions.append(product_encoding(m, PairVar(n), r, PairVar(ab)))
        return PairVar(n)

    def formula(self, node):
        if isinstance(node, Conj):
            return conj(*(self.formula(i) for i in node.items))
        if isinstance(node, Disj):
            return Disj(tuple(self.formula(i) for i in node.items))
        return self.equation(node)

    def equation(self, eq: IntEq):
        left, right = self.constant(eq.left), self.constant(eq.right)
        if left is not None and right is not None:
            return TRUE if left == right else FALSE
        target = self.term(eq.right)
        if isinstance(eq.left, IAdd) and self.constant(eq.left) is None:
            return Plus(self.term(eq.left.left), self.term(eq.left.right), target)
        return Plus(self.term(eq.left), ORIGIN, target)


def stage1_int_to_S(f: IntFormula) -> SFormula:
    tr = _Translator(f)
    body = tr.formula(f.body)
    zs = [IsZ(PairVar(v)) for v in f.variables]
    return SFormula(tuple(tr.variables), conj(*zs, *tr.definitions, body), frozenset(f.variables))
