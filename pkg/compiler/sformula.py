"""Formulas over the structure of integer pairs with +, |, Z and W.

Pair terms are variables, constants, sums and lane-wise integer multiples
(k1*n, k2*r). Atoms:

    Plus(p, q, s)    p + q = s
    Divides(p, q)    p = (n, 1) and q = (n*s, s)
    IsZ(p)           p = (n, 0)
    W(p, q)          p = (a, b), q = (b, a)
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Mapping, Union

from compiler.syntax import Conj, Disj, atoms, describe_tree, holds


@dataclass(frozen=True)
class PairVar:
    name: str


@dataclass(frozen=True)
class PairConst:
    n: int
    r: int


@dataclass(frozen=True)
class PairAdd:
    left: PairTerm
    right: PairTerm


@dataclass(frozen=True)
class PairScale:
    k1: int
    k2: int
    term: PairTerm


PairTerm = Union[PairVar, PairConst, PairAdd, PairScale]

ORIGIN = PairConst(0, 0)
UNIT = PairConst(0, 1)


def pair_sub(p: PairTerm, q: PairTerm) -> PairTerm:
    return PairAdd(p, PairScale(-1, -1, q))


@dataclass(frozen=True)
class Plus:
    p: PairTerm
    q: PairTerm
    s: PairTerm


@dataclass(frozen=True)
class Divides:
    p: PairTerm
    q: PairTerm
    # modulus known to avoid the exceptional set
    safe: bool = False


@dataclass(frozen=True)
class IsZ:
    p: PairTerm


@dataclass(frozen=True)
class W:
    p: PairTerm
    q: PairTerm


SAtom = Union[Plus, Divides, IsZ, W]


@dataclass(frozen=True)
class SFormula:
    """exists variables . body; `sources` are the pairs standing for integer variables."""

    variables: tuple[str, ...]
    body: Any
    sources: frozenset[str] = field(default_factory=frozenset)

    def describe(self) -> str:
        head = f"exists {' '.join(self.variables)} . " if self.variables else ""
        return head + describe_tree(self.body, describe_atom)

    def atoms(self):
        return atoms(self.body)


class NameSupply:
    """Fresh generated names; all start with an underscore."""

    def __init__(self, taken=()):
        self.taken = set(taken)
        self.counters: dict[str, int] = {}

    def fresh(self, stem: str) -> str:
        while True:
            n = self.counters.get(stem, 0) + 1
            self.counters[stem] = n
            name = f"_{stem}{n}"
            if name not in self.taken:
                self.taken.add(name)
                return name


# ── evaluation ──


def pair_value(term: PairTerm, env: Mapping[str, tuple[int, int]]) -> tuple[int, int]:
    if isinstance(term, PairVar):
        return env[term.name]
    if isinstance(term, PairConst):
        return term.n, term.r
    if isinstance(term, PairAdd):
        a, b = pair_value(term.left, env)
        c, d = pair_value(term.right, env)
        return a + c, b + d
    n, r = pair_value(term.term, env)
    return term.k1 * n, term.k2 * r


def atom_holds(atom: SAtom, env: Mapping[str, tuple[int, int]]) -> bool:
    if isinstance(atom, Plus):
        a, b = pair_value(atom.p, env)
        c, d = pair_value(atom.q, env)
        return (a + c, b + d) == pair_value(atom.s, env)
    if isinstance(atom, Divides):
        n, one = pair_value(atom.p, env)
        m, s = pair_value(atom.q, env)
        return one == 1 and m == n * s
    if isinstance(atom, IsZ):
        return pair_value(atom.p, env)[1] == 0
    a, b = pair_value(atom.p, env)
    c, d = pair_value(atom.q, env)
    return a == d and b == c


def formula_holds(body, env: Mapping[str, tuple[int, int]]) -> bool:
    return holds(body, lambda atom: atom_holds(atom, env))


def term_vars(term: PairTerm) -> set[str]:
    if isinstance(term, PairVar):
        return {term.name}
    if isinstance(term, PairAdd):
        return term_vars(term.left) | term_vars(term.right)
    if isinstance(term, PairScale):
        return term_vars(term.term)
    return set()


def substitute(node, mapping: Mapping[str, PairTerm]):
    """Replace pair variables in a term, atom or connective tree."""
    if isinstance(node, Conj):
        return Conj(tuple(substitute(i, mapping) for i in node.items))
    if isinstance(node, Disj):
        return Disj(tuple(substitute(i, mapping) for i in node.items))
    if isinstance(node, PairVar):
        return mapping.get(node.name, node)
    if isinstance(node, PairConst):
        return node
    if isinstance(node, PairAdd):
        return PairAdd(substitute(node.left, mapping), substitute(node.right, mapping))
    if isinstance(node, PairScale):
        return PairScale(node.k1, node.k2, substitute(node.term, mapping))
    if isinstance(node, Plus):
        return Plus(substitute(node.p, mapping), substitute(node.q, mapping), substitute(node.s, mapping))
    if isinstance(node, Divides):
        return Divides(substitute(node.p, mapping), substitute(node.q, mapping), node.safe)
    if isinstance(node, IsZ):
        return IsZ(substitute(node.p, mapping))
    if isinstance(node, W):
        return W(substitute(node.p, mapping), substitute(node.q, mapping))
    raise TypeError(f"cannot substitute into {type(node).__name__}")


# ── text ──


def describe_term(term: PairTerm) -> str:
    if isinstance(term, PairVar):
        return term.name
    if isinstance(term, PairConst):
        return f"({term.n},{term.r})"
    if isinstance(term, PairAdd):
        return f"{describe_term(term.left)} + {describe_term(term.right)}"
    if term.k1 == term.k2:
        return f"{term.k1}*[{describe_term(term.term)}]"
    return f"({term.k1},{term.k2})*[{describe_term(term.term)}]"


def describe_atom(atom: SAtom) -> str:
    if isinstance(atom, Plus):
        return f"Plus({describe_term(atom.p)}; {describe_term(atom.q)}; {describe_term(atom.s)})"
    if isinstance(atom, Divides):
        return f"Divides({describe_term(atom.p)}; {describe_term(atom.q)})"
    if isinstance(atom, IsZ):
        return f"Z({describe_term(atom.p)})"
    return f"W({describe_term(atom.p)}; {describe_term(atom.q)})"
