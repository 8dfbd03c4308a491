"""Existential definitions of W and of divisibility by safe moduli."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Mapping

from compiler.sformula import (
    UNIT,
    Divides,
    NameSupply,
    PairAdd,
    PairConst,
    PairScale,
    PairTerm,
    PairVar,
    SFormula,
    W,
    pair_sub,
)
from compiler.syntax import conj
from divisibility.config import EngineConfig

Pair = tuple[int, int]


@dataclass(frozen=True)
class SFormulaTemplate:
    """A formula with hole pairs and its own existential pairs.

    `build` maps hole and existential terms to a body; `witness` gives values
    of the existentials that satisfy the body whenever the defined relation
    holds at the hole values.
    """

    name: str
    holes: tuple[str, ...]
    existentials: tuple[str, ...]
    build: Callable[[Mapping[str, PairTerm]], object]
    witness: Callable[[Mapping[str, Pair]], dict[str, Pair]]

    def instantiate(self, *terms: PairTerm, supply: NameSupply) -> tuple[tuple[str, ...], object]:
        """(fresh existential names, body) with holes bound to terms."""
        if len(terms) != len(self.holes):
            raise ValueError(f"{self.name} takes {len(self.holes)} pair terms, got {len(terms)}")
        fresh = tuple(supply.fresh(e) for e in self.existentials)
        mapping: dict[str, PairTerm] = dict(zip(self.holes, terms))
        mapping.update({e: PairVar(f) for e, f in zip(self.existentials, fresh)})
        return fresh, self.build(mapping)

    def at(self, values: Mapping[str, Pair]) -> SFormula:
        """The template with holes fixed to constant pairs."""
        mapping: dict[str, PairTerm] = {h: PairConst(*values[h]) for h in self.holes}
        mapping.update({e: PairVar(e) for e in self.existentials})
        return SFormula(self.existentials, self.build(mapping))


def define_W(cfg: EngineConfig) -> SFormulaTemplate:
    """W((m,n),(r,s)) iff (m0,1) | (m0(m+r), n+s) and (m0,1) | (-m0(m-r), n-s)."""
    m0 = cfg.m0
    modulus = PairConst(m0, 1)

    def build(t):
        p, q = t["p"], t["q"]
        return conj(
            Divides(modulus, PairScale(m0, 1, PairAdd(p, q)), safe=True),
            Divides(modulus, PairScale(-m0, 1, pair_sub(p, q)), safe=True),
        )

    return SFormulaTemplate("W", ("p", "q"), (), build, lambda values: {})


def define_W_unit() -> SFormulaTemplate:
    """W((a,b),(x,y)) iff (1,1) | ((x,y) + (a,b)) and (-1,1) | ((x,y) - (a,b))."""

    def build(t):
        p, q = t["p"], t["q"]
        return conj(
            Divides(PairConst(1, 1), PairAdd(q, p), safe=True),
            Divides(PairConst(-1, 1), pair_sub(q, p), safe=True),
        )

    return SFormulaTemplate("W-unit", ("p", "q"), (), build, lambda values: {})


def define_divides(cfg: EngineConfig) -> SFormulaTemplate:
    """(m,1) | (n,r) iff exists (a,b): (dm+m0,1) | ((dn,r) + m0(a,b)) and W((a,b),(0,r)).

    The hole p = (m, s) becomes the modulus (dm + m0, s), so the atom still
    requires s = 1. W forces (a, b) = (r, 0).
    """
    d, m0 = cfg.d, cfg.m0

    def build(t):
        p, q, ab = t["p"], t["q"], t["ab"]
        modulus = PairAdd(PairScale(d, 1, p), PairConst(m0, 0))
        shifted = PairAdd(PairScale(d, 1, q), PairScale(m0, m0, ab))
        # (0, r) from q = (n, r)
        second = PairScale(0, 1, q)
        return conj(Divides(modulus, shifted, safe=True), W(ab, second))

    def witness(values):
        _, r = values["q"]
        return {"ab": (r, 0)}

    return SFormulaTemplate("Divides", ("p", "q"), ("ab",), build, witness)


def product_encoding(m: PairTerm, n: PairTerm, r: PairTerm, ab: PairTerm) -> object:
    """n = m*r on first components: ((m,0)+(0,1)) | ((n,0)+(a,b)) and W((a,b),(r,0))."""
    return conj(Divides(PairAdd(m, UNIT), PairAdd(n, ab)), W(ab, r))


__all__ = ["SFormulaTemplate", "define_W", "define_W_unit", "define_divides", "product_encoding"]
