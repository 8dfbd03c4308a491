"""Replace W atoms and divisibility by arbitrary moduli with their definitions.

After this pass every Divides atom has a modulus of the form (d*m + m0, 1)
or (m0, 1), so it never lies in the exceptional set.
"""

from __future__ import annotations

from compiler.sformula import Divides, NameSupply, SFormula, W
from compiler.syntax import Conj, Disj, conj
from divisibility.config import EngineConfig
from divisibility.templates import define_divides, define_W


def stage2_eliminate(f: SFormula, cfg: EngineConfig) -> SFormula:
    supply = NameSupply(f.variables)
    w_template = define_W(cfg)
    div_template = define_divides(cfg)
    variables = list(f.variables)

    def walk(node):
        if isinstance(node, Conj):
            return conj(*(walk(i) for i in node.items))
        if isinstance(node, Disj):
            return Disj(tuple(walk(i) for i in node.items))
        if isinstance(node, Divides) and not node.safe:
            fresh, body = div_template.instantiate(node.p, node.q, supply=supply)
            variables.extend(fresh)
            return walk(body)
        if isinstance(node, W):
            fresh, body = w_template.instantiate(node.p, node.q, supply=supply)
            variables.extend(fresh)
            return walk(body)
        return node

    body = walk(f.body)
    return SFormula(tuple(variables), body, f.sources)
