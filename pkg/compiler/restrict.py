"""Restriction of scalars from L to K.

Every L-sorted variable v is replaced by four K-sorted components through
v = v_0 + v_1 h1 + v_2 h2 + v_3 h1 h2, and every equation splits into its
four coordinates in that basis. What remains has coefficients in Z[z1, z2].
"""

from __future__ import annotations

import logging

import sympy

from compiler.lower import H1, H2, K_SORT, L_SORT, PolySystem, clear_denominators, h_components

log = logging.getLogger(__name__)

BASIS_LABELS = ("1", "h1", "h2", "h1*h2")


def component_names(name: str) -> tuple[str, str, str, str]:
    return tuple(f"{name}_{j}" for j in range(4))


def stage5_restrict(system: PolySystem) -> PolySystem:
    if system.restricted:
        raise ValueError("system is already restricted to K")
    substitution = {}
    variables: list[tuple[str, str]] = []
    for name, sort in system.variables:
        if sort == L_SORT:
            parts = [sympy.Symbol(c) for c in component_names(name)]
            substitution[sympy.Symbol(name)] = parts[0] + parts[1] * H1 + parts[2] * H2 + parts[3] * H1 * H2
            variables.extend((c.name, K_SORT) for c in parts)
        else:
            variables.append((name, sort))
    equations: list[sympy.Expr] = []
    provenance: list[str] = []
    for expr, origin in zip(system.equations, system.provenance):
        lifted = expr.xreplace(substitution) if substitution else expr
        for label, part in zip(BASIS_LABELS, h_components(lifted, system.params)):
            if part == 0:
                continue
            equations.append(clear_denominators(part))
            provenance.append(f"{origin} <{label}>")
    log.debug("stage 5: %d -> %d equations", len(system.equations), len(equations))
    return PolySystem(
        variables,
        equations,
        provenance,
        system.params,
        restricted=True,
        record=system.record,
        parent=system,
    )


__all__ = ["BASIS_LABELS", "component_names", "stage5_restrict"]
