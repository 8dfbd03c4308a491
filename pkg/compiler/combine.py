"""Folding a polynomial system into one equation.

For d a non-square of the field, p^2 - d q^2 = 0 has only p = q = 0, so a
balanced fold of the equations by that form keeps the solution set. The
result is kept unexpanded; its expanded degree doubles with every level.
"""

from __future__ import annotations

import logging

import sympy

from algebra.nonsquare import NonSquareWitness, order_at
from compiler.lower import CombinerRejected, PolySystem, check_combiner

log = logging.getLogger(__name__)


def combine_pair(p, q, d) -> sympy.Expr:
    return p**2 - d * q**2


def _check_witness(d, witness) -> None:
    if not isinstance(witness, NonSquareWitness):
        raise CombinerRejected(f"combiner {d} needs a non-square witness, got {type(witness).__name__}")
    if witness.order % 2 == 0:
        raise CombinerRejected(f"witness for {d} has even order {witness.order}")
    actual = order_at(d, witness.place)
    if actual != witness.order:
        raise CombinerRejected(f"witness claims order {witness.order} for {d}, found {actual}")


def combine_single(system: PolySystem, d, witness: NonSquareWitness | None) -> PolySystem:
    """One equation solvable exactly where the whole system is."""
    d = sympy.sympify(d)
    _check_witness(d, witness)
    if not system.restricted:
        check_combiner(d, system.params)
    parts = list(system.equations)
    if not parts:
        parts = [sympy.Integer(0)]
    depth = 0
    while len(parts) > 1:
        folded = [combine_pair(parts[i], parts[i + 1], d) for i in range(0, len(parts) - 1, 2)]
        if len(parts) % 2:
            folded.append(parts[-1])
        parts = folded
        depth += 1
    log.debug("combined %d equations at depth %d", len(system.equations), depth)
    origin = f"combined {len(system.equations)} equations with d = {d}, depth {depth}"
    return PolySystem(
        list(system.variables),
        parts,
        [origin],
        system.params,
        restricted=system.restricted,
        form="single",
        record=system.record,
        parent=system,
    )


__all__ = ["CombinerRejected", "combine_pair", "combine_single"]
