"""The valuation w_m, its residues, and the square gate on residues."""

from valuation.series import LaurentSeries, PrecisionLost
from valuation.wm import (
    NotApplicable,
    Possible,
    ReexpressedL,
    RefutationWitness,
    ValuationLab,
    ValuationOutcome,
    XCombination,
    change_generators,
    lemma_square_gate,
    w_m,
)

__all__ = [
    "LaurentSeries",
    "NotApplicable",
    "Possible",
    "PrecisionLost",
    "ReexpressedL",
    "RefutationWitness",
    "ValuationLab",
    "ValuationOutcome",
    "XCombination",
    "change_generators",
    "lemma_square_gate",
    "w_m",
]
