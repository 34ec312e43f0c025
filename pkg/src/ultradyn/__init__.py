"""Valuation-level dynamics of ``z**ell - c`` over a p-adic field.

Newton polygons of difference polynomials, the potential-good-reduction
cutoffs, the tropical model of the Julia set, and the ramification behaviour
of the tower of iterated preimages, all in exact rational arithmetic.
"""
from .errors import DomainError, InternalInconsistency, UltradynError
from .valcore import INF, NEG_INF, ExtRat, UnicritParams, decompose

__version__ = "0.1.0"

__all__ = [
    "DomainError", "InternalInconsistency", "UltradynError",
    "INF", "NEG_INF", "ExtRat", "UnicritParams", "decompose",
]
