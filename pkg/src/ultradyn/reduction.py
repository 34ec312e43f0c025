"""Cutoffs and the potential-good-reduction test for ``z**ell - c``.

Conjugating by a translation to a fixed point ``b`` gives
``g(z) = sum_{n=1}^{ell} a_n z**n`` with ``a_n = binom(ell, n) b**(ell - n)``;
``f`` has potential good reduction exactly when every ``v(a_n) >= 0``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import InternalInconsistency
from .valcore import ExtRat, UnicritParams, binom_valuations

__all__ = [
    "Cutoffs", "CoeffValuations", "cutoffs", "fixed_point_valuation",
    "conjugate_coeff_valuations", "has_potential_good_reduction",
]


@dataclass(frozen=True)
class Cutoffs:
    nu_infty: ExtRat
    nu_good: ExtRat
    params: UnicritParams

    def to_json(self) -> dict:
        return {"nu_infty": str(self.nu_infty), "nu_good": str(self.nu_good)}


@dataclass(frozen=True)
class CoeffValuations:
    v_c: ExtRat
    v_b: ExtRat
    entries: tuple   # v(a_1), ..., v(a_ell)

    def v_a(self, n: int) -> ExtRat:
        return self.entries[n - 1]


def cutoffs(params: UnicritParams) -> Cutoffs:
    ell, p = params.ell, params.p
    nu_infty = ExtRat(-Fraction(ell * params.k, ell - 1))
    nu_good = ExtRat(0) if params.bigN > 1 else ExtRat(-Fraction(p, p - 1))
    return Cutoffs(nu_infty, nu_good, params)


def fixed_point_valuation(params: UnicritParams, v_c) -> ExtRat:
    """``v(b)`` for the fixed point ``b`` used in the conjugation.

    Negative ``v(c)`` forces ``v(b) = v(c)/ell``; otherwise a unit fixed point is used.
    """
    v_c = ExtRat(v_c)
    return v_c / params.ell if v_c < 0 else ExtRat(0)


@lru_cache(maxsize=512)
def conjugate_coeff_valuations(params: UnicritParams, v_c) -> CoeffValuations:
    v_c = ExtRat(v_c)
    v_b = fixed_point_valuation(params, v_c)
    b = v_b.to_fraction()
    p, ell = params.p, params.ell
    binoms = binom_valuations(p, ell)
    entries = tuple(ExtRat(binoms[n] + (ell - n) * b) for n in range(1, ell + 1))
    return CoeffValuations(v_c, v_b, entries)


def has_potential_good_reduction(params: UnicritParams, v_c) -> bool:
    """``v(c) >= nu_good``, cross-checked against the conjugate's coefficients."""
    v_c = ExtRat(v_c)
    if v_c >= 0:
        return True
    closed = v_c >= cutoffs(params).nu_good
    coeffs = conjugate_coeff_valuations(params, v_c)
    direct = min(coeffs.entries) >= 0
    if closed != direct:
        raise InternalInconsistency(
            f"{params}, v(c)={v_c}: cutoff test says {closed}, coefficients say {direct}"
        )
    return closed
