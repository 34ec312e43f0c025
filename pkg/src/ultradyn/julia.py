"""Tropical (log-radius) model of the conjugated map ``g`` on disks about 0.

All radii are stored as ``log_p`` of the radius, so a disk ``D(0, r)``
contains ``x`` iff ``v(x) >= -log_p r``.  On this scale the norm of ``g`` on
``D(0, r)`` becomes the convex piecewise-linear map
``tau(rho) = max_n (n * rho - v(a_n))``.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional

from .errors import DomainError, InternalInconsistency, NoPreimage
from .newton import lower_hull
from .reduction import conjugate_coeff_valuations, cutoffs, fixed_point_valuation
from .valcore import INF, NEG_INF, ExtRat, UnicritParams

__all__ = [
    "JuliaVerdict", "RadiiTrace", "breakpoint_log_radii", "wdeg_on_disk",
    "tau_image_log_radius", "preimage_log_radius", "initial_log_radius",
    "c_levels", "band_index", "limit_log_radius", "radii_sequence", "julia_classify",
]


class JuliaVerdict(str, enum.Enum):
    CANTOR_TYPE_I = "CantorTypeI"
    CANTOR_WITH_TYPE_II = "CantorWithTypeII"
    SINGLE_TYPE_II = "SingleTypeII"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class RadiiTrace:
    params: UnicritParams
    v_c: ExtRat
    v_b: ExtRat
    rho_seq: tuple
    rho_limit: ExtRat
    band_n: int

    def to_json(self, verdict: Optional[JuliaVerdict] = None) -> dict:
        return {
            "v_c": str(self.v_c),
            "rho_seq": [str(r) for r in self.rho_seq],
            "rho_limit": str(self.rho_limit),
            "band_n": self.band_n,
            "verdict": None if verdict is None else str(verdict),
        }


def breakpoint_log_radii(params: UnicritParams, v_c) -> list:
    """``[log r_0, ..., log r_{k+1}]``; disk radii where the Weierstrass degree of ``g`` jumps."""
    p, k = params.p, params.k
    v_b = fixed_point_valuation(params, v_c)
    out = [NEG_INF]
    out += [ExtRat(-Fraction(1, p ** n - p ** (n - 1))) - v_b for n in range(1, k + 1)]
    out.append(INF if params.bigN == 1 else -v_b)
    return out


def _band_wdeg(params: UnicritParams, v_c, rho: ExtRat) -> int:
    radii = breakpoint_log_radii(params, v_c)
    if rho >= radii[-1]:
        return params.ell
    n = max(i for i in range(params.k + 1) if radii[i] <= rho)
    return params.p ** n


def wdeg_on_disk(params: UnicritParams, v_c, rho) -> int:
    """Weierstrass degree of ``g`` on ``D(0, p**rho)``: the largest index attaining the max."""
    rho = ExtRat(rho)
    if rho.is_neg_inf:
        tropical = 1   # as r -> 0 the linear term dominates
    elif not rho.is_finite:
        raise DomainError("radius must be finite")
    else:
        coeffs = conjugate_coeff_valuations(params, ExtRat(v_c))
        r = rho.to_fraction()
        best, tropical = None, 0
        for n, v in enumerate(coeffs.entries, start=1):
            val = n * r - v.to_fraction()
            if best is None or val >= best:
                best, tropical = val, n
    closed = _band_wdeg(params, v_c, rho)
    if tropical != closed:
        raise InternalInconsistency(
            f"{params}, v(c)={v_c}, rho={rho}: tropical wdeg {tropical} != band wdeg {closed}"
        )
    return tropical


@lru_cache(maxsize=4096)
def _active_terms(params: UnicritParams, v_c: ExtRat) -> tuple:
    """Hull vertices of ``{(n, v(a_n))}``; only these can attain ``max_n (n*rho - v(a_n))``."""
    coeffs = conjugate_coeff_valuations(params, v_c)
    np = lower_hull(list(enumerate(coeffs.entries, start=1)))
    return tuple((x, y.to_fraction()) for x, y in np.vertices)


def _tau(terms: tuple, r: Fraction) -> Fraction:
    return max(n * r - v for n, v in terms)


def tau_image_log_radius(params: UnicritParams, v_c, rho) -> ExtRat:
    """Log-radius of ``g(D(0, p**rho))``."""
    rho = ExtRat(rho)
    if not rho.is_finite:
        return rho
    return ExtRat(_tau(_active_terms(params, ExtRat(v_c)), rho.to_fraction()))


def _preimage(terms: tuple, t: Fraction) -> Fraction:
    for n, v in terms:
        cand = (t + v) / n
        if _tau(terms, cand) == t:
            return cand
    raise InternalInconsistency(f"no tropical segment inverts target {t}")


def preimage_log_radius(params: UnicritParams, v_c, rho_target) -> ExtRat:
    """Log-radius of the component of ``g^{-1}(D(0, p**rho_target))`` containing 0.

    ``tau`` is continuous and strictly increasing, so the inverse is found by
    solving ``m * rho - v(a_m) = target`` on each candidate segment and keeping
    the solution that ``tau`` maps back onto the target.
    """
    t = ExtRat(rho_target)
    if t.is_pos_inf:
        raise NoPreimage("target disk has infinite radius")
    if t.is_neg_inf:
        return NEG_INF
    return ExtRat(_preimage(_active_terms(params, ExtRat(v_c)), t.to_fraction()))


def initial_log_radius(params: UnicritParams, v_c) -> ExtRat:
    """Log-radius of the smallest disk about 0 holding every root of ``g``."""
    v_b = fixed_point_valuation(params, v_c)
    if params.bigN > 1:
        return -v_b
    p, k = params.p, params.k
    return ExtRat(-Fraction(1, p ** k - p ** (k - 1))) - v_b


def c_levels(params: UnicritParams) -> list:
    """``[c_0, c_1, ..., c_k]`` (plus ``c_{k+1} = 0`` when ``N > 1``)."""
    p, k, ell = params.p, params.k, params.ell
    scale = Fraction(-ell, ell - 1)
    levels = [NEG_INF]
    for n in range(1, k + 1):
        levels.append(ExtRat(scale * (k - n + Fraction(p ** n - 1, p ** n - p ** (n - 1)))))
    if params.bigN > 1:
        levels.append(ExtRat(0))
    return levels


def band_index(params: UnicritParams, v_c) -> Optional[int]:
    """The ``n`` with ``c_n <= v(c) < c_{n+1}``, or ``None`` when ``v(c) >= nu_good``."""
    v_c = ExtRat(v_c)
    levels = c_levels(params)
    if v_c >= levels[-1]:
        return None
    return max(n for n, c in enumerate(levels) if c <= v_c)


def limit_log_radius(params: UnicritParams, v_c) -> ExtRat:
    """Log-radius of the disks making up the intersection of all ``U_m``."""
    v_c = ExtRat(v_c)
    n = band_index(params, v_c)
    if n is None:
        raise DomainError(f"v(c)={v_c} >= nu_good: good reduction, no shrinking disks")
    if n == 0:
        return NEG_INF
    q = params.p ** n
    v_aq = conjugate_coeff_valuations(params, v_c).v_a(q)
    return v_aq / (q - 1)


def radii_sequence(params: UnicritParams, v_c, m_max: int) -> RadiiTrace:
    v_c = ExtRat(v_c)
    if m_max < 1:
        raise DomainError("m_max must be at least 1")
    band = band_index(params, v_c)
    if band is None:
        raise DomainError(f"v(c)={v_c} >= nu_good: good reduction")
    terms = _active_terms(params, v_c)
    rho = initial_log_radius(params, v_c).to_fraction()
    seq = [rho]
    for _ in range(m_max):
        rho = _preimage(terms, rho)
        seq.append(rho)
    return RadiiTrace(
        params, v_c, fixed_point_valuation(params, v_c),
        tuple(ExtRat(r) for r in seq), limit_log_radius(params, v_c), band,
    )


def julia_classify(params: UnicritParams, v_c) -> JuliaVerdict:
    v_c = ExtRat(v_c)
    cut = cutoffs(params)
    if v_c >= cut.nu_good:
        return JuliaVerdict.SINGLE_TYPE_II
    verdict = (JuliaVerdict.CANTOR_TYPE_I if v_c < cut.nu_infty
               else JuliaVerdict.CANTOR_WITH_TYPE_II)
    shrinks_to_points = limit_log_radius(params, v_c).is_neg_inf
    if shrinks_to_points != (verdict is JuliaVerdict.CANTOR_TYPE_I):
        raise InternalInconsistency(
            f"{params}, v(c)={v_c}: verdict {verdict} but limit radius "
            f"{limit_log_radius(params, v_c)}"
        )
    return verdict
