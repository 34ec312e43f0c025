"""Valuation-level model of the iterated-preimage tower ``K_inf / K``.

A chain ``alpha_0 = alpha``, ``f(alpha_{n+1}) = alpha_n`` is followed through
two sequences: ``v(alpha_n)`` and the step sizes ``v(d_n)`` with
``d_n = alpha_{n+1} - alpha_n``.  Since
``f(alpha_{n+2}) - f(alpha_{n+1}) = d_n``, each ``d_{n+1}`` is a root of
``(z + alpha_{n+1})**ell - alpha_{n+1}**ell - d_n`` and its valuation is read
off that Newton polygon: the first slope for the closest preimage, the last
nonzero slope for the furthest one.  For ``v(c) >= 0`` a second chain
``beta`` from the same root is compared with ``alpha`` instead, so that
``d_n = beta_n - alpha_n`` starts from ``d_0 = 0``.  Ever-growing powers of ``p`` in the
denominators of ``v(d_n)`` signal infinite wild ramification.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .errors import (
    DomainError,
    InternalInconsistency,
    MissingRootPointData,
    TameCaseUnsupported,
    TraceTooShort,
)
from .newton import _point_height, predicted_polygon, select_n0
from .reduction import conjugate_coeff_valuations, cutoffs, fixed_point_valuation
from .valcore import INF, NEG_INF, ExtRat, UnicritParams, vp_int

__all__ = [
    "Mode", "RootPointSpec", "TowerTrace", "ExtensionKind", "ExtensionVerdict",
    "propagate_alpha_valuation", "next_distance_valuation", "tower_trace",
    "closed_form_dn", "band_stable_index", "is_wildly_ramified", "classify_extension",
]


class Mode(str, enum.Enum):
    CLOSEST = "closest"
    FURTHEST = "furthest"
    HYBRID = "hybrid"

    def __str__(self):
        return self.value


class ExtensionKind(str, enum.Enum):
    FINITE = "Finite"
    INFINITE_FINITELY_RAMIFIED = "InfiniteFinitelyRamified"
    INFINITE_WILDLY_RAMIFIED = "InfiniteWildlyRamified"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class ExtensionVerdict:
    kind: ExtensionKind
    reason: str

    def to_json(self) -> dict:
        return {"kind": str(self.kind), "reason": self.reason}


@dataclass(frozen=True)
class RootPointSpec:
    """Valuation data for the root point ``alpha``.

    ``v_alpha_minus_b`` is ``v(alpha - b)`` for the fixed point ``b``; when
    ``v(alpha) != v(b)`` it is determined by ``v(alpha)``.
    """

    v_alpha: ExtRat
    v_alpha_minus_b: Optional[ExtRat] = None

    def __post_init__(self):
        object.__setattr__(self, "v_alpha", ExtRat(self.v_alpha))
        if self.v_alpha_minus_b is not None:
            object.__setattr__(self, "v_alpha_minus_b", ExtRat(self.v_alpha_minus_b))

    def resolve(self, v_b: ExtRat) -> Optional[ExtRat]:
        """``v(alpha - b)``, or ``None`` if it cannot be inferred."""
        if self.v_alpha != v_b:
            implied = min(self.v_alpha, v_b)
            if self.v_alpha_minus_b is not None and self.v_alpha_minus_b != implied:
                raise DomainError(
                    f"v(alpha - b) = {self.v_alpha_minus_b} contradicts "
                    f"v(alpha) = {self.v_alpha}, v(b) = {v_b}"
                )
            return implied
        if self.v_alpha_minus_b is not None and self.v_alpha_minus_b < v_b:
            raise DomainError(f"v(alpha - b) = {self.v_alpha_minus_b} is below v(alpha) = v(b) = {v_b}")
        return self.v_alpha_minus_b


@dataclass(frozen=True)
class TowerTrace:
    params: UnicritParams
    v_c: ExtRat
    mode: Mode
    v_alpha_seq: tuple
    v_d_seq: tuple
    den_p_val_seq: tuple
    ambiguous: bool
    lag: int = 0   # 1 for the two-chain construction: step n uses v(alpha_{n+1})

    def to_json(self, verdict: Optional[ExtensionVerdict] = None) -> dict:
        return {
            "mode": str(self.mode),
            "v_alpha_seq": [str(v) for v in self.v_alpha_seq],
            "v_d_seq": [str(v) for v in self.v_d_seq],
            "den_p_val_seq": list(self.den_p_val_seq),
            "ambiguous": self.ambiguous,
            "wildly_ramified": is_wildly_ramified(self) if len(self.v_d_seq) >= 3 else None,
            "verdict": None if verdict is None else str(verdict.kind),
        }


def _propagate(params: UnicritParams, v_c: ExtRat, v_alpha: ExtRat, n_steps: int):
    seq = [v_alpha]
    ambiguous = False
    for _ in range(n_steps):
        cur = seq[-1]
        # v(alpha_{n+1}^ell) = v(c + alpha_n); cancellation possible only on a tie
        if cur == v_c:
            ambiguous = True
        seq.append(min(v_c, cur) / params.ell)
    return seq, ambiguous


def propagate_alpha_valuation(params: UnicritParams, v_c, v_alpha, n_steps: int) -> list:
    if n_steps < 1:
        raise DomainError("n_steps must be at least 1")
    return _propagate(params, ExtRat(v_c), ExtRat(v_alpha), n_steps)[0]


def _segment_slopes(params: UnicritParams, v_y: ExtRat, v_d: ExtRat, xs: Sequence[int]) -> list:
    heights = {x: (v_d if x == 0 else _point_height(params, v_y, x)) for x in xs}
    out = []
    for x0, x1 in zip(xs, xs[1:]):
        y0, y1 = heights[x0], heights[x1]
        # a lead point at +inf gives the -inf segment of the root z = 0
        out.append((y1 - y0) / (x1 - x0) if y0.is_finite else NEG_INF)
    return out


def next_distance_valuation(params: UnicritParams, v_y, v_d, mode) -> ExtRat:
    """Valuation of the closest or furthest root of ``(z+y)**ell - y**ell - d``.

    The closest root to the anchor is never the anchor itself: for ``d = 0``
    the ``-inf`` segment (root ``z = 0``) is skipped.  The furthest root uses
    the last segment of nonzero finite slope, falling back to the last slope.
    """
    mode = Mode(mode)
    if mode is Mode.HYBRID:
        raise DomainError("next_distance_valuation takes 'closest' or 'furthest'")
    v_y, v_d = ExtRat(v_y), ExtRat(v_d)
    if v_y.is_pos_inf:
        # y = 0: F = z**ell - d, every root has valuation v(d)/ell
        return v_d / params.ell if v_d.is_finite else INF
    pred = predicted_polygon(params, v_y, v_d)
    if mode is Mode.CLOSEST:
        if v_d.is_pos_inf:
            return -_segment_slopes(params, v_y, v_d, pred.vertex_xs[1:3])[0]
        return -pred.m1
    if pred.m_ell != 0:
        return -pred.m_ell
    slopes = _segment_slopes(params, v_y, v_d, pred.vertex_xs)
    for s in reversed(slopes):
        if s.is_finite and s != 0:
            return -s
    return -pred.m_ell


def _generic_min(terms):
    """Min of ``(valuation, exact)`` terms and whether it is certainly the true valuation."""
    low = min(v for v, _ in terms)
    hits = [exact for v, exact in terms if v == low]
    return low, len(hits) == 1 and hits[0]


def _alpha_minus_image(params: UnicritParams, v_c: ExtRat, v_alpha: ExtRat, e):
    """Estimate ``v(alpha - f(alpha))`` two ways; returns ``(value, exact)``.

    Directly from ``alpha - alpha**ell + c``, and through the fixed point as
    ``alpha' - g(alpha')`` with ``alpha' = alpha - b``.
    """
    if e is not None and e.is_pos_inf:
        return INF, True
    ell = params.ell
    direct = _generic_min([(v_alpha, True), (ell * v_alpha, True), (v_c, True)])
    routes = [direct]
    if e is not None:
        coeffs = conjugate_coeff_valuations(params, v_c)
        v_a1 = coeffs.v_a(1)
        lin = (min(ExtRat(0), v_a1), v_a1 != 0)   # v(1 - a_1)
        terms = [(lin[0] + e, lin[1])]
        terms += [(coeffs.v_a(n) + n * e, True) for n in range(2, ell + 1)]
        routes.append(_generic_min(terms))
    exact = [v for v, ok in routes if ok]
    if len(set(exact)) > 1:
        raise InternalInconsistency(f"v(alpha - f(alpha)) estimates disagree: {exact}")
    if exact:
        return exact[0], True
    return max(v for v, _ in routes), False


def tower_trace(params: UnicritParams, v_c, root: RootPointSpec, mode="hybrid",
                n_steps: int = 40, v_d0=None) -> TowerTrace:
    """Follow ``v(alpha_n)`` and ``v(d_n)`` for ``n_steps`` steps.

    ``d_0 = alpha_1 - alpha_0`` is taken furthest (hybrid, furthest) or closest
    (closest); the remaining steps are closest except in furthest mode.  When
    ``v(alpha) == v(b)`` and ``v(alpha - b)`` is not supplied, ``alpha`` is the
    fixed point ``b`` itself.  For ``v(c) >= 0`` the step sizes are instead
    ``d_n = beta_n - alpha_n`` for a second chain ``beta`` with ``beta_0 = alpha``,
    starting from ``d_1``.  ``v_d0`` overrides the first step size.
    """
    mode = Mode(mode)
    if n_steps < 1:
        raise DomainError("n_steps must be at least 1")
    v_c = ExtRat(v_c)

    # v(c) >= 0: compare two chains beta, alpha from the same root, d_n = beta_n - alpha_n
    lag = 1 if v_c >= 0 and v_d0 is None else 0
    alphas, ambiguous = _propagate(params, v_c, root.v_alpha, n_steps + lag)
    first = Mode.CLOSEST if mode is Mode.CLOSEST else Mode.FURTHEST
    if v_d0 is not None:
        d = [ExtRat(v_d0)]
    elif lag:
        d = [next_distance_valuation(params, alphas[1], INF, first)]
    else:
        v_b = fixed_point_valuation(params, v_c)
        e = root.resolve(v_b)
        if e is None:
            e = INF
        v_prev, exact = _alpha_minus_image(params, v_c, root.v_alpha, e)
        ambiguous |= not exact
        d = [next_distance_valuation(params, alphas[0], v_prev, first)]

    step = Mode.FURTHEST if mode is Mode.FURTHEST else Mode.CLOSEST
    for n in range(n_steps - 1):
        d.append(next_distance_valuation(params, alphas[n + 1 + lag], d[n], step))

    dens = tuple(vp_int(params.p, v.denominator) if v.is_finite else 0 for v in d)
    return TowerTrace(params, v_c, mode, tuple(alphas), tuple(d), dens, ambiguous, lag)


def closed_form_dn(v_dm, q: int, v_aq, n: int) -> ExtRat:
    """``v(d_{m+n})`` after ``n`` closest steps inside one band with active degree ``q``."""
    if q < 2 or n < 0:
        raise DomainError("need q >= 2 and n >= 0")
    qn = q ** n
    return ExtRat(v_dm) / qn - ExtRat(v_aq) * Fraction(qn - 1, qn * (q - 1))


def _step_q(params: UnicritParams, v_y: ExtRat, v_d: ExtRat) -> Optional[int]:
    if not v_d.is_finite or not v_y.is_finite:
        return None
    n0 = select_n0(params, v_y, v_d)
    return params.ell if n0 == params.k + 1 else params.p ** n0


def band_stable_index(trace: TowerTrace):
    """First ``m`` from which every step uses one band; returns ``(m, q, v(a_q))`` or ``None``.

    Only meaningful for closest steps.  ``v(a_q)`` is evaluated at the stable ``v(alpha)``.
    """
    params = trace.params
    d, alphas = trace.v_d_seq, trace.v_alpha_seq[trace.lag:]
    last = len(d) - 1
    if last < 1:
        return None
    qs = [_step_q(params, alphas[j + 1], d[j]) for j in range(last)]
    m = last - 1
    q, v_y = qs[m], alphas[m + 1]
    if q is None or q < 2:
        return None
    while m > 0 and qs[m - 1] == q and alphas[m] == v_y:
        m -= 1
    n0 = params.k + 1 if q == params.ell and params.bigN > 1 else _log(params.p, q)
    v_aq = ExtRat(max(params.k - n0, 0)) + (params.ell - q) * v_y
    return m, q, v_aq


def _log(p: int, q: int) -> int:
    n = 0
    while q > 1:
        q //= p
        n += 1
    return n


def is_wildly_ramified(trace) -> bool:
    """True iff the p-parts of the denominators strictly increase over the second half."""
    seq = list(trace.den_p_val_seq if isinstance(trace, TowerTrace) else trace)
    if len(seq) < 3:
        raise TraceTooShort("need at least 3 terms")
    tail = seq[min(len(seq) // 2, len(seq) - 3):]
    return all(a < b for a, b in zip(tail, tail[1:]))


def classify_extension(params: UnicritParams, v_c, root: Optional[RootPointSpec] = None) -> ExtensionVerdict:
    if not params.wild:
        raise TameCaseUnsupported(f"p={params.p} does not divide ell={params.ell}")
    v_c = ExtRat(v_c)
    cut = cutoffs(params)
    wild = ExtensionKind.INFINITE_WILDLY_RAMIFIED
    if v_c < cut.nu_infty:
        return ExtensionVerdict(ExtensionKind.FINITE, "below-nu-infty")
    if v_c > cut.nu_infty:
        if v_c < cut.nu_good:
            return ExtensionVerdict(wild, "above-nu-infty:persistent-bad-reduction")
        if v_c < 0:
            return ExtensionVerdict(wild, "above-nu-infty:potential-good-reduction")
        return ExtensionVerdict(wild, "above-nu-infty:nonnegative-valuation")
    if params.ell != params.p:
        return ExtensionVerdict(wild, "at-nu-infty:ell-not-p")
    e = None if root is None else root.resolve(fixed_point_valuation(params, v_c))
    if e is None:
        raise MissingRootPointData(
            "v(c) = nu_infty with ell = p needs v(alpha - b) (--valphab)"
        )
    if e >= 0:
        return ExtensionVerdict(ExtensionKind.INFINITE_FINITELY_RAMIFIED,
                                "at-nu-infty:ell-eq-p:alpha-in-unit-disk-about-fixed-point")
    return ExtensionVerdict(wild, "at-nu-infty:ell-eq-p:alpha-outside-unit-disk")
