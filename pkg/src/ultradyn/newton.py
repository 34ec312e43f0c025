"""Newton polygon of ``F(z) = (z + y)**ell - y**ell - d`` at the valuation level.

Two independent routes are provided:

* :func:`lower_hull` -- plain computational geometry on the valued points
  ``(0, v(d))`` and ``(n, v(binom(ell, n)) + (ell - n) v(y))``;
* :func:`predicted_polygon` -- the closed form in terms of the thresholds
  ``lambda_n(y) = k - n + p/(p-1) + ell*v(y)``.

Segments carry geometric slopes: a segment of slope ``s`` and width ``w``
accounts for ``w`` roots of valuation ``-s``.  When ``d = 0`` the leading
point sits at ``+inf`` and the polygon starts with a width-one segment of
slope ``-inf`` (the root ``z = 0``).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Optional, Sequence

from .errors import DegenerateInput, DomainError, IndexOutOfRange, InfiniteVd
from .valcore import INF, NEG_INF, ExtRat, UnicritParams, binom_valuations

__all__ = [
    "ValuedPointSet", "NewtonPolygon", "PredictedNP",
    "difference_points", "lower_hull", "lambda_threshold", "select_n0",
    "predicted_polygon", "root_valuation_multiset", "base_field_root_exists",
]


@dataclass(frozen=True)
class ValuedPointSet:
    points: tuple
    params: UnicritParams
    v_y: ExtRat
    v_d: ExtRat


@dataclass(frozen=True)
class NewtonPolygon:
    vertices: tuple   # ((x, ExtRat y), ...), x strictly increasing
    segments: tuple   # ((ExtRat slope, int width), ...), slopes strictly increasing

    @property
    def vertex_xs(self) -> list:
        return [x for x, _ in self.vertices]

    @property
    def first_slope(self) -> ExtRat:
        return self.segments[0][0]

    @property
    def last_slope(self) -> ExtRat:
        return self.segments[-1][0]

    def to_json(self) -> dict:
        return {
            "vertices": [[x, str(y)] for x, y in self.vertices],
            "segments": [{"slope": str(s), "width": w} for s, w in self.segments],
        }


@dataclass(frozen=True)
class PredictedNP:
    vertex_xs: tuple
    m1: ExtRat
    m_ell: ExtRat
    n0: Optional[int]   # None when d = 0; k + 1 in the all-roots-equal regime for N > 1

    def to_json(self) -> dict:
        return {
            "vertex_xs": list(self.vertex_xs),
            "m1": str(self.m1),
            "m_ell": str(self.m_ell),
            "n0": self.n0,
        }


def _point_height(params: UnicritParams, v_y: ExtRat, n: int) -> ExtRat:
    return ExtRat(binom_valuations(params.p, params.ell)[n]) + (params.ell - n) * v_y


def difference_points(params: UnicritParams, v_y, v_d) -> ValuedPointSet:
    v_y, v_d = ExtRat(v_y), ExtRat(v_d)
    if not v_y.is_finite:
        raise DomainError(f"v(y) must be finite, got {v_y}")
    if v_d.is_neg_inf:
        raise DomainError("v(d) cannot be -inf")
    ell, y = params.ell, v_y.to_fraction()
    binoms = binom_valuations(params.p, ell)
    pts = [(0, v_d)]
    pts.extend((n, ExtRat(binoms[n] + (ell - n) * y)) for n in range(1, ell + 1))
    return ValuedPointSet(tuple(pts), params, v_y, v_d)


def _monotone_lower_chain(pts: Sequence[tuple]) -> list:
    """Lower hull of integer points sorted by x; collinear points are dropped."""
    hull: list = []
    for x2, y2 in pts:
        while len(hull) >= 2:
            (x0, y0), (x1, y1) = hull[-2], hull[-1]
            if (x1 - x0) * (y2 - y0) - (y1 - y0) * (x2 - x0) <= 0:
                hull.pop()
            else:
                break
        hull.append((x2, y2))
    return hull


def lower_hull(pts) -> NewtonPolygon:
    """Lower convex hull of valued points, by monotone chain on exact rationals.

    ``pts`` is a :class:`ValuedPointSet` or any sequence of ``(x, y)`` pairs.
    Only the leftmost point may have ``y = +inf``.
    """
    raw = pts.points if isinstance(pts, ValuedPointSet) else pts
    points = sorted(((int(x), y if isinstance(y, ExtRat) else ExtRat(y)) for x, y in raw),
                    key=lambda pt: pt[0])
    if len(points) < 2:
        raise DegenerateInput("need at least two points")
    if len({x for x, _ in points}) != len(points):
        raise DegenerateInput("repeated x-coordinate")
    if any(y.is_neg_inf for _, y in points):
        raise DegenerateInput("-inf ordinate")
    lead_inf = points[0][1].is_pos_inf
    finite = points[1:] if lead_inf else points
    if not finite or any(not y.is_finite for _, y in finite):
        raise DegenerateInput("+inf allowed only at the leftmost point, and not everywhere")

    # scale to integers so the orientation test is pure int arithmetic
    den = lcm(*(y.denominator for _, y in finite))
    scaled = [(x, y.numerator * (den // y.denominator)) for x, y in finite]
    chain = _monotone_lower_chain(scaled)

    vertices = [(x, ExtRat(Fraction(y, den))) for x, y in chain]
    segments = [
        (ExtRat(Fraction(y1 - y0, den * (x1 - x0))), x1 - x0)
        for (x0, y0), (x1, y1) in zip(chain, chain[1:])
    ]
    if lead_inf:
        x0 = points[0][0]
        vertices.insert(0, (x0, INF))
        segments.insert(0, (NEG_INF, vertices[1][0] - x0))
    return NewtonPolygon(tuple(vertices), tuple(segments))


def lambda_threshold(params: UnicritParams, v_y, n: int) -> ExtRat:
    """``lambda_n(y)``: the y-intercept of the line through ``P_{p^(n-1)}`` and ``P_{p^n}``.

    ``lambda_0 = +inf``; ``lambda_{k+1}`` is ``-inf`` when ``N = 1`` and
    ``ell * v(y)`` when ``N > 1``.
    """
    p, k, ell = params.p, params.k, params.ell
    if not 0 <= n <= k + 1:
        raise IndexOutOfRange(f"n={n} not in [0, {k + 1}]")
    v_y = ExtRat(v_y)
    if n == 0:
        return INF
    if n == k + 1:
        return NEG_INF if params.bigN == 1 else ell * v_y
    return ExtRat(k - n + Fraction(p, p - 1)) + ell * v_y


def select_n0(params: UnicritParams, v_y, v_d) -> int:
    """The unique ``n0`` in ``[0, k]`` with ``lambda_{n0+1} <= v(d) < lambda_{n0}``.

    For ``N > 1`` and ``v(d) < ell*v(y)`` no such index exists and the
    sentinel ``k + 1`` is returned.
    """
    v_d = ExtRat(v_d)
    if not v_d.is_finite:
        raise InfiniteVd(f"v(d) = {v_d}; use the d = 0 branch")
    upper = INF
    for n0 in range(params.k + 1):
        lower = lambda_threshold(params, v_y, n0 + 1)
        if lower <= v_d < upper:
            return n0
        upper = lower
    return params.k + 1


def predicted_polygon(params: UnicritParams, v_y, v_d) -> PredictedNP:
    """Vertices and extreme slopes from the closed form.

    At a tie ``v(d) == lambda_{n0+1}`` the points ``P_0``, ``P_{p^n0}`` and
    ``P_{p^(n0+1)}`` are collinear, so ``p^n0`` is not a vertex and is left out.
    """
    p, k, ell, bigN = params.p, params.k, params.ell, params.bigN
    v_y, v_d = ExtRat(v_y), ExtRat(v_d)
    tail = (ell,) if bigN > 1 else ()
    last_tame = -v_y
    last_wild = ExtRat(-Fraction(p, ell * (p - 1))) - v_y

    if v_d.is_pos_inf:
        xs = tuple(sorted({0, 1, *(p ** j for j in range(k + 1)), *tail}))
        return PredictedNP(xs, NEG_INF, last_tame if bigN > 1 else last_wild, None)

    n0 = select_n0(params, v_y, v_d)
    if n0 == k + 1:
        m = -v_d / ell
        return PredictedNP((0, ell), m, m, n0)

    q = p ** n0
    powers = [p ** j for j in range(n0, k + 1)]
    if v_d == lambda_threshold(params, v_y, n0 + 1):
        powers = powers[1:]
    xs = (0, *powers, *tail)
    m1 = (ExtRat(k - n0) + (ell - q) * v_y - v_d) / q
    if bigN > 1:
        m_ell = last_tame
    else:
        m_ell = m1 if n0 == k else last_wild
    return PredictedNP(xs, m1, m_ell, n0)


def root_valuation_multiset(np: NewtonPolygon) -> list:
    return [(-slope, width) for slope, width in np.segments]


def base_field_root_exists(params: UnicritParams, v_y, v_d) -> bool:
    """Whether some root of ``F`` is forced to lie in ``K(d, y)``.

    Holds exactly when the first segment has width one.
    """
    return ExtRat(v_d) > lambda_threshold(params, v_y, 1)
