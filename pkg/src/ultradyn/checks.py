"""Property suites shared by ``ultradyn selftest`` and the test-suite.

Each suite walks a fixed grid, compares two independent computations and
returns a :class:`SuiteResult` listing counterexamples.  ``quick`` restricts
grids to ``p in {2, 3}`` and ``k <= 3``; ``full`` uses the larger grids.
"""
from __future__ import annotations

import random
from contextlib import contextmanager
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterator
from unittest import mock

from . import newton
from .errors import InternalInconsistency
from .julia import (
    _band_wdeg, breakpoint_log_radii, c_levels, julia_classify, limit_log_radius,
    radii_sequence, tau_image_log_radius,
)
from .newton import (
    PredictedNP, base_field_root_exists, difference_points, lambda_threshold, lower_hull,
    root_valuation_multiset,
)
from .reduction import (
    conjugate_coeff_valuations, cutoffs, fixed_point_valuation, has_potential_good_reduction,
)
from .tower import (
    ExtensionKind, Mode, RootPointSpec, TowerTrace, band_stable_index, classify_extension,
    closed_form_dn, is_wildly_ramified, tower_trace,
)
from .valcore import INF, NEG_INF, ExtRat, UnicritParams, decompose, vp_binom, vp_int

MAX_FAILURES = 10   # counterexamples kept per suite


@dataclass
class SuiteResult:
    name: str
    cases: int = 0
    failures: list = field(default_factory=list)
    n_failed: int = 0

    @property
    def ok(self) -> bool:
        return self.n_failed == 0

    def check(self, cond: bool, example) -> None:
        self.cases += 1
        if not cond:
            self.n_failed += 1
            if len(self.failures) < MAX_FAILURES:
                self.failures.append(example)

    def line(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        return f"{status} {self.name}: {self.cases} cases, {self.n_failed} failures"


# -- grids ----------------------------------------------------------------------

def param_grid(ps, k_max: int, ns, k_min: int = 0) -> list:
    out = []
    for p in ps:
        for n in ns:
            if n % p == 0:
                continue
            for k in range(k_min, k_max + 1):
                if n * p ** k >= 2:
                    out.append(decompose(p, n * p ** k))
    return out


def linspace(lo: Fraction, hi: Fraction, count: int) -> list:
    if count == 1:
        return [Fraction(lo)]
    return [lo + (hi - lo) * Fraction(i, count - 1) for i in range(count)]


NEWTON_VY = tuple(Fraction(x) for x in ("-7/3", "-1", "-1/2", "0", "1/4", "2"))


def newton_vd_grid(params: UnicritParams, v_y: Fraction, spread: int = 45) -> list:
    """Rationals covering every lambda-band, the exact thresholds and ``+inf``."""
    ths = [lambda_threshold(params, v_y, n).to_fraction() for n in range(1, params.k + 1)]
    if params.bigN > 1:
        ths.append(lambda_threshold(params, v_y, params.k + 1).to_fraction())
    vals = set()
    for t in ths:
        vals.update((t, t - Fraction(1, 7), t + Fraction(1, 5)))
    lo = min(ths, default=Fraction(0)) - 4
    hi = max(ths, default=Fraction(0)) + 4
    vals.update(linspace(lo, hi, spread))
    return [ExtRat(v) for v in sorted(vals)] + [INF]


def bad_reduction_vcs(params: UnicritParams) -> list:
    """``v(c) < nu_good``: every level ``c_n``, midpoints, points just below, and deep values."""
    fin = [c.to_fraction() for c in c_levels(params)[1:]]
    vals = {fin[0] - 3, fin[0] - Fraction(1, 3)} | set(fin)
    vals |= {(a + b) / 2 for a, b in zip(fin, fin[1:])}
    vals |= {x - Fraction(1, 97) for x in fin}
    good = cutoffs(params).nu_good.to_fraction()
    return [ExtRat(v) for v in sorted(vals) if v < good]


def regime_vcs(params: UnicritParams, count: int = 21) -> list:
    """Values of ``v(c)`` across every regime, including both cutoffs and 0."""
    cut = cutoffs(params)
    ni, ng = cut.nu_infty.to_fraction(), cut.nu_good.to_fraction()
    vals = set(linspace(ni - 2, Fraction(2), count)) | {ni, ng, Fraction(0), (ni + ng) / 2}
    return [ExtRat(v) for v in sorted(vals)]


def _depth_params(depth: str, full_ps=(2, 3, 5), full_k=4, ns=(1, 2, 3), k_min=0):
    if depth == "quick":
        return param_grid((2, 3), min(3, full_k), ns, k_min)
    return param_grid(full_ps, full_k, ns, k_min)


# -- valcore --------------------------------------------------------------------

def _legendre(p: int, n: int) -> int:
    total, q = 0, p
    while q <= n:
        total += n // q
        q *= p
    return total


def suite_legendre(depth: str = "full") -> SuiteResult:
    res = SuiteResult("valcore.vp_binom_vs_legendre")
    top = 2000 if depth == "full" else 300
    for p in (2, 3, 5, 7):
        fact = [_legendre(p, n) for n in range(top + 1)]
        for ell in range(top + 1):
            for n in range(ell + 1):
                want = fact[ell] - fact[n] - fact[ell - n]
                got = vp_binom(p, ell, n)
                res.check(got == want, (p, ell, n, got, want))
    return res


def suite_lemma_identity(depth: str = "full") -> SuiteResult:
    res = SuiteResult("valcore.binom_equals_k_minus_vn")
    ps, k_max = ((2, 3, 5), 6) if depth == "full" else ((2, 3), 4)
    for p in ps:
        for big_n in range(1, 6):
            if big_n % p == 0:
                continue
            for k in range(1, k_max + 1):
                ell = big_n * p ** k
                for n in range(1, p ** k + 1):
                    got, want = vp_binom(p, ell, n), k - vp_int(p, n)
                    res.check(got == want, (p, ell, n, got, want))
    return res


def suite_extrat_algebra(depth: str = "full") -> SuiteResult:
    res = SuiteResult("valcore.extrat_algebra")
    rng = random.Random(20240611)
    specials = [INF, NEG_INF]

    def draw():
        if rng.random() < 0.1:
            return rng.choice(specials)
        return ExtRat(Fraction(rng.randint(-60, 60), rng.randint(1, 24)))

    for _ in range(2000 if depth == "full" else 400):
        a, b, c = draw(), draw(), draw()
        if all(x.is_finite for x in (a, b, c)):
            res.check((a + b) + c == a + (b + c), ("assoc", a, b, c))
            res.check(a + b == b + a, ("comm", a, b))
            res.check(ExtRat(str(a + b)) == a + b, ("roundtrip", a + b))
        res.check(not (a < b and b < a), ("antisym", a, b))
        res.check(not (a <= b and b <= c) or a <= c, ("trans", a, b, c))
        res.check(a != b or hash(a) == hash(b), ("hash", a, b))
    return res


# -- newton ---------------------------------------------------------------------

def _newton_instances(depth: str) -> Iterator[tuple]:
    for params in _depth_params(depth):
        for v_y in NEWTON_VY:
            for v_d in newton_vd_grid(params, v_y):
                yield params, ExtRat(v_y), v_d


def suite_newton_oracle(depth: str = "full") -> SuiteResult:
    res = SuiteResult("newton.predicted_vs_hull")
    for params, v_y, v_d in _newton_instances(depth):
        hull = lower_hull(difference_points(params, v_y, v_d))
        pred = newton.predicted_polygon(params, v_y, v_d)
        same = (
            tuple(hull.vertex_xs) == tuple(pred.vertex_xs)
            and hull.first_slope == pred.m1
            and hull.last_slope == pred.m_ell
        )
        res.check(same, (params.p, params.ell, str(v_y), str(v_d),
                         hull.vertex_xs, list(pred.vertex_xs),
                         str(hull.first_slope), str(pred.m1),
                         str(hull.last_slope), str(pred.m_ell)))
    return res


def suite_newton_structure(depth: str = "full") -> SuiteResult:
    """Width-one first segment vs. base_field_root_exists, slope monotonicity, all-equal roots."""
    res = SuiteResult("newton.structure")
    for params, v_y, v_d in _newton_instances(depth):
        hull = lower_hull(difference_points(params, v_y, v_d))
        tag = (params.p, params.ell, str(v_y), str(v_d))
        if v_d.is_finite:
            width_one = hull.segments[0][1] == 1
            res.check(width_one == base_field_root_exists(params, v_y, v_d), ("width1",) + tag)
        slopes = [s for s, _ in hull.segments]
        res.check(all(a < b for a, b in zip(slopes, slopes[1:])), ("monotone",) + tag)
        # every root has valuation v(d)/ell below the lowest threshold
        if params.bigN == 1:
            low = lambda_threshold(params, v_y, params.k)
        else:
            low = lambda_threshold(params, v_y, params.k + 1)
        if v_d.is_finite and v_d < low:
            want = [(v_d / params.ell, params.ell)]
            res.check(root_valuation_multiset(hull) == want, ("single-valuation",) + tag)
    return res


# -- reduction ------------------------------------------------------------------

def suite_good_reduction(depth: str = "full") -> SuiteResult:
    res = SuiteResult("reduction.good_reduction_equivalence")
    grid = _depth_params(depth, ns=(1, 2, 3, 4))
    for params in grid:
        good = cutoffs(params).nu_good.to_fraction()
        n_vals = 120 if depth == "full" else 40
        lo = min(good, Fraction(-1)) - 3
        vals = set(linspace(lo, Fraction(-1, 50), n_vals))
        vals |= {good - Fraction(1, 1000), good + Fraction(1, 1000)} if good < 0 else set()
        if good < 0:
            vals.add(good)
        for vc in sorted(v for v in vals if v < 0):
            coeffs = conjugate_coeff_valuations(params, ExtRat(vc))
            direct = min(coeffs.entries) >= 0
            closed = vc >= good
            try:
                verdict = has_potential_good_reduction(params, ExtRat(vc))
            except InternalInconsistency:
                verdict = None
            res.check(direct == closed == verdict, (params.p, params.ell, str(vc), direct, closed))
    return res


def suite_cutoff_identities(depth: str = "full") -> SuiteResult:
    res = SuiteResult("reduction.cutoff_identities")
    for params in _depth_params(depth, k_min=1):
        cut = cutoffs(params)
        res.check(cut.nu_infty == c_levels(params)[1], ("nu_infty=c1", str(params)))
        res.check(cut.nu_infty <= cut.nu_good, ("order", str(params)))
        strict = (params.bigN == 1 and params.k >= 2) or params.bigN > 1
        res.check((cut.nu_infty < cut.nu_good) == strict, ("strict", str(params)))
    return res


# -- julia ----------------------------------------------------------------------

def _julia_params(depth: str) -> list:
    return _depth_params(depth, k_min=1)


def _gap_ratio_run(seq, limit, q) -> int:
    """Length of the final run of consecutive gaps shrinking by exactly ``1/q``."""
    gaps = [x - limit for x in seq]
    run = 0
    for a, b in zip(reversed(gaps[:-1]), reversed(gaps[1:])):
        if a.is_finite and a != 0 and b == a / q:
            run += 1
        else:
            break
    return run


def suite_julia(depth: str = "full") -> SuiteResult:
    res = SuiteResult("julia.radii_laws")
    m_max = 60 if depth == "full" else 40
    for params in _julia_params(depth):
        for v_c in bad_reduction_vcs(params):
            tag = (params.p, params.ell, str(v_c))
            trace = radii_sequence(params, v_c, m_max)
            rho = trace.rho_seq
            res.check(all(a > b for a, b in zip(rho, rho[1:])), ("nesting",) + tag)
            cut = cutoffs(params)
            limit = limit_log_radius(params, v_c)
            res.check(limit.is_neg_inf == (v_c < c_levels(params)[1]) == (v_c < cut.nu_infty),
                      ("boundary",) + tag)
            if trace.band_n >= 1:
                q = params.p ** trace.band_n
                res.check(tau_image_log_radius(params, v_c, limit) == limit, ("fixed-point",) + tag)
                res.check(all(r > limit for r in rho), ("above-limit",) + tag)
                res.check(_gap_ratio_run(rho, limit, q) >= 20, ("gap-ratio",) + tag)
    return res


def suite_wdeg(depth: str = "full") -> SuiteResult:
    res = SuiteResult("julia.wdeg_oracle")
    for params in _julia_params(depth):
        for v_c in bad_reduction_vcs(params):
            coeffs = conjugate_coeff_valuations(params, v_c)
            radii = [r.to_fraction() for r in breakpoint_log_radii(params, v_c) if r.is_finite]
            rhos = set(radii)
            for r in radii:
                rhos.update((r - Fraction(1, 7), r + Fraction(1, 11)))
            rhos.update((min(radii) - 5, max(radii) + 5))
            for rho in sorted(rhos):
                vals = [n * rho - v.to_fraction() for n, v in enumerate(coeffs.entries, start=1)]
                best = max(vals)
                tropical = max(n for n, v in enumerate(vals, start=1) if v == best)
                band = _band_wdeg(params, v_c, ExtRat(rho))
                res.check(tropical == band, (params.p, params.ell, str(v_c), str(rho), tropical, band))
    return res


# -- tower ----------------------------------------------------------------------

def suite_tower_duality(depth: str = "full") -> SuiteResult:
    """Step sizes from ``alpha = b`` against the radii ``R_n``; limit and closed form."""
    res = SuiteResult("tower.duality_limit_closed_form")
    m_max = 40 if depth == "full" else 30
    for params in _julia_params(depth):
        for v_c in bad_reduction_vcs(params):
            tag = (params.p, params.ell, str(v_c))
            radii = radii_sequence(params, v_c, m_max)
            root = RootPointSpec(fixed_point_valuation(params, v_c))
            trace = tower_trace(params, v_c, root, Mode.HYBRID, m_max + 1)
            res.check(list(trace.v_d_seq) == [-r for r in radii.rho_seq],
                      ("duality",) + tag)
            if radii.band_n == 0:
                d = trace.v_d_seq
                res.check(all(a < b for a, b in zip(d, d[1:])), ("unbounded",) + tag)
                continue
            q = params.p ** radii.band_n
            res.check(_gap_ratio_run(trace.v_d_seq, -radii.rho_limit, q) >= 20, ("limit",) + tag)
            stable = band_stable_index(trace)
            if stable is None:
                res.check(False, ("no-stable-band",) + tag)
                continue
            m, q_t, v_aq = stable
            res.check(q_t == q and -v_aq / (q - 1) == -radii.rho_limit, ("band",) + tag)
            d = trace.v_d_seq
            res.check(
                all(d[j] == closed_form_dn(d[m], q_t, v_aq, j - m) for j in range(m, len(d))),
                ("closed-form", m) + tag,
            )
    return res


TOWER_VALPHA = tuple(ExtRat(x) for x in ("-5", "-1", "0", "1/3", "2"))


def _certificate_fires(params, trace: TowerTrace) -> bool:
    lag = trace.lag
    return any(
        base_field_root_exists(params, trace.v_alpha_seq[i + 1 + lag], trace.v_d_seq[i])
        for i in range(len(trace.v_d_seq))
        if trace.v_d_seq[i].is_finite and trace.v_alpha_seq[i + 1 + lag].is_finite
    )


def suite_tower_consistency(depth: str = "full") -> SuiteResult:
    """Extension verdicts against the Julia verdict, the wildness detector and the certificate."""
    res = SuiteResult("tower.classification_consistency")
    steps = 50 if depth == "full" else 40
    grid = param_grid((2, 3), 3, (1, 2, 3), k_min=1)
    for params in grid:
        for v_c in regime_vcs(params):
            for v_alpha in TOWER_VALPHA:
                tag = (params.p, params.ell, str(v_c), str(v_alpha))
                root = RootPointSpec(v_alpha)
                at_boundary = v_c == cutoffs(params).nu_infty and params.ell == params.p
                if at_boundary and root.resolve(fixed_point_valuation(params, v_c)) is None:
                    continue
                verdict = classify_extension(params, v_c, root)
                finite = verdict.kind is ExtensionKind.FINITE
                if v_c < cutoffs(params).nu_good:
                    type_i = str(julia_classify(params, v_c)) == "CantorTypeI"
                    res.check(finite == type_i, ("julia",) + tag)
                if verdict.kind is ExtensionKind.INFINITE_WILDLY_RAMIFIED:
                    trace = tower_trace(params, v_c, root, Mode.HYBRID, steps)
                    res.check(is_wildly_ramified(trace), ("wild",) + tag + (trace.den_p_val_seq[-5:],))
                if finite:
                    trace = tower_trace(params, v_c, root, Mode.CLOSEST, steps)
                    res.check(_certificate_fires(params, trace), ("certificate",) + tag)
    return res


def suite_finiteness_mechanism(depth: str = "full") -> SuiteResult:
    """Below ``nu_infty``: steps divide by ``ell`` until the lowest threshold, then a root descends."""
    res = SuiteResult("tower.finiteness_mechanism")
    for params in _julia_params(depth):
        cut = cutoffs(params)
        for v_c in [v for v in bad_reduction_vcs(params) if v < cut.nu_infty]:
            v_b = fixed_point_valuation(params, v_c)
            low = lambda_threshold(params, v_b, params.k if params.bigN == 1 else params.k + 1)
            for offset in (Fraction(1, 3), Fraction(5, 2), Fraction(40)):
                v_d0 = low - offset
                trace = tower_trace(params, v_c, RootPointSpec(v_b), Mode.CLOSEST, 30, v_d0=v_d0)
                d = trace.v_d_seq
                tag = (params.p, params.ell, str(v_c), str(v_d0))
                first_above = next((i for i, x in enumerate(d) if x >= low), None)
                res.check(first_above is not None, ("never-exceeds",) + tag)
                if first_above is None:
                    continue
                res.check(all(d[i + 1] == d[i] / params.ell for i in range(first_above)),
                          ("divide-by-ell",) + tag)
                res.check(_certificate_fires(params, trace), ("certificate",) + tag)
    return res


SUITES: dict = {
    "legendre": suite_legendre,
    "lemma-identity": suite_lemma_identity,
    "extrat-algebra": suite_extrat_algebra,
    "newton-oracle": suite_newton_oracle,
    "newton-structure": suite_newton_structure,
    "good-reduction": suite_good_reduction,
    "cutoff-identities": suite_cutoff_identities,
    "julia-radii": suite_julia,
    "julia-wdeg": suite_wdeg,
    "tower-duality": suite_tower_duality,
    "tower-consistency": suite_tower_consistency,
    "tower-finiteness": suite_finiteness_mechanism,
}


# -- fault injection ------------------------------------------------------------

def _keep_tie_vertex(real: Callable):
    """Wrong tie handling: keep ``p^n0`` as a vertex even when it is collinear."""
    def broken(params, v_y, v_d):
        pred = real(params, v_y, v_d)
        n0 = pred.n0
        if n0 is None or n0 > params.k:
            return pred
        q = params.p ** n0
        if q not in pred.vertex_xs:
            return PredictedNP(tuple(sorted((*pred.vertex_xs, q))), pred.m1, pred.m_ell, n0)
        return pred
    return broken


def _shifted_lambda(real: Callable):
    def shifted(params, v_y, n):
        value = real(params, v_y, n)
        return value + Fraction(1, 2) if value.is_finite else value
    return shifted


FAULTS = ("tie-break", "lambda-offset")


@contextmanager
def injected_fault(name):
    """Temporarily break the closed-form polygon so the oracle suite has something to catch."""
    if name is None:
        yield
    elif name == "tie-break":
        with mock.patch.object(newton, "predicted_polygon", _keep_tie_vertex(newton.predicted_polygon)):
            yield
    elif name == "lambda-offset":
        with mock.patch.object(newton, "lambda_threshold", _shifted_lambda(newton.lambda_threshold)):
            yield
    else:
        raise ValueError(f"unknown fault {name!r}; choose from {', '.join(FAULTS)}")


def run_suites(depth: str = "quick", names=None, fault=None) -> list:
    chosen = names or list(SUITES)
    with injected_fault(fault):
        return [SUITES[name](depth) for name in chosen]
