"""Acceptance criteria AC1-AC8, each at its stated tolerance (all exact).

Every test carries a ``criterion`` marker; the conftest prints one PASS/FAIL
line per criterion at the end of the run.
"""
import csv
import io
import json
import time
from fractions import Fraction

import pytest

from ultradyn import checks
from ultradyn.cli import run
from ultradyn.julia import limit_log_radius, radii_sequence, tau_image_log_radius
from ultradyn.newton import lambda_threshold, lower_hull, difference_points, predicted_polygon
from ultradyn.reduction import cutoffs
from ultradyn.tower import (
    ExtensionKind, Mode, RootPointSpec, band_stable_index, classify_extension, closed_form_dn,
    tower_trace,
)
from ultradyn.valcore import INF, ExtRat as E, decompose


def suite(name, min_cases=1):
    started = time.perf_counter()
    res = checks.SUITES[name]("full")
    elapsed = time.perf_counter() - started
    print(res.line())
    assert res.cases >= min_cases, f"{name}: only {res.cases} cases"
    assert res.ok, f"{name}: {res.n_failed} failures, e.g. {res.failures[:3]}"
    return res, elapsed


def cli_json(*argv):
    status, text, msg = run(list(argv) + ["--format", "json"])
    assert status == 0, msg
    return json.loads(text)


# -- AC1 --------------------------------------------------------------------------

AC1 = ("AC1", "worked Newton polygon figures")


@pytest.mark.criterion(*AC1)
def test_ac1_first_figure():
    started = time.perf_counter()
    obj = cli_json("polygon", "--p", "2", "--ell", "8", "--vy", "0", "--vd", "9/2")
    elapsed = time.perf_counter() - started
    verts = [(x, E(y)) for x, y in obj["vertices"]]
    assert [x for x, _ in verts] == [0, 1, 2, 4, 8]
    assert verts[1:] == [(1, E(3)), (2, E(2)), (4, E(1)), (8, E(0))]
    assert elapsed < 0.05


@pytest.mark.criterion(*AC1)
def test_ac1_second_figure():
    params = decompose(2, 8)
    lam1, lam2 = lambda_threshold(params, E(0), 1), lambda_threshold(params, E(0), 2)
    assert lam2 <= E("7/2") < lam1
    obj = cli_json("polygon", "--p", "2", "--ell", "8", "--vy", "0", "--vd", "7/2")
    assert [x for x, _ in obj["vertices"]] == [0, 2, 4, 8]
    hull = lower_hull(difference_points(params, E(0), E("7/2")))
    assert [x for x, _ in hull.vertices] == [0, 2, 4, 8]
    pred = predicted_polygon(params, E(0), E("7/2"))
    assert pred.vertex_xs == (0, 2, 4, 8)
    assert (pred.m1, pred.m_ell) == (hull.segments[0][0], hull.segments[-1][0])


# -- AC2 --------------------------------------------------------------------------

@pytest.mark.criterion("AC2", "Newton polygon oracle suite")
def test_ac2_newton_oracle():
    res, elapsed = suite("newton-oracle", min_cases=10_000)
    assert elapsed < 60


@pytest.mark.criterion("AC2", "Newton polygon oracle suite")
def test_ac2_newton_structure():
    suite("newton-structure")


# -- AC3 --------------------------------------------------------------------------

@pytest.mark.criterion("AC3", "binomial valuations and the lemma identity")
def test_ac3_legendre():
    suite("legendre")


@pytest.mark.criterion("AC3", "binomial valuations and the lemma identity")
def test_ac3_lemma_identity():
    suite("lemma-identity")


# -- AC4 --------------------------------------------------------------------------

@pytest.mark.criterion("AC4", "good reduction equivalence")
def test_ac4_good_reduction():
    suite("good-reduction", min_cases=5_000)


# -- AC5 --------------------------------------------------------------------------

AC5 = ("AC5", "tropical fixed point and radii convergence")


@pytest.mark.criterion(*AC5)
def test_ac5_anchor():
    params = decompose(2, 8)
    trace = radii_sequence(params, E(-3), 3)
    assert trace.rho_seq == (E("1/8"), E("-3/32"), E("-11/64"), E("-27/128"))
    limit = limit_log_radius(params, E(-3))
    assert limit == E("-1/4")
    assert tau_image_log_radius(params, E(-3), limit) == limit


@pytest.mark.criterion(*AC5)
def test_ac5_radii_suite():
    suite("julia-radii")


@pytest.mark.criterion(*AC5)
def test_ac5_wdeg_suite():
    suite("julia-wdeg")


# -- AC6 --------------------------------------------------------------------------

AC6 = ("AC6", "tower and Julia duality, closed form")


@pytest.mark.criterion(*AC6)
def test_ac6_anchor():
    params = decompose(2, 8)
    radii = radii_sequence(params, E(-3), 8)
    trace = tower_trace(params, E(-3), RootPointSpec(E("-3/8")), Mode.HYBRID, 9)
    assert list(trace.v_d_seq) == [-r for r in radii.rho_seq]
    m, q, v_aq = band_stable_index(trace)
    d = trace.v_d_seq
    assert all(d[j] == closed_form_dn(d[m], q, v_aq, j - m) for j in range(m, len(d)))
    assert closed_form_dn(E("-1/8"), 2, E("-1/4"), 1) == E("1/16")
    assert closed_form_dn(E("3/32"), 2, E("-1/4"), 2) == E("27/128")


@pytest.mark.criterion(*AC6)
def test_ac6_duality_suite():
    suite("tower-duality")


# -- AC7 --------------------------------------------------------------------------

AC7 = ("AC7", "regime classification sweep")
SWEEP_PARAMS = [(2, 2), (2, 4), (2, 8), (2, 12), (3, 3), (3, 6), (3, 9), (5, 10)]


def _sweep_grid(nu_inf: Fraction, nu_good: Fraction) -> tuple:
    step = (nu_good - nu_inf) / 8 if nu_good != nu_inf else Fraction(1, 4)
    start, stop = nu_inf - 8 * step, nu_good + 8 * step
    count = int((stop - start) / step) + 1
    return f"{start}:{stop}:{count}"


@pytest.mark.criterion(*AC7)
@pytest.mark.parametrize("p,ell", SWEEP_PARAMS)
def test_ac7_sweep_transitions(p, ell):
    cut = cutoffs(decompose(p, ell))
    nu_inf, nu_good = cut.nu_infty.to_fraction(), cut.nu_good.to_fraction()
    grid = _sweep_grid(nu_inf, nu_good)
    status, text, msg = run(["sweep", "--p", str(p), "--ell", str(ell), f"--grid={grid}",
                             "--format", "csv"])
    assert status == 0, msg
    rows = list(csv.DictReader(io.StringIO(text)))
    vcs = [Fraction(r["vc"]) for r in rows]
    assert nu_inf in vcs and nu_good in vcs
    for vc, row in zip(vcs, rows):
        want_julia = ("CantorTypeI" if vc < nu_inf else
                      "CantorWithTypeII" if vc < nu_good else "SingleTypeII")
        assert row["julia_verdict"] == want_julia, (vc, row)
        assert (row["extension_verdict"] == "Finite") == (vc < nu_inf), (vc, row)
        assert row["extension_verdict"] in ("Finite", "InfiniteWildlyRamified",
                                            "InfiniteFinitelyRamified")
    if p == ell or ell % p:
        assert nu_inf == nu_good


@pytest.mark.criterion(*AC7)
def test_ac7_coincident_cutoffs():
    for p, ell in [(2, 2), (3, 3)]:
        cut = cutoffs(decompose(p, ell))
        assert cut.nu_infty == cut.nu_good
    for p, ell in [(2, 4), (2, 8), (2, 12), (3, 6), (3, 9), (5, 10)]:
        cut = cutoffs(decompose(p, ell))
        assert cut.nu_infty < cut.nu_good


@pytest.mark.criterion(*AC7)
def test_ac7_boundary_flip():
    params = decompose(2, 2)
    for e in ("0", "1", "inf"):
        verdict = classify_extension(params, E(-2), RootPointSpec(E(-1), E(e)))
        assert verdict.kind is ExtensionKind.INFINITE_FINITELY_RAMIFIED
    for e in ("-1/2", "-3"):
        root = RootPointSpec(E(-1), E(e)) if E(e) > E(-1) else RootPointSpec(E(e))
        verdict = classify_extension(params, E(-2), root)
        assert verdict.kind is ExtensionKind.INFINITE_WILDLY_RAMIFIED
    obj = cli_json("classify", "--p", "2", "--ell", "2", "--vc", "-2", "--valphab", "-1/2")
    assert obj["kind"] == "InfiniteWildlyRamified"
    obj = cli_json("classify", "--p", "2", "--ell", "2", "--vc", "-2", "--valphab", "0")
    assert obj["kind"] == "InfiniteFinitelyRamified"


# -- AC8 --------------------------------------------------------------------------

@pytest.mark.criterion("AC8", "wild ramification detector and finiteness certificate")
def test_ac8_consistency_suite():
    suite("tower-consistency")


@pytest.mark.criterion("AC8", "wild ramification detector and finiteness certificate")
def test_ac8_finiteness_mechanism():
    suite("tower-finiteness")
