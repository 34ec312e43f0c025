from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from ultradyn.checks import param_grid
from ultradyn.julia import c_levels
from ultradyn.reduction import (
    conjugate_coeff_valuations, cutoffs, fixed_point_valuation, has_potential_good_reduction,
)
from ultradyn.valcore import ExtRat as E, decompose

P28 = decompose(2, 8)
WILD = param_grid((2, 3, 5), 3, (1, 2, 3, 4), k_min=1)


@pytest.mark.parametrize("p,ell,nu_infty,nu_good", [
    (2, 8, "-24/7", "-2"), (3, 6, "-6/5", "0"), (2, 2, "-2", "-2"),
])
def test_cutoff_examples(p, ell, nu_infty, nu_good):
    cut = cutoffs(decompose(p, ell))
    assert (str(cut.nu_infty), str(cut.nu_good)) == (nu_infty, nu_good)


def test_coefficient_example():
    coeffs = conjugate_coeff_valuations(P28, E(-3))
    assert coeffs.v_b == E("-3/8")
    assert [str(v) for v in coeffs.entries] == ["3/8", "-1/4", "9/8", "-1/2", "15/8", "5/4", "21/8", "0"]


@pytest.mark.parametrize("v_c,v_a4", [("-2", "0"), ("-17/8", "-1/16")])
def test_a4_near_boundary(v_c, v_a4):
    assert conjugate_coeff_valuations(P28, E(v_c)).v_a(4) == E(v_a4)


@pytest.mark.parametrize("p,ell,v_c,want", [
    (2, 8, "-2", True), (2, 8, "-17/8", False), (3, 6, "-1/10", False), (3, 6, "5", True),
])
def test_good_reduction_examples(p, ell, v_c, want):
    assert has_potential_good_reduction(decompose(p, ell), E(v_c)) is want


def test_nonnegative_fixed_point_is_unit():
    assert fixed_point_valuation(P28, E(3)) == E(0)
    assert fixed_point_valuation(P28, E(-3)) == E("-3/8")


@given(st.sampled_from(WILD), st.fractions(min_value=-12, max_value=Fraction(-1, 60), max_denominator=60))
def test_good_reduction_iff_integral_coefficients(params, v_c):
    coeffs = conjugate_coeff_valuations(params, E(v_c))
    assert coeffs.v_a(params.ell) == E(0)
    closed = E(v_c) >= cutoffs(params).nu_good
    assert closed == (min(coeffs.entries) >= 0) == has_potential_good_reduction(params, E(v_c))


@given(st.sampled_from(WILD))
def test_cutoff_relations(params):
    cut = cutoffs(params)
    assert cut.nu_infty == c_levels(params)[1]
    assert c_levels(params)[-1] == cut.nu_good
    assert cut.nu_infty <= cut.nu_good
    if params.bigN > 1 or params.k >= 2:
        assert cut.nu_infty < cut.nu_good
    else:
        assert cut.nu_infty == cut.nu_good
