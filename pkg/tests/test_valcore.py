from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, strategies as st

from ultradyn.errors import DegreeTooSmall, NotPrime, OutOfRange, UndefinedInfiniteSum, ZeroInput
from ultradyn.valcore import (
    INF, NEG_INF, ExtRat, UnicritParams, binom_valuations, decompose, is_prime, vp_binom, vp_int,
)

fractions = st.fractions(min_value=-1000, max_value=1000, max_denominator=200)
ext = st.one_of(fractions.map(ExtRat), st.sampled_from([INF, NEG_INF]))


def test_add_examples():
    assert ExtRat("3/8") + ExtRat("-1/4") == ExtRat("1/8")
    assert min(INF, ExtRat("5/2")) == ExtRat("5/2")
    assert INF + (-7) == INF


def test_inf_minus_inf_rejected():
    with pytest.raises(UndefinedInfiniteSum):
        INF + NEG_INF
    with pytest.raises(UndefinedInfiniteSum):
        INF - INF


def test_zero_times_inf_rejected():
    with pytest.raises(ValueError):
        INF * 0


@pytest.mark.parametrize("text,kind", [("3/8", "3/8"), ("-6/4", "-3/2"), ("4/2", "2"),
                                       ("inf", "inf"), ("+inf", "inf"), ("-inf", "-inf")])
def test_text_form_is_canonical(text, kind):
    assert str(ExtRat(text)) == kind


@pytest.mark.parametrize("bad", ["1.5", "1/0", "", "a/b", "1e3", "nan"])
def test_text_grammar_rejects(bad):
    with pytest.raises(ValueError):
        ExtRat(bad)


def test_order_puts_infinities_at_ends():
    assert NEG_INF < ExtRat(-10 ** 9) < ExtRat(10 ** 9) < INF
    assert sorted([INF, ExtRat(0), NEG_INF]) == [NEG_INF, ExtRat(0), INF]


def test_immutable():
    x = ExtRat(1)
    with pytest.raises(AttributeError):
        x.value = Fraction(2)


@given(fractions, fractions, fractions)
def test_addition_is_associative_and_commutative(a, b, c):
    x, y, z = ExtRat(a), ExtRat(b), ExtRat(c)
    assert (x + y) + z == x + (y + z)
    assert x + y == y + x
    assert (x + y).to_fraction() == a + b


@given(ext, ext, ext)
def test_order_is_total(a, b, c):
    assert (a < b) + (a == b) + (a > b) == 1
    if a <= b and b <= c:
        assert a <= c


@given(ext)
def test_text_round_trip(a):
    assert ExtRat(str(a)) == a
    assert hash(ExtRat(str(a))) == hash(a)


@given(fractions, st.fractions(min_value=Fraction(1, 50), max_value=50))
def test_scaling_by_positive_rational_is_monotone(a, s):
    assert (ExtRat(a) * s < ExtRat(a + 1) * s)
    assert INF * s == INF and NEG_INF * s == NEG_INF


@pytest.mark.parametrize("p,ell,N,k", [(2, 8, 1, 3), (3, 6, 2, 1), (5, 6, 6, 0)])
def test_decompose_examples(p, ell, N, k):
    params = decompose(p, ell)
    assert (params.bigN, params.k) == (N, k)


def test_decompose_errors():
    with pytest.raises(NotPrime):
        decompose(4, 8)
    with pytest.raises(DegreeTooSmall):
        decompose(2, 1)


def test_params_reject_inconsistent_factorization():
    with pytest.raises(ValueError):
        UnicritParams(2, 8, 2, 2)
    with pytest.raises(ValueError):
        UnicritParams(3, 9, 3, 1)


@given(st.sampled_from([2, 3, 5, 7, 11]), st.integers(min_value=2, max_value=5000))
def test_decompose_property(p, ell):
    params = decompose(p, ell)
    assert params.bigN * p ** params.k == ell and params.bigN % p != 0


@pytest.mark.parametrize("p,n,want", [(2, 28, 2), (3, 20, 0), (2, 8, 3)])
def test_vp_int_examples(p, n, want):
    assert vp_int(p, n) == want


def test_vp_int_zero():
    with pytest.raises(ZeroInput):
        vp_int(2, 0)


@pytest.mark.parametrize("p,ell,n,want", [(2, 8, 2, 2), (2, 8, 4, 1), (3, 6, 3, 0)])
def test_vp_binom_examples(p, ell, n, want):
    assert vp_binom(p, ell, n) == want


def test_vp_binom_range():
    with pytest.raises(OutOfRange):
        vp_binom(2, 8, 9)
    with pytest.raises(OutOfRange):
        vp_binom(2, 8, -1)


@given(st.sampled_from([2, 3, 5, 7]), st.integers(min_value=0, max_value=400), st.data())
def test_vp_binom_matches_integer_factorization(p, ell, data):
    n = data.draw(st.integers(min_value=0, max_value=ell))
    assert vp_binom(p, ell, n) == vp_int(p, comb(ell, n))


@given(st.sampled_from([2, 3, 5]), st.integers(1, 5), st.integers(1, 5), st.data())
def test_binom_valuation_is_k_minus_vn_below_pk(p, k, big_n, data):
    if big_n % p == 0:
        big_n += 1
    n = data.draw(st.integers(min_value=1, max_value=p ** k))
    assert vp_binom(p, big_n * p ** k, n) == k - vp_int(p, n)


def test_binom_table_matches_pointwise():
    assert binom_valuations(2, 8) == (0, 3, 2, 3, 1, 3, 2, 3, 0)


def test_is_prime_small():
    assert [n for n in range(30) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
