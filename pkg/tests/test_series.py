from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from fdq.errors import BadLeadingTerm, NotReal, NotUnit, TruncationMismatch
from fdq.series import FormalSeries, GaussianRational, Sign, arith


def series(*coeffs, K=None):
    return FormalSeries([GaussianRational(Fraction(c)) if not
                         isinstance(c, GaussianRational) else c
                         for c in coeffs], K or max(len(coeffs), 1))


rationals = st.fractions(min_value=-10, max_value=10, max_denominator=12)
gaussians = st.builds(GaussianRational, rationals, rationals)


def series_strategy(K=5, real=False):
    coeff = st.builds(GaussianRational, rationals) if real else gaussians
    return st.builds(lambda cs: FormalSeries(cs, K),
                     st.lists(coeff, min_size=K, max_size=K))


# -- arith -------------------------------------------------------------------------


def test_mul_difference_of_squares():
    one_plus = series(1, 1, 0, K=3)
    one_minus = series(1, -1, 0, K=3)
    assert one_plus * one_minus == series(1, 0, -1, K=3)


def test_mul_truncation_absorbs_high_powers():
    lam2 = FormalSeries.lam(2, 3)
    prod = lam2 * lam2
    assert prod.is_zero()
    assert prod.tail_lost  # the true l^4 content was dropped


def test_add_cancellation():
    a = series(Fraction(1, 2), 1, K=3)
    b = series(Fraction(1, 2), -1, K=3)
    assert a + b == FormalSeries.one(3)


def test_arith_dispatch_and_truncation_mismatch():
    a, b = FormalSeries.one(3), FormalSeries.one(4)
    assert arith("add", a, a) == series(2, 0, 0, K=3)
    with pytest.raises(TruncationMismatch):
        arith("mul", a, b)


@given(series_strategy(), series_strategy(), series_strategy())
def test_ring_axioms(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert a + b == b + a


# -- sign ---------------------------------------------------------------------------


def test_sign_examples():
    assert series(0, 0, Fraction(-1, 4), K=4).sign() is Sign.NEGATIVE
    assert series(0, 1, -1000, K=4).sign() is Sign.POSITIVE
    assert FormalSeries.zero(4).sign() is Sign.ZERO_UP_TO_K


def test_sign_rejects_imaginary():
    with pytest.raises(NotReal):
        series(GaussianRational(0, 1), K=2).sign()


@given(series_strategy(real=True), series_strategy(real=True))
def test_order_axioms(a, b):
    sa, sb = a.sign(), b.sign()
    prod = (a * b).sign()
    if Sign.ZERO_UP_TO_K in (sa, sb):
        assert prod is Sign.ZERO_UP_TO_K
    elif sa == sb:
        assert prod is Sign.POSITIVE
        assert (a + b).sign() is sa
    else:
        assert prod is Sign.NEGATIVE


@given(series_strategy())
def test_conjugate_square_is_nonnegative(z):
    assert (z * z.conjugate()).sign() in (Sign.POSITIVE, Sign.ZERO_UP_TO_K)


# -- invert --------------------------------------------------------------------------


def test_invert_geometric_series():
    assert series(1, 1, 0, 0).invert() == series(1, -1, 1, -1)


def test_invert_constant():
    assert series(2, K=4).invert() == series(Fraction(1, 2), K=4)


def test_invert_requires_unit():
    with pytest.raises(NotUnit):
        FormalSeries.lam(1, 4).invert()


@given(series_strategy())
def test_invert_roundtrip(a):
    unit = FormalSeries((GaussianRational(1),) + a.coeffs[1:], a.order)
    assert unit * unit.invert() == FormalSeries.one(a.order)


# -- sqrt ----------------------------------------------------------------------------


def test_sqrt_binomial_coefficients():
    # Independent oracle: the k-th coefficient of (1+4l)^(-1/2) is
    # binom(-1/2, k) 4^k, accumulated by the defining recurrence.
    got = series(1, 4, 0, 0).sqrt_binomial(Fraction(-1, 2))
    binom = Fraction(1)
    expected = []
    for k in range(4):
        if k:
            binom = binom * (Fraction(-1, 2) - (k - 1)) / k
        expected.append(binom * 4 ** k)
    assert got == series(*expected)
    assert expected == [1, -2, 6, -20]
    # and squaring the root reproduces the input
    assert (got * got) * series(1, 4, 0, 0) == FormalSeries.one(4)


def test_sqrt_of_one():
    for e in (Fraction(1, 2), Fraction(-1, 2)):
        assert FormalSeries.one(4).sqrt_binomial(e) == FormalSeries.one(4)


def test_sqrt_of_perfect_square():
    sq = series(1, 1, 0, 0) * series(1, 1, 0, 0)
    assert sq.sqrt_binomial(Fraction(-1, 2)) == series(1, -1, 1, -1)


def test_sqrt_requires_unit_leading_one():
    with pytest.raises(BadLeadingTerm):
        series(2, 1).sqrt_binomial(Fraction(1, 2))


@given(series_strategy())
def test_sqrt_roundtrip(a):
    unit = FormalSeries((GaussianRational(1),) + a.coeffs[1:], a.order)
    root = unit.sqrt_binomial(Fraction(1, 2))
    assert root * root == unit


# -- classical limit -----------------------------------------------------------------


def test_classical_limit():
    assert series(3, 1).classical_limit() == GaussianRational(3)
    assert FormalSeries.lam(2, 4).scalar_mul(
        Fraction(1, 2)).classical_limit() == GaussianRational(0)
    assert series(0, 0, Fraction(-1, 4), K=4).classical_limit() == \
        GaussianRational(0)


# -- normalization and metadata ---------------------------------------------------------


def test_rationals_are_normalized():
    c = GaussianRational(Fraction(2, 4), Fraction(-3, -9))
    assert c.re == Fraction(1, 2) and c.re.denominator == 2
    assert c.im == Fraction(1, 3)


def test_conjugation_involutive():
    z = GaussianRational(Fraction(1, 3), Fraction(-2, 5))
    assert z.conjugate().conjugate() == z
    sq = z * z.conjugate()
    assert sq.im == 0 and sq.re >= 0


def test_tail_lost_is_not_part_of_equality():
    clean = FormalSeries.zero(3)
    lossy = FormalSeries.lam(2, 3) * FormalSeries.lam(2, 3)
    assert clean == lossy
    assert clean.is_exact_zero() and not lossy.is_exact_zero()
