from fractions import Fraction

import pytest

from fdq.errors import SignatureMismatch
from fdq.exprio import parse
from fdq.observables import (PolyObservable, monomials_up_to,
                             poisson_bracket)
from fdq.series import FormalSeries, GaussianRational
from fdq.star import (StarProductSpec, apply_equiv, check_star_axioms,
                      commutator, identity_op, op_n, op_s,
                      star_exponential_beta, star_multiply, std,
                      transported_product, weyl, wick)

K = 4


def obs(text, n=1, chart=None):
    return parse(text, n, K, chart)


def const(series, sig):
    return PolyObservable.constant(sig, series)


W = weyl(1, K)
WK = wick(1, K)
ST = std(1, K)
SIG = W.signature
IL = FormalSeries.lam(1, K).scalar_mul(GaussianRational(0, 1))


# -- star_multiply ------------------------------------------------------------------


def test_weyl_q_star_p():
    got = star_multiply(W, obs("q1"), obs("p1"))
    want = obs("q1*p1") + const(IL.scalar_mul(Fraction(1, 2)), SIG)
    assert got == want


def test_weyl_oscillator_square():
    h = obs("1/2*(p1^2 + q1^2)")
    got = star_multiply(W, h, h)
    correction = FormalSeries.lam(2, K).scalar_mul(Fraction(-1, 4))
    assert got == h * h + const(correction, SIG)


def test_wick_z_zbar():
    z, zb = obs("q1 + i*p1"), obs("q1 - i*p1")
    got = star_multiply(WK, z, zb)
    two_l = FormalSeries.lam(1, K).scalar_mul(2)
    assert got == z * zb + const(two_l, SIG)


def test_star_multiply_signature_mismatch():
    with pytest.raises(SignatureMismatch):
        star_multiply(W, obs("q1", n=2), obs("q1", n=2))


def test_bilinearity():
    f, g, h = obs("q1^2"), obs("p1"), obs("q1*p1")
    lam = FormalSeries.lam(1, K)
    assert star_multiply(W, f + g.scale(lam), h) == \
        star_multiply(W, f, h) + star_multiply(W, g, h).scale(lam)


# -- commutator ------------------------------------------------------------------------


def test_canonical_commutation():
    got = commutator(W, obs("q1"), obs("p1"))
    assert got == const(IL, SIG)
    # all orders >= 2 vanish
    for r in range(2, K):
        assert got.lambda_coefficient(r).is_zero()


def test_commutator_of_self_vanishes():
    f = obs("q1^2*p1 + i*l*q1")
    assert commutator(W, f, f).is_zero()


def test_commutator_matches_poisson_bracket():
    got = commutator(W, obs("q1^2"), obs("p1"))
    want = poisson_bracket(obs("q1^2"), obs("p1")).scale(IL)
    assert got == want
    assert got == obs("q1").scale(IL.scalar_mul(2))


# -- apply_equiv -------------------------------------------------------------------------


def test_s_on_zzbar():
    s = op_s(1, K)
    zzb = obs("q1^2 + p1^2")  # z zbar in real coordinates
    assert apply_equiv(s, zzb) == zzb + const(FormalSeries.lam(1, K), SIG)


def test_n_on_qp():
    n = op_n(1, K)
    got = apply_equiv(n, obs("q1*p1"))
    want = obs("q1*p1") + const(IL.scalar_mul(Fraction(-1, 2)), SIG)
    assert got == want


def test_equiv_fixes_constants():
    for op in (op_s(1, K), op_n(1, K), identity_op(1, K)):
        assert apply_equiv(op, obs("1")) == obs("1")


def test_op_inverse_roundtrip():
    s = op_s(1, K)
    f = obs("q1^3*p1 + p1^2")
    assert apply_equiv(s.inverse(), apply_equiv(s, f)) == f


# -- transported products ----------------------------------------------------------------------


def test_s_transports_weyl_to_wick():
    s = op_s(1, K)
    for f in monomials_up_to(SIG, 3, K):
        for g in monomials_up_to(SIG, 3, K):
            assert transported_product(s, W, f, g) == star_multiply(WK, f, g)


def test_identity_transport_is_the_product():
    ident = identity_op(1, K)
    f, g = obs("q1^2"), obs("q1*p1")
    assert transported_product(ident, W, f, g) == star_multiply(W, f, g)


def test_n_transports_weyl_to_std():
    n = op_n(1, K)
    for f in monomials_up_to(SIG, 2, K):
        for g in monomials_up_to(SIG, 2, K):
            assert transported_product(n, W, f, g) == star_multiply(ST, f, g)


def test_transport_preserves_first_order_bracket():
    s = op_s(1, K)
    f, g = obs("q1^2*p1"), obs("q1*p1^2")
    t = transported_product(s, W, f, g) - transported_product(s, W, g, f)
    want = poisson_bracket(f, g).scale(IL)
    assert t.lambda_coefficient(1) == want.lambda_coefficient(1)


# -- star exponential -----------------------------------------------------------------------------


def test_position_exponential_is_commutative():
    coeffs = star_exponential_beta(W, obs("q1"), 3)
    fact = 1
    for k, c in enumerate(coeffs):
        if k:
            fact *= k
        assert c == (obs("q1") ** k).scale_scalar(Fraction((-1) ** k, fact))


def test_oscillator_second_coefficient():
    h = obs("1/2*(p1^2 + q1^2)")
    coeffs = star_exponential_beta(W, h, 2)
    assert coeffs[2] == star_multiply(W, h, h).scale_scalar(Fraction(1, 2))


def test_beta_order_zero():
    assert star_exponential_beta(W, obs("q1"), 0) == [obs("1")]


def test_defining_recursion():
    h = obs("q1*p1 + q1^2")
    es = star_exponential_beta(W, h, 4)
    for k in range(1, 5):
        assert es[k] == star_multiply(W, h, es[k - 1]).scale_scalar(
            Fraction(-1, k))


def test_non_hermitian_generator_warns():
    with pytest.warns(UserWarning):
        star_exponential_beta(W, obs("i*q1"), 1)


# -- axiom checker ---------------------------------------------------------------------------------


def test_weyl_axioms_pass():
    report = check_star_axioms(W, 3)
    assert report.all_passed()


def test_wick_axioms_pass():
    report = check_star_axioms(WK, 3)
    assert report.all_passed()


def test_std_axioms_status():
    report = check_star_axioms(ST, 3)
    ok_herm, witness = report.checks["hermitian"]
    assert not ok_herm and witness is not None
    for name in ("unit", "correspondence_c0", "correspondence_c1",
                 "associativity"):
        assert report.checks[name][0]


def test_corrupted_pairing_fails_with_witness():
    sig = SIG
    zero = FormalSeries.zero(K)
    half_i_l = IL.scalar_mul(Fraction(1, 2))
    pairing = [[zero, half_i_l], [zero, zero]]  # second Weyl term dropped
    bad = StarProductSpec(sig, pairing, K, name="bad")
    report = check_star_axioms(bad, 2)
    ok, witness = report.checks["correspondence_c1"]
    assert not ok
    assert "q1" in witness and "p1" in witness


def test_report_serializes():
    payload = check_star_axioms(W, 1).to_json()
    assert payload["all_passed"] is True
    assert set(payload["checks"]) == {"unit", "correspondence_c0",
                                      "correspondence_c1", "hermitian",
                                      "associativity"}


# -- degree bound (bidifferential order) ------------------------------------------------------------


def test_cr_vanishes_below_degree():
    # The r-th cochain differentiates each argument r times, so it kills
    # any pair in which either argument has total degree below r.
    for spec in (W, WK, ST):
        for r in range(1, K):
            for f in monomials_up_to(SIG, r - 1, K):
                for g in monomials_up_to(SIG, 3, K):
                    assert star_multiply(spec, f, g) \
                        .lambda_coefficient(r).is_zero()
                    assert star_multiply(spec, g, f) \
                        .lambda_coefficient(r).is_zero()


def test_associativity_all_orders():
    monos = monomials_up_to(SIG, 2, K)
    for spec in (W, WK, ST):
        for f in monos[:6]:
            for g in monos[:6]:
                fg = star_multiply(spec, f, g)
                for h in monos[:6]:
                    assert star_multiply(spec, fg, h) == \
                        star_multiply(spec, f, star_multiply(spec, g, h))
