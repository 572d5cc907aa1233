from fractions import Fraction

import pytest

from fdq.errors import InvalidWeights, PositivityRefuted
from fdq.exprio import parse
from fdq.functionals import (PositivityCertificate, cauchy_schwarz_check,
                             deform_delta, delta, evaluate, positivity_scan,
                             verify_certificate, wick_value_oracle)
from fdq.observables import (PhaseSpaceSignature, PolyObservable,
                             eval_at_point, involution, monomials_up_to,
                             to_holomorphic)
from fdq.series import FormalSeries, GaussianRational, Sign
from fdq.star import star_multiply, weyl, wick

K = 6
SIG = PhaseSpaceSignature(1, "real")
W = weyl(1, K)
WK = wick(1, K)
D0 = delta(SIG)
DD = deform_delta(SIG, order=K)


def obs(text, n=1):
    return parse(text, n, K)


H = obs("1/2*(p1^2 + q1^2)")


# -- evaluate -----------------------------------------------------------------------


def test_delta_on_oscillator_square():
    value = evaluate(D0, star_multiply(W, involution(H), H))
    assert value == FormalSeries.lam(2, K).scalar_mul(Fraction(-1, 4))
    assert value.sign() is Sign.NEGATIVE


def test_delta_normalization():
    assert evaluate(D0, obs("1")) == FormalSeries.one(K)
    assert evaluate(DD, obs("1")) == FormalSeries.one(K)


def test_deformed_delta_on_oscillator_square():
    value = evaluate(DD, star_multiply(W, involution(H), H))
    assert value == FormalSeries.lam(2, K).scalar_mul(Fraction(1, 4))
    assert value.sign() is Sign.POSITIVE


def test_evaluate_is_linear():
    f, g = obs("q1^2*p1"), obs("p1^3 + i*q1")
    lam = FormalSeries.lam(1, K)
    for w in (D0, DD):
        assert evaluate(w, f + g) == evaluate(w, f) + evaluate(w, g)
        assert evaluate(w, f.scale(lam)) == evaluate(w, f) * lam


# -- deform_delta -------------------------------------------------------------------------


def test_deform_delta_on_zzbar():
    zzb = obs("q1^2 + p1^2")
    assert evaluate(DD, zzb) == FormalSeries.lam(1, K)


def test_deform_delta_classical_limit_is_evaluation():
    for text in ("q1^2*p1", "q1 + p1^2", "1 + l*q1"):
        f = obs(text)
        assert evaluate(DD, f).classical_limit() == \
            eval_at_point(f, (0, 0)).classical_limit()


# -- positivity_scan ------------------------------------------------------------------------


def test_delta_weyl_scan_finds_negative_witness():
    report = positivity_scan(D0, W, 2)
    assert not report.positive_on_samples()
    # The oscillator-type combination q + i p is among the witnesses.
    assert any("q1" in text and "p1" in text
               for text, _ in report.negative_witnesses)


def test_delta_wick_scan_positive_and_matches_formula():
    report = positivity_scan(D0, WK, 3)
    assert report.positive_on_samples()
    for f in monomials_up_to(SIG, 3, K):
        value = evaluate(D0, star_multiply(WK, involution(f), f))
        assert value == wick_value_oracle(to_holomorphic(f), K)


def test_deformed_delta_weyl_scan_positive():
    report = positivity_scan(DD, W, 2)
    assert report.positive_on_samples()


def test_scan_report_serializes():
    payload = positivity_scan(D0, WK, 1).to_json()
    assert payload["verdict"] == "positive on samples"
    assert payload["samples"]


def test_positive_functional_is_hermitian_on_samples():
    # omega(conj(f)) = conj(omega(f)) for functionals that pass the scan
    for w, spec in ((D0, WK), (DD, W)):
        for f in monomials_up_to(SIG, 3, K):
            fi = f.scale_scalar(GaussianRational(Fraction(1, 2),
                                                 Fraction(1, 3)))
            assert evaluate(w, involution(fi)) == evaluate(w, fi).conjugate()


# -- cauchy schwarz ------------------------------------------------------------------------------


def test_cs_one_zbar():
    one, zb = obs("1"), obs("q1 - i*p1")
    assert cauchy_schwarz_check(D0, WK, one, zb) is Sign.POSITIVE


def test_cs_equal_arguments():
    a = obs("q1 - i*p1")
    assert cauchy_schwarz_check(D0, WK, a, a) is Sign.ZERO_UP_TO_K


def test_cs_z_zbar():
    z, zb = obs("q1 + i*p1"), obs("q1 - i*p1")
    assert cauchy_schwarz_check(D0, WK, z, zb) is Sign.ZERO_UP_TO_K


def test_cs_never_negative_for_positive_functional():
    monos = monomials_up_to(SIG, 2, K)
    for a in monos:
        for b in monos:
            assert cauchy_schwarz_check(DD, W, a, b) in (
                Sign.POSITIVE, Sign.ZERO_UP_TO_K)


def test_cs_refutes_hermiticity_violation():
    # delta_0 with the symmetrized product is not positive; the pair
    # (1, q) already breaks omega(a* x b) = conj(omega(b* x a))? It does
    # not, so use an explicitly complex-shifted evaluation point instead.
    w = delta(SIG, (GaussianRational(0, 1), 0))
    with pytest.raises(PositivityRefuted):
        cauchy_schwarz_check(w, W, obs("1"), obs("q1"))


# -- certificates ----------------------------------------------------------------------------------


def test_certificate_unit():
    cert = PositivityCertificate(obs("1"), [(Fraction(1), obs("1"))])
    assert verify_certificate(cert, WK)


def test_certificate_wick_zzbar():
    zb = obs("q1 - i*p1")
    target = star_multiply(WK, involution(zb), zb)
    two_l = FormalSeries.lam(1, K).scalar_mul(2)
    assert target == obs("q1^2 + p1^2") + PolyObservable.constant(SIG, two_l)
    cert = PositivityCertificate(target, [(Fraction(1), zb)])
    assert verify_certificate(cert, WK)


def test_certificate_rejects_wrong_target():
    cert = PositivityCertificate(-obs("1"), [(Fraction(1), obs("1"))])
    assert not verify_certificate(cert, WK)


def test_certificate_rejects_bad_weights():
    cert = PositivityCertificate(obs("1"), [(Fraction(-1), obs("1"))])
    with pytest.raises(InvalidWeights):
        verify_certificate(cert, WK)


def test_certificate_soundness_under_scanned_functionals():
    # Accepted certificates evaluate nonnegatively under functionals that
    # passed the positivity scan.
    zb = obs("q1 - i*p1")
    summands = [(Fraction(1, 2), zb), (Fraction(2), obs("q1"))]
    target = sum(
        (star_multiply(WK, involution(b), b).scale_scalar(Fraction(beta))
         for beta, b in summands),
        PolyObservable.zero(SIG, K))
    cert = PositivityCertificate(target, summands)
    assert verify_certificate(cert, WK)
    assert evaluate(D0, target).sign() in (Sign.POSITIVE, Sign.ZERO_UP_TO_K)
