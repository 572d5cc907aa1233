from fdq.diffops import DiffOperator, formal_adjoint
from fdq.exprio import operator_text, parse
from fdq.observables import PhaseSpaceSignature, PolyObservable
from fdq.series import FormalSeries, GaussianRational

K = 4
WSIG = PhaseSpaceSignature(1, "wave")


def wave(text):
    return parse(text, 1, K, "wave")


def momentum():
    minus_il = FormalSeries.lam(1, K).scalar_mul(GaussianRational(0, -1))
    return DiffOperator(WSIG, {(1,): PolyObservable.constant(WSIG, minus_il)},
                        K)


def test_apply_derivative():
    d = DiffOperator.derivative_monomial(WSIG, (1,), K)
    assert d.apply(wave("q1^3")) == wave("3*q1^2")
    assert d.apply(wave("1")).is_zero()


def test_multiplication_operator():
    m = DiffOperator.multiplication(wave("q1"))
    assert m.apply(wave("q1^2")) == wave("q1^3")


def test_composition_leibniz():
    d = DiffOperator.derivative_monomial(WSIG, (1,), K)
    q = DiffOperator.multiplication(wave("q1"))
    # d o q = q d + 1
    dq = d.compose(q)
    want = q.compose(d) + DiffOperator.multiplication(wave("1"))
    assert dq == want
    # and they act identically
    for text in ("q1^2", "q1^3 + q1", "1"):
        assert dq.apply(wave(text)) == d.apply(q.apply(wave(text)))


def test_composition_associative():
    d2 = DiffOperator.derivative_monomial(WSIG, (2,), K)
    q = DiffOperator.multiplication(wave("q1^2"))
    p = momentum()
    lhs = d2.compose(q).compose(p)
    rhs = d2.compose(q.compose(p))
    assert lhs == rhs


def test_adjoint_of_momentum_is_itself():
    p = momentum()
    assert formal_adjoint(p) == p


def test_adjoint_of_multiplication():
    q = DiffOperator.multiplication(wave("q1"))
    assert formal_adjoint(q) == q
    iq = DiffOperator.multiplication(
        wave("q1").scale_scalar(GaussianRational(0, 1)))
    assert formal_adjoint(iq) == DiffOperator.multiplication(
        wave("q1").scale_scalar(GaussianRational(0, -1)))


def test_adjoint_of_plain_derivative():
    d = DiffOperator.derivative_monomial(WSIG, (1,), K)
    assert formal_adjoint(d) == -d


def test_adjoint_involutive_and_antimultiplicative():
    p = momentum()
    q2 = DiffOperator.multiplication(wave("q1^2"))
    mixed = p.compose(q2) + DiffOperator.derivative_monomial(
        WSIG, (2,), K, wave("q1"))
    assert formal_adjoint(formal_adjoint(mixed)) == mixed
    assert formal_adjoint(p.compose(q2)) == \
        formal_adjoint(q2).compose(formal_adjoint(p))


def test_operator_text():
    p = momentum()
    q = DiffOperator.multiplication(wave("q1"))
    assert operator_text(p + q) == "((-i)*l)*d/dq1 + q1"
    assert operator_text(DiffOperator.zero(WSIG, K)) == "0"
