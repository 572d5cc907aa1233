from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from fdq.errors import MixedChart, ParseError, SchemaError, UnknownVariable
from fdq.exprio import (deserialize, gaussian_text, observable_text, parse,
                        parse_series, serialize, series_from_json,
                        series_text, series_to_json)
from fdq.observables import PhaseSpaceSignature, PolyObservable
from fdq.series import FormalSeries, GaussianRational
from fdq.star import op_s, weyl, wick

K = 4


# -- parsing ---------------------------------------------------------------------------


def test_parse_oscillator():
    h = parse("1/2*(p1^2 + q1^2)", 1, K)
    q2 = PolyObservable.monomial(
        h.signature, (2, 0), K,
        FormalSeries.from_scalar(GaussianRational(Fraction(1, 2)), K))
    p2 = PolyObservable.monomial(
        h.signature, (0, 2), K,
        FormalSeries.from_scalar(GaussianRational(Fraction(1, 2)), K))
    assert h == q2 + p2


def test_parse_qp_plus_lambda():
    f = parse("q1*p1 + l", 1, K)
    assert f.terms[(1, 1)] == FormalSeries.one(K)
    assert f.terms[(0, 0)] == FormalSeries.lam(1, K)


def test_parse_mixed_chart_rejected():
    with pytest.raises(MixedChart):
        parse("q1 + z1", 1, K)


def test_parse_unknown_variable():
    with pytest.raises(UnknownVariable):
        parse("q3", 2, K)
    with pytest.raises(UnknownVariable):
        parse("w1", 1, K)


def test_parse_syntax_errors_carry_position():
    with pytest.raises(ParseError) as exc:
        parse("q1 + ", 1, K)
    assert exc.value.line == 1
    with pytest.raises(ParseError):
        parse("q1 ** 2", 1, K)
    with pytest.raises(ParseError):
        parse("(q1", 1, K)
    with pytest.raises(ParseError):
        parse("q1^(2)", 1, K)
    with pytest.raises(ParseError):
        parse("1/0", 1, K)


def test_parse_never_crashes_on_fuzz():
    import random
    rng = random.Random(7)
    alphabet = "qp1 2z+-*^()/li."
    for _ in range(300):
        src = "".join(rng.choice(alphabet)
                      for _ in range(rng.randint(1, 25)))
        try:
            parse(src, 2, K)
        except ParseError:
            pass


def test_parse_series():
    s = parse_series("1/2 + i*l + 3*l^2", K)
    assert s.coeffs[0] == GaussianRational(Fraction(1, 2))
    assert s.coeffs[1] == GaussianRational(0, 1)
    assert s.coeffs[2] == GaussianRational(3)
    with pytest.raises(ParseError):
        parse_series("q1", K)


def test_division_only_in_literals():
    with pytest.raises(ParseError):
        parse("q1/p1", 1, K)


# -- printing ---------------------------------------------------------------------------


def test_print_examples():
    f = parse("q1*p1", 1, K)
    half_i_l = FormalSeries.lam(1, K).scalar_mul(
        GaussianRational(0, Fraction(1, 2)))
    g = f + PolyObservable.constant(f.signature, half_i_l)
    assert observable_text(g) == "q1*p1 + (1/2*i)*l"
    zero = PolyObservable.zero(f.signature, K)
    assert observable_text(zero) == "0"
    assert series_text(FormalSeries.zero(K)) == "0"
    assert series_text(FormalSeries.lam(2, K).scalar_mul(
        Fraction(-1, 4))) == "(-1/4)*l^2"


def test_gaussian_text_forms():
    assert gaussian_text(GaussianRational(3)) == "3"
    assert gaussian_text(GaussianRational(Fraction(-1, 4))) == "-1/4"
    assert gaussian_text(GaussianRational(0, 1)) == "i"
    assert gaussian_text(GaussianRational(0, -1)) == "-i"
    assert gaussian_text(GaussianRational(0, Fraction(1, 2))) == "1/2*i"
    assert gaussian_text(GaussianRational(1, -2)) == "1 - 2*i"


def test_print_is_stable_under_term_order():
    sig = PhaseSpaceSignature(1, "real")
    one = FormalSeries.one(K)
    a = PolyObservable(sig, {(1, 0): one, (0, 1): one}, K)
    b = PolyObservable(sig, {(0, 1): one, (1, 0): one}, K)
    assert observable_text(a) == observable_text(b)


def test_leading_negative_constant():
    f = parse("0 - 1/4 + q1", 1, K)
    text = observable_text(f)
    assert text == "q1 + (-1/4)"
    assert parse(text, 1, K) == f


# -- round trips ---------------------------------------------------------------------------


rationals = st.fractions(min_value=-8, max_value=8, max_denominator=9)
gaussians = st.builds(GaussianRational, rationals, rationals)


@st.composite
def observables(draw):
    n = draw(st.integers(1, 2))
    chart = draw(st.sampled_from(["real", "holo", "fock"]))
    sig = PhaseSpaceSignature(n, chart)
    nterms = draw(st.integers(0, 4))
    terms = {}
    for _ in range(nterms):
        exp = tuple(draw(st.integers(0, 3)) for _ in range(sig.width))
        coeffs = [draw(gaussians) for _ in range(K)]
        terms[exp] = FormalSeries(coeffs, K)
    return PolyObservable(sig, terms, K)


@given(observables())
def test_parse_print_roundtrip(f):
    text = observable_text(f)
    assert parse(text, f.signature.n, K, f.signature.chart) == f


@given(st.lists(gaussians, min_size=K, max_size=K))
def test_series_text_roundtrip(coeffs):
    s = FormalSeries(coeffs, K)
    assert parse_series(series_text(s), K) == s


# -- JSON ---------------------------------------------------------------------------------------


def test_series_json_shape():
    s = FormalSeries.lam(1, 2).scalar_mul(GaussianRational(Fraction(1, 2),
                                                           Fraction(-2, 3)))
    payload = series_to_json(s)
    assert payload == {"K": 2, "coeffs": [[0, 1, 0, 1], [1, 2, -2, 3]]}
    assert series_from_json(payload) == s


def test_series_json_schema_errors():
    with pytest.raises(SchemaError) as exc:
        series_from_json({"K": 2, "coeffs": [[0, 1, 0, 1]]}, "/x")
    assert "/x/coeffs" in str(exc.value)
    with pytest.raises(SchemaError):
        series_from_json({"coeffs": []})
    with pytest.raises(SchemaError):
        series_from_json({"K": 1, "coeffs": [[0, 0, 0, 0]]})


def test_serialize_roundtrips():
    values = [
        FormalSeries.lam(1, K),
        parse("q1*p1 + i*l", 1, K),
        parse("z1*zb1", 1, K, "holo"),
        weyl(2, K),
        wick(1, K),
        op_s(1, K),
    ]
    for v in values:
        payload = serialize(v)
        assert payload["schema_version"] == 1
        assert deserialize(payload) == v


def test_deserialize_mismatched_truncation_rejected():
    f = parse("q1 + l*p1", 1, K)
    payload = serialize(f)
    payload["terms"][0]["coeff"]["K"] = K + 1
    with pytest.raises(SchemaError):
        deserialize(payload)


def test_deserialize_unknown_tag():
    with pytest.raises(SchemaError):
        deserialize({"type": "nonsense"})


def test_functional_roundtrip():
    from fdq.functionals import deform_delta, delta
    sig = PhaseSpaceSignature(1, "real")
    for w in (delta(sig), delta(sig, (Fraction(1, 2), -1)),
              deform_delta(sig, order=K)):
        assert deserialize(serialize(w)) == w


def test_gns_result_roundtrip():
    from fdq.matrices import MatrixStarAlgebra, SeriesMatrix
    from fdq.reps import MatrixFunctional, gns_build
    alg = MatrixStarAlgebra(2, K)
    lam = FormalSeries.lam(1, K)
    weights = SeriesMatrix([[FormalSeries.one(K), FormalSeries.zero(K)],
                            [FormalSeries.zero(K), lam]], K)
    res = gns_build(alg, MatrixFunctional(weights))
    assert deserialize(serialize(res)) == res
    # also for a genuinely quotiented example
    res2 = gns_build(alg, MatrixFunctional(
        SeriesMatrix.from_scalar_rows([[1, 0], [0, 0]], K)))
    assert deserialize(serialize(res2)) == res2
