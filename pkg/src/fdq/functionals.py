"""Lambda-linear functionals, positivity scanning, and positivity certificates.

Every functional here is a point evaluation composed with the exponential of
a constant-coefficient operator: omega = delta_x o exp(D).  That class holds
the delta functionals and their positive deformations and is closed under the
deformation construction used throughout.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product as iproduct
from math import factorial

from .errors import InvalidWeights, PositivityRefuted, SignatureMismatch
from .observables import (PolyObservable, eval_at_point, involution,
                          monomials_up_to)
from .series import DEFAULT_ORDER, FormalSeries, GaussianRational, Sign
from .star import apply_equiv, op_s, star_multiply


class Functional:
    """omega(f) = (exp(D) f)(x): evaluation at base_point after pre_operator."""

    __slots__ = ("signature", "base_point", "pre_operator")

    def __init__(self, signature, base_point, pre_operator=None):
        if len(base_point) != signature.width:
            raise SignatureMismatch(
                f"point of length {len(base_point)}, expected {signature.width}")
        if pre_operator is not None and pre_operator.signature != signature:
            raise SignatureMismatch("pre-operator lives on another signature")
        self.signature = signature
        self.base_point = tuple(
            c if isinstance(c, GaussianRational) else GaussianRational(c)
            for c in base_point)
        self.pre_operator = pre_operator

    def __repr__(self):
        op = self.pre_operator.name if self.pre_operator else "id"
        return f"<functional delta_{list(self.base_point)} o {op}>"

    def __eq__(self, other):
        if not isinstance(other, Functional):
            return NotImplemented
        return (self.signature == other.signature
                and self.base_point == other.base_point
                and self.pre_operator == other.pre_operator)


def delta(signature, point=None):
    """The evaluation functional at the given point (origin by default)."""
    if point is None:
        point = (0,) * signature.width
    return Functional(signature, point)


def deform_delta(signature, point=None, order=None):
    """delta_x composed with exp(l Delta), Delta the z-zb Laplacian.

    Positive for the symmetrized product; its classical limit is delta_x.
    """
    if signature.chart != "real":
        raise SignatureMismatch("deformed delta is built on the real chart")
    if point is None:
        point = (0,) * signature.width
    return Functional(signature, point, op_s(signature.n, order or DEFAULT_ORDER))


def evaluate(w: Functional, f: PolyObservable) -> FormalSeries:
    if f.signature != w.signature:
        raise SignatureMismatch("functional and observable signatures differ")
    if w.pre_operator is not None:
        f = apply_equiv(w.pre_operator, f)
    return eval_at_point(f, w.base_point)


class PositivityReport:
    """Scan record: (sample text, value, verdict) rows plus the overall verdict.

    The scan is a refuter, not a decision procedure: "positive on samples"
    only means no sampled value was negative.
    """

    def __init__(self, spec_name, functional_repr, max_degree, rows):
        self.spec_name = spec_name
        self.functional_repr = functional_repr
        self.max_degree = max_degree
        self.rows = rows

    @property
    def negative_witnesses(self):
        return [(text, value) for text, value, verdict in self.rows
                if verdict is Sign.NEGATIVE]

    def positive_on_samples(self):
        return not self.negative_witnesses

    def to_json(self):
        from .exprio import series_text
        return {
            "schema_version": 1,
            "spec": self.spec_name,
            "functional": self.functional_repr,
            "max_degree": self.max_degree,
            "samples": [
                {"input": text, "value": series_text(value),
                 "verdict": verdict.value}
                for text, value, verdict in self.rows
            ],
            "verdict": "positive on samples" if self.positive_on_samples()
                       else "negative witness found",
        }


def _scan_samples(signature, max_degree, order):
    """Monomials plus two-term unit combinations m_a + s m_b, s in {1,-1,i,-i}."""
    from .exprio import observable_text

    monos = monomials_up_to(signature, max_degree, order)
    samples = [(observable_text(m), m) for m in monos]
    units = (GaussianRational(1), GaussianRational(-1),
             GaussianRational(0, 1), GaussianRational(0, -1))
    for a in range(len(monos)):
        for b in range(a + 1, len(monos)):
            for s in units:
                f = monos[a] + monos[b].scale_scalar(s)
                samples.append((observable_text(f), f))
    return samples


def positivity_scan(w: Functional, spec, max_degree) -> PositivityReport:
    """Evaluate omega(conj(f) * f) over the sample family and report verdicts."""
    rows = []
    for text, f in _scan_samples(spec.signature, max_degree, spec.order):
        value = evaluate(w, star_multiply(spec, involution(f), f))
        # conj(f) * f has a real value for a Hermitian product; a residual
        # imaginary part would itself refute positivity, so report NEGATIVE.
        if all(c.is_real() for c in value.coeffs):
            verdict = value.sign()
        else:
            verdict = Sign.NEGATIVE
        rows.append((text, value, verdict))
    return PositivityReport(spec.name, repr(w), max_degree, rows)


def cauchy_schwarz_check(w: Functional, spec, a: PolyObservable,
                         b: PolyObservable) -> Sign:
    """Sign of omega(a* x a) omega(b* x b) - |omega(a* x b)|^2.

    Also verifies omega(a* x b) = conj(omega(b* x a)); a violation refutes
    positivity of the functional and raises PositivityRefuted.
    """
    wa = evaluate(w, star_multiply(spec, involution(a), a))
    wb = evaluate(w, star_multiply(spec, involution(b), b))
    wab = evaluate(w, star_multiply(spec, involution(a), b))
    wba = evaluate(w, star_multiply(spec, involution(b), a))
    if wab != wba.conjugate():
        raise PositivityRefuted(
            "omega(a* x b) != conj(omega(b* x a)) on the given pair")
    return (wa * wb - wab * wab.conjugate()).sign()


class PositivityCertificate:
    """Membership data for the algebraic positive cone: target = sum beta_i b_i* x b_i."""

    def __init__(self, target, summands):
        self.target = target
        self.summands = tuple(summands)

    def __repr__(self):
        return f"<certificate with {len(self.summands)} summands>"


def verify_certificate(cert: PositivityCertificate, spec) -> bool:
    """True iff the target equals the certified sum exactly up to K."""
    for beta, _ in cert.summands:
        if not isinstance(beta, Fraction):
            beta = Fraction(beta)
        if beta <= 0:
            raise InvalidWeights(f"certificate weight {beta} is not positive")
    total = PolyObservable.zero(cert.target.signature, cert.target.order)
    for beta, b in cert.summands:
        total = total + star_multiply(spec, involution(b), b).scale_scalar(
            Fraction(beta))
    return total == cert.target


def wick_value_oracle(f: PolyObservable, order=None) -> FormalSeries:
    """Independent evaluation of delta_0(conj(f) * f) for the normal-ordered
    product: sum_r (2l)^r / r! sum_{i_1..i_r} |d^r f / d zb^{i_1}..d zb^{i_r}(0)|^2.

    ``f`` must be a holomorphic-chart observable; the derivative sum is
    computed directly, with no star machinery involved.
    """
    sig = f.signature
    if sig.chart != "holo":
        raise SignatureMismatch("oracle expects a holomorphic-chart observable")
    n = sig.n
    K = order or f.order
    origin = (0,) * sig.width
    total = FormalSeries.zero(K)
    for r in range(min(f.total_degree(), K - 1) + 1):
        factor = Fraction(2 ** r, factorial(r))
        for idxs in iproduct(range(n), repeat=r):
            g = f
            for i in idxs:
                g = g.derivative(n + i)
            val = eval_at_point(g, origin)
            contrib = (val.conjugate() * val).scalar_mul(factor).shift(r)
            total = total + contrib
    return total
