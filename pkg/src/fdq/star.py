"""Star products of exponential type and their equivalence transformations.

A star product is f * g = mu o exp(sum_ab L[a][b] d_a (x) d_b)(f (x) g) with a
constant pairing matrix L whose entries are O(l) series.  On polynomials the
exponential terminates (derivatives kill high terms) and each pairing
application raises the l-order by one, so evaluation is exact and bounded by
the truncation order.
"""

from __future__ import annotations

import warnings
from fractions import Fraction

from .errors import SignatureMismatch, TruncationMismatch
from .observables import (PhaseSpaceSignature, PolyObservable, involution,
                          monomials_up_to, poisson_bracket)
from .series import DEFAULT_ORDER, FormalSeries, GaussianRational


class StarProductSpec:
    """Constant-coefficient bidifferential exponential star product."""

    __slots__ = ("signature", "order", "pairing", "name")

    def __init__(self, signature, pairing, order=None, name="custom"):
        w = signature.width
        if len(pairing) != w or any(len(row) != w for row in pairing):
            raise SignatureMismatch(
                f"pairing must be {w}x{w} for signature {signature!r}")
        K = order
        for row in pairing:
            for entry in row:
                if K is None:
                    K = entry.order
                elif entry.order != K:
                    raise TruncationMismatch("pairing entries share one order")
                if entry.coeffs[0]:
                    raise ValueError(
                        "pairing entries must be O(l): C_0 must be the "
                        "pointwise product")
        self.signature = signature
        self.order = K if K is not None else DEFAULT_ORDER
        self.pairing = tuple(tuple(row) for row in pairing)
        self.name = name

    def _sparse_pairing(self):
        out = []
        for a, row in enumerate(self.pairing):
            for b, entry in enumerate(row):
                if not entry.is_zero() or entry.tail_lost:
                    out.append((a, b, entry))
        return out

    def __eq__(self, other):
        if not isinstance(other, StarProductSpec):
            return NotImplemented
        return (self.signature == other.signature
                and self.order == other.order and self.pairing == other.pairing)

    def __repr__(self):
        return f"<star {self.name} n={self.signature.n} K={self.order}>"


class EquivOperatorSpec:
    """Exponential exp(D) of a constant-coefficient differential operator D.

    ``generator`` maps derivative exponent tuples to O(l) series coefficients:
    D = sum_alpha c_alpha d^alpha.  The operator is invertible with inverse
    exp(-D).
    """

    __slots__ = ("signature", "order", "generator", "name")

    def __init__(self, signature, generator, order=None, name="custom"):
        w = signature.width
        K = order
        clean = {}
        for exp, coeff in generator.items():
            if len(exp) != w:
                raise SignatureMismatch("generator exponent width mismatch")
            if K is None:
                K = coeff.order
            elif coeff.order != K:
                raise TruncationMismatch("generator entries share one order")
            if coeff.coeffs[0]:
                raise ValueError("generator coefficients must be O(l)")
            if not coeff.is_zero() or coeff.tail_lost:
                clean[tuple(exp)] = coeff
        self.signature = signature
        self.order = K if K is not None else DEFAULT_ORDER
        self.generator = clean
        self.name = name

    def inverse(self):
        return EquivOperatorSpec(
            self.signature, {e: -c for e, c in self.generator.items()},
            self.order, name=f"{self.name}^-1")

    def __eq__(self, other):
        if not isinstance(other, EquivOperatorSpec):
            return NotImplemented
        return (self.signature == other.signature
                and self.order == other.order
                and self.generator == other.generator)

    def __repr__(self):
        return f"<equiv-op {self.name} n={self.signature.n} K={self.order}>"


# -- built-in constructors -------------------------------------------------------


def weyl(n, order=None):
    """Totally symmetrized product: pairing (il/2)(d_q (x) d_p - d_p (x) d_q)."""
    order = order or DEFAULT_ORDER
    sig = PhaseSpaceSignature(n, "real")
    w = sig.width
    zero = FormalSeries.zero(order)
    half_i_l = FormalSeries.lam(1, order).scalar_mul(
        GaussianRational(0, Fraction(1, 2)))
    pairing = [[zero] * w for _ in range(w)]
    for r in range(n):
        pairing[r][n + r] = half_i_l
        pairing[n + r][r] = -half_i_l
    return StarProductSpec(sig, pairing, order, name="weyl")


def wick(n, order=None, chart="real"):
    """Normal-ordered product 2l d_z (x) d_zb, expressed in the requested chart.

    On the real chart the z-substitution gives
    (l/2)(d_q (x) d_q + d_p (x) d_p) + (il/2)(d_q (x) d_p - d_p (x) d_q).
    """
    order = order or DEFAULT_ORDER
    if chart == "holo":
        sig = PhaseSpaceSignature(n, "holo")
        w = sig.width
        zero = FormalSeries.zero(order)
        two_l = FormalSeries.lam(1, order).scalar_mul(2)
        pairing = [[zero] * w for _ in range(w)]
        for r in range(n):
            pairing[r][n + r] = two_l
        return StarProductSpec(sig, pairing, order, name="wick")
    sig = PhaseSpaceSignature(n, "real")
    w = sig.width
    zero = FormalSeries.zero(order)
    l = FormalSeries.lam(1, order)
    half_l = l.scalar_mul(Fraction(1, 2))
    half_i_l = l.scalar_mul(GaussianRational(0, Fraction(1, 2)))
    pairing = [[zero] * w for _ in range(w)]
    for r in range(n):
        pairing[r][r] = half_l
        pairing[n + r][n + r] = half_l
        pairing[r][n + r] = half_i_l
        pairing[n + r][r] = -half_i_l
    return StarProductSpec(sig, pairing, order, name="wick")


def std(n, order=None):
    """Standard-ordered product (momenta to the right): (l/i) d_p (x) d_q."""
    order = order or DEFAULT_ORDER
    sig = PhaseSpaceSignature(n, "real")
    w = sig.width
    zero = FormalSeries.zero(order)
    minus_i_l = FormalSeries.lam(1, order).scalar_mul(GaussianRational(0, -1))
    pairing = [[zero] * w for _ in range(w)]
    for r in range(n):
        pairing[n + r][r] = minus_i_l
    return StarProductSpec(sig, pairing, order, name="std")


def builtin_spec(kind, n, order=None):
    if kind == "weyl":
        return weyl(n, order)
    if kind == "wick":
        return wick(n, order)
    if kind == "std":
        return std(n, order)
    raise ValueError(f"unknown built-in star product {kind!r}")


def op_s(n, order=None):
    """S = exp(l Delta) with Delta the z-zb Laplacian, on the real chart:
    Delta = (1/4) sum_r (d_q^2 + d_p^2)."""
    order = order or DEFAULT_ORDER
    sig = PhaseSpaceSignature(n, "real")
    quarter_l = FormalSeries.lam(1, order).scalar_mul(Fraction(1, 4))
    gen = {}
    for r in range(n):
        eq = [0] * sig.width
        eq[r] = 2
        ep = [0] * sig.width
        ep[n + r] = 2
        gen[tuple(eq)] = quarter_l
        gen[tuple(ep)] = quarter_l
    return EquivOperatorSpec(sig, gen, order, name="S")


def op_n(n, order=None):
    """N = exp((l/2i) sum_k d_p d_q), the Weyl-to-standard-ordering operator."""
    order = order or DEFAULT_ORDER
    sig = PhaseSpaceSignature(n, "real")
    c = FormalSeries.lam(1, order).scalar_mul(
        GaussianRational(0, Fraction(-1, 2)))
    gen = {}
    for r in range(n):
        e = [0] * sig.width
        e[r] = 1
        e[n + r] = 1
        gen[tuple(e)] = c
    return EquivOperatorSpec(sig, gen, order, name="N")


def identity_op(n, order=None, chart="real"):
    return EquivOperatorSpec(PhaseSpaceSignature(n, chart), {},
                             order or DEFAULT_ORDER, name="id")


# -- core operations --------------------------------------------------------------


def _common_order(*values):
    return min(v.order for v in values)


def star_multiply(spec: StarProductSpec, f: PolyObservable,
                  g: PolyObservable) -> PolyObservable:
    """Exact evaluation of f * g.

    Works on a tensor representation {(exp_f, exp_g): series}; the k-th
    pairing power contributes at l-order >= k, so the loop is bounded by the
    truncation order as well as by the polynomial degrees.
    """
    if f.signature != spec.signature or g.signature != spec.signature:
        raise SignatureMismatch("operands must live on the spec's signature")
    K = _common_order(spec, f, g)
    if f.order != K:
        f = f.reduce_order(K)
    if g.order != K:
        g = g.reduce_order(K)
    pairing = [(a, b, e if e.order == K else e.reduce_order(K))
               for a, b, e in spec._sparse_pairing()]

    tensor = {}
    for e1, c1 in f.terms.items():
        for e2, c2 in g.terms.items():
            tensor[(e1, e2)] = c1 * c2

    result = {}
    lost = f.tail_lost or g.tail_lost

    def absorb(tensor_terms, factorial_recip):
        nonlocal lost
        for (e1, e2), c in tensor_terms.items():
            e = tuple(x + y for x, y in zip(e1, e2))
            c = c.scalar_mul(factorial_recip)
            if e in result:
                result[e] = result[e] + c
            else:
                result[e] = c

    absorb(tensor, Fraction(1))
    fact = Fraction(1)
    k = 1
    while tensor and k < K:
        new = {}
        for (e1, e2), c in tensor.items():
            for a, b, entry in pairing:
                if e1[a] == 0 or e2[b] == 0:
                    continue
                d1 = list(e1)
                d1[a] -= 1
                d2 = list(e2)
                d2[b] -= 1
                key = (tuple(d1), tuple(d2))
                add = (entry * c).scalar_mul(e1[a] * e2[b])
                if key in new:
                    new[key] = new[key] + add
                else:
                    new[key] = add
        tensor = {key: c for key, c in new.items()
                  if not c.is_zero() or c.tail_lost}
        fact = fact / k
        absorb(tensor, fact)
        k += 1
    return PolyObservable(spec.signature, result, K, lost)


def commutator(spec, f, g):
    """f * g - g * f; its first l-order is i l {f, g}."""
    return star_multiply(spec, f, g) - star_multiply(spec, g, f)


def apply_equiv(op: EquivOperatorSpec, f: PolyObservable) -> PolyObservable:
    """Apply exp(D) to a polynomial exactly."""
    if f.signature != op.signature:
        raise SignatureMismatch("operand must live on the operator's signature")
    K = _common_order(op, f)
    if f.order != K:
        f = f.reduce_order(K)
    gen = {e: (c if c.order == K else c.reduce_order(K))
           for e, c in op.generator.items()}

    result = f
    current = f
    fact = Fraction(1)
    k = 1
    while current.terms and k < K:
        new = PolyObservable.zero(op.signature, K)
        for exp, c in gen.items():
            term = current
            for idx, times in enumerate(exp):
                if times:
                    term = term.derivative(idx, times)
            if term.terms or term.tail_lost:
                new = new + term.scale(c)
        current = new
        fact = fact / k
        result = result + current.scale_scalar(fact)
        k += 1
    return result


def transported_product(op: EquivOperatorSpec, spec: StarProductSpec,
                        f: PolyObservable, g: PolyObservable) -> PolyObservable:
    """The star product transported along the equivalence operator:
    op(op^-1 f * op^-1 g).

    With op = S this turns the symmetrized product into the normal-ordered
    one, with op = N into the standard-ordered one.
    """
    inv = op.inverse()
    return apply_equiv(op, star_multiply(spec, apply_equiv(inv, f),
                                         apply_equiv(inv, g)))


def star_exponential_beta(spec, h, beta_order):
    """Coefficients e_k of Exp(-beta H) = sum beta^k e_k.

    Defined by the recursion e_0 = 1, e_k = -(1/k) H * e_{k-1}, the unique
    formal solution of d/dbeta Exp = -H * Exp with Exp(0) = 1.
    """
    if h != involution(h):
        warnings.warn("star exponential of a non-Hermitian generator",
                      stacklevel=2)
    coeffs = [PolyObservable.one(spec.signature, _common_order(spec, h))]
    for k in range(1, beta_order + 1):
        nxt = star_multiply(spec, h, coeffs[-1]).scale_scalar(Fraction(-1, k))
        coeffs.append(nxt)
    return coeffs


# -- axiom checking ----------------------------------------------------------------


class AxiomReport:
    """Outcome of the star-product axiom battery for one spec.

    ``checks`` maps check names to (passed, witness) where a witness is a
    canonical-text description of a failing input tuple, or None.
    """

    NAMES = ("unit", "correspondence_c0", "correspondence_c1", "hermitian",
             "associativity")

    def __init__(self, spec_name, sample_degree, checks):
        self.spec_name = spec_name
        self.sample_degree = sample_degree
        self.checks = checks

    def all_passed(self):
        return all(ok for ok, _ in self.checks.values())

    def to_json(self):
        return {
            "schema_version": 1,
            "spec": self.spec_name,
            "sample_degree": self.sample_degree,
            "checks": {
                name: {"passed": ok, "witness": witness}
                for name, (ok, witness) in self.checks.items()
            },
            "all_passed": self.all_passed(),
        }

    def __repr__(self):
        status = "pass" if self.all_passed() else "FAIL"
        return f"<AxiomReport {self.spec_name} degree={self.sample_degree} {status}>"


def check_star_axioms(spec, sample_degree=3):
    """Exhaustive verification on all monomials up to sample_degree.

    Bilinearity makes monomial verification a complete proof at that degree:
    unit law, C_0(f,g) = fg, antisymmetric C_1 = i{f,g}, the Hermitian
    property, and associativity on all monomial triples.
    """
    from .exprio import observable_text

    sig = spec.signature
    K = spec.order
    monos = monomials_up_to(sig, sample_degree, K)
    one = PolyObservable.one(sig, K)

    checks = {}

    witness = None
    for m in monos:
        if star_multiply(spec, one, m) != m or star_multiply(spec, m, one) != m:
            witness = observable_text(m)
            break
    checks["unit"] = (witness is None, witness)

    witness = None
    for f in monos:
        for g in monos:
            prod = star_multiply(spec, f, g)
            if prod.lambda_coefficient(0) != (f * g).lambda_coefficient(0):
                witness = f"({observable_text(f)}, {observable_text(g)})"
                break
        if witness:
            break
    checks["correspondence_c0"] = (witness is None, witness)

    witness = None
    if sig.chart == "real":
        i_one = GaussianRational(0, 1)
        for f in monos:
            for g in monos:
                c1 = star_multiply(spec, f, g).lambda_coefficient(1)
                c1r = star_multiply(spec, g, f).lambda_coefficient(1)
                expected = poisson_bracket(f, g).lambda_coefficient(0) \
                    .scale_scalar(i_one)
                if c1 - c1r != expected:
                    witness = f"({observable_text(f)}, {observable_text(g)})"
                    break
            if witness:
                break
    checks["correspondence_c1"] = (witness is None, witness)

    witness = None
    for f in monos:
        for g in monos:
            lhs = involution(star_multiply(spec, f, g))
            rhs = star_multiply(spec, involution(g), involution(f))
            if lhs != rhs:
                witness = f"({observable_text(f)}, {observable_text(g)})"
                break
        if witness:
            break
    checks["hermitian"] = (witness is None, witness)

    witness = None
    for f in monos:
        for g in monos:
            fg = star_multiply(spec, f, g)
            for h in monos:
                if star_multiply(spec, fg, h) != \
                        star_multiply(spec, f, star_multiply(spec, g, h)):
                    witness = (f"({observable_text(f)}, {observable_text(g)}, "
                               f"{observable_text(h)})")
                    break
            if witness:
                break
        if witness:
            break
    checks["associativity"] = (witness is None, witness)

    return AxiomReport(spec.name, sample_degree, checks)
