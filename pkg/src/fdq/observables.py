"""Polynomial observables on flat phase space R^2n with series coefficients.

Observables are sparse multivariate polynomials: a map from exponent vectors
to FormalSeries.  Three charts share the machinery:

* ``real``: variables q1..qn, p1..pn (exponent vectors of length 2n),
* ``holo``: variables z1..zn, zb1..zbn (length 2n),
* ``fock``: variables yb1..ybn (length n), used by the representation engine,
* ``wave``: variables q1..qn (length n), wave functions for Schroedinger
  operators.

Everything is exact; "real" observables are detected (all coefficients fixed
by conjugation), never typed.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import DimensionMismatch, SignatureMismatch, TruncationMismatch
from .series import DEFAULT_ORDER, GR_ONE, FormalSeries, GaussianRational

_CHART_WIDTH = {"real": 2, "holo": 2, "fock": 1, "wave": 1}


class PhaseSpaceSignature:
    """Degrees of freedom plus chart; fixes the variable order for a computation."""

    __slots__ = ("n", "chart")

    def __init__(self, n, chart="real"):
        if n < 1:
            raise ValueError("need at least one degree of freedom")
        if chart not in _CHART_WIDTH:
            raise ValueError(f"unknown chart {chart!r}")
        self.n = n
        self.chart = chart

    @property
    def width(self):
        """Number of polynomial variables in this chart."""
        return _CHART_WIDTH[self.chart] * self.n

    def variables(self):
        n = self.n
        if self.chart == "real":
            return tuple(f"q{k}" for k in range(1, n + 1)) + \
                tuple(f"p{k}" for k in range(1, n + 1))
        if self.chart == "holo":
            return tuple(f"z{k}" for k in range(1, n + 1)) + \
                tuple(f"zb{k}" for k in range(1, n + 1))
        if self.chart == "fock":
            return tuple(f"yb{k}" for k in range(1, n + 1))
        return tuple(f"q{k}" for k in range(1, n + 1))

    def __eq__(self, other):
        return (isinstance(other, PhaseSpaceSignature)
                and self.n == other.n and self.chart == other.chart)

    def __hash__(self):
        return hash((self.n, self.chart))

    def __repr__(self):
        return f"PhaseSpaceSignature(n={self.n}, chart={self.chart!r})"


class PolyObservable:
    """Sparse polynomial with FormalSeries coefficients over a signature.

    ``terms`` maps exponent tuples (length = signature.width) to nonzero
    FormalSeries.  Instances are treated as immutable.  ``tail_lost`` records
    that some coefficient was silently truncated to a stored zero; it is
    metadata (never part of equality) consulted by precision-honest rank
    decisions downstream.
    """

    __slots__ = ("signature", "order", "terms", "tail_lost")

    def __init__(self, signature, terms, order=None, tail_lost=False):
        self.signature = signature
        w = signature.width
        clean = {}
        K = order
        for exp, coeff in terms.items():
            if len(exp) != w:
                raise DimensionMismatch(
                    f"exponent vector of length {len(exp)}, expected {w}")
            if K is None:
                K = coeff.order
            elif coeff.order != K:
                raise TruncationMismatch(
                    "all coefficients of one observable share the order")
            if coeff.is_zero():
                tail_lost = tail_lost or coeff.tail_lost
            else:
                clean[tuple(exp)] = coeff
        self.order = K if K is not None else DEFAULT_ORDER
        self.terms = clean
        self.tail_lost = tail_lost

    # -- constructors ---------------------------------------------------------

    @classmethod
    def zero(cls, signature, order=None):
        return cls(signature, {}, order or DEFAULT_ORDER)

    @classmethod
    def constant(cls, signature, series):
        return cls(signature, {(0,) * signature.width: series})

    @classmethod
    def one(cls, signature, order=None):
        return cls.constant(signature, FormalSeries.one(order or DEFAULT_ORDER))

    @classmethod
    def variable(cls, signature, index, order=None):
        """The coordinate monomial for variable ``index`` (0-based)."""
        exp = [0] * signature.width
        exp[index] = 1
        return cls(signature, {tuple(exp): FormalSeries.one(order or DEFAULT_ORDER)})

    @classmethod
    def monomial(cls, signature, exp, order=None, coeff=None):
        c = coeff if coeff is not None else FormalSeries.one(order or DEFAULT_ORDER)
        return cls(signature, {tuple(exp): c})

    # -- basics ---------------------------------------------------------------

    def __repr__(self):
        from .exprio import observable_text
        return f"<obs {observable_text(self)}>"

    def __eq__(self, other):
        if not isinstance(other, PolyObservable):
            return NotImplemented
        return (self.signature == other.signature
                and self.order == other.order and self.terms == other.terms)

    def __hash__(self):
        return hash((self.signature, self.order,
                     frozenset(self.terms.items())))

    def is_zero(self):
        return all(c.is_zero() for c in self.terms.values())

    def total_degree(self):
        return max((sum(e) for e in self.terms), default=0)

    def _check(self, other):
        if self.signature != other.signature:
            raise SignatureMismatch(
                f"{self.signature!r} vs {other.signature!r}")
        if self.order != other.order:
            raise TruncationMismatch(
                f"truncation orders differ: {self.order} != {other.order}")

    # -- algebra --------------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, PolyObservable):
            return NotImplemented
        self._check(other)
        terms = dict(self.terms)
        for exp, c in other.terms.items():
            if exp in terms:
                terms[exp] = terms[exp] + c
            else:
                terms[exp] = c
        return PolyObservable(self.signature, terms, self.order,
                              self.tail_lost or other.tail_lost)

    def __sub__(self, other):
        if not isinstance(other, PolyObservable):
            return NotImplemented
        return self + (-other)

    def __neg__(self):
        return PolyObservable(
            self.signature, {e: -c for e, c in self.terms.items()}, self.order,
            self.tail_lost)

    def __mul__(self, other):
        """Pointwise (commutative) product."""
        if not isinstance(other, PolyObservable):
            return NotImplemented
        self._check(other)
        terms = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                c = c1 * c2
                if e in terms:
                    terms[e] = terms[e] + c
                else:
                    terms[e] = c
        return PolyObservable(self.signature, terms, self.order,
                              self.tail_lost or other.tail_lost)

    def scale(self, series):
        return PolyObservable(
            self.signature, {e: c * series for e, c in self.terms.items()},
            self.order, self.tail_lost or series.tail_lost)

    def scale_scalar(self, c):
        return PolyObservable(
            self.signature, {e: s.scalar_mul(c) for e, s in self.terms.items()},
            self.order, self.tail_lost)

    def __pow__(self, k):
        result = PolyObservable.one(self.signature, self.order)
        for _ in range(k):
            result = result * self
        return result

    def derivative(self, index, times=1):
        """Exact partial derivative with respect to variable ``index``."""
        terms = self.terms
        for _ in range(times):
            new = {}
            for exp, c in terms.items():
                k = exp[index]
                if k == 0:
                    continue
                e = list(exp)
                e[index] = k - 1
                new[tuple(e)] = c.scalar_mul(k)
            terms = new
        return PolyObservable(self.signature, terms, self.order, self.tail_lost)

    def reduce_order(self, order):
        return PolyObservable(
            self.signature,
            {e: c.reduce_order(order) for e, c in self.terms.items()}, order,
            self.tail_lost)

    def lambda_coefficient(self, r):
        """The polynomial coefficient of l^r, as an observable with constant
        (lambda-free) coefficients at the same truncation order."""
        terms = {}
        for exp, c in self.terms.items():
            cr = c.coeffs[r]
            if cr:
                terms[exp] = FormalSeries.from_scalar(cr, self.order)
        return PolyObservable(self.signature, terms, self.order)


# -- operations ----------------------------------------------------------------


def involution(f: PolyObservable) -> PolyObservable:
    """Complex conjugation f -> conj(f).

    On the real chart q, p are fixed and only coefficients conjugate; on the
    holomorphic chart z and zb swap as well.  Involutive in both cases.
    """
    sig = f.signature
    if sig.chart in ("real", "wave", "fock"):
        return PolyObservable(
            sig, {e: c.conjugate() for e, c in f.terms.items()}, f.order,
            f.tail_lost)
    n = sig.n
    terms = {}
    for exp, c in f.terms.items():
        swapped = exp[n:] + exp[:n]
        terms[swapped] = c.conjugate()
    return PolyObservable(sig, terms, f.order, f.tail_lost)


def poisson_bracket(f: PolyObservable, g: PolyObservable) -> PolyObservable:
    """Canonical bracket sum_k (df/dq^k dg/dp_k - df/dp_k dg/dq^k)."""
    if f.signature != g.signature:
        raise SignatureMismatch(f"{f.signature!r} vs {g.signature!r}")
    if f.signature.chart != "real":
        raise SignatureMismatch("Poisson bracket lives on the real chart")
    n = f.signature.n
    out = PolyObservable.zero(f.signature, f.order)
    for k in range(n):
        out = out + f.derivative(k) * g.derivative(n + k)
        out = out - f.derivative(n + k) * g.derivative(k)
    return out


def to_holomorphic(f: PolyObservable) -> PolyObservable:
    """Substitute q = (z + zb)/2, p = (z - zb)/(2i) into a real-chart observable."""
    sig = f.signature
    if sig.chart != "real":
        raise SignatureMismatch("expected a real-chart observable")
    n = sig.n
    hsig = PhaseSpaceSignature(n, "holo")
    half = GaussianRational(Fraction(1, 2))
    minus_half_i = GaussianRational(0, Fraction(-1, 2))
    # q_k = (z_k + zb_k)/2, p_k = (z_k - zb_k)/(2i) = -i/2 z_k + i/2 zb_k
    out = PolyObservable.zero(hsig, f.order)
    z = [PolyObservable.variable(hsig, k, f.order) for k in range(n)]
    zb = [PolyObservable.variable(hsig, n + k, f.order) for k in range(n)]
    qs = [(z[k] + zb[k]).scale_scalar(half) for k in range(n)]
    ps = [(z[k] - zb[k]).scale_scalar(minus_half_i) for k in range(n)]
    for exp, c in f.terms.items():
        term = PolyObservable.constant(hsig, c)
        for k in range(n):
            for _ in range(exp[k]):
                term = term * qs[k]
            for _ in range(exp[n + k]):
                term = term * ps[k]
        out = out + term
    return out


def to_real(f: PolyObservable) -> PolyObservable:
    """Substitute z = q + ip, zb = q - ip into a holomorphic-chart observable."""
    sig = f.signature
    if sig.chart != "holo":
        raise SignatureMismatch("expected a holomorphic-chart observable")
    n = sig.n
    rsig = PhaseSpaceSignature(n, "real")
    i_one = GaussianRational(0, 1)
    out = PolyObservable.zero(rsig, f.order)
    q = [PolyObservable.variable(rsig, k, f.order) for k in range(n)]
    p = [PolyObservable.variable(rsig, n + k, f.order) for k in range(n)]
    zs = [q[k] + p[k].scale_scalar(i_one) for k in range(n)]
    zbs = [q[k] - p[k].scale_scalar(i_one) for k in range(n)]
    for exp, c in f.terms.items():
        term = PolyObservable.constant(rsig, c)
        for k in range(n):
            for _ in range(exp[k]):
                term = term * zs[k]
            for _ in range(exp[n + k]):
                term = term * zbs[k]
        out = out + term
    return out


def eval_at_point(f: PolyObservable, point) -> FormalSeries:
    """Evaluate at a point with GaussianRational coordinates."""
    w = f.signature.width
    if len(point) != w:
        raise DimensionMismatch(f"point of length {len(point)}, expected {w}")
    point = [c if isinstance(c, GaussianRational) else GaussianRational(c)
             for c in point]
    total = FormalSeries.zero(f.order)
    for exp, c in f.terms.items():
        v = GR_ONE
        for x, e in zip(point, exp):
            for _ in range(e):
                v = v * x
        total = total + c.scalar_mul(v)
    if f.tail_lost and not total.tail_lost:
        total = FormalSeries(total.coeffs, total.order, True)
    return total


def monomials_up_to(signature, degree, order=None):
    """All monomial observables of total degree <= degree, in graded-lex order."""
    w = signature.width
    exps = []
    for d in range(degree + 1):
        batch = []

        def rec_deg(prefix, remaining, slots):
            if slots == 1:
                batch.append(tuple(prefix + [remaining]))
                return
            for e in range(remaining + 1):
                rec_deg(prefix + [e], remaining - e, slots - 1)

        rec_deg([], d, w)
        exps.extend(sorted(batch, reverse=True))
    return [PolyObservable.monomial(signature, e, order) for e in exps]
