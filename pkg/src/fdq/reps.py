"""Representations: Bargmann-Fock and Schroedinger operators, a concrete GNS
builder for matrix algebras over truncated series, uniqueness and commutant
computations, and the classical-limit functor on pre-Hilbert data.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial

from .diffops import DiffOperator
from .errors import NotCyclic, PositivityRefuted, SignatureMismatch
from .matrices import MatrixStarAlgebra, SeriesMatrix, echelon, nullspace
from .observables import PhaseSpaceSignature, PolyObservable
from .series import FormalSeries, GaussianRational, Sign
from .star import apply_equiv, op_n

# -- Bargmann-Fock ----------------------------------------------------------------


def fock_signature(n):
    return PhaseSpaceSignature(n, "fock")


def wickrep(f: PolyObservable) -> DiffOperator:
    """Normal-ordered operator of a holomorphic observable on Fock vectors:
    the monomial z^a zb^b becomes (2l)^|a| yb^b d^a/dyb^a."""
    sig = f.signature
    if sig.chart != "holo":
        raise SignatureMismatch("wickrep expects a holomorphic observable")
    n = sig.n
    fsig = fock_signature(n)
    K = f.order
    terms = {}
    for exp, c in f.terms.items():
        a, b = exp[:n], exp[n:]
        coeff = c.scalar_mul(2 ** sum(a)).shift(sum(a)) if sum(a) else c
        poly = PolyObservable.monomial(fsig, b, K, coeff)
        if a in terms:
            terms[a] = terms[a] + poly
        else:
            terms[a] = poly
    return DiffOperator(fsig, terms, K)


def fock_inner(phi: PolyObservable, psi: PolyObservable) -> FormalSeries:
    """<yb^a, yb^b> = delta_ab (2l)^|a| a!, extended sesquilinearly."""
    if phi.signature != psi.signature:
        raise SignatureMismatch("Fock vectors live on one signature")
    if phi.signature.chart != "fock":
        raise SignatureMismatch("expected Fock vectors (yb variables)")
    if phi.order != psi.order:
        raise SignatureMismatch("Fock vectors share one truncation order")
    K = phi.order
    total = FormalSeries.zero(K)
    for exp, c in phi.terms.items():
        d = psi.terms.get(exp)
        if d is None:
            continue
        r = sum(exp)
        weight = Fraction(2 ** r)
        for e in exp:
            weight *= factorial(e)
        term = (c.conjugate() * d).scalar_mul(weight).shift(r)
        total = total + term
    if (phi.tail_lost or psi.tail_lost) and not total.tail_lost:
        total = FormalSeries(total.coeffs, K, True)
    return total


# -- Schroedinger -----------------------------------------------------------------


def wave_signature(n):
    return PhaseSpaceSignature(n, "wave")


def _std_operator(f: PolyObservable) -> DiffOperator:
    """Standard-ordered symbol calculus: q^a p^b -> (-il)^|b| q^a d^b/dq^b."""
    sig = f.signature
    n = sig.n
    wsig = wave_signature(n)
    K = f.order
    # Powers of -i cycle with period four.
    minus_i_pow = (GaussianRational(1), GaussianRational(0, -1),
                   GaussianRational(-1), GaussianRational(0, 1))
    terms = {}
    for exp, c in f.terms.items():
        a, b = exp[:n], exp[n:]
        r = sum(b)
        coeff = c
        if r:
            coeff = c.scalar_mul(minus_i_pow[r % 4]).shift(r)
        poly = PolyObservable.monomial(wsig, a, K, coeff)
        if b in terms:
            terms[b] = terms[b] + poly
        else:
            terms[b] = poly
    return DiffOperator(wsig, terms, K)


def schroedinger_rep(kind: str, f: PolyObservable) -> DiffOperator:
    """Wave-function operator of a real-chart observable.

    ``std`` evaluates the symbol with momenta ordered to the right;
    ``weyl`` applies the ordering operator N first, which yields the totally
    symmetrized rule.
    """
    if f.signature.chart != "real":
        raise SignatureMismatch("schroedinger_rep expects a real-chart "
                                "observable")
    if kind == "std":
        return _std_operator(f)
    if kind == "weyl":
        return _std_operator(apply_equiv(op_n(f.signature.n, f.order), f))
    raise ValueError(f"unknown ordering kind {kind!r}")


# -- matrix functionals and the GNS construction ------------------------------------


class MatrixFunctional:
    """omega(a) = sum_ij W_ij a_ij, a lambda-linear functional on M_m."""

    __slots__ = ("weights",)

    def __init__(self, weights: SeriesMatrix):
        self.weights = weights

    def __call__(self, a: SeriesMatrix) -> FormalSeries:
        total = FormalSeries.zero(a.order)
        for i in range(a.nrows):
            for j in range(a.ncols):
                w = self.weights.rows[i][j]
                if w.is_zero() and not w.tail_lost:
                    continue
                total = total + w * a.rows[i][j]
        return total

    def classical_limit(self):
        return MatrixFunctional(self.weights.classical_limit())

    def __eq__(self, other):
        if not isinstance(other, MatrixFunctional):
            return NotImplemented
        return self.weights == other.weights

    def __repr__(self):
        return f"<matrix functional {self.weights!r}>"


def matrix_positivity_scan(algebra: MatrixStarAlgebra, omega) -> list:
    """omega(b* x b) over matrix units and two-term unit combinations.

    Returns the list of negative/imaginary witnesses (empty when the scan
    passes).
    """
    units = (GaussianRational(1), GaussianRational(-1), GaussianRational(0, 1),
             GaussianRational(0, -1))
    basis = algebra.basis()
    labels = algebra.basis_labels()
    samples = [(labels[t], b) for t, b in enumerate(basis)]
    for s in range(len(basis)):
        for t in range(s + 1, len(basis)):
            for u in units:
                samples.append((f"{labels[s]}+({u.re}+{u.im}i){labels[t]}",
                                basis[s] + basis[t].scale_scalar(u)))
    witnesses = []
    for label, b in samples:
        val = omega(algebra.product(algebra.involution(b), b))
        if not all(c.is_real() for c in val.coeffs):
            witnesses.append((label, val))
        elif val.sign() is Sign.NEGATIVE:
            witnesses.append((label, val))
    return witnesses


class GNSResult:
    """Quotient data of the GNS construction over a matrix star-algebra.

    * ``basis_indices``: positions (into the algebra basis) of the chosen
      quotient representatives,
    * ``gram``: their inner products omega(b_s* x b_t),
    * ``pi``: representation matrices of the requested generators,
    * ``cyclic``: coordinates of the class of the unit.
    """

    def __init__(self, algebra, omega, basis_indices, kernel, gram, generators,
                 pi, cyclic):
        self.algebra = algebra
        self.omega = omega
        self.basis_indices = basis_indices
        self.kernel = kernel
        self.gram = gram
        self.generators = generators
        self.pi = pi
        self.cyclic = cyclic

    @property
    def dimension(self):
        return len(self.basis_indices)

    def basis_labels(self):
        labels = self.algebra.basis_labels()
        return [labels[t] for t in self.basis_indices]

    def reduce_coords(self, coords):
        """Quotient coordinates of an algebra element given by full basis
        coordinates, via the normalized kernel vectors."""
        out = [coords[t] for t in self.basis_indices]
        for (f, vec) in self.kernel:
            cf = coords[f]
            if cf.is_zero() and not cf.tail_lost:
                continue
            for s, t in enumerate(self.basis_indices):
                out[s] = out[s] - cf * vec[t]
        return out

    def represent(self, element: SeriesMatrix) -> SeriesMatrix:
        """pi(element) on the quotient basis."""
        cols = []
        for t in self.basis_indices:
            b = self.algebra.basis()[t]
            prod = self.algebra.product(element, b)
            cols.append(self.reduce_coords(self.algebra.to_coords(prod)))
        return SeriesMatrix([[cols[j][i] for j in range(len(cols))]
                             for i in range(len(cols))], self.algebra.order)

    def vacuum_expectation(self, element: SeriesMatrix) -> FormalSeries:
        """<psi_1, pi(element) psi_1> with the quotient Gram."""
        mat = self.represent(element)
        v = _mat_vec(mat, self.cyclic)
        return _inner(self.gram, self.cyclic, v)

    def __eq__(self, other):
        if not isinstance(other, GNSResult):
            return NotImplemented
        return (self.algebra == other.algebra and self.omega == other.omega
                and self.basis_indices == other.basis_indices
                and self.kernel == other.kernel and self.gram == other.gram
                and self.generators == other.generators
                and self.pi == other.pi and self.cyclic == other.cyclic)

    def to_json(self):
        from .exprio import series_to_json

        def mat(m):
            return [[series_to_json(e) for e in row] for row in m.rows]

        return {
            "schema_version": 1,
            "type": "gns_result",
            "m": self.algebra.m,
            "K": self.algebra.order,
            "deform": self.algebra.deform.to_json()
                      if self.algebra.deform is not None else None,
            "omega": mat(self.omega.weights),
            "basis_indices": list(self.basis_indices),
            "basis": self.basis_labels(),
            "kernel": [{"free": f, "vector": [series_to_json(c) for c in v]}
                       for f, v in self.kernel],
            "gram": mat(self.gram),
            "generators": [mat(g) for g in self.generators],
            "pi": [mat(p) for p in self.pi],
            "cyclic": [series_to_json(c) for c in self.cyclic],
        }


def _mat_vec(mat: SeriesMatrix, vec):
    return [sum((mat.rows[i][j] * vec[j] for j in range(mat.ncols)),
                FormalSeries.zero(mat.order)) for i in range(mat.nrows)]


def _inner(gram: SeriesMatrix, x, y):
    """<x, y> = sum conj(x_i) G_ij y_j."""
    total = FormalSeries.zero(gram.order)
    for i in range(gram.nrows):
        xi = x[i]
        if xi.is_zero() and not xi.tail_lost:
            continue
        for j in range(gram.ncols):
            total = total + (xi.conjugate() * gram.rows[i][j]) * y[j]
    return total


def gns_build(algebra: MatrixStarAlgebra, omega, generators=None) -> GNSResult:
    """GNS data of a positive functional on a (possibly deformed) matrix
    algebra over truncated series.

    The Gram matrix on the full matrix-unit basis is reduced by
    valuation-pivoted elimination; its certified kernel is the ideal of
    null vectors, and the surviving pivot columns become the quotient basis.
    """
    witnesses = matrix_positivity_scan(algebra, omega)
    if witnesses:
        label, value = witnesses[0]
        from .exprio import series_text
        raise PositivityRefuted(
            f"omega({label}* x {label}) = {series_text(value)} is negative")
    basis = algebra.basis()
    n = len(basis)
    gram_full = SeriesMatrix(
        [[omega(algebra.product(algebra.involution(basis[s]), basis[t]))
          for t in range(n)] for s in range(n)], algebra.order)
    kern = nullspace(gram_full)
    ech = echelon(gram_full)
    pivot_cols = sorted(pj for _, pj in ech.pivots)
    # Kernel vectors carry a 1 at their free column, so every class reduces
    # onto the pivot representatives without divisions.
    free_iter = [j for j in range(n) if j not in pivot_cols]
    kernel = list(zip(free_iter, kern))
    gram = SeriesMatrix([[gram_full.rows[s][t] for t in pivot_cols]
                         for s in pivot_cols], algebra.order)
    if generators is None:
        generators = basis
    result = GNSResult(algebra, omega, pivot_cols, kernel, gram,
                       list(generators), [], None)
    result.pi = [result.represent(g) for g in generators]
    result.cyclic = result.reduce_coords(algebra.to_coords(algebra.unit()))
    return result


def gns_result_from_json(obj, pointer=""):
    from .errors import SchemaError
    from .exprio import series_from_json
    from .matrices import matrix_from_json

    def need(key):
        if key not in obj:
            raise SchemaError(f"gns_result needs {key}", pointer)
        return obj[key]

    def mat(rows, where):
        return matrix_from_json({"rows": rows}, f"{pointer}/{where}")

    deform = obj.get("deform")
    algebra = MatrixStarAlgebra(
        need("m"), need("K"),
        deform=matrix_from_json(deform, f"{pointer}/deform")
               if deform else None)
    omega = MatrixFunctional(mat(need("omega"), "omega"))
    kernel = [(item["free"],
               [series_from_json(c, f"{pointer}/kernel/{k}/vector/{i}")
                for i, c in enumerate(item["vector"])])
              for k, item in enumerate(need("kernel"))]
    return GNSResult(
        algebra, omega, list(need("basis_indices")), kernel,
        mat(need("gram"), "gram"),
        [mat(g, f"generators/{i}") for i, g in enumerate(need("generators"))],
        [mat(p, f"pi/{i}") for i, p in enumerate(need("pi"))],
        [series_from_json(c, f"{pointer}/cyclic/{i}")
         for i, c in enumerate(need("cyclic"))])


class CandidateRep:
    """A concrete cyclic *-representation offered for comparison with a GNS
    result: a representation map, the module Gram, and a cyclic vector."""

    def __init__(self, pi, gram: SeriesMatrix, cyclic):
        self.pi = pi            # callable: algebra element -> SeriesMatrix
        self.gram = gram
        self.cyclic = list(cyclic)


def gns_uniqueness_check(result: GNSResult, candidate: CandidateRep) -> bool:
    """Decide unitary equivalence with the canonical intertwiner
    U: psi_b -> pi(b) Omega.

    Checks, in order: cyclicity of Omega (error when it fails), isometry of U
    (Gram transport), intertwining with the generators, and recovery of omega
    as the vacuum expectation value.
    """
    algebra = result.algebra
    d = candidate.gram.nrows
    # Cyclicity: pi(b) Omega over the full algebra basis must span.
    span_cols = []
    for b in algebra.basis():
        span_cols.append(_mat_vec(candidate.pi(b), candidate.cyclic))
    span = SeriesMatrix([[span_cols[j][i] for j in range(len(span_cols))]
                         for i in range(d)], algebra.order)
    if len(echelon(span).pivots) < d:
        raise NotCyclic("candidate vector does not generate the module")

    basis = algebra.basis()
    u_cols = [_mat_vec(candidate.pi(basis[t]), candidate.cyclic)
              for t in result.basis_indices]
    U = SeriesMatrix([[u_cols[j][i] for j in range(len(u_cols))]
                      for i in range(d)], algebra.order)
    if U.adjoint() @ candidate.gram @ U != result.gram:
        return False
    for g, pi_mat in zip(result.generators, result.pi):
        if candidate.pi(g) @ U != U @ pi_mat:
            return False
    for b in basis:
        expected = result.omega(b)
        got = _inner(candidate.gram, candidate.cyclic,
                     _mat_vec(candidate.pi(b), candidate.cyclic))
        if expected != got:
            return False
    return True


# -- commutant -----------------------------------------------------------------------


def commutant(rep_matrices, d=None, order=None):
    """Basis of {X : [pi(a_i), X] = 0} over the series ring.

    The linear system is solved by valuation-pivoted elimination; the basis
    matrices are returned in a deterministic order.
    """
    if not rep_matrices:
        raise ValueError("need at least one representation matrix")
    d = d or rep_matrices[0].nrows
    K = order or rep_matrices[0].order
    zero = FormalSeries.zero(K)
    rows = []
    for a in rep_matrices:
        for i in range(d):
            for j in range(d):
                # entry (i,j) of AX - XA as a linear form in X_kl
                row = [zero] * (d * d)
                for k in range(d):
                    row[k * d + j] = row[k * d + j] + a.rows[i][k]
                    row[i * d + k] = row[i * d + k] - a.rows[k][j]
                rows.append(row)
    system = SeriesMatrix(rows, K)
    basis = []
    for vec in nullspace(system):
        basis.append(SeriesMatrix([[vec[i * d + j] for j in range(d)]
                                   for i in range(d)], K))
    return basis


# -- classical limit -------------------------------------------------------------------


class ClassicalLimit:
    """Quotient of a pre-Hilbert module by the radical of the Gram at l = 0,
    with the induced operators."""

    def __init__(self, kept_indices, kernel, gram0, matrices0):
        self.kept_indices = kept_indices
        self.kernel = kernel
        self.gram0 = gram0
        self.matrices0 = matrices0

    @property
    def dimension(self):
        return len(self.kept_indices)

    def reduce_vector(self, vec0):
        """Classical coordinates of a vector given at l = 0."""
        out = [vec0[t] for t in self.kept_indices]
        for (f, kvec) in self.kernel:
            cf = vec0[f]
            if cf.is_zero():
                continue
            for s, t in enumerate(self.kept_indices):
                out[s] = out[s] - cf * kvec[t]
        return out


def classical_limit_rep(gram: SeriesMatrix, rep_matrices) -> ClassicalLimit:
    """Evaluate the Gram at l = 0, quotient by its radical, and induce the
    operators; functorial in compositions and adjoints."""
    g0 = gram.classical_limit()
    d = g0.nrows
    kern = nullspace(g0)
    ech = echelon(g0)
    pivot_cols = sorted(pj for _, pj in ech.pivots)
    free_cols = [j for j in range(d) if j not in pivot_cols]
    kernel = list(zip(free_cols, kern))
    if not pivot_cols:
        return ClassicalLimit([], kernel, None,
                              [None for _ in rep_matrices])
    gram0 = SeriesMatrix([[g0.rows[s][t] for t in pivot_cols]
                          for s in pivot_cols], 1)
    limit = ClassicalLimit(pivot_cols, kernel, gram0, [])
    mats = []
    for a in rep_matrices:
        a0 = a.classical_limit()
        cols = [limit.reduce_vector([a0.rows[i][t] for i in range(d)])
                for t in pivot_cols]
        mats.append(SeriesMatrix(
            [[cols[j][i] for j in range(len(cols))]
             for i in range(len(cols))], 1))
    limit.matrices0 = mats
    return limit
