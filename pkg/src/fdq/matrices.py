"""Matrices over the truncated series ring and valuation-pivoted elimination.

Rank decisions over C[[l]]/l^K must be precision-honest: a stored-zero entry
counts as zero only when no computation lost a nonzero tail (``is_exact_zero``).
Elimination therefore raises PrecisionExhausted instead of guessing whenever
the remaining block is zero only up to the truncation order.
"""

from __future__ import annotations

from .errors import (NotUnit, PrecisionExhausted, ShapeMismatch,
                     TruncationMismatch)
from .series import DEFAULT_ORDER, FormalSeries, GaussianRational


class SeriesMatrix:
    """Immutable rectangular matrix of FormalSeries sharing one order."""

    __slots__ = ("rows", "nrows", "ncols", "order")

    def __init__(self, rows, order=None):
        rows = tuple(tuple(r) for r in rows)
        if not rows or not rows[0]:
            raise ShapeMismatch("matrix needs at least one row and column")
        ncols = len(rows[0])
        K = order
        for r in rows:
            if len(r) != ncols:
                raise ShapeMismatch("ragged rows")
            for e in r:
                if K is None:
                    K = e.order
                elif e.order != K:
                    raise TruncationMismatch("entries share one order")
        self.rows = rows
        self.nrows = len(rows)
        self.ncols = ncols
        self.order = K

    # -- constructors ----------------------------------------------------------

    @classmethod
    def zero(cls, nrows, ncols, order=None):
        K = order or DEFAULT_ORDER
        z = FormalSeries.zero(K)
        return cls([[z] * ncols for _ in range(nrows)], K)

    @classmethod
    def identity(cls, n, order=None):
        K = order or DEFAULT_ORDER
        z, one = FormalSeries.zero(K), FormalSeries.one(K)
        return cls([[one if i == j else z for j in range(n)]
                    for i in range(n)], K)

    @classmethod
    def from_scalar_rows(cls, rows, order=None):
        """Build from ints/Fractions/GaussianRationals."""
        K = order or DEFAULT_ORDER
        return cls([[FormalSeries.from_scalar(
            v if isinstance(v, GaussianRational) else GaussianRational(v), K)
            for v in row] for row in rows], K)

    @classmethod
    def unit(cls, n, i, j, order=None):
        """Matrix unit E_ij (1-based would be confusing; i, j are 0-based)."""
        K = order or DEFAULT_ORDER
        z, one = FormalSeries.zero(K), FormalSeries.one(K)
        return cls([[one if (r, c) == (i, j) else z for c in range(n)]
                    for r in range(n)], K)

    # -- basics ------------------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, SeriesMatrix):
            return NotImplemented
        return self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __repr__(self):
        from .exprio import series_text
        body = "; ".join(", ".join(series_text(e) for e in r)
                         for r in self.rows)
        return f"<matrix {self.nrows}x{self.ncols} [{body}]>"

    def entry(self, i, j):
        return self.rows[i][j]

    def _check(self, other, need_same_shape=True):
        if self.order != other.order:
            raise TruncationMismatch("matrix orders differ")
        if need_same_shape and (self.nrows, self.ncols) != (other.nrows,
                                                            other.ncols):
            raise ShapeMismatch("matrix shapes differ")

    def __add__(self, other):
        self._check(other)
        return SeriesMatrix(
            [[a + b for a, b in zip(r1, r2)]
             for r1, r2 in zip(self.rows, other.rows)], self.order)

    def __sub__(self, other):
        self._check(other)
        return SeriesMatrix(
            [[a - b for a, b in zip(r1, r2)]
             for r1, r2 in zip(self.rows, other.rows)], self.order)

    def __neg__(self):
        return SeriesMatrix([[-a for a in r] for r in self.rows], self.order)

    def __matmul__(self, other):
        self._check(other, need_same_shape=False)
        if self.ncols != other.nrows:
            raise ShapeMismatch(
                f"cannot multiply {self.nrows}x{self.ncols} by "
                f"{other.nrows}x{other.ncols}")
        K = self.order
        out = []
        for i in range(self.nrows):
            row = []
            for j in range(other.ncols):
                acc = FormalSeries.zero(K)
                for k in range(self.ncols):
                    a = self.rows[i][k]
                    if a.is_zero() and not a.tail_lost:
                        continue
                    acc = acc + a * other.rows[k][j]
                row.append(acc)
            out.append(row)
        return SeriesMatrix(out, K)

    def scale(self, series):
        return SeriesMatrix([[a * series for a in r] for r in self.rows],
                            self.order)

    def scale_scalar(self, c):
        return SeriesMatrix([[a.scalar_mul(c) for a in r] for r in self.rows],
                            self.order)

    def transpose(self):
        return SeriesMatrix(
            [[self.rows[i][j] for i in range(self.nrows)]
             for j in range(self.ncols)], self.order)

    def adjoint(self):
        """Conjugate transpose."""
        return SeriesMatrix(
            [[self.rows[i][j].conjugate() for i in range(self.nrows)]
             for j in range(self.ncols)], self.order)

    def is_hermitian(self):
        return self.nrows == self.ncols and self == self.adjoint()

    def is_zero(self):
        return all(e.is_zero() for r in self.rows for e in r)

    def trace(self):
        acc = FormalSeries.zero(self.order)
        for i in range(min(self.nrows, self.ncols)):
            acc = acc + self.rows[i][i]
        return acc

    def classical_limit(self):
        """Matrix of lambda^0 coefficients (as order-1 series)."""
        return SeriesMatrix(
            [[FormalSeries.from_scalar(e.classical_limit(), 1) for e in r]
             for r in self.rows], 1)

    def reduce_order(self, order):
        return SeriesMatrix([[e.reduce_order(order) for e in r]
                             for r in self.rows], order)

    def to_json(self):
        from .exprio import series_to_json
        return {
            "schema_version": 1,
            "type": "matrix",
            "rows": [[series_to_json(e) for e in r] for r in self.rows],
        }


def matrix_from_json(obj, pointer=""):
    from .exprio import SchemaError, series_from_json
    if not isinstance(obj, dict) or "rows" not in obj:
        raise SchemaError("expected matrix object with rows", pointer)
    order = None
    rows = []
    for i, row in enumerate(obj["rows"]):
        out = []
        for j, e in enumerate(row):
            s = series_from_json(e, f"{pointer}/rows/{i}/{j}", order)
            order = s.order
            out.append(s)
        rows.append(out)
    return SeriesMatrix(rows, order)


# -- valuation-pivoted elimination ------------------------------------------------


def _divide(a: FormalSeries, b: FormalSeries) -> FormalSeries:
    """a / b for val(a) >= val(b); flags the result when the pivot valuation
    shifts reliable coefficients out of range."""
    vb = b.valuation()
    if vb is None:
        raise ZeroDivisionError("division by a zero-up-to-K series")
    if vb == 0:
        return a * b.invert()
    va = a.valuation()
    if va is None:
        if not a.is_exact_zero():
            raise PrecisionExhausted(
                "dividend is zero only up to the truncation order")
        return a
    if va < vb:
        raise ValueError("dividend valuation below divisor valuation")
    K = a.order
    a_shift = FormalSeries(a.coeffs[vb:], K, True)
    b_shift = FormalSeries(b.coeffs[vb:], K, True)
    return a_shift * b_shift.invert()


class Echelon:
    """Row-echelon data from elimination with valuation-minimal pivoting.

    ``pivots`` is in chronological (nondecreasing valuation) order; each pivot
    row has exact zeros in all earlier pivot columns.
    """

    __slots__ = ("rows", "pivots", "free_cols", "ncols", "order")

    def __init__(self, rows, pivots, free_cols, ncols, order):
        self.rows = rows
        self.pivots = pivots          # chronological list of (row, col)
        self.free_cols = free_cols
        self.ncols = ncols
        self.order = order


def _min_valuation_pivot(rows, used_rows, used_cols, ncols):
    best = None
    for i, row in enumerate(rows):
        if i in used_rows:
            continue
        for j in range(ncols):
            if j in used_cols:
                continue
            v = row[j].valuation()
            if v is None:
                continue
            if best is None or v < best[0]:
                best = (v, i, j)
    return best


def _echelonize(rows, ncols, certify_rank=True):
    """In-place row echelon with global min-valuation pivots.

    Rows may be longer than ncols (augmented systems); pivots are only chosen
    among the first ncols columns.  When certify_rank is set, a remaining
    block that vanishes only up to the truncation order raises
    PrecisionExhausted instead of being declared zero.
    """
    pivots = []
    used_rows, used_cols = set(), set()
    while True:
        best = _min_valuation_pivot(rows, used_rows, used_cols, ncols)
        if best is None:
            if certify_rank:
                for i, row in enumerate(rows):
                    if i in used_rows:
                        continue
                    for j in range(ncols):
                        if j in used_cols:
                            continue
                        if not row[j].is_exact_zero():
                            raise PrecisionExhausted(
                                "pivot valuation reaches the truncation "
                                "order; rank not determined at this "
                                "truncation")
            return pivots
        _, pi, pj = best
        pivot = rows[pi][pj]
        for i, row in enumerate(rows):
            if i in used_rows or i == pi:
                continue
            e = row[pj]
            if e.is_zero() and not e.tail_lost:
                continue
            factor = _divide(e, pivot)
            rows[i] = [x - factor * y for x, y in zip(row, rows[pi])]
        used_rows.add(pi)
        used_cols.add(pj)
        pivots.append((pi, pj))


def echelon(mat: SeriesMatrix) -> Echelon:
    rows = [list(r) for r in mat.rows]
    pivots = _echelonize(rows, mat.ncols)
    used_cols = {pj for _, pj in pivots}
    free_cols = [j for j in range(mat.ncols) if j not in used_cols]
    return Echelon(rows, pivots, free_cols, mat.ncols, mat.order)


def nullspace(mat: SeriesMatrix):
    """Basis of the kernel over the series ring, one vector per free column,
    normalized to 1 at that column.

    Min-valuation pivoting guarantees the quotients stay in the ring: every
    entry of a pivot row at a column that was still available when the pivot
    was chosen has valuation at least the pivot's, and solved components have
    valuation >= 0 inductively.
    """
    ech = echelon(mat)
    K = mat.order
    basis = []
    for f in ech.free_cols:
        vec = [FormalSeries.zero(K)] * ech.ncols
        vec[f] = FormalSeries.one(K)
        # Pivot rows have zeros at earlier pivot columns, so solving in
        # reverse chronological order only consumes already-known components.
        for pi, pj in reversed(ech.pivots):
            row = ech.rows[pi]
            s = FormalSeries.zero(K)
            for c in range(ech.ncols):
                if c == pj:
                    continue
                e = row[c]
                if (e.is_zero() and not e.tail_lost) or \
                        (vec[c].is_zero() and not vec[c].tail_lost):
                    continue
                s = s + e * vec[c]
            if s.is_zero() and not s.tail_lost:
                continue
            vec[pj] = -_divide(s, row[pj])
        basis.append(vec)
    return basis


def solve_in_ring(mat: SeriesMatrix, rhs):
    """A particular solution x of mat @ x = rhs with in-ring entries, or None.

    Free variables are set to zero; valuation-minimal pivoting makes this
    decision correct over the series ring.  Raises PrecisionExhausted when
    the answer cannot be certified at this truncation.
    """
    if len(rhs) != mat.nrows:
        raise ShapeMismatch("rhs length does not match row count")
    K = mat.order
    ncols = mat.ncols
    rows = [list(r) + [rhs[i]] for i, r in enumerate(mat.rows)]
    pivots = _echelonize(rows, ncols, certify_rank=False)
    used_rows = {pi for pi, _ in pivots}
    for i, row in enumerate(rows):
        if i in used_rows:
            continue
        r = row[ncols]
        if r.is_zero():
            if not r.is_exact_zero():
                raise PrecisionExhausted(
                    "consistency of the system undecidable at this truncation")
            continue
        return None
    x = [FormalSeries.zero(K)] * ncols
    for pi, pj in reversed(pivots):
        row = rows[pi]
        s = row[ncols]
        for c in range(ncols):
            if c == pj:
                continue
            e = row[c]
            if (e.is_zero() and not e.tail_lost) or \
                    (x[c].is_zero() and not x[c].tail_lost):
                continue
            s = s - e * x[c]
        if s.is_zero() and not s.tail_lost:
            continue
        piv = row[pj]
        sv = s.valuation()
        if sv is None:
            raise PrecisionExhausted(
                "solution component undecidable at this truncation")
        if sv < piv.valuation():
            return None  # field solution exists but leaves the ring
        x[pj] = _divide(s, piv)
    return x


def rank_certified(mat: SeriesMatrix) -> int:
    return len(echelon(mat).pivots)


def series_matrix_inverse(m: SeriesMatrix) -> SeriesMatrix:
    """Inverse over the series ring; exists iff the lambda^0 matrix is
    invertible over Q(i)."""
    if m.nrows != m.ncols:
        raise ShapeMismatch("only square matrices invert")
    n = m.nrows
    K = m.order
    cols = []
    ident = SeriesMatrix.identity(n, K)
    for j in range(n):
        rhs = [ident.rows[i][j] for i in range(n)]
        x = solve_in_ring(m, rhs)
        if x is None:
            raise NotUnit("matrix is not invertible over the series ring")
        # An in-ring solution of M x = e_j with valuation-0 pivots required:
        cols.append(x)
    return SeriesMatrix([[cols[j][i] for j in range(n)] for i in range(n)], K)


# -- matrix star-algebras -----------------------------------------------------------


class MatrixStarAlgebra:
    """M_m over the truncated series ring, plain or deformed.

    The deformed family multiplies as a * b = ab + l a E b with a fixed
    matrix E; it is associative for every E (verified in the test-suite) and
    Hermitian exactly when E is.
    """

    def __init__(self, m, order=None, deform=None, name=None):
        self.m = m
        self.order = order or DEFAULT_ORDER
        if deform is not None:
            if deform.nrows != m or deform.ncols != m:
                raise ShapeMismatch("deformation matrix must be m x m")
            if deform.order != self.order:
                deform = deform.reduce_order(self.order) \
                    if deform.order > self.order else deform
            if deform.order != self.order:
                raise TruncationMismatch("deformation matrix order mismatch")
        self.deform = deform
        self.name = name or (f"M{m}" if deform is None else f"M{m}+lE")
        self._unit = None

    @property
    def dim(self):
        return self.m * self.m

    def unit(self):
        """The star-unit: the identity for the plain product, (1 + l E)^-1
        for the deformed family (u * a = u (1 + l E) a)."""
        if self._unit is None:
            ident = SeriesMatrix.identity(self.m, self.order)
            if self.deform is None:
                self._unit = ident
            else:
                t = ident + self.deform.scale(FormalSeries.lam(1, self.order))
                self._unit = series_matrix_inverse(t)
        return self._unit

    def basis(self):
        """Matrix units in row-major order."""
        return [SeriesMatrix.unit(self.m, i, j, self.order)
                for i in range(self.m) for j in range(self.m)]

    def basis_labels(self):
        return [f"E{i + 1}{j + 1}" for i in range(self.m)
                for j in range(self.m)]

    def product(self, a, b):
        plain = a @ b
        if self.deform is None:
            return plain
        corr = (a @ self.deform @ b).scale(FormalSeries.lam(1, self.order))
        return plain + corr

    def involution(self, a):
        return a.adjoint()

    def hermitian_product(self):
        return self.deform is None or self.deform.is_hermitian()

    def to_coords(self, a):
        """Row-major coordinates over the matrix-unit basis."""
        return [a.rows[i][j] for i in range(self.m) for j in range(self.m)]

    def from_coords(self, coords):
        m = self.m
        return SeriesMatrix([[coords[i * m + j] for j in range(m)]
                             for i in range(m)], self.order)

    def __eq__(self, other):
        if not isinstance(other, MatrixStarAlgebra):
            return NotImplemented
        return (self.m == other.m and self.order == other.order
                and self.deform == other.deform)

    def __repr__(self):
        return f"<algebra {self.name} K={self.order}>"

    def to_json(self):
        payload = {
            "schema_version": 1,
            "type": "matrix_algebra",
            "m": self.m,
            "K": self.order,
            "deform": self.deform.to_json() if self.deform is not None
                      else None,
        }
        return payload


def one_plus_adjoint_times_self_invertible(a: SeriesMatrix) -> bool:
    """Condition check: 1 + A*A is invertible over the series ring.

    Holds for every A over this base: the leading term 1 + A_0*A_0 is a
    positive-definite complex matrix.
    """
    m = SeriesMatrix.identity(a.ncols, a.order) + (a.adjoint() @ a)
    try:
        series_matrix_inverse(m)
        return True
    except NotUnit:
        return False
