"""Pre-Hilbert modules over truncated-series algebras: Gram positivity,
rank-one operators, Rieffel induction, deformed projections, fullness, and
the characteristic-class equivalence decision.
"""

from __future__ import annotations

import enum
from fractions import Fraction

from .errors import (AlgebraMismatch, DefectNotSmall, NotHermitian,
                     PrecisionExhausted, RankMismatch, ShapeMismatch)
from .matrices import (MatrixStarAlgebra, SeriesMatrix, echelon, nullspace,
                       solve_in_ring)
from .reps import ClassicalLimit, classical_limit_rep
from .series import FormalSeries, GaussianRational, Sign

# -- Gram positivity ----------------------------------------------------------------


class GramVerdict(enum.Enum):
    POSITIVE_DEFINITE = "positive-definite"
    POSITIVE_SEMIDEFINITE = "positive-semidefinite"
    NOT_PSD = "not-psd"


def _determinant(mat: SeriesMatrix, rows, cols):
    """Exact determinant of the submatrix (cofactor expansion; d <= 6)."""
    if len(rows) == 1:
        return mat.rows[rows[0]][cols[0]]
    total = FormalSeries.zero(mat.order)
    r0 = rows[0]
    rest = rows[1:]
    for k, c in enumerate(cols):
        e = mat.rows[r0][c]
        if e.is_zero() and not e.tail_lost:
            continue
        sub = _determinant(mat, rest, cols[:k] + cols[k + 1:])
        term = e * sub
        total = total + term if k % 2 == 0 else total - term
    return total


def gram_psd_check(h: SeriesMatrix) -> GramVerdict:
    """Positivity over the ordered series field by principal-minor signs.

    Positive semidefinite iff every principal minor has sign in {positive,
    zero-up-to-K}; positive definite iff all leading principal minors are
    positive.  Cost is exponential in the size, fine for d <= 6.
    """
    if not h.is_hermitian():
        raise NotHermitian("Gram positivity needs a Hermitian matrix")
    d = h.nrows
    pd = True
    for mask in range(1, 1 << d):
        idx = [i for i in range(d) if mask & (1 << i)]
        det = _determinant(h, idx, idx)
        verdict = det.sign()
        if verdict is Sign.NEGATIVE:
            return GramVerdict.NOT_PSD
        leading = idx == list(range(len(idx)))
        if leading and verdict is not Sign.POSITIVE:
            pd = False
    return GramVerdict.POSITIVE_DEFINITE if pd \
        else GramVerdict.POSITIVE_SEMIDEFINITE


# -- pre-Hilbert modules ---------------------------------------------------------------


class PreHilbertModule:
    """Free right module over a matrix star-algebra with algebra-valued Gram.

    ``gram[i][j]`` is an algebra element <e_i, e_j>; Hermitian as a block
    matrix.  An optional left action of another algebra is a callable sending
    an algebra element to the rank x rank block matrix of its action.
    """

    def __init__(self, base: MatrixStarAlgebra, rank, gram,
                 left_algebra=None, left_action=None):
        if rank < 0:
            raise RankMismatch("rank must be nonnegative")
        if len(gram) != rank or any(len(row) != rank for row in gram):
            raise ShapeMismatch("Gram must be rank x rank")
        for i in range(rank):
            for j in range(rank):
                if gram[i][j] != base.involution(gram[j][i]):
                    raise NotHermitian("module Gram must be Hermitian")
        self.base = base
        self.rank = rank
        self.gram = [list(row) for row in gram]
        self.left_algebra = left_algebra
        self.left_action = left_action

    @classmethod
    def free(cls, base, rank, **kw):
        """The canonical module base^rank with <x, y> = sum x_i* y_i."""
        unit, = [base.unit()]
        zero = SeriesMatrix.zero(base.m, base.m, base.order)
        gram = [[unit if i == j else zero for j in range(rank)]
                for i in range(rank)]
        return cls(base, rank, gram, **kw)

    @property
    def order(self):
        return self.base.order

    def inner(self, x, y):
        """<x, y> = sum_ij x_i* (x) G_ij (x) y_j, star products in the base."""
        if len(x) != self.rank or len(y) != self.rank:
            raise RankMismatch("coordinate length must equal the rank")
        alg = self.base
        total = SeriesMatrix.zero(alg.m, alg.m, alg.order)
        for i in range(self.rank):
            xi = alg.involution(x[i])
            for j in range(self.rank):
                total = total + alg.product(alg.product(xi, self.gram[i][j]),
                                            y[j])
        return total

    def basis_vector(self, i):
        alg = self.base
        zero = SeriesMatrix.zero(alg.m, alg.m, alg.order)
        return [alg.unit() if j == i else zero for j in range(self.rank)]

    def flatten_gram(self) -> SeriesMatrix:
        """The Gram as one scalar matrix of size rank*m."""
        if self.rank == 0:
            raise ShapeMismatch("rank-0 module has no Gram matrix")
        m = self.base.m
        K = self.order
        rows = []
        for i in range(self.rank):
            for r in range(m):
                row = []
                for j in range(self.rank):
                    for c in range(m):
                        row.append(self.gram[i][j].rows[r][c])
                rows.append(row)
        return SeriesMatrix(rows, K)

    def pair_gram(self, x, y) -> SeriesMatrix:
        """Flattened 2m x 2m Gram of the pair (x, y), for PSD sampling."""
        gxx, gxy = self.inner(x, x), self.inner(x, y)
        gyx, gyy = self.inner(y, x), self.inner(y, y)
        m = self.base.m
        rows = []
        for r in range(m):
            rows.append(list(gxx.rows[r]) + list(gxy.rows[r]))
        for r in range(m):
            rows.append(list(gyx.rows[r]) + list(gyy.rows[r]))
        return SeriesMatrix(rows, self.order)

    def __repr__(self):
        return (f"<module rank {self.rank} over {self.base.name} "
                f"K={self.order}>")

    def to_json(self):
        return {
            "schema_version": 1,
            "type": "module",
            "base": self.base.to_json(),
            "rank": self.rank,
            "gram": [[e.to_json() for e in row] for row in self.gram],
        }


class AdjointableOp:
    """Operator between free modules given by a block matrix over the base
    algebra, together with its adjoint block matrix."""

    def __init__(self, entries, adjoint_entries, base):
        self.entries = [list(r) for r in entries]
        self.adjoint_entries = [list(r) for r in adjoint_entries]
        self.base = base

    def apply(self, vec):
        alg = self.base
        out = []
        for i in range(len(self.entries)):
            acc = SeriesMatrix.zero(alg.m, alg.m, alg.order)
            for j, v in enumerate(vec):
                acc = acc + alg.product(self.entries[i][j], v)
            out.append(acc)
        return out

    def adjoint(self):
        return AdjointableOp(self.adjoint_entries, self.entries, self.base)

    def adjoint_law_holds(self, source: PreHilbertModule,
                          target: PreHilbertModule) -> bool:
        """<e_i, A e_j>_target == <A* e_i, e_j>_source on all basis pairs."""
        for i in range(target.rank):
            phi = target.basis_vector(i)
            for j in range(source.rank):
                psi = source.basis_vector(j)
                lhs = target.inner(phi, self.apply(psi))
                rhs = source.inner(self.adjoint().apply(phi), psi)
                if lhs != rhs:
                    return False
        return True

    def __eq__(self, other):
        if not isinstance(other, AdjointableOp):
            return NotImplemented
        return self.entries == other.entries


def rank_one(psi, phi, module: PreHilbertModule) -> AdjointableOp:
    """Theta_{psi,phi}: chi -> psi . <phi, chi>; its adjoint is Theta_{phi,psi}."""
    if len(psi) != module.rank or len(phi) != module.rank:
        raise RankMismatch("coordinate length must equal the rank")
    alg = module.base

    def build(u, v):
        # Theta_{u,v}[i][l] = u_i (x) (sum_k v_k* (x) G[k][l])
        rows = []
        for i in range(module.rank):
            row = []
            for l in range(module.rank):
                acc = SeriesMatrix.zero(alg.m, alg.m, alg.order)
                for k in range(module.rank):
                    acc = acc + alg.product(alg.involution(v[k]),
                                            module.gram[k][l])
                row.append(alg.product(u[i], acc))
            rows.append(row)
        return rows

    return AdjointableOp(build(psi, phi), build(phi, psi), alg)


# -- Rieffel induction ------------------------------------------------------------------


def _reduce_coords(coords, kernel, kept):
    out = [coords[t] for t in kept]
    for f, vec in kernel:
        cf = coords[f]
        if cf.is_zero() and not cf.tail_lost:
            continue
        for s, t in enumerate(kept):
            out[s] = out[s] - cf * vec[t]
    return out


def rieffel_tensor(F: PreHilbertModule, E: PreHilbertModule) -> PreHilbertModule:
    """Internal tensor product F (x)_B E with the degeneracy space removed.

    F is a module over B carrying an optional left action of C; E is a module
    over A carrying the left B-action.  The induced Gram on the product basis
    is <x_i (x) phi_p, x_j (x) phi_q> = <phi_p, <x_i, x_j>_B . phi_q>_E; the
    left C-action is transported through the B-coordinates.
    """
    if E.left_algebra is None or E.left_action is None:
        raise AlgebraMismatch("E must carry a left action of F's base algebra")
    if E.left_algebra != F.base:
        raise AlgebraMismatch("base of F must equal the left algebra of E")
    A = E.base
    if A.deform is not None:
        raise AlgebraMismatch(
            "induction over deformed matrix bases is not supported")
    dF, dE, mA = F.rank, E.rank, A.m
    K = A.order
    pairs = [(i, p) for i in range(dF) for p in range(dE)]

    # L[i][j] = action of <x_i, x_j>_B on E as a dE x dE block matrix over A.
    lact = [[E.left_action(F.gram[i][j]) for j in range(dF)]
            for i in range(dF)]
    ghat = {}
    for (i, p) in pairs:
        for (j, q) in pairs:
            acc = SeriesMatrix.zero(mA, mA, K)
            for r in range(dE):
                acc = acc + A.product(E.gram[p][r], lact[i][j][r][q])
            ghat[((i, p), (j, q))] = acc

    if dF * dE == 0:
        return PreHilbertModule(A, 0, [], left_algebra=F.left_algebra)

    # Degeneracy space at scalar level: unknowns (pair, algebra basis unit).
    abasis = A.basis()
    cols = [(pair, u) for pair in pairs for u in range(len(abasis))]
    rows = []
    for (ip) in pairs:
        for r in range(mA):
            for c in range(mA):
                row = []
                for (jq, u) in cols:
                    block = A.product(ghat[(ip, jq)], abasis[u])
                    row.append(block.rows[r][c])
                rows.append(row)
    system = SeriesMatrix(rows, K)
    kern = nullspace(system)

    if mA == 1:
        # Scalar base: full elimination on the pair-indexed Gram.
        flat = SeriesMatrix([[ghat[(ip, jq)].rows[0][0] for jq in pairs]
                             for ip in pairs], K)
        ech = echelon(flat)
        pivot_cols = sorted(pj for _, pj in ech.pivots)
        free_cols = [j for j in range(len(pairs)) if j not in pivot_cols]
        kernel = list(zip(free_cols, nullspace(flat)))
        kept_pairs = [pairs[t] for t in pivot_cols]
        gram = [[ghat[(pi, pj)] for pj in kept_pairs] for pi in kept_pairs]
        reducer = ("scalar", kernel, pivot_cols)
    else:
        # Matrix base: only block-supported degeneracy is presentable.
        dead = [jq for jq in pairs
                if all(ghat[(ip, jq)].is_zero()
                       and all(e.is_exact_zero()
                               for r2 in ghat[(ip, jq)].rows for e in r2)
                       for ip in pairs)]
        if len(kern) != len(dead) * mA * mA:
            raise PrecisionExhausted(
                "degeneracy space not presentable on the product basis at "
                "this truncation")
        kept_pairs = [pair for pair in pairs if pair not in dead]
        gram = [[ghat[(pi, pj)] for pj in kept_pairs] for pi in kept_pairs]
        reducer = ("block", [], [pairs.index(p) for p in kept_pairs])

    induced = PreHilbertModule(A, len(kept_pairs), gram,
                               left_algebra=F.left_algebra)

    if F.left_algebra is not None and F.left_action is not None:
        f_act = F.left_action
        e_act = E.left_action

        def induced_action(c_elem):
            lf = f_act(c_elem)  # dF x dF over B
            big = {}
            for (j, q) in pairs:
                # c . (x_j (x) phi_q) = sum_i x_i (x) (lf[i][j] . phi_q)
                col = {}
                for i in range(dF):
                    le = e_act(lf[i][j])  # dE x dE over A
                    for p in range(dE):
                        entry = le[p][q]
                        key = (i, p)
                        col[key] = col[key] + entry if key in col else entry
                big[(j, q)] = col
            mode, kernel, kept = reducer
            zero = SeriesMatrix.zero(mA, mA, K)
            out = [[zero for _ in kept_pairs] for _ in kept_pairs]
            for cidx, jq in enumerate(kept_pairs):
                col = big[jq]
                if mode == "scalar":
                    coords = [col.get(pair,
                                      zero).rows[0][0] for pair in pairs]
                    reduced = _reduce_coords(coords, kernel, kept)
                    for ridx, val in enumerate(reduced):
                        one = SeriesMatrix([[val]], K)
                        out[ridx][cidx] = one
                else:
                    for ridx, pair in enumerate(kept_pairs):
                        out[ridx][cidx] = col.get(pair, zero)
            return out

        induced.left_action = induced_action
    return induced


def classical_limit_module(module: PreHilbertModule) -> ClassicalLimit:
    """Quotient by the radical of the Gram at l = 0 (flattened to scalars);
    operator transport is shared with the representation engine."""
    if module.rank == 0:
        return ClassicalLimit([], [], None, [])
    flat = module.flatten_gram()
    return classical_limit_rep(flat, [])


# -- deformed projections -----------------------------------------------------------------


def fedosov_project(p0: SeriesMatrix, algebra: MatrixStarAlgebra) -> SeriesMatrix:
    """Deform a classical idempotent into a star-idempotent:

        P = 1/2 + (P0 - 1/2) (x) (1 + 4(P0 (x) P0 - P0))^(-1/2)

    with the binomial star-series, which terminates because the idempotency
    defect is O(l).  Hermitian P0 and a Hermitian product give Hermitian P.
    """
    if p0.nrows != p0.ncols:
        raise ShapeMismatch("projection candidates are square")
    if p0.nrows != algebra.m:
        raise ShapeMismatch("P0 must be an element of the algebra")
    defect = algebra.product(p0, p0) - p0
    if not defect.classical_limit().is_zero():
        raise DefectNotSmall("P0 is not idempotent at lambda^0")
    K = algebra.order
    a = defect.scale_scalar(4)
    # (unit + a)^(-1/2) = sum binom(-1/2, k) a^(star k); a is O(l).  All
    # occurrences of 1 in the formula mean the star-unit of the algebra.
    root = algebra.unit()
    power = None
    coeff = Fraction(1)
    for k in range(1, K):
        coeff = coeff * (Fraction(-1, 2) - (k - 1)) / k
        power = a if power is None else algebra.product(power, a)
        if power.is_zero() and all(e.is_exact_zero()
                                   for r in power.rows for e in r):
            break
        root = root + power.scale_scalar(coeff)
    half = algebra.unit().scale_scalar(Fraction(1, 2))
    return half + algebra.product(p0 - half, root)


def idempotent_equivalence_verify(p, q, u, v, algebra) -> bool:
    """True iff p = u (x) v and q = v (x) u exactly up to K."""
    shapes = {(m.nrows, m.ncols) for m in (p, q, u, v)}
    if len(shapes) != 1:
        raise ShapeMismatch("equivalence data must share one shape")
    return p == algebra.product(u, v) and q == algebra.product(v, u)


def fullness_check(module: PreHilbertModule, sample_degree=None) -> bool:
    """Does the scalar span of {<e_i . a, e_j . b>} contain the unit?

    For matrix bases the algebra basis already exhausts the bilinear span, so
    the degree bound is moot; the membership is an exact linear system over
    the series ring.
    """
    if module.rank == 0:
        return False
    alg = module.base
    abasis = alg.basis()
    gens = []
    for i in range(module.rank):
        for j in range(module.rank):
            g = module.gram[i][j]
            if g.is_zero() and all(e.is_exact_zero() for r in g.rows
                                   for e in r):
                continue
            for a in abasis:
                left = alg.product(alg.involution(a), g)
                for b in abasis:
                    gens.append(alg.product(left, b))
    if not gens:
        return False
    cols = [alg.to_coords(g) for g in gens]
    system = SeriesMatrix([[cols[j][i] for j in range(len(cols))]
                           for i in range(alg.dim)], alg.order)
    target = alg.to_coords(alg.unit())
    return solve_in_ring(system, target) is not None


# -- characteristic classes ------------------------------------------------------------------


class MoritaClassData:
    """A symplectic equivalence class in 2-pi-i-normalized units: m series
    coordinates over an integral basis, plus the fixed pole part."""

    def __init__(self, m, coords, pole=None):
        if len(coords) != m:
            raise RankMismatch(f"expected {m} coordinates, got {len(coords)}")
        self.m = m
        self.coords = list(coords)
        if pole is None:
            pole = [GaussianRational(0)] * m
        if len(pole) != m:
            raise RankMismatch("pole part length mismatch")
        self.pole = [c if isinstance(c, GaussianRational) else
                     GaussianRational(c) for c in pole]

    def __repr__(self):
        from .exprio import series_text
        return f"<class [{', '.join(series_text(c) for c in self.coords)}]>"

    def to_json(self):
        from .exprio import gaussian_to_json, series_to_json
        return {
            "schema_version": 1,
            "type": "morita_class",
            "m": self.m,
            "pole": [gaussian_to_json(c) for c in self.pole],
            "class": [series_to_json(c) for c in self.coords],
        }


class MoritaVerdict(enum.Enum):
    EQUIVALENT = "equivalent"
    NOT_EQUIVALENT = "not_equivalent"
    INDETERMINATE = "indeterminate"


def morita_class_check(c1: MoritaClassData, c2: MoritaClassData) -> MoritaVerdict:
    """Equivalence iff the pole parts agree and the class difference is an
    integer vector with no l-dependence.

    An l-tail that vanishes only up to the truncation order yields
    ``indeterminate``: integrality at l^0 cannot settle a hidden tail.
    """
    if c1.m != c2.m:
        raise RankMismatch("classes live in lattices of different rank")
    if c1.pole != c2.pole:
        return MoritaVerdict.NOT_EQUIVALENT
    K = min(min(c.order for c in c1.coords), min(c.order for c in c2.coords))
    indeterminate = False
    for a, b in zip(c1.coords, c2.coords):
        d = b.reduce_order(K) - a.reduce_order(K)
        if any(d.coeffs[1:]):
            return MoritaVerdict.NOT_EQUIVALENT
        if not d.classical_limit().is_integer():
            return MoritaVerdict.NOT_EQUIVALENT
        if d.tail_lost:
            indeterminate = True
    return MoritaVerdict.INDETERMINATE if indeterminate \
        else MoritaVerdict.EQUIVALENT


def hermitian_class_check(c: MoritaClassData) -> bool:
    """In the normalized convention an equivalence class corresponds to a
    Hermitian product iff all its coordinates are real."""
    return all(coeff.is_real()
               for series in c.coords for coeff in series.coeffs)
