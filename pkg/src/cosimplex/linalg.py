"""Exact linear algebra over the rationals.

Everything here works with ``fractions.Fraction`` entries, so ranks, kernels
and orthogonal complements are computed without any floating tolerance.
Determinism conventions used throughout the package:

* elimination always pivots on the first nonzero column, without scaling;
* kernel bases set one free variable to 1 in ascending index order;
* Gram-Schmidt processes vectors in the given order and keeps unnormalized
  vectors, rescaled to primitive integer form with positive leading entry.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, isqrt

Vector = tuple  # tuple of Fraction

_F0 = Fraction(0)
_F1 = Fraction(1)


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


class Matrix:
    """Dense rational matrix; rows are lists of Fractions."""

    __slots__ = ("rows", "nrows", "ncols")

    def __init__(self, rows, ncols=None):
        self.rows = [[_frac(x) for x in row] for row in rows]
        self.nrows = len(self.rows)
        if self.nrows:
            self.ncols = len(self.rows[0])
            if any(len(r) != self.ncols for r in self.rows):
                raise ValueError("ragged rows")
        else:
            self.ncols = 0 if ncols is None else ncols

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zeros(m, n):
        return Matrix([[_F0] * n for _ in range(m)], ncols=n)

    @staticmethod
    def identity(n):
        return Matrix([[_F1 if i == j else _F0 for j in range(n)] for i in range(n)], ncols=n)

    @staticmethod
    def from_columns(cols, nrows=None):
        cols = list(cols)
        if not cols:
            if nrows is None:
                raise ValueError("need nrows for an empty column list")
            return Matrix([[] for _ in range(nrows)], ncols=0)
        m = len(cols[0])
        return Matrix([[_frac(cols[j][i]) for j in range(len(cols))] for i in range(m)])

    # -- basic access ------------------------------------------------------

    def column(self, j) -> Vector:
        return tuple(self.rows[i][j] for i in range(self.nrows))

    def columns(self):
        return [self.column(j) for j in range(self.ncols)]

    def row(self, i) -> Vector:
        return tuple(self.rows[i])

    def copy(self):
        return Matrix([row[:] for row in self.rows], ncols=self.ncols)

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return (self.nrows, self.ncols) == (other.nrows, other.ncols) and self.rows == other.rows

    def __hash__(self):
        raise TypeError("Matrix is not hashable")

    def is_zero(self):
        return all(x == 0 for row in self.rows for x in row)

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other):
        return Matrix(
            [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(self.rows, other.rows)],
            ncols=self.ncols,
        )

    def __sub__(self, other):
        return Matrix(
            [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(self.rows, other.rows)],
            ncols=self.ncols,
        )

    def __neg__(self):
        return self.scale(-1)

    def scale(self, c):
        c = _frac(c)
        return Matrix([[c * x for x in row] for row in self.rows], ncols=self.ncols)

    def __mul__(self, other):
        if isinstance(other, Matrix):
            if self.ncols != other.nrows:
                raise ValueError(f"shape mismatch {self.nrows}x{self.ncols} * {other.nrows}x{other.ncols}")
            nc = other.ncols
            out = []
            for row in self.rows:
                acc = [_F0] * nc
                for k, a in enumerate(row):
                    if a:
                        other_row = other.rows[k]
                        for j, b in enumerate(other_row):
                            if b:
                                acc[j] += a * b
                out.append(acc)
            return Matrix(out, ncols=nc)
        # matrix * vector
        vec = list(other)
        if self.ncols != len(vec):
            raise ValueError("shape mismatch in matrix-vector product")
        return tuple(
            sum((a * b for a, b in zip(row, vec) if a and b), _F0) for row in self.rows
        )

    def transpose(self):
        return Matrix([list(col) for col in zip(*self.rows)], ncols=self.nrows) if self.rows else Matrix.zeros(self.ncols, 0)

    def hstack(self, other):
        if self.nrows != other.nrows:
            raise ValueError("row count mismatch in hstack")
        return Matrix([ra + rb for ra, rb in zip(self.rows, other.rows)], ncols=self.ncols + other.ncols)

    # -- elimination -------------------------------------------------------

    def rref(self):
        """Reduced row echelon form; returns (matrix, pivot column tuple)."""
        m = [row[:] for row in self.rows]
        nr, nc = self.nrows, self.ncols
        pivots = []
        r = 0
        for c in range(nc):
            pivot_row = None
            for i in range(r, nr):
                if m[i][c] != 0:
                    pivot_row = i
                    break
            if pivot_row is None:
                continue
            m[r], m[pivot_row] = m[pivot_row], m[r]
            pv = m[r][c]
            if pv != 1:
                m[r] = [x / pv for x in m[r]]
            for i in range(nr):
                if i != r and m[i][c] != 0:
                    f = m[i][c]
                    m[i] = [x - f * y for x, y in zip(m[i], m[r])]
            pivots.append(c)
            r += 1
            if r == nr:
                break
        return Matrix(m, ncols=nc), tuple(pivots)

    def rank(self):
        return len(self.rref()[1])

    def kernel(self):
        """Columns form a deterministic basis of the null space."""
        R, pivots = self.rref()
        pivot_set = set(pivots)
        free = [c for c in range(self.ncols) if c not in pivot_set]
        cols = []
        for fc in free:
            v = [_F0] * self.ncols
            v[fc] = _F1
            for r, pc in enumerate(pivots):
                v[pc] = -R.rows[r][fc]
            cols.append(tuple(v))
        return Matrix.from_columns(cols, nrows=self.ncols)

    def independent_columns(self):
        """Indices of a greedy (first-come) maximal independent column set."""
        return self.rref()[1]

    def column_space_basis(self):
        return Matrix.from_columns([self.column(j) for j in self.independent_columns()], nrows=self.nrows)

    def solve(self, b):
        """One solution of ``self * x = b``, or None when inconsistent.

        Free variables are set to zero, which makes the answer deterministic.
        """
        aug = self.hstack(Matrix.from_columns([tuple(b)], nrows=self.nrows))
        R, pivots = aug.rref()
        if self.ncols in pivots:
            return None
        x = [_F0] * self.ncols
        for r, pc in enumerate(pivots):
            x[pc] = R.rows[r][self.ncols]
        return tuple(x)

    def inverse(self):
        if self.nrows != self.ncols:
            raise ValueError("only square matrices have inverses")
        n = self.nrows
        aug = self.hstack(Matrix.identity(n))
        R, pivots = aug.rref()
        if pivots[:n] != tuple(range(n)):
            raise ValueError("matrix is singular")
        return Matrix([row[n:] for row in R.rows], ncols=n)

    def __repr__(self):
        return f"Matrix({self.nrows}x{self.ncols})"


# -- vector helpers ---------------------------------------------------------


def dot(u, v) -> Fraction:
    return sum((a * b for a, b in zip(u, v) if a and b), _F0)


def vec_sub(u, v):
    return tuple(a - b for a, b in zip(u, v))


def vec_scale(c, u):
    c = _frac(c)
    return tuple(c * a for a in u)


def is_zero_vector(v):
    return all(x == 0 for x in v)


def primitive(v) -> Vector:
    """Rescale to a coprime integer vector whose first nonzero entry is positive."""
    v = tuple(_frac(x) for x in v)
    if is_zero_vector(v):
        return v
    den = 1
    for x in v:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, abs(x))
    ints = [x // g for x in ints]
    for x in ints:
        if x != 0:
            if x < 0:
                ints = [-y for y in ints]
            break
    return tuple(Fraction(x) for x in ints)


# -- subspace utilities ------------------------------------------------------


def span_basis(vectors):
    """Greedy independent subset of ``vectors``, kept in input order."""
    basis = []
    rows = []  # running row-echelon copy
    for v in vectors:
        work = [_frac(x) for x in v]
        for pr in rows:
            c = next(i for i, x in enumerate(pr) if x != 0)
            if work[c] != 0:
                f = work[c] / pr[c]
                work = [a - f * b for a, b in zip(work, pr)]
        if any(x != 0 for x in work):
            basis.append(tuple(_frac(x) for x in v))
            rows.append(work)
    return basis


def subspace_rank(vectors):
    return len(span_basis(vectors))


def subspace_contains(basis, v):
    if is_zero_vector(v):
        return True
    return subspace_rank(list(basis) + [tuple(v)]) == subspace_rank(basis)


def subspace_leq(a_vectors, b_vectors):
    b_basis = span_basis(b_vectors)
    return all(subspace_contains(b_basis, v) for v in a_vectors)


def subspace_equal(a_vectors, b_vectors):
    return subspace_leq(a_vectors, b_vectors) and subspace_leq(b_vectors, a_vectors)


def subspace_intersection(a_vectors, b_vectors):
    """Basis of span(a) ∩ span(b)."""
    a = span_basis(a_vectors)
    b = span_basis(b_vectors)
    if not a or not b:
        return []
    stacked = Matrix.from_columns(a + [vec_scale(-1, v) for v in b])
    ker = stacked.kernel()
    out = []
    for j in range(ker.ncols):
        coeffs = ker.column(j)[: len(a)]
        vec = tuple(
            sum((c * v[i] for c, v in zip(coeffs, a)), _F0) for i in range(len(a[0]))
        )
        if not is_zero_vector(vec):
            out.append(primitive(vec))
    return span_basis(out)


def orthogonal_complement_within(perp_to, within):
    """Vectors of span(within) orthogonal to every vector of ``perp_to``."""
    within_basis = span_basis(within)
    if not within_basis:
        return []
    constraints = span_basis(perp_to)
    if not constraints:
        return within_basis
    rows = [[dot(c, w) for w in within_basis] for c in constraints]
    ker = Matrix(rows, ncols=len(within_basis)).kernel()
    out = []
    for j in range(ker.ncols):
        coeffs = ker.column(j)
        vec = tuple(
            sum((c * w[i] for c, w in zip(coeffs, within_basis)), _F0)
            for i in range(len(within_basis[0]))
        )
        out.append(primitive(vec))
    return out


def gram_schmidt(vectors):
    """Exact orthogonalization, unnormalized primitive vectors, zeros dropped."""
    out = []
    for v in vectors:
        w = tuple(_frac(x) for x in v)
        for u in out:
            c = dot(w, u)
            if c:
                w = vec_sub(w, vec_scale(c / dot(u, u), u))
        if not is_zero_vector(w):
            out.append(primitive(w))
    return out


def projection_matrix(basis_vectors, dim):
    """Orthogonal projection onto span of the given ambient vectors."""
    basis = span_basis(basis_vectors)
    if not basis:
        return Matrix.zeros(dim, dim)
    B = Matrix.from_columns(basis, nrows=dim)
    G = B.transpose() * B
    return B * G.inverse() * B.transpose()


def gram(mat: Matrix) -> Matrix:
    return mat.transpose() * mat


def fraction_sqrt(x) -> Fraction | None:
    """Exact square root of a nonnegative rational, or None."""
    x = _frac(x)
    if x < 0:
        return None
    p, q = x.numerator, x.denominator
    rp, rq = isqrt(p), isqrt(q)
    if rp * rp == p and rq * rq == q:
        return Fraction(rp, rq)
    return None


def try_orthonormal_basis(vectors):
    """Orthonormal rational basis of the span, or None when norms are irrational."""
    out = []
    for v in gram_schmidt(vectors):
        r = fraction_sqrt(dot(v, v))
        if r is None:
            return None
        out.append(vec_scale(1 / r, v))
    return out


def char_poly(mat: Matrix):
    """Characteristic polynomial coefficients c_0..c_n of det(xI - M).

    Uses the Faddeev-LeVerrier recursion; exact over the rationals.
    """
    n = mat.nrows
    if n != mat.ncols:
        raise ValueError("characteristic polynomial needs a square matrix")
    coeffs = [_F1]  # leading coefficient of x^n
    Mk = Matrix.zeros(n, n)
    I = Matrix.identity(n)
    for k in range(1, n + 1):
        Mk = mat * Mk + I.scale(coeffs[-1])
        MMk = mat * Mk
        trace = sum(MMk.rows[i][i] for i in range(n))
        coeffs.append(-trace / k)
    return coeffs  # [1, c_{n-1}, ..., c_0]


def is_symmetric(mat: Matrix) -> bool:
    return mat == mat.transpose()


def is_psd(mat: Matrix) -> bool:
    """Exact positive-semidefiniteness test via pivoted LDL elimination."""
    if not is_symmetric(mat):
        return False
    a = [row[:] for row in mat.rows]
    n = mat.nrows
    active = list(range(n))
    while active:
        piv = max(active, key=lambda i: a[i][i])
        if a[piv][piv] < 0:
            return False
        if a[piv][piv] == 0:
            # remaining diagonal is <= 0; PSD forces the whole block to vanish
            return all(a[i][j] == 0 for i in active for j in active)
        d = a[piv][piv]
        active.remove(piv)
        for i in active:
            f = a[i][piv] / d
            if f:
                for j in active:
                    a[i][j] -= f * a[piv][j]
    return True
