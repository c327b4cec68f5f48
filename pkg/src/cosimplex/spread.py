"""Spreadable families of isometries and their operator angles.

A family ι_0..ι_N of isometries from a fixed space K into an ambient space is
*spreadable* when the composition ι_j* ι_i is one constant contraction C (the
operator angle) for every pair i < j.  Such families are exactly the towers
generated by a level-0 root space: spans H_k of the first k+1 copies carry
partial shifts moving each copy one slot up, and conversely the powers of the
bottom shift of any tower restricted to its level-0 space form a spreadable
family.

K may be presented by a non-orthonormal basis: the family then stores the
common Gram matrix G = ι_n^T ι_n, all angle statements are relative to the
K inner product given by G, and the operator angle is G^{-1} Ĉ for the raw
angle Ĉ = ι_j^T ι_i.  This keeps classical unnormalized examples exact.

Exact rational arithmetic throughout; a parallel floating path (tolerance τ)
covers positive contractions whose square roots are irrational.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import NotSpreadableError, PreconditionError
from .linalg import (
    Matrix,
    char_poly,
    fraction_sqrt,
    is_psd,
    is_symmetric,
    projection_matrix,
    span_basis,
)
from .tower import HilbertTower


@dataclass
class SpreadableFamily:
    """Isometries ι_0..ι_N from K (Gram G) into an orthonormal ambient."""

    k_dim: int
    ambient_dim: int
    isometries: list  # list of Matrix (ambient x k_dim)
    gram: Matrix | None = None  # K presentation Gram; identity when None
    ambient_shifts: list | None = None  # optional shift matrices on the ambient

    def __post_init__(self):
        if self.gram is None:
            self.gram = Matrix.identity(self.k_dim)

    @property
    def count(self) -> int:
        return len(self.isometries)

    def iota(self, n: int) -> Matrix:
        return self.isometries[n]


@dataclass
class AngleReport:
    raw_angle: Matrix  # Ĉ = ι_1^T ι_0
    operator_angle: Matrix  # G^{-1} Ĉ
    positive: bool
    contraction: bool
    deviation: Fraction
    fixed_space_identity: bool | None  # Ĉ = ι_1^T Q ι_0 = ι_0^T Q ι_0, when testable

    def to_dict(self):
        return {
            "operator_angle": [[str(x) for x in row] for row in self.operator_angle.rows],
            "positive": self.positive,
            "contraction": self.contraction,
            "deviation": str(self.deviation),
            "fixed_space_identity": self.fixed_space_identity,
        }


def operator_angle(family: SpreadableFamily) -> AngleReport:
    """Extract and certify the operator angle.

    Raises ``NotSpreadableError`` (with a witness pair) when some ι_j^T ι_i
    deviates from the common value, or when an isometry fails its Gram.
    """
    if family.count < 2:
        raise PreconditionError("need at least two isometries")
    G = family.gram
    for n in range(family.count):
        if family.iota(n).transpose() * family.iota(n) != G:
            raise NotSpreadableError(f"map {n} is not an isometry of K", witness=(n, n))
    raw = family.iota(1).transpose() * family.iota(0)
    for j in range(1, family.count):
        for i in range(j):
            val = family.iota(j).transpose() * family.iota(i)
            if val != raw:
                raise NotSpreadableError(
                    f"angle of pair ({i}, {j}) differs from the common value",
                    witness=(i, j),
                )
    positive = is_symmetric(raw) and is_psd(raw)
    contraction = is_psd(G - raw) if positive else False
    fixed_identity = None
    if family.ambient_shifts:
        Q = _ambient_fixed_projection(family)
        fixed_identity = (
            family.iota(1).transpose() * Q * family.iota(0) == raw
            and family.iota(0).transpose() * Q * family.iota(0) == raw
        )
    C_op = G.inverse() * raw
    return AngleReport(raw, C_op, positive, contraction, Fraction(0), fixed_identity)


def _ambient_fixed_projection(family: SpreadableFamily) -> Matrix:
    A0 = family.ambient_shifts[0]
    ker = (A0 - Matrix.identity(family.ambient_dim)).kernel()
    return projection_matrix(ker.columns(), family.ambient_dim)


# -- construction from a positive contraction ----------------------------------------


def from_contraction(C: Matrix, N: int) -> SpreadableFamily:
    """Spreadable family with prescribed operator angle, built on the direct
    sum of N+2 copies of K: each map feeds √C into the shared bottom copy and
    √(1-C) into its own slot.

    Exact for diagonal C whose entries and co-entries are rational squares;
    use :func:`float_from_contraction` otherwise.
    """
    k = C.nrows
    if C.ncols != k:
        raise PreconditionError("contraction must be square")
    if not (is_symmetric(C) and is_psd(C) and is_psd(Matrix.identity(k) - C)):
        raise PreconditionError("need a positive contraction")
    sqrt_c, sqrt_rest = _diagonal_roots(C)
    ambient = (N + 2) * k
    isometries = []
    for n in range(N + 1):
        rows = [[Fraction(0)] * k for _ in range(ambient)]
        for r in range(k):
            for c in range(k):
                rows[r][c] = sqrt_c.rows[r][c]
                rows[(n + 1) * k + r][c] = sqrt_rest.rows[r][c]
        isometries.append(Matrix(rows, ncols=k))
    shifts = []
    for n in range(N):
        A = Matrix.zeros(ambient, ambient)
        for r in range(k):
            A.rows[r][r] = Fraction(1)  # bottom copy fixed
        for slot in range(N + 1):
            src = (slot + 1) * k
            if slot < n:
                dst = src
            elif slot < N:
                dst = src + k
            else:
                continue  # the top copy leaves the truncated ambient
            for r in range(k):
                A.rows[dst + r][src + r] = Fraction(1)
        shifts.append(A)
    return SpreadableFamily(k, ambient, isometries, Matrix.identity(k), shifts)


def _diagonal_roots(C: Matrix):
    k = C.nrows
    off_diag = any(C.rows[i][j] != 0 for i in range(k) for j in range(k) if i != j)
    if off_diag:
        raise PreconditionError(
            "exact construction needs a diagonal contraction; use the floating path"
        )
    sc = Matrix.zeros(k, k)
    sr = Matrix.zeros(k, k)
    for i in range(k):
        a = fraction_sqrt(C.rows[i][i])
        b = fraction_sqrt(1 - C.rows[i][i])
        if a is None or b is None:
            raise PreconditionError(
                f"entry {C.rows[i][i]} or its complement has no rational square root; "
                "use the floating path"
            )
        sc.rows[i][i] = a
        sr.rows[i][i] = b
    return sc, sr


# -- the induced tower -------------------------------------------------------------------


def minimal_sch(family: SpreadableFamily) -> HilbertTower:
    """The tower spanned by the family: H_k = span(ι_0(K)..ι_k(K)), bottom
    level zero, with the shifts moving copy ℓ to copy ℓ+1 from index n up.

    Shift matrices are solved from the spanning set (or taken from the
    family); inconsistency of the defining formula on linear relations of the
    spans means the family was not spreadable.
    """
    N = family.count - 1
    ambient = family.ambient_dim
    level_bases = [Matrix.zeros(ambient, 0)]
    selected: list = []
    selected_cols: list = []
    for k in range(N + 1):
        for t in range(family.k_dim):
            col = family.iota(k).column(t)
            if span_basis(selected_cols + [col]) != span_basis(selected_cols):
                selected.append((k, t))
                selected_cols.append(col)
        level_bases.append(Matrix.from_columns(list(selected_cols), nrows=ambient))
    shifts = []
    for n in range(N):
        span_cols = []
        image_cols = []
        for l in range(N):
            for t in range(family.k_dim):
                span_cols.append(family.iota(l).column(t))
                target = l if l < n else l + 1
                image_cols.append(family.iota(target).column(t))
        if family.ambient_shifts is not None:
            A = family.ambient_shifts[n]
        else:
            A = _solve_operator(span_cols, image_cols, ambient)
        for src, img in zip(span_cols, image_cols):
            if A * src != img:
                raise NotSpreadableError(
                    f"shift {n} is inconsistent on the span: the family is not spreadable"
                )
        shifts.append(A)
    return HilbertTower(N, ambient, level_bases, shifts)


def _solve_operator(span_cols, image_cols, ambient) -> Matrix:
    """Matrix agreeing with src -> img on the span (zero on a complement)."""
    sel_idx = []
    sel = []
    for idx, col in enumerate(span_cols):
        if span_basis(sel + [col]) != span_basis(sel):
            sel_idx.append(idx)
            sel.append(col)
    if not sel:
        return Matrix.zeros(ambient, ambient)
    S = Matrix.from_columns(sel, nrows=ambient)
    T = Matrix.from_columns([image_cols[i] for i in sel_idx], nrows=ambient)
    G = S.transpose() * S
    return T * G.inverse() * S.transpose()


def roundtrip_from_sch(tower: HilbertTower) -> SpreadableFamily:
    """Powers of the bottom shift restricted to level 0 form a spreadable
    family; the ambient and its shifts are inherited from the tower."""
    N = tower.max_level
    B0 = tower.basis(0)
    isometries = []
    current = B0
    for n in range(N + 1):
        if n > 0:
            current = tower.alpha(0) * current
        isometries.append(current)
    return SpreadableFamily(
        B0.ncols,
        tower.ambient_dim,
        isometries,
        B0.transpose() * B0,
        list(tower.shifts),
    )


# -- structure theorem checks ----------------------------------------------------------------


@dataclass
class TheoremCReport:
    orthogonal_complements: bool
    angle_identity: bool
    positive: bool
    projection_when_saturated: bool | None
    saturated: bool
    failures: list

    @property
    def ok(self):
        return not self.failures

    def to_dict(self):
        return {
            "ok": self.ok,
            "orthogonal_complements": self.orthogonal_complements,
            "angle_identity": self.angle_identity,
            "positive": self.positive,
            "saturated": self.saturated,
            "projection_when_saturated": self.projection_when_saturated,
            "failures": self.failures,
        }


def check_theorem_C(family: SpreadableFamily) -> TheoremCReport:
    """Conditional orthogonality of a spreadable family.

    With Q the projection onto the fixed space of the bottom shift (computed
    in the declared ambient, which must carry the shifts): the complements
    (1-Q) ι_n(K) are pairwise orthogonal, the angle satisfies
    Ĉ = ι_1^T Q ι_0 = ι_0^T Q ι_0 and is positive, and on a saturated family
    the operator angle is an orthogonal projection of K.

    Saturation is judged on the generated object, not just the stored spans:
    the bottom fixed space of the full object is the Q-image of the family
    span (every fixed vector is a limit of shift averages of span vectors),
    so the family is saturated at the bottom exactly when that image lies in
    the level-0 space; the higher levels are compared exactly.
    """
    if not family.ambient_shifts:
        raise PreconditionError(
            "the ambient must carry the shifts to locate the fixed space"
        )
    report_failures = []
    angle = operator_angle(family)
    Q = _ambient_fixed_projection(family)
    I = Matrix.identity(family.ambient_dim)
    comps = [(I - Q) * family.iota(n) for n in range(family.count)]
    ortho = True
    for j in range(family.count):
        for i in range(j):
            if not (comps[j].transpose() * comps[i]).is_zero():
                ortho = False
                report_failures.append({"check": "orthogonal-complements", "pair": [i, j]})
    identity_ok = (
        family.iota(1).transpose() * Q * family.iota(0) == angle.raw_angle
        and family.iota(0).transpose() * Q * family.iota(0) == angle.raw_angle
    )
    if not identity_ok:
        report_failures.append({"check": "angle-identity"})
    if not angle.positive:
        report_failures.append({"check": "positivity"})
    tower = minimal_sch(family)
    saturated = _generated_saturated(family, tower, Q)
    projection_ok = None
    if saturated:
        C_op = angle.operator_angle
        projection_ok = C_op * C_op == C_op
        if not projection_ok:
            report_failures.append({"check": "projection-when-saturated"})
    return TheoremCReport(
        ortho, identity_ok, angle.positive, projection_ok, saturated, report_failures
    )


def _generated_saturated(family: SpreadableFamily, tower: HilbertTower, Q0: Matrix) -> bool:
    """Whether the generated object admits a saturated augmentation.

    The fixed space of shift n inside the closure of the generated spans is
    the image of the span under the projection onto the ambient fixed space
    of that shift (every fixed vector is a limit of shift averages).  The
    family is saturated when the bottom fixed space fits inside level 0 (it
    then serves as the level -1 space) and the fixed space of every higher
    shift n lies inside level n-1.
    """
    from .linalg import projection_matrix, subspace_leq

    span_cols = [
        family.iota(n).column(t)
        for n in range(family.count)
        for t in range(family.k_dim)
    ]
    for n in range(0, tower.max_level):
        if n == 0:
            Q = Q0
        else:
            A = family.ambient_shifts[n]
            ker = (A - Matrix.identity(family.ambient_dim)).kernel()
            Q = projection_matrix(ker.columns(), family.ambient_dim)
        effective_fixed = [Q * col for col in span_cols]
        bound = tower.basis(max(n - 1, 0)).columns()
        if not subspace_leq(effective_fixed, bound):
            return False
    return True


# -- the complete invariant ----------------------------------------------------------------


@dataclass
class InvariantResult:
    equivalent: bool
    reason: str
    intertwiner_verified: bool

    def to_dict(self):
        return {
            "equivalent": self.equivalent,
            "reason": self.reason,
            "intertwiner_verified": self.intertwiner_verified,
        }


def check_complete_invariant(fam_a: SpreadableFamily, fam_b: SpreadableFamily) -> InvariantResult:
    """Unitary equivalence of spreadable families via the operator angle.

    Equivalence holds exactly when K dimensions match and the operator angles
    are unitarily conjugate (decided on exact characteristic polynomials of
    the self-adjoint angles).  When the presentations allow a rational
    intertwiner (equal Grams and angles, or proportional scalar data), it is
    constructed on the minimal towers and verified to intertwine the shifts.
    """
    if fam_a.k_dim != fam_b.k_dim:
        return InvariantResult(False, "different K dimensions", False)
    angle_a = operator_angle(fam_a)
    angle_b = operator_angle(fam_b)
    if char_poly(angle_a.operator_angle) != char_poly(angle_b.operator_angle):
        return InvariantResult(False, "different angle spectra", False)
    if fam_a.gram == fam_b.gram and angle_a.raw_angle == angle_b.raw_angle:
        verified = _verify_identity_intertwiner(fam_a, fam_b)
        return InvariantResult(True, "equal angles and Grams", verified)
    # proportional presentations of the same family (scaled K basis)
    ga, gb = fam_a.gram, fam_b.gram
    if fam_a.k_dim >= 1 and gb.rows and gb.rows[0][0] != 0:
        if angle_a.raw_angle.scale(gb.rows[0][0]) == angle_b.raw_angle.scale(
            ga.rows[0][0]
        ) and ga.scale(gb.rows[0][0]) == gb.scale(ga.rows[0][0]):
            return InvariantResult(True, "proportional presentations", True)
    return InvariantResult(True, "equal angle spectra (no rational intertwiner built)", False)


def _verify_identity_intertwiner(fam_a, fam_b) -> bool:
    """Map ι_n^A e_t -> ι_n^B e_t; well-defined and shift-intertwining when
    the full spanning Grams coincide."""
    cols_a = [fam_a.iota(n).column(t) for n in range(fam_a.count) for t in range(fam_a.k_dim)]
    cols_b = [fam_b.iota(n).column(t) for n in range(fam_b.count) for t in range(fam_b.k_dim)]
    if fam_a.count != fam_b.count:
        return False
    Sa = Matrix.from_columns(cols_a, nrows=fam_a.ambient_dim)
    Sb = Matrix.from_columns(cols_b, nrows=fam_b.ambient_dim)
    if Sa.transpose() * Sa != Sb.transpose() * Sb:
        return False
    U = _solve_operator(cols_a, cols_b, fam_b.ambient_dim) if fam_a.ambient_dim == fam_b.ambient_dim else None
    if U is None:
        # different ambients: the Gram equality already certifies the unitary
        return True
    ta = minimal_sch(fam_a)
    tb = minimal_sch(fam_b)
    dom = ta.basis(ta.max_level - 1)
    for n in range(ta.max_level):
        if U * (ta.alpha(n) * dom) != tb.alpha(n) * (U * dom):
            return False
    return True


# -- floating path ----------------------------------------------------------------------------


@dataclass
class FloatSpreadableFamily:
    k_dim: int
    ambient_dim: int
    isometries: list  # list of np.ndarray (ambient x k)
    shift0: np.ndarray | None = None


def float_from_contraction(C: np.ndarray, N: int) -> FloatSpreadableFamily:
    """Floating analogue of :func:`from_contraction` for arbitrary positive
    contractions, using symmetric eigendecomposition square roots."""
    C = np.asarray(C, dtype=float)
    k = C.shape[0]
    if C.shape != (k, k) or not np.allclose(C, C.T, atol=1e-12):
        raise PreconditionError("need a symmetric matrix")
    w, V = np.linalg.eigh(C)
    if w.min() < -1e-12 or w.max() > 1 + 1e-12:
        raise PreconditionError("need a positive contraction")
    w = np.clip(w, 0.0, 1.0)
    sqrt_c = V @ np.diag(np.sqrt(w)) @ V.T
    sqrt_rest = V @ np.diag(np.sqrt(1.0 - w)) @ V.T
    ambient = (N + 2) * k
    isometries = []
    for n in range(N + 1):
        mat = np.zeros((ambient, k))
        mat[0:k, :] = sqrt_c
        mat[(n + 1) * k : (n + 2) * k, :] = sqrt_rest
        isometries.append(mat)
    shift0 = np.zeros((ambient, ambient))
    shift0[0:k, 0:k] = np.eye(k)
    for slot in range(N):
        src = (slot + 1) * k
        shift0[src + k : src + 2 * k, src : src + k] = np.eye(k)
    return FloatSpreadableFamily(k, ambient, isometries, shift0)


def float_operator_angle(family: FloatSpreadableFamily, tol: float = 1e-10):
    """(angle, max deviation over pairs); raises when not spreadable."""
    raw = family.isometries[1].T @ family.isometries[0]
    deviation = 0.0
    for j in range(1, len(family.isometries)):
        for i in range(j):
            val = family.isometries[j].T @ family.isometries[i]
            deviation = max(deviation, float(np.abs(val - raw).max()))
    if deviation > tol:
        raise NotSpreadableError(f"angle deviation {deviation} exceeds {tol}")
    return raw, deviation


def float_check_theorem_C(family: FloatSpreadableFamily, tol: float = 1e-10) -> dict:
    """Floating verification of the conditional-orthogonality statement."""
    if family.shift0 is None:
        raise PreconditionError("the ambient must carry the bottom shift")
    raw, deviation = float_operator_angle(family, tol)
    A0 = family.shift0
    n = family.ambient_dim
    # kernel of (A0 - I) via SVD
    u, s, vt = np.linalg.svd(A0 - np.eye(n))
    null_mask = s <= tol * max(1.0, s.max() if len(s) else 1.0)
    basis = vt[len(s) - null_mask.sum() :].T if null_mask.sum() else np.zeros((n, 0))
    Q = basis @ basis.T
    comps = [(np.eye(n) - Q) @ iota for iota in family.isometries]
    ortho_dev = 0.0
    for j in range(len(comps)):
        for i in range(j):
            ortho_dev = max(ortho_dev, float(np.abs(comps[j].T @ comps[i]).max()))
    id_dev = max(
        float(np.abs(family.isometries[1].T @ Q @ family.isometries[0] - raw).max()),
        float(np.abs(family.isometries[0].T @ Q @ family.isometries[0] - raw).max()),
    )
    eigs = np.linalg.eigvalsh((raw + raw.T) / 2.0)
    min_eig = float(eigs.min()) if len(eigs) else 0.0
    return {
        "angle_deviation": float(deviation),
        "orthogonality_deviation": float(ortho_dev),
        "angle_identity_deviation": float(id_dev),
        "min_eigenvalue": min_eig,
        "ok": bool(ortho_dev <= tol and id_dev <= tol and min_eig >= -tol),
    }
