"""Exact cochain cohomology of a truncated semi-cosimplicial set.

The coboundary out of level n is the alternating sum of the cofaces,

    d^n = sum_{i=0}^{n+1} (-1)^{n+1-i} delta_i      (n >= -1),

with the top coface the inclusion and d^{-2} = 0 on the zero space below the
bottom level.  All arithmetic is exact over the rationals: cocycle and
coboundary dimensions are rank computations, where a floating tolerance could
manufacture or destroy cohomology.

Levels -1..N-1 of a level-N truncation carry full information (both the
kernel of d^k and the image of d^{k-1} are computable); at level N only the
coboundaries are known, and the report flags that entry instead of guessing a
kernel.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import PreconditionError
from .linalg import (
    Matrix,
    primitive,
    subspace_equal,
    subspace_intersection,
    subspace_leq,
)
from .scs import TruncatedSCS


@dataclass
class CochainComplex:
    """Coboundary matrices of a truncated structure.

    bases[n] is the ordered element basis of the level-n cochain space
    (elements of level <= n, sorted by level then id); matrices[n] is d^n as a
    matrix from bases[n] to bases[n+1], for n = -1..N-1.
    """

    scs: TruncatedSCS
    bases: dict
    matrices: dict

    def basis(self, n: int):
        return self.bases.get(n, [])

    def coboundary(self, n: int) -> Matrix:
        """d^n for -2 <= n <= N-1 (the zero map below the bottom level)."""
        if n == -2:
            return Matrix.zeros(len(self.basis(-1)), 0)
        return self.matrices[n]


def build_complex(scs: TruncatedSCS) -> CochainComplex:
    """Assemble the coboundary matrices; entries are small integers obtained
    by summing signs over coface collisions."""
    N = scs.max_level
    bases = {}
    for n in range(-1, N + 1):
        bases[n] = sorted(scs.X(n), key=lambda x: (scs.levels[x], x))
    matrices = {}
    for n in range(-1, N):
        src = bases[n]
        dst = bases[n + 1]
        index = {x: r for r, x in enumerate(dst)}
        mat = [[Fraction(0)] * len(src) for _ in dst]
        for c, x in enumerate(src):
            for i in range(0, n + 2):
                target = scs.alpha(i, x)
                sign = (-1) ** (n + 1 - i)
                mat[index[target]][c] += sign
        matrices[n] = Matrix(mat, ncols=len(src))
    cx = CochainComplex(scs, bases, matrices)
    for n in range(-1, N - 1):
        if not (cx.matrices[n + 1] * cx.matrices[n]).is_zero():
            raise AssertionError(f"coboundary composition d^{n + 1} d^{n} != 0")
    return cx


def extended_coboundary(scs: TruncatedSCS, n: int, vec: dict) -> dict:
    """d^n as an operator on formal element combinations.

    ``vec`` maps element ids to coefficients; every element must have level
    <= N-1 so that all shifts are evaluable.
    """
    out = {}
    for x, coeff in vec.items():
        if coeff == 0:
            continue
        for i in range(0, n + 2):
            target = scs.alpha(i, x)
            sign = (-1) ** (n + 1 - i)
            out[target] = out.get(target, Fraction(0)) + sign * coeff
    return {x: c for x, c in out.items() if c != 0}


@dataclass
class LevelCohomology:
    level: int
    dim_space: int
    dim_cocycles: int | None
    dim_coboundaries: int
    dim_cohomology: int | None
    kernel_known: bool
    cocycle_basis: list
    coboundary_basis: list

    def to_dict(self, name=str):
        return {
            "level": self.level,
            "dim_space": self.dim_space,
            "dim_cocycles": self.dim_cocycles,
            "dim_coboundaries": self.dim_coboundaries,
            "dim_cohomology": self.dim_cohomology,
            "kernel_known": self.kernel_known,
            "cocycle_basis": self.cocycle_basis,
            "coboundary_basis": self.coboundary_basis,
        }


@dataclass
class CohomologyReport:
    levels: list
    truncation_caveats: list

    def level(self, k: int) -> LevelCohomology:
        for entry in self.levels:
            if entry.level == k:
                return entry
        raise KeyError(k)

    def to_dict(self):
        return {
            "levels": [lv.to_dict() for lv in self.levels],
            "truncation_caveats": self.truncation_caveats,
        }


def _basis_vectors(mat: Matrix):
    return [list(map(str, primitive(col))) for col in mat.columns()]


def cohomology(cx: CochainComplex) -> CohomologyReport:
    """Exact cocycle/coboundary/cohomology dimensions with rational bases."""
    N = cx.scs.max_level
    levels = []
    caveats = []
    for k in range(-1, N + 1):
        dim = len(cx.basis(k))
        bound = cx.coboundary(k - 1).column_space_basis()
        if k <= N - 1:
            cyc = cx.coboundary(k).kernel()
            if not subspace_leq(bound.columns(), cyc.columns()):
                raise AssertionError(f"coboundaries not inside cocycles at level {k}")
            entry = LevelCohomology(
                level=k,
                dim_space=dim,
                dim_cocycles=cyc.ncols,
                dim_coboundaries=bound.ncols,
                dim_cohomology=cyc.ncols - bound.ncols,
                kernel_known=True,
                cocycle_basis=_basis_vectors(cyc),
                coboundary_basis=_basis_vectors(bound),
            )
        else:
            caveats.append(
                f"level {k}: kernel of d^{k} needs data beyond the truncation; "
                "coboundaries only"
            )
            entry = LevelCohomology(
                level=k,
                dim_space=dim,
                dim_cocycles=None,
                dim_coboundaries=bound.ncols,
                dim_cohomology=None,
                kernel_known=False,
                cocycle_basis=[],
                coboundary_basis=_basis_vectors(bound),
            )
        levels.append(entry)
    return CohomologyReport(levels, caveats)


def _innovation_shift_violations(scs: TruncatedSCS, up_to: int):
    """Levels l <= up_to where some shift fails to map D_l into D_{l+1}."""
    D = scs.innovation_sets()
    bad = []
    for l in range(0, min(up_to, scs.max_level - 1) + 1):
        for x in sorted(D[l]):
            if any(scs.levels[scs.alpha(i, x)] != l + 1 for i in range(0, l + 1)):
                bad.append(l)
                break
    return bad


def explicit_cocycles(scs: TruncatedSCS, k: int, cx: CochainComplex | None = None):
    """Closed-form cocycle basis at level k for structures whose innovations
    shift below k.

    The basis consists of (id - d^{l-1}) applied to the innovations at the
    levels l < k of opposite parity; its span is cross-checked against the
    elimination kernel of d^k and the call fails loudly on any mismatch.
    Returns primitive coefficient vectors over the level-k element basis.
    """
    N = scs.max_level
    if not (0 <= k <= N - 1):
        raise PreconditionError(f"explicit cocycles need 0 <= k <= {N - 1}, got {k}")
    bad = _innovation_shift_violations(scs, k)
    if bad:
        raise PreconditionError(
            f"innovations do not shift at levels {bad}; the closed form does not apply"
        )
    cx = cx or build_complex(scs)
    basis_k = cx.basis(k)
    index = {x: r for r, x in enumerate(basis_k)}
    D = scs.innovation_sets()
    vectors = []
    for l in range(-1, k):
        if (k - l) % 2 == 0:
            continue
        for d in sorted(D[l]):
            vec = {d: Fraction(1)}
            if l >= 0:
                image = extended_coboundary(scs, l - 1, {d: Fraction(1)})
                for x, c in image.items():
                    vec[x] = vec.get(x, Fraction(0)) - c
            col = [Fraction(0)] * len(basis_k)
            for x, c in vec.items():
                col[index[x]] = c
            vectors.append(primitive(tuple(col)))
    kernel = cx.coboundary(k).kernel().columns()
    if not subspace_equal(vectors, kernel):
        raise AssertionError(
            f"closed-form cocycles at level {k} do not span the elimination kernel"
        )
    return vectors


@dataclass
class CocycleIdentityReport:
    checks: list  # (name, level-info, ok)
    failures: list

    @property
    def ok(self):
        return not self.failures

    def to_dict(self):
        return {"ok": self.ok, "checks": self.checks, "failures": self.failures}


def check_cocycle_identities(scs: TruncatedSCS) -> CocycleIdentityReport:
    """Verify the general cocycle identities as exact subspace statements.

    Checked at every computable level: cocycles meeting a lower cochain space
    are coboundaries there; the two-step identity d^k(x) = x - d^{l-1}(x) or
    d^{l-1}(x) for x at level l (parity of k-l); stability of cocycles two
    levels up; and the fixed-point description x = d^{k-1}(x) of cocycles.
    """
    N = scs.max_level
    cx = build_complex(scs)
    checks = []
    failures = []

    def record(name, info, ok):
        checks.append({"check": name, **info, "ok": ok})
        if not ok:
            failures.append({"check": name, **info})

    def embed(vec_cols, src_level, dst_level):
        """Coefficient vectors over basis(src) written over basis(dst)."""
        src = cx.basis(src_level)
        dst = cx.basis(dst_level)
        index = {x: r for r, x in enumerate(dst)}
        out = []
        for col in vec_cols:
            v = [Fraction(0)] * len(dst)
            for x, c in zip(src, col):
                v[index[x]] = c
            out.append(tuple(v))
        return out

    for k in range(0, N):
        Z_k = cx.coboundary(k).kernel().columns()
        B_k = cx.coboundary(k - 1).column_space_basis().columns()
        # the lower cochain space sits inside the level-k one on coordinates
        lower = [x for x in cx.basis(k) if scs.levels[x] <= k - 1]
        coords = {x: r for r, x in enumerate(cx.basis(k))}
        lower_cols = []
        for x in lower:
            v = [Fraction(0)] * len(cx.basis(k))
            v[coords[x]] = Fraction(1)
            lower_cols.append(tuple(v))
        zc = subspace_intersection(Z_k, lower_cols)
        bc = subspace_intersection(B_k, lower_cols)
        record(
            "cocycles-meet-lower-equals-coboundaries-meet-lower",
            {"level": k},
            subspace_equal(zc, bc),
        )
        # fixed-point description of cocycles: x in ker d^k iff x = d^{k-1} x
        ok_fp = True
        for col in Z_k:
            vec = {x: c for x, c in zip(cx.basis(k), col) if c}
            img = extended_coboundary(scs, k - 1, vec)
            if img != vec:
                ok_fp = False
        record("cocycles-are-coboundary-fixed-points", {"level": k}, ok_fp)

    # two-step evaluation d^k on lower-level cochains
    for k in range(-1, N):
        for l in range(-1, k + 1):
            ok = True
            for x in cx.basis(l):
                if scs.levels[x] > N - 1:
                    continue
                vec = {x: Fraction(1)}
                lhs = extended_coboundary(scs, k, vec)
                low = extended_coboundary(scs, l - 1, vec)
                if (k - l) % 2 == 0:
                    rhs = dict(vec)
                    for y, c in low.items():
                        rhs[y] = rhs.get(y, Fraction(0)) - c
                    rhs = {y: c for y, c in rhs.items() if c}
                else:
                    rhs = low
                if lhs != rhs:
                    ok = False
            record("two-step-coboundary", {"k": k, "l": l}, ok)

    # cocycles two levels up restrict to the same cocycles
    for k in range(0, N - 2):
        Z_k = cx.coboundary(k).kernel().columns()
        Z_k2 = cx.coboundary(k + 2).kernel().columns()
        lower = [x for x in cx.basis(k + 2) if scs.levels[x] <= k]
        coords = {x: r for r, x in enumerate(cx.basis(k + 2))}
        lower_cols = []
        for x in lower:
            v = [Fraction(0)] * len(cx.basis(k + 2))
            v[coords[x]] = Fraction(1)
            lower_cols.append(tuple(v))
        meet = subspace_intersection(Z_k2, lower_cols)
        lifted = embed(Z_k, k, k + 2)
        record("cocycle-stability-two-up", {"level": k}, subspace_equal(meet, lifted))

    return CocycleIdentityReport(checks, failures)
