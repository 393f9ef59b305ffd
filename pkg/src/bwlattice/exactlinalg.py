"""Exact integer and rational linear algebra for lattice work.

Everything here is arbitrary precision: Hermite normal form, fraction-free
determinants, membership tests, dual lattices, sublattice indices, and an
all-integer LLL reduction.  No floating point is used anywhere; results are
exact at every dimension this toolkit handles.

Matrices are immutable tuples of tuples of Python ints, row-major; each basis
vector is one row.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

from .errors import (
    ContainmentError,
    DimensionMismatchError,
    InternalCheckError,
    RankDeficiencyError,
    ScalingError,
)

IntMatrix = tuple[tuple[int, ...], ...]
IntVector = tuple[int, ...]


def as_matrix(rows: Iterable[Sequence[int]]) -> IntMatrix:
    """Freeze an iterable of rows into an IntMatrix, checking rectangularity."""
    frozen = tuple(tuple(int(x) for x in row) for row in rows)
    if not frozen:
        raise DimensionMismatchError("matrix must have at least one row")
    width = len(frozen[0])
    if width == 0 or any(len(r) != width for r in frozen):
        raise DimensionMismatchError("matrix rows must be nonempty and of equal length")
    return frozen


def identity_matrix(n: int) -> IntMatrix:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def transpose(M: IntMatrix) -> IntMatrix:
    return tuple(zip(*M))


def mat_mul(A: IntMatrix, B: IntMatrix) -> IntMatrix:
    if len(A[0]) != len(B):
        raise DimensionMismatchError("inner dimensions do not match")
    Bt = list(zip(*B))
    return tuple(
        tuple(sum(a * b for a, b in zip(row, col)) for col in Bt) for row in A
    )


def dot(v: Sequence[int], w: Sequence[int]) -> int:
    if len(v) != len(w):
        raise DimensionMismatchError("vector lengths differ")
    return sum(a * b for a, b in zip(v, w))


def gram_product(M: IntMatrix) -> IntMatrix:
    """M @ M^T: exact pairwise inner products of the rows."""
    rows = [list(r) for r in M]
    n = len(rows)
    out = [[0] * n for _ in range(n)]
    for i in range(n):
        ri = rows[i]
        for j in range(i + 1):
            s = dot(ri, rows[j])
            out[i][j] = s
            out[j][i] = s
    return tuple(tuple(r) for r in out)


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Extended gcd: returns (g, x, y) with g = gcd(a, b) = x*a + y*b, g >= 0."""
    x, nx = 1, 0
    y, ny = 0, 1
    g, ng = a, b
    while ng:
        q = g // ng
        x, nx = nx, x - q * nx
        y, ny = ny, y - q * ny
        g, ng = ng, g - q * ng
    if g < 0:
        x, y, g = -x, -y, -g
    return g, x, y


def hnf(M: IntMatrix) -> IntMatrix:
    """Row-style Hermite normal form.

    The result is upper triangular with positive pivots, and every entry above
    a pivot is reduced into [0, pivot).  The integer row span is preserved, so
    two generating sets span the same lattice iff their HNFs are identical.

    Requires full column rank (rank == number of columns); a rank-deficient
    input raises RankDeficiencyError.  Zero rows left over from a redundant
    generating set are dropped, so the output is always square.
    """
    A = [list(r) for r in M]
    nrows, ncols = len(A), len(A[0])
    if nrows < ncols:
        raise RankDeficiencyError(
            f"matrix with {nrows} rows cannot have full column rank {ncols}"
        )
    r = 0  # next pivot row
    for c in range(ncols):
        # Move a row with nonzero entry in column c up to position r.
        piv = next((i for i in range(r, nrows) if A[i][c]), None)
        if piv is None:
            raise RankDeficiencyError(f"no pivot available in column {c}")
        if piv != r:
            A[r], A[piv] = A[piv], A[r]
        # Fold every lower row into the pivot row via gcd transforms.
        for i in range(r + 1, nrows):
            if not A[i][c]:
                continue
            a, b = A[r][c], A[i][c]
            if b % a == 0:
                q = b // a
                Ai, Ar = A[i], A[r]
                for jj in range(c, ncols):
                    Ai[jj] -= q * Ar[jj]
            else:
                g, x, y = xgcd(a, b)
                ag, bg = a // g, b // g
                Ar, Ai = A[r], A[i]
                for jj in range(c, ncols):
                    u, v = Ar[jj], Ai[jj]
                    Ar[jj] = x * u + y * v
                    Ai[jj] = ag * v - bg * u
        if A[r][c] < 0:
            A[r] = [-v for v in A[r]]
        # Reduce the entries above the new pivot into [0, pivot).
        p = A[r][c]
        for i in range(r):
            q = A[i][c] // p
            if q:
                Ai, Ar = A[i], A[r]
                for jj in range(c, ncols):
                    Ai[jj] -= q * Ar[jj]
        r += 1
    return tuple(tuple(row) for row in A[:ncols])


def det_exact(M: IntMatrix) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    n = len(M)
    if any(len(r) != n for r in M):
        raise DimensionMismatchError("determinant requires a square matrix")
    A = [list(r) for r in M]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            piv = next((i for i in range(k + 1, n) if A[i][k]), None)
            if piv is None:
                return 0
            A[k], A[piv] = A[piv], A[k]
            sign = -sign
        akk = A[k][k]
        for i in range(k + 1, n):
            Ai, Ak = A[i], A[k]
            aik = Ai[k]
            for j in range(k + 1, n):
                Ai[j] = (Ai[j] * akk - aik * Ak[j]) // prev
            Ai[k] = 0
        prev = akk
    return sign * A[n - 1][n - 1]


def invert_rational(M: IntMatrix) -> tuple[tuple[Fraction, ...], ...]:
    """Exact inverse over the rationals (Gauss-Jordan with Fractions)."""
    n = len(M)
    if any(len(r) != n for r in M):
        raise DimensionMismatchError("inverse requires a square matrix")
    A = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(M)]
    for c in range(n):
        piv = next((i for i in range(c, n) if A[i][c]), None)
        if piv is None:
            raise RankDeficiencyError("matrix is singular")
        A[c], A[piv] = A[piv], A[c]
        inv = 1 / A[c][c]
        A[c] = [x * inv for x in A[c]]
        for i in range(n):
            if i != c and A[i][c]:
                f = A[i][c]
                A[i] = [x - f * y for x, y in zip(A[i], A[c])]
    return tuple(tuple(row[n:]) for row in A)


@dataclass(eq=False)
class IntegerLattice:
    """A full-rank lattice of dimension 2^m given by integer basis rows.

    ``gram_scale`` is a nonnegative dyadic exponent s: the true Gram matrix of
    the lattice is (B @ B^T) / 2^s, which must be integral.  All unscaled
    lattices use s = 0.
    """

    m: int
    dim: int
    basis: IntMatrix
    gram_scale: int = 0

    def __post_init__(self):
        if self.m < 1:
            raise DimensionMismatchError("m must be >= 1")
        if self.dim != 1 << self.m:
            raise DimensionMismatchError(f"dim {self.dim} != 2^{self.m}")
        self.basis = as_matrix(self.basis)
        if len(self.basis) != self.dim or len(self.basis[0]) != self.dim:
            raise DimensionMismatchError("basis must be square of size dim")
        if self.gram_scale < 0:
            raise ScalingError("gram_scale must be nonnegative")
        if self.basis_det == 0:
            raise RankDeficiencyError("basis is singular")

    @classmethod
    def from_rows(cls, m: int, rows: Iterable[Sequence[int]], gram_scale: int = 0):
        return cls(m=m, dim=1 << m, basis=as_matrix(rows), gram_scale=gram_scale)

    @cached_property
    def basis_det(self) -> int:
        return det_exact(self.basis)

    @cached_property
    def hnf_basis(self) -> IntMatrix:
        return hnf(self.basis)

    @cached_property
    def gram(self) -> IntMatrix:
        """The effective integer Gram matrix (B @ B^T) / 2^gram_scale."""
        raw = gram_product(self.basis)
        if self.gram_scale == 0:
            return raw
        s = self.gram_scale
        mask = (1 << s) - 1
        out = []
        for row in raw:
            scaled = []
            for x in row:
                if x & mask:
                    raise ScalingError(
                        f"Gram entry {x} not divisible by 2^{s}"
                    )
                scaled.append(x >> s)
            out.append(tuple(scaled))
        return tuple(out)

    def gram_det(self) -> int:
        return det_exact(self.gram)

    def norm_of(self, v: Sequence[int]) -> int:
        """Exact squared length of an ambient vector under this lattice's form."""
        raw = dot(v, v)
        if self.gram_scale:
            if raw & ((1 << self.gram_scale) - 1):
                raise ScalingError("vector norm is not divisible by the Gram scale")
            return raw >> self.gram_scale
        return raw


@dataclass(frozen=True)
class GramMatrix:
    """A symmetric integer matrix of pairwise inner products over 2^scale."""

    entries: IntMatrix
    scale: int = 0

    def __post_init__(self):
        n = len(self.entries)
        if any(len(r) != n for r in self.entries):
            raise DimensionMismatchError("Gram matrix must be square")
        for i in range(n):
            if self.entries[i][i] <= 0:
                raise InternalCheckError("Gram diagonal must be positive")
            for j in range(i):
                if self.entries[i][j] != self.entries[j][i]:
                    raise InternalCheckError("Gram matrix must be symmetric")

    def det(self) -> int:
        return det_exact(self.entries)


def contains(L: IntegerLattice, v: Sequence[int]) -> bool:
    """Exact membership: is v an integer combination of the basis rows?"""
    if len(v) != L.dim:
        raise DimensionMismatchError(f"vector length {len(v)} != dim {L.dim}")
    H = L.hnf_basis
    n = L.dim
    coeffs = [0] * n
    for j in range(n):
        acc = v[j]
        for i in range(j):
            acc -= coeffs[i] * H[i][j]
        p = H[j][j]
        if acc % p:
            return False
        coeffs[j] = acc // p
    return True


def solve_coefficients(L: IntegerLattice, v: Sequence[int]) -> tuple[Fraction, ...]:
    """Coordinates of v in the basis of L, as exact rationals."""
    if len(v) != L.dim:
        raise DimensionMismatchError(f"vector length {len(v)} != dim {L.dim}")
    inv = invert_rational(L.basis)
    # Row vector times B^{-1}: coordinates c with c @ B = v.
    return tuple(
        sum(Fraction(v[i]) * inv[i][j] for i in range(L.dim)) for j in range(L.dim)
    )


def lattice_equal(L1: IntegerLattice, L2: IntegerLattice) -> bool:
    """True iff the integer row spans coincide (canonical HNF comparison)."""
    if L1.dim != L2.dim:
        raise DimensionMismatchError("lattices live in different dimensions")
    return L1.hnf_basis == L2.hnf_basis


def sublattice_index(outer: IntegerLattice, inner: IntegerLattice) -> int:
    """Exact index [outer : inner]; requires inner to be a sublattice of outer."""
    if outer.dim != inner.dim:
        raise DimensionMismatchError("lattices live in different dimensions")
    for row in inner.basis:
        if not contains(outer, row):
            raise ContainmentError(
                "inner basis row is not contained in the outer lattice",
                witness=row,
            )
    quotient, rem = divmod(abs(inner.basis_det), abs(outer.basis_det))
    if rem:
        raise InternalCheckError("index is not integral despite containment")
    return quotient


def scale_lattice(L: IntegerLattice, c: int) -> IntegerLattice:
    """The lattice c * L (all basis rows multiplied by the integer c)."""
    if c == 0:
        raise RankDeficiencyError("scaling by zero collapses the lattice")
    return IntegerLattice.from_rows(
        L.m, [[c * x for x in row] for row in L.basis], L.gram_scale
    )


def dual_scaled(L: IntegerLattice, e: int) -> IntegerLattice:
    """The scaled dual 2^e * L^#, which must have an integer basis.

    The dual basis is the inverse transpose of the primal basis; scaling by
    2^e must clear every denominator, otherwise a ScalingError reports the
    first offending entry together with its 2-adic valuation.
    """
    inv = invert_rational(L.basis)
    rows = []
    factor = 1 << e if e >= 0 else Fraction(1, 1 << (-e))
    for j in range(L.dim):  # row j of the dual basis = column j of B^{-1}
        row = []
        for i in range(L.dim):
            val = inv[i][j] * factor
            if val.denominator != 1:
                den = val.denominator
                two_val = (den & -den).bit_length() - 1
                raise ScalingError(
                    f"dual entry ({j},{i}) = {inv[i][j]} * 2^{e} is not integral: "
                    f"denominator has 2-valuation {two_val}"
                )
            row.append(int(val))
        rows.append(row)
    return IntegerLattice.from_rows(L.m, rows, L.gram_scale)


def ff_gram_schmidt(G: IntMatrix) -> tuple[list[list[int]], list[int]]:
    """Fraction-free Gram-Schmidt data of a positive-definite Gram matrix.

    Returns (lam, D) where D[0] = 1, D[i+1] is the leading principal i+1
    minor of G, and lam[i][j] = D[j+1] * mu_ij for the rational Gram-Schmidt
    coefficients mu_ij (i > j).  All divisions in the recurrence are exact.
    """
    n = len(G)
    lam = [[0] * n for _ in range(n)]
    D = [1] * (n + 1)
    for i in range(n):
        for j in range(i + 1):
            u = G[i][j]
            for k in range(j):
                u = (D[k + 1] * u - lam[i][k] * lam[j][k]) // D[k]
            if j < i:
                lam[i][j] = u
            else:
                if u <= 0:
                    raise RankDeficiencyError(
                        "Gram matrix is not positive definite"
                    )
                D[i + 1] = u
    return lam, D


def lll_reduce(
    L: IntegerLattice,
    delta: Fraction = Fraction(3, 4),
    verify: bool = False,
) -> IntegerLattice:
    """All-integer LLL reduction of the lattice basis.

    Returns a new IntegerLattice spanning the same lattice whose basis
    satisfies the size condition |mu_ij| <= 1/2 and the Lovasz condition with
    parameter ``delta`` under exact rational Gram-Schmidt.  With
    ``verify=True`` the row span is re-checked by canonical HNF comparison.
    """
    delta = Fraction(delta)
    if not Fraction(1, 4) < delta < 1:
        raise ValueError("delta must lie strictly between 1/4 and 1")
    p, q = delta.numerator, delta.denominator

    n = L.dim
    s = L.gram_scale
    mask = (1 << s) - 1 if s else 0
    B = [list(row) for row in L.basis]

    def ip(u, v):
        raw = dot(u, v)
        if s:
            if raw & mask:
                raise ScalingError("inner product not divisible by Gram scale")
            return raw >> s
        return raw

    lam = [[0] * n for _ in range(n)]
    D = [1] * (n + 1)
    D[1] = ip(B[0], B[0])
    if D[1] <= 0:
        raise RankDeficiencyError("basis contains a zero row")

    def redi(k, l):
        # Size-reduce row k against row l: after this 2|lam[k][l]| <= D[l+1].
        if 2 * abs(lam[k][l]) > D[l + 1]:
            r = (2 * lam[k][l] + D[l + 1]) // (2 * D[l + 1])
            Bk, Bl = B[k], B[l]
            for jj in range(n):
                Bk[jj] -= r * Bl[jj]
            lam[k][l] -= r * D[l + 1]
            for i in range(l):
                lam[k][i] -= r * lam[l][i]

    def swapi(k, kmax):
        B[k], B[k - 1] = B[k - 1], B[k]
        for j in range(k - 1):
            lam[k][j], lam[k - 1][j] = lam[k - 1][j], lam[k][j]
        lam_k = lam[k][k - 1]
        newD = (D[k - 1] * D[k + 1] + lam_k * lam_k) // D[k]
        for i in range(k + 1, kmax + 1):
            t = lam[i][k]
            lam[i][k] = (D[k + 1] * lam[i][k - 1] - lam_k * t) // D[k]
            lam[i][k - 1] = (newD * t + lam_k * lam[i][k]) // D[k + 1]
        D[k] = newD

    k = 1
    kmax = 0
    while k < n:
        if k > kmax:
            kmax = k
            for j in range(k + 1):
                u = ip(B[k], B[j])
                for i in range(j):
                    u = (D[i + 1] * u - lam[k][i] * lam[j][i]) // D[i]
                if j < k:
                    lam[k][j] = u
                else:
                    if u <= 0:
                        raise RankDeficiencyError("basis is not full rank")
                    D[k + 1] = u
        redi(k, k - 1)
        if q * D[k + 1] * D[k - 1] < p * D[k] * D[k] - q * lam[k][k - 1] ** 2:
            swapi(k, kmax)
            k = max(k - 1, 1)
        else:
            for l in range(k - 2, -1, -1):
                redi(k, l)
            k += 1

    reduced = IntegerLattice.from_rows(L.m, B, L.gram_scale)
    if verify and not lattice_equal(L, reduced):
        raise InternalCheckError("LLL changed the lattice span")
    return reduced


def write_basis_file(L: IntegerLattice, path) -> None:
    """Write `m N s` then the N basis rows as space-separated integers."""
    lines = [f"{L.m} {L.dim} {L.gram_scale}"]
    lines.extend(" ".join(str(x) for x in row) for row in L.basis)
    with open(path, "w", encoding="ascii") as fh:
        fh.write("\n".join(lines) + "\n")


def read_basis_file(path) -> IntegerLattice:
    with open(path, "r", encoding="ascii") as fh:
        tokens = fh.read().split("\n")
    header = tokens[0].split()
    if len(header) != 3:
        raise ValueError("basis file header must be `m N s`")
    m, dim, s = (int(t) for t in header)
    rows = []
    for line in tokens[1 : dim + 1]:
        rows.append([int(t) for t in line.split()])
    lat = IntegerLattice.from_rows(m, rows, s)
    if lat.dim != dim:
        raise DimensionMismatchError("header dimension does not match 2^m")
    return lat
