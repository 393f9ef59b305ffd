"""Construction of the Barnes-Wall lattice family from exponent profiles.

A profile is the integer vector (l_0, ..., l_m) with l_0 = 0 and each step
up by 0 or 1.  The lattice it defines lives in dimension N = 2^m and is
spanned by scaled characteristic vectors of coordinate subspaces of F_2^m;
the full affine generating set is available separately for cross-checks.

Coordinate convention: a point v of F_2^m is identified with the integer
0..2^m-1 whose bit i-1 is the coefficient of the i-th basis vector, and that
integer indexes the ambient coordinate.  So e_0 is ambient coordinate 0 and
the doubling maps of the recursion module become pure index arithmetic.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from math import comb

from .errors import ProfileError, RankDeficiencyError, SizeGuardError
from .exactlinalg import GramMatrix, IntegerLattice, IntVector, gram_product

GENERATOR_LIMIT = 200_000


@dataclass(frozen=True)
class LambdaProfile:
    """Exponent profile (l_0, ..., l_m) driving the generator scaling."""

    m: int
    lambdas: tuple[int, ...]

    def __post_init__(self):
        if self.m < 1:
            raise ProfileError("m must be >= 1")
        if len(self.lambdas) != self.m + 1:
            raise ProfileError(
                f"profile needs m+1 = {self.m + 1} entries, got {len(self.lambdas)}"
            )

    @property
    def last(self) -> int:
        return self.lambdas[self.m]


class NamedProfileKind(Enum):
    """The two distinguished profiles: floor(r/2) and floor((r+1)/2)."""

    LAMBDA_BW = "lambda"
    DELTA_BW = "delta"


def named_profile(kind: NamedProfileKind, m: int) -> LambdaProfile:
    if kind is NamedProfileKind.LAMBDA_BW:
        values = tuple(r // 2 for r in range(m + 1))
    else:
        values = tuple((r + 1) // 2 for r in range(m + 1))
    return LambdaProfile(m=m, lambdas=values)


def validate_profile(p: LambdaProfile) -> list[str]:
    """Return a list of violated constraints (empty list means valid)."""
    violations = []
    if p.lambdas[0] != 0:
        violations.append(f"l_0 = {p.lambdas[0]} != 0")
    for r in range(1, p.m + 1):
        lo, hi = p.lambdas[r] - 1, p.lambdas[r]
        if not lo <= p.lambdas[r - 1] <= hi:
            violations.append(
                f"l_{r-1} = {p.lambdas[r-1]} not in [l_{r}-1, l_{r}] = [{lo}, {hi}]"
            )
    for r, v in enumerate(p.lambdas):
        if v < 0:
            violations.append(f"l_{r} = {v} < 0")
    return violations


def require_valid(p: LambdaProfile) -> None:
    violations = validate_profile(p)
    if violations:
        raise ProfileError(
            "invalid profile " + str(p.lambdas) + ": " + "; ".join(violations),
            violations=violations,
        )


def enumerate_valid_profiles(m: int, max_last: int | None = None) -> list[LambdaProfile]:
    """All valid profiles for this m, optionally capped by the final entry."""
    out = []
    for steps in itertools.product((0, 1), repeat=m):
        values = [0]
        for s in steps:
            values.append(values[-1] + s)
        if max_last is not None and values[-1] > max_last:
            continue
        out.append(LambdaProfile(m=m, lambdas=tuple(values)))
    return out


def parse_profile_spec(spec: str) -> LambdaProfile:
    """Parse `0,0,1,1`, `lambda:4`, or `delta:4` into a profile (unvalidated)."""
    text = spec.strip().lower()
    if ":" in text:
        kind_text, _, m_text = text.partition(":")
        try:
            kind = NamedProfileKind(kind_text)
            m = int(m_text)
        except ValueError as exc:
            raise ProfileError(f"bad named profile spec {spec!r}") from exc
        if m < 1:
            raise ProfileError("named profiles need m >= 1")
        return named_profile(kind, m)
    try:
        values = tuple(int(t) for t in text.split(","))
    except ValueError as exc:
        raise ProfileError(f"bad profile spec {spec!r}") from exc
    if len(values) < 2:
        raise ProfileError("a profile needs at least two entries (m >= 1)")
    return LambdaProfile(m=len(values) - 1, lambdas=values)


@dataclass(frozen=True)
class CoordinateSubspace:
    """The span of a subset of the fixed F_2^m basis."""

    m: int
    index_set: frozenset[int]

    def __post_init__(self):
        if not self.index_set <= frozenset(range(1, self.m + 1)):
            raise ValueError("index set must be a subset of {1, ..., m}")

    @property
    def mask(self) -> int:
        out = 0
        for i in self.index_set:
            out |= 1 << (i - 1)
        return out


@dataclass(frozen=True)
class AffineSubspace:
    """shift + span(basis_masks) inside F_2^m, vectors encoded as bit masks."""

    m: int
    basis_masks: tuple[int, ...]
    shift: int = 0

    def points(self) -> list[int]:
        """All 2^dim points of the coset; raises if the basis is dependent."""
        if gf2_rank(self.basis_masks) != len(self.basis_masks):
            raise RankDeficiencyError("affine subspace basis is dependent over F_2")
        pts = [self.shift]
        for b in self.basis_masks:
            pts += [p ^ b for p in pts]
        return pts


def gf2_rank(masks) -> int:
    pivots: list[int] = []
    for v in masks:
        for p in pivots:
            v = min(v, v ^ p)
        if v:
            pivots.append(v)
    return len(pivots)


def characteristic_vector(U: AffineSubspace, m: int) -> IntVector:
    """The 0/1 ambient vector supported exactly on the points of U."""
    if U.m != m:
        raise ValueError("subspace does not live in the requested F_2^m")
    out = [0] * (1 << m)
    for p in U.points():
        out[p] = 1
    return tuple(out)


def _subcube_row(mask: int, coeff: int, n: int) -> tuple[int, ...]:
    # Coordinate-subspace characteristic vectors are subcube indicators:
    # support = every v with v & ~mask == 0.
    row = [0] * n
    v = 0
    while True:
        row[v] = coeff
        if v == mask:
            break
        v = (v - mask) & mask  # next subset of mask
    return tuple(row)


def build_lambda(p: LambdaProfile) -> IntegerLattice:
    """Basis lattice: one row 2^{l_{m-|I|}} x_span(I) per subset I of {1..m}.

    Rows are ordered by (|I| ascending, then I lexicographically as a sorted
    tuple), which makes the output reproducible bit for bit.
    """
    require_valid(p)
    m, n = p.m, 1 << p.m
    subsets = sorted(
        (tuple(sorted(I)) for r in range(m + 1)
         for I in itertools.combinations(range(1, m + 1), r)),
        key=lambda I: (len(I), I),
    )
    rows = []
    for I in subsets:
        mask = 0
        for i in I:
            mask |= 1 << (i - 1)
        coeff = 1 << p.lambdas[m - len(I)]
        rows.append(_subcube_row(mask, coeff, n))
    return IntegerLattice.from_rows(m, rows)


def generators_full(p: LambdaProfile, limit: int = GENERATOR_LIMIT) -> list[IntVector]:
    """The complete generating set over all affine subspaces of every dimension.

    This is the raw generator list (scaled characteristic vectors of all
    affine subspaces), used to cross-check that the square basis spans the
    same lattice.  Refuses to expand more than ``limit`` generators.
    """
    require_valid(p)
    m = p.m
    total = sum(_count_subspaces(m, r) * (1 << (m - r)) for r in range(m + 1))
    if total > limit:
        raise SizeGuardError(
            f"affine generator count {total} exceeds the limit {limit}"
        )
    out = []
    for r in range(m + 1):
        coeff = 1 << p.lambdas[m - r]
        for masks in _linear_subspace_bases(m, r):
            span = [0]
            for b in masks:
                span += [x ^ b for x in span]
            span_set = set(span)
            seen = set()
            for shift in range(1 << m):
                rep = min(shift ^ s for s in span_set)
                if rep in seen:
                    continue
                seen.add(rep)
                vec = [0] * (1 << m)
                for s in span_set:
                    vec[rep ^ s] = coeff
                out.append(tuple(vec))
    return out


def _count_subspaces(m: int, r: int) -> int:
    # Gaussian binomial [m choose r]_2.
    num = den = 1
    for i in range(r):
        num *= (1 << (m - i)) - 1
        den *= (1 << (r - i)) - 1
    return num // den


def _linear_subspace_bases(m: int, r: int):
    """One canonical basis (reduced echelon rows over F_2) per r-dim subspace."""
    if r == 0:
        yield ()
        return
    for pivots in itertools.combinations(range(m), r):
        free_positions = [
            [c for c in range(m) if c > pivots[i] and c not in pivots]
            for i in range(r)
        ]
        choices = [itertools.product((0, 1), repeat=len(fp)) for fp in free_positions]
        for assignment in itertools.product(*choices):
            masks = []
            for i in range(r):
                v = 1 << pivots[i]
                for bit, c in zip(assignment[i], free_positions[i]):
                    v |= bit << c
                masks.append(v)
            yield tuple(masks)


def profile_dual(p: LambdaProfile) -> LambdaProfile:
    """The dual profile l'_r = l_m - l_{m-r}; an involution on valid profiles."""
    require_valid(p)
    last = p.lambdas[p.m]
    return LambdaProfile(
        m=p.m, lambdas=tuple(last - p.lambdas[p.m - r] for r in range(p.m + 1))
    )


def predicted_det_exponent(p: LambdaProfile) -> int:
    """Exponent 2d of the Gram determinant, d = sum_r l_r * C(m, r)."""
    require_valid(p)
    return 2 * sum(p.lambdas[r] * comb(p.m, r) for r in range(p.m + 1))


def predicted_min_exponent(p: LambdaProfile) -> int:
    """Exponent a of the minimum 2^a: a = min_r (m - r + 2 l_r)."""
    require_valid(p)
    return min(p.m - r + 2 * p.lambdas[r] for r in range(p.m + 1))


def named_lattice(kind: NamedProfileKind, m: int) -> IntegerLattice:
    return build_lambda(named_profile(kind, m))


def lambda_bw(m: int) -> IntegerLattice:
    return named_lattice(NamedProfileKind.LAMBDA_BW, m)


def delta_bw(m: int) -> IntegerLattice:
    return named_lattice(NamedProfileKind.DELTA_BW, m)


def standard_lattice(m: int) -> IntegerLattice:
    """The unit cubic lattice of dimension 2^m (identity basis)."""
    n = 1 << m
    return IntegerLattice.from_rows(
        m, [[int(i == j) for j in range(n)] for i in range(n)]
    )


def rescale_exponent(m: int) -> int:
    """Gram scale of the conventionally normalized lattice of dimension 2^m."""
    if m < 2:
        raise ValueError("rescaling is defined for m >= 2")
    return (m - 1) // 2 if m % 2 else (m - 2) // 2


def rescaled_gram(m: int) -> GramMatrix:
    """Gram matrix of the normalized lattice: Gram(Lambda_m) / 2^s.

    s = (m-1)/2 for odd m and (m-2)/2 for even m.  Every scaled entry is an
    exact integer; a non-integral entry would indicate an internal bug.
    """
    s = rescale_exponent(m)
    raw = gram_product(lambda_bw(m).basis)
    if s == 0:
        return GramMatrix(entries=raw, scale=0)
    mask = (1 << s) - 1
    scaled = []
    for row in raw:
        if any(x & mask for x in row):
            raise RankDeficiencyError("rescaled Gram entry is not integral")
        scaled.append(tuple(x >> s for x in row))
    return GramMatrix(entries=tuple(scaled), scale=s)


def kissing_predicted(m: int) -> int:
    """Closed recursion for the minimal-vector count: 4, then *(2^m + 2)."""
    if m < 1:
        raise ValueError("m must be >= 1")
    s = 4
    for k in range(2, m + 1):
        s *= (1 << k) + 2
    return s
