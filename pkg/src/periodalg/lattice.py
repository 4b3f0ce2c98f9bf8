"""Integer lattices over the coordinate space of a radical basis.

A point v represents the real number sum(v[i] * sqrt(d_i)).  Because
square roots of distinct squarefree integers are linearly independent
over Q, that map is injective, so lattice questions about the numbers
(membership, intersection of domains) reduce to integer linear algebra
on coordinates.  Canonical form is the Hermite normal form of the
generator matrix, computed with exact integer arithmetic.

`classify_group` settles the structure of a finitely generated group of
real periods: pairwise commensurable generators span a discrete group
T0*Z with T0 an explicit gcd, anything else is dense.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import gcd
from typing import Iterable, Sequence

from .errors import DimensionMismatch, DivisionByZero, EmptyInput
from .exactreal import ExactReal, RadicalBasis, commensurable

Vector = tuple[int, ...]


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """(g, s, t) with g = gcd(a,b) = s*a + t*b, g >= 0."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def _hnf_with_transform(
    rows: Sequence[Sequence[int]], width: int
) -> tuple[list[list[int]], list[list[int]], int]:
    """Row-style HNF of the matrix whose rows are `rows`.

    Returns (H, U, rank) with U unimodular, U @ rows == H, the first
    `rank` rows of H in echelon form with positive pivots and entries
    above each pivot reduced into [0, pivot), and all later rows zero.
    Rows of U opposite the zero rows of H form a basis of the left
    kernel, which is what `intersect` consumes.
    """
    m = len(rows)
    a = [list(map(int, r)) for r in rows]
    u = [[1 if i == j else 0 for j in range(m)] for i in range(m)]
    rank = 0
    for col in range(width):
        pivot = None
        for i in range(rank, m):
            if a[i][col]:
                pivot = i
                break
        if pivot is None:
            continue
        a[rank], a[pivot] = a[pivot], a[rank]
        u[rank], u[pivot] = u[pivot], u[rank]
        for i in range(rank + 1, m):
            if not a[i][col]:
                continue
            g, s, t = _xgcd(a[rank][col], a[i][col])
            ar, ai = a[rank][col] // g, a[i][col] // g
            a[rank], a[i] = (
                [s * x + t * y for x, y in zip(a[rank], a[i])],
                [-ai * x + ar * y for x, y in zip(a[rank], a[i])],
            )
            u[rank], u[i] = (
                [s * x + t * y for x, y in zip(u[rank], u[i])],
                [-ai * x + ar * y for x, y in zip(u[rank], u[i])],
            )
        if a[rank][col] < 0:
            a[rank] = [-x for x in a[rank]]
            u[rank] = [-x for x in u[rank]]
        p = a[rank][col]
        for i in range(rank):
            q = a[i][col] // p
            if q:
                a[i] = [x - q * y for x, y in zip(a[i], a[rank])]
                u[i] = [x - q * y for x, y in zip(u[i], u[rank])]
        rank += 1
    return a, u, rank


class CoeffLattice:
    """Sublattice of Z^k given by integer generators, canonicalized by HNF.

    `basis` ties coordinate i to radicand d_i; it may be omitted for
    purely combinatorial use, in which case only coordinate operations
    are available.
    """

    __slots__ = ("basis", "generators", "hnf", "_pivots", "_dim")

    def __init__(
        self,
        generators: Iterable[Sequence[int]],
        basis: RadicalBasis | None = None,
        dim: int | None = None,
    ):
        gens = [tuple(int(x) for x in g) for g in generators]
        gens = [g for g in gens if any(g)]
        if basis is not None:
            k = len(basis)
        elif dim is not None:
            k = dim
        elif gens:
            k = len(gens[0])
        else:
            raise ValueError("dimension of an empty lattice must be given")
        for g in gens:
            if len(g) != k:
                raise DimensionMismatch(f"generator {g} has length {len(g)}, want {k}")
        h, _, rank = _hnf_with_transform(gens, k)
        self.basis = basis
        self.generators: tuple[Vector, ...] = tuple(gens)
        self.hnf: tuple[Vector, ...] = tuple(tuple(r) for r in h[:rank])
        self._pivots: tuple[int, ...] = tuple(
            next(j for j, x in enumerate(row) if x) for row in self.hnf
        )
        self._dim = k

    @property
    def dim(self) -> int:
        return self._dim

    @property
    def rank(self) -> int:
        return len(self.hnf)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, CoeffLattice)
            and self.basis == other.basis
            and self.hnf == other.hnf
        )

    def __hash__(self) -> int:
        return hash((self.basis, self.hnf))

    def __repr__(self) -> str:
        rows = ", ".join(str(list(r)) for r in self.hnf)
        return f"CoeffLattice[{rows}]"

    def __contains__(self, v: Sequence[int]) -> bool:
        return member(self, v)

    def to_real(self, v: Sequence[int]) -> ExactReal:
        """The real number a coordinate vector stands for."""
        if self.basis is None:
            raise ValueError("lattice carries no radical basis")
        if len(v) != len(self.basis):
            raise DimensionMismatch(f"vector length {len(v)}, want {len(self.basis)}")
        return ExactReal(
            self.basis, {d: int(c) for d, c in zip(self.basis.radicands, v)}
        )

    def embed(self, basis: RadicalBasis) -> "CoeffLattice":
        """Re-express over a larger basis, zero-filling new coordinates."""
        if self.basis is None:
            raise ValueError("lattice carries no radical basis")
        if self.basis == basis:
            return self
        pos = {d: basis.index(d) for d in self.basis.radicands}
        gens = []
        for g in self.hnf:
            w = [0] * len(basis)
            for d, c in zip(self.basis.radicands, g):
                w[pos[d]] = c
            gens.append(tuple(w))
        return CoeffLattice(gens, basis=basis)


def hnf(
    generators: Iterable[Sequence[int]],
    basis: RadicalBasis | None = None,
    dim: int | None = None,
) -> CoeffLattice:
    """Canonicalize a generator list into a CoeffLattice."""
    return CoeffLattice(generators, basis=basis, dim=dim)


def member(lat: CoeffLattice, v: Sequence[int]) -> bool:
    """Exact membership by forward elimination against the HNF rows."""
    k = lat.dim
    if len(v) != k:
        raise DimensionMismatch(f"vector length {len(v)}, want {k}")
    w = [int(x) for x in v]
    for row, j in zip(lat.hnf, lat._pivots):
        if w[j] % row[j]:
            return False
        q = w[j] // row[j]
        if q:
            w = [x - q * y for x, y in zip(w, row)]
    return not any(w)


def intersect(lat1: CoeffLattice, lat2: CoeffLattice) -> CoeffLattice:
    """Exact intersection via the left kernel of the stacked generators.

    (u, v) with u*A - v*B = 0 enumerates exactly the points u*A common
    to both lattices, so the kernel rows of [[A], [-B]] project to a
    generating set of the intersection.
    """
    if lat1.basis is not None and lat2.basis is not None:
        merged = lat1.basis.merge(lat2.basis)
        lat1 = lat1.embed(merged)
        lat2 = lat2.embed(merged)
        basis = merged
    else:
        if lat1.dim != lat2.dim:
            raise DimensionMismatch(
                f"lattice dimensions differ: {lat1.dim} vs {lat2.dim}"
            )
        basis = lat1.basis or lat2.basis
    k = lat1.dim
    a = [list(r) for r in lat1.hnf]
    b = [list(r) for r in lat2.hnf]
    if not a or not b:
        return CoeffLattice([], basis=basis, dim=k)
    stacked = a + [[-x for x in row] for row in b]
    h, u, rank = _hnf_with_transform(stacked, k)
    points = []
    for i in range(rank, len(stacked)):
        coeffs = u[i][: len(a)]
        point = [0] * k
        for c, row in zip(coeffs, a):
            for j in range(k):
                point[j] += c * row[j]
        points.append(tuple(point))
    return CoeffLattice(points, basis=basis, dim=k)


@dataclass(frozen=True)
class Discrete:
    """The periods generate T0 * Z with T0 > 0."""

    T0: ExactReal


@dataclass(frozen=True)
class Dense:
    """The periods generate a dense subgroup of the reals."""


def _frac_gcd(a: Fraction, b: Fraction) -> Fraction:
    return Fraction(
        gcd(a.numerator * b.denominator, b.numerator * a.denominator),
        a.denominator * b.denominator,
    )


def classify_group(periods: Sequence[ExactReal]) -> Discrete | Dense:
    """Structure of the additive group generated by the given reals.

    All pairwise ratios rational: the group is r*Z for r the gcd of the
    ratios against a reference element, returned positive.  Any single
    irrational ratio already forces density (two incommensurable
    generators wrap around every interval), so checking against one
    reference settles all pairs.
    """
    periods = list(periods)
    if not periods:
        raise EmptyInput("classify_group needs at least one period")
    for t in periods:
        if t.is_zero():
            raise DivisionByZero("zero period")
    ref = periods[0]
    ratios = []
    for t in periods:
        r = commensurable(t, ref)
        if r is None:
            return Dense()
        ratios.append(r)
    g = reduce(_frac_gcd, ratios)
    t0 = ref.scale(g)
    if t0.sign() < 0:
        t0 = -t0
    return Discrete(t0)
