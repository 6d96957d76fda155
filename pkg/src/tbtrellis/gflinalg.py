"""Exact linear algebra over prime fields GF(p).

Vectors are tuples of ints in ``[0, p)``; matrices are tuples of row tuples.
Every linear space handled by the package is a :class:`Subspace`, stored by
its reduced row-echelon basis, so two subspaces are equal exactly when their
stored bases are identical.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

Vector = tuple[int, ...]
Matrix = tuple[Vector, ...]

MAX_PRIME = 251


class FieldError(ValueError):
    pass


class DimensionError(ValueError):
    pass


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    return all(p % d for d in range(2, int(p**0.5) + 1))


@dataclass(frozen=True)
class FieldSpec:
    """The prime field GF(p)."""

    p: int = 2

    def __post_init__(self):
        if not isinstance(self.p, int) or not is_prime(self.p) or self.p > MAX_PRIME:
            raise FieldError(f"field size must be a prime <= {MAX_PRIME}, got {self.p!r}")

    def inv(self, x: int) -> int:
        x %= self.p
        if x == 0:
            raise ZeroDivisionError("0 has no inverse")
        return pow(x, self.p - 2, self.p)

    def vector(self, values: Iterable[int]) -> Vector:
        return tuple(int(v) % self.p for v in values)


def _inv(x: int, p: int) -> int:
    return pow(x, p - 2, p)


def _rref(rows: Iterable[Sequence[int]], p: int, ncols: int) -> tuple[list[list[int]], list[int]]:
    work = [[int(x) % p for x in r] for r in rows]
    for r in work:
        if len(r) != ncols:
            raise DimensionError(f"row of length {len(r)} in a matrix with {ncols} columns")
    pivots: list[int] = []
    top = 0
    for col in range(ncols):
        if top == len(work):
            break
        found = next((r for r in range(top, len(work)) if work[r][col]), None)
        if found is None:
            continue
        work[top], work[found] = work[found], work[top]
        lead = work[top][col]
        if lead != 1:
            f = _inv(lead, p)
            work[top] = [(x * f) % p for x in work[top]]
        prow = work[top]
        for r in range(len(work)):
            if r != top and work[r][col]:
                c = work[r][col]
                work[r] = [(x - c * y) % p for x, y in zip(work[r], prow)]
        pivots.append(col)
        top += 1
    return work[:top], pivots


def rref(rows: Iterable[Sequence[int]], p: int = 2, ncols: int | None = None) -> Matrix:
    """Reduced row-echelon form with zero rows removed.

    ``ncols`` is only needed when ``rows`` is empty.
    """
    rows = [tuple(r) for r in rows]
    if ncols is None:
        if not rows:
            raise DimensionError("ncols is required for an empty matrix")
        ncols = len(rows[0])
    reduced, _ = _rref(rows, p, ncols)
    return tuple(tuple(r) for r in reduced)


def rank(rows: Iterable[Sequence[int]], p: int = 2, ncols: int | None = None) -> int:
    return len(rref(rows, p, ncols))


@dataclass(frozen=True)
class Subspace:
    """A linear subspace of GF(p)^n held in canonical (RREF) form.

    The constructor accepts any spanning set and canonicalizes it, so
    ``Subspace(2, 3, [(1, 1, 0), (0, 1, 1)]) == Subspace(2, 3, [(1, 0, 1), (0, 1, 1)])``.
    """

    p: int
    n: int
    basis: Matrix = ()
    pivots: tuple[int, ...] = field(default=(), compare=False, repr=False)

    def __post_init__(self):
        if self.n < 0:
            raise DimensionError("negative ambient dimension")
        reduced, pivots = _rref(self.basis, self.p, self.n)
        object.__setattr__(self, "basis", tuple(tuple(r) for r in reduced))
        object.__setattr__(self, "pivots", tuple(pivots))

    # constructors -----------------------------------------------------

    @classmethod
    def zero(cls, n: int, p: int = 2) -> Subspace:
        return cls(p, n, ())

    @classmethod
    def full(cls, n: int, p: int = 2) -> Subspace:
        return cls(p, n, unit_vectors(n))

    @classmethod
    def span(cls, vectors: Iterable[Sequence[int]], n: int, p: int = 2) -> Subspace:
        return cls(p, n, tuple(tuple(v) for v in vectors))

    # basic queries ----------------------------------------------------

    @property
    def dim(self) -> int:
        return len(self.basis)

    def is_zero(self) -> bool:
        return not self.basis

    def is_full(self) -> bool:
        return self.dim == self.n

    def residual(self, v: Sequence[int]) -> Vector:
        """Reduce ``v`` against the basis; zero iff ``v`` lies in the subspace."""
        if len(v) != self.n:
            raise DimensionError(f"vector of length {len(v)} in ambient dimension {self.n}")
        p = self.p
        r = [int(x) % p for x in v]
        for row, col in zip(self.basis, self.pivots):
            c = r[col]
            if c:
                r = [(x - c * y) % p for x, y in zip(r, row)]
        return tuple(r)

    def contains(self, v: Sequence[int]) -> bool:
        return not any(self.residual(v))

    def __contains__(self, v) -> bool:
        return self.contains(v)

    def coordinates(self, v: Sequence[int]) -> Vector:
        """Coefficients of ``v`` in the stored basis (``v`` must lie in the subspace)."""
        if not self.contains(v):
            raise ValueError(f"{tuple(v)} is not in the subspace")
        return tuple(int(v[c]) % self.p for c in self.pivots)

    def combine(self, coeffs: Sequence[int]) -> Vector:
        p = self.p
        out = [0] * self.n
        for c, row in zip(coeffs, self.basis):
            if c:
                out = [(x + c * y) % p for x, y in zip(out, row)]
        return tuple(out)

    def elements(self) -> Iterator[Vector]:
        """All p**dim elements, in lexicographic order of basis coefficients."""
        for coeffs in itertools.product(range(self.p), repeat=self.dim):
            yield self.combine(coeffs)

    def _check_same(self, other: Subspace) -> None:
        if self.p != other.p or self.n != other.n:
            raise DimensionError(
                f"subspaces live in different spaces: GF({self.p})^{self.n} vs GF({other.p})^{other.n}"
            )

    def issubspace(self, other: Subspace) -> bool:
        self._check_same(other)
        return all(other.contains(r) for r in self.basis)

    def __le__(self, other: Subspace) -> bool:
        return self.issubspace(other)

    def __lt__(self, other: Subspace) -> bool:
        return self.issubspace(other) and self.dim < other.dim

    def __add__(self, other: Subspace) -> Subspace:
        return subspace_sum(self, other)

    def __and__(self, other: Subspace) -> Subspace:
        return intersect(self, other)

    def perp(self) -> Subspace:
        return orthogonal_complement(self)

    def project(self, cols: Sequence[int]) -> Subspace:
        """Image under the coordinate projection onto ``cols`` (in that order)."""
        return Subspace(self.p, len(cols), tuple(tuple(r[c] for c in cols) for r in self.basis))

    def image(self, matrix: Sequence[Sequence[int]], out_dim: int | None = None) -> Subspace:
        """Image under ``x -> matrix @ x`` (matrix has one row per output coordinate)."""
        if out_dim is None:
            out_dim = len(matrix)
        p = self.p
        rows = [tuple(sum(a * b for a, b in zip(mrow, r)) % p for mrow in matrix) for r in self.basis]
        return Subspace(p, out_dim, tuple(rows))

    def __repr__(self) -> str:
        rows = ", ".join("".join(str(x) for x in r) if self.p <= 10 else str(r) for r in self.basis)
        return f"Subspace(GF({self.p})^{self.n}: <{rows}>)"


def unit_vectors(n: int) -> Matrix:
    return tuple(tuple(1 if j == i else 0 for j in range(n)) for i in range(n))


def kernel(rows: Sequence[Sequence[int]], p: int = 2, ncols: int | None = None) -> Subspace:
    """Solution space ``{x : M x = 0}`` of the matrix with the given rows."""
    rows = [tuple(r) for r in rows]
    if ncols is None:
        if not rows:
            raise DimensionError("ncols is required for an empty matrix")
        ncols = len(rows[0])
    reduced, pivots = _rref(rows, p, ncols)
    pivset = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivset:
            continue
        v = [0] * ncols
        v[free] = 1
        for row, col in zip(reduced, pivots):
            v[col] = (-row[free]) % p
        basis.append(tuple(v))
    return Subspace(p, ncols, tuple(basis))


def orthogonal_complement(W: Subspace) -> Subspace:
    """``W^perp`` under the standard dot product."""
    return kernel(W.basis, W.p, W.n)


def subspace_sum(W1: Subspace, W2: Subspace) -> Subspace:
    W1._check_same(W2)
    return Subspace(W1.p, W1.n, W1.basis + W2.basis)


def intersect(W1: Subspace, W2: Subspace) -> Subspace:
    W1._check_same(W2)
    return orthogonal_complement(subspace_sum(orthogonal_complement(W1), orthogonal_complement(W2)))


def contains(W: Subspace, v: Sequence[int]) -> bool:
    return W.contains(v)


def extend_to_complement(v: Sequence[int], W: Subspace) -> Subspace:
    """A deterministic complement ``T`` of ``<v>`` inside ``W``.

    Write vectors of ``W`` in its RREF basis and let ``k`` be the first
    coordinate where ``v`` is nonzero.  ``T`` is the hyperplane of ``W`` on
    which the first ``k + 1`` coordinates sum to zero.  Since that sum is
    nonzero on ``v``, ``T (+) <v> = W``.  For ``v = (0, 1)`` in GF(2)^2 this
    yields ``<(1, 1)>``; for ``v = (1, 0)`` it yields ``<(0, 1)>``.
    """
    v = tuple(int(x) % W.p for x in v)
    if not any(v):
        raise ValueError("cannot complement the zero vector")
    if not W.contains(v):
        raise ValueError(f"{v} is not in {W}")
    coords = W.coordinates(v)
    k = next(i for i, c in enumerate(coords) if c)
    p = W.p
    lead = W.basis[k]
    rows = [tuple((x - y) % p for x, y in zip(W.basis[i], lead)) for i in range(k)]
    rows += list(W.basis[k + 1:])
    return Subspace(p, W.n, tuple(rows))


def quotient_map(n: int, Y: Subspace) -> Matrix:
    """Matrix of a surjection ``GF(p)^n -> GF(p)^(n - dim Y)`` with kernel ``Y``.

    A vector is reduced modulo ``Y`` (clearing ``Y``'s pivot positions) and
    the remaining non-pivot coordinates are its coset coordinates.
    """
    if Y.n != n:
        raise DimensionError(f"Y lives in dimension {Y.n}, not {n}")
    p = Y.p
    pivset = set(Y.pivots)
    free = [c for c in range(n) if c not in pivset]
    matrix = []
    for c in free:
        row = [0] * n
        row[c] = 1
        for yrow, piv in zip(Y.basis, Y.pivots):
            row[piv] = (row[piv] - yrow[c]) % p
        matrix.append(tuple(row))
    return tuple(matrix)


def apply(matrix: Sequence[Sequence[int]], v: Sequence[int], p: int) -> Vector:
    return tuple(sum(a * b for a, b in zip(row, v)) % p for row in matrix)


def direct_sum(*spaces: Subspace) -> Subspace:
    """Block-diagonal sum ``W1 x W2 x ...`` in the concatenated ambient space."""
    if not spaces:
        raise ValueError("need at least one space")
    p = spaces[0].p
    n = sum(s.n for s in spaces)
    rows = []
    offset = 0
    for s in spaces:
        for r in s.basis:
            rows.append((0,) * offset + r + (0,) * (n - offset - s.n))
        offset += s.n
    return Subspace(p, n, tuple(rows))
