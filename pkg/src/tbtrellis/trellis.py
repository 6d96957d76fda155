"""Linear tail-biting trellises: data model, behavior, code, product construction.

A trellis on ``m`` sections has state spaces ``S_0 .. S_{m-1}`` (``S_m = S_0``),
symbol alphabets ``A_0 .. A_{m-1}`` and constraint codes
``C_i <= S_i x A_i x S_{i+1}``.  Branch coordinates are always laid out as
``(s_i | a_i | s_{i+1})``; behavior coordinates as ``(a_0..a_{m-1} | s_0..s_{m-1})``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .gflinalg import FieldSpec, Subspace, Vector, direct_sum, kernel, orthogonal_complement, rank


class TrellisError(ValueError):
    """Malformed trellis or inputs that do not fit a trellis layout."""


@dataclass(frozen=True)
class CircularSpan:
    """The circular interval ``start, start+1, ..., stop`` of ``Z_m`` (inclusive)."""

    start: int
    stop: int

    def length(self, m: int) -> int:
        return (self.stop - self.start) % m + 1

    def sections(self, m: int) -> list[int]:
        return [(self.start + k) % m for k in range(self.length(m))]

    def interior_boundaries(self, m: int) -> set[int]:
        """State times strictly inside the span.

        These are ``start+1, ..., stop``; for a span covering all ``m``
        sections that is every time except ``start``.
        """
        return {(self.start + k) % m for k in range(1, self.length(m))}

    def __str__(self) -> str:
        return f"{self.start}..{self.stop}"


@dataclass(frozen=True)
class Trellis:
    p: int
    symbol_dims: tuple[int, ...]
    state_dims: tuple[int, ...]
    constraints: tuple[Subspace, ...]
    sign_flags: tuple[bool, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "symbol_dims", tuple(self.symbol_dims))
        object.__setattr__(self, "state_dims", tuple(self.state_dims))
        object.__setattr__(self, "constraints", tuple(self.constraints))
        flags = tuple(bool(f) for f in self.sign_flags) or (False,) * len(self.state_dims)
        object.__setattr__(self, "sign_flags", flags)

    @property
    def m(self) -> int:
        return len(self.state_dims)

    @property
    def field(self) -> FieldSpec:
        return FieldSpec(self.p)

    def layout(self, i: int) -> tuple[int, int, int]:
        """``(dim S_i, dim A_i, dim S_{i+1})`` for section ``i``."""
        m = self.m
        i %= m
        return self.state_dims[i], self.symbol_dims[i], self.state_dims[(i + 1) % m]

    def section_dim(self, i: int) -> int:
        return sum(self.layout(i))

    @property
    def state_dim_sum(self) -> int:
        return sum(self.state_dims)

    @property
    def constraint_dim_sum(self) -> int:
        return sum(c.dim for c in self.constraints)

    @property
    def length(self) -> int:
        """Total symbol dimension ``dim A``."""
        return sum(self.symbol_dims)

    def split_branch(self, i: int, branch: Sequence[int]) -> tuple[Vector, Vector, Vector]:
        d0, n, d1 = self.layout(i)
        b = tuple(branch)
        return b[:d0], b[d0:d0 + n], b[d0 + n:]

    def replace(self, **changes) -> Trellis:
        values = dict(
            p=self.p,
            symbol_dims=self.symbol_dims,
            state_dims=self.state_dims,
            constraints=self.constraints,
            sign_flags=self.sign_flags,
        )
        values.update(changes)
        return Trellis(**values)

    def with_constraint(self, i: int, space: Subspace) -> Trellis:
        cons = list(self.constraints)
        cons[i % self.m] = space
        return self.replace(constraints=tuple(cons))


def make_trellis(
    p: int,
    state_dims: Sequence[int],
    constraints: Sequence[Iterable[Sequence[int]]],
    symbol_dims: Sequence[int] | None = None,
    sign_flags: Sequence[bool] | None = None,
) -> Trellis:
    """Build a trellis from constraint generator rows and check it."""
    m = len(state_dims)
    if symbol_dims is None:
        symbol_dims = (1,) * m
    if len(constraints) != m:
        raise TrellisError(f"{len(constraints)} constraint codes for {m} sections")
    spaces = []
    for i, rows in enumerate(constraints):
        n = state_dims[i] + symbol_dims[i] + state_dims[(i + 1) % m]
        rows = [tuple(r) for r in rows]
        bad = [r for r in rows if len(r) != n]
        if bad:
            raise TrellisError(f"section {i}: branch {bad[0]} does not have length {n}")
        spaces.append(Subspace(p, n, tuple(rows)))
    T = Trellis(p, tuple(symbol_dims), tuple(state_dims), tuple(spaces), tuple(sign_flags or ()))
    check(T)
    return T


def validate(T: Trellis) -> list[str]:
    """Itemized structural problems; an empty list means the trellis is well formed."""
    problems = []
    try:
        FieldSpec(T.p)
    except ValueError as exc:
        problems.append(str(exc))
    m = T.m
    if m < 1:
        problems.append("trellis must have at least one section (m >= 1)")
        return problems
    if len(T.symbol_dims) != m:
        problems.append(f"{len(T.symbol_dims)} symbol dims for {m} sections")
    if len(T.constraints) != m:
        problems.append(f"{len(T.constraints)} constraint codes for {m} sections")
    if len(T.sign_flags) != m:
        problems.append(f"{len(T.sign_flags)} sign flags for {m} sections")
    for i, d in enumerate(T.state_dims):
        if d < 0:
            problems.append(f"state time {i}: negative dimension {d}")
    for i, n in enumerate(T.symbol_dims):
        if n < 0:
            problems.append(f"section {i}: negative symbol dimension {n}")
    if len(T.symbol_dims) == m:
        for i, c in enumerate(T.constraints[:m]):
            if c.p != T.p:
                problems.append(f"section {i}: constraint over GF({c.p}), trellis over GF({T.p})")
            expected = T.section_dim(i)
            if c.n != expected:
                problems.append(
                    f"section {i}: constraint ambient dimension {c.n}, layout "
                    f"{T.layout(i)} needs {expected}"
                )
    return problems


def check(T: Trellis) -> Trellis:
    problems = validate(T)
    if problems:
        raise TrellisError("; ".join(problems))
    return T


class LinearSystem:
    """Homogeneous system over blocks of variables, built constraint by constraint.

    Each constraint is a subspace whose coordinates are split into parts; a
    part is tied to a variable block or pinned to zero (block ``None``).
    Parts tied to the same block are added together, which is how the
    ``m = 1`` wrap and closed paths identify state copies.
    """

    def __init__(self, p: int):
        self.p = p
        self.dims: list[int] = []
        self.offsets: list[int] = []
        self._checks: list[tuple[tuple, list]] = []

    @property
    def nvars(self) -> int:
        return sum(self.dims)

    def block(self, dim: int) -> int:
        self.offsets.append(self.nvars)
        self.dims.append(dim)
        return len(self.dims) - 1

    def constrain(self, space: Subspace, parts: Sequence[tuple[int | None, int]]) -> None:
        if sum(d for _, d in parts) != space.n:
            raise TrellisError("constraint parts do not match the constraint dimension")
        self._checks.append((orthogonal_complement(space).basis, list(parts)))

    def _matrix(self) -> list[list[int]]:
        n = self.nvars
        p = self.p
        rows = []
        for checks, parts in self._checks:
            for h in checks:
                row = [0] * n
                pos = 0
                for blk, d in parts:
                    if blk is not None:
                        off = self.offsets[blk]
                        for k in range(d):
                            row[off + k] = (row[off + k] + h[pos + k]) % p
                    pos += d
                rows.append(row)
        return rows

    def solve(self) -> Subspace:
        return kernel(self._matrix(), self.p, self.nvars)

    def cols(self, blk: int) -> list[int]:
        off = self.offsets[blk]
        return list(range(off, off + self.dims[blk]))


@dataclass(frozen=True)
class Behavior:
    """Behavior of a trellis, with the coordinate bookkeeping needed to slice it."""

    trellis: Trellis = field(repr=False)
    subspace: Subspace

    @property
    def dim(self) -> int:
        return self.subspace.dim

    def symbol_cols(self, i: int | None = None) -> list[int]:
        T = self.trellis
        if i is None:
            return list(range(T.length))
        off = sum(T.symbol_dims[:i])
        return list(range(off, off + T.symbol_dims[i]))

    def state_cols(self, i: int | None = None) -> list[int]:
        T = self.trellis
        base = T.length
        if i is None:
            return list(range(base, base + T.state_dim_sum))
        i %= T.m
        off = base + sum(T.state_dims[:i])
        return list(range(off, off + T.state_dims[i]))

    def branch_cols(self, i: int) -> list[int]:
        return self.state_cols(i) + self.symbol_cols(i % self.trellis.m) + self.state_cols(i + 1)

    def code(self) -> Subspace:
        return self.subspace.project(self.symbol_cols())

    def states(self, i: int) -> Subspace:
        """Projection onto ``S_i``: the reachable states at time ``i``."""
        return self.subspace.project(self.state_cols(i))

    def branches(self, i: int) -> Subspace:
        """Projection onto section ``i``'s branch coordinates."""
        return self.subspace.project(self.branch_cols(i))

    def unobservable(self) -> Subspace:
        """State sequences ``s`` with ``(0, s)`` in the behavior."""
        T = self.trellis
        nA = T.length
        zero_symbols = Subspace(T.p, self.subspace.n, tuple(
            tuple(1 if j == c else 0 for j in range(self.subspace.n)) for c in range(nA, self.subspace.n)
        ))
        return (self.subspace & zero_symbols).project(self.state_cols())

    def split(self, v: Sequence[int]) -> tuple[Vector, list[Vector]]:
        T = self.trellis
        v = tuple(v)
        states = [tuple(v[c] for c in self.state_cols(i)) for i in range(T.m)]
        return v[:T.length], states


def behavior(T: Trellis) -> Behavior:
    """Solution space of all section constraints, computed exactly."""
    check(T)
    m = T.m
    sys = LinearSystem(T.p)
    a = [sys.block(n) for n in T.symbol_dims]
    s = [sys.block(d) for d in T.state_dims]
    for i in range(m):
        d0, n, d1 = T.layout(i)
        sys.constrain(T.constraints[i], [(s[i], d0), (a[i], n), (s[(i + 1) % m], d1)])
    return Behavior(T, sys.solve())


def code(T: Trellis) -> Subspace:
    """The code generated by ``T``: symbol parts of all valid trajectories."""
    return behavior(T).code()


def trivial_trellis(m: int, p: int = 2, symbol_dims: Sequence[int] | None = None) -> Trellis:
    """All state dims 0 and ``C_i = {0}``: realizes the zero code."""
    if m < 1:
        raise TrellisError("trellis must have at least one section (m >= 1)")
    if symbol_dims is None:
        symbol_dims = (1,) * m
    return Trellis(p, tuple(symbol_dims), (0,) * m, tuple(Subspace.zero(n, p) for n in symbol_dims))


def full_trellis(m: int, p: int = 2, state_dims=None, symbol_dims=None) -> Trellis:
    """Every constraint code is its whole ambient space."""
    if state_dims is None:
        state_dims = (0,) * m
    if symbol_dims is None:
        symbol_dims = (1,) * m
    T = Trellis(p, tuple(symbol_dims), tuple(state_dims), ())
    return T.replace(constraints=tuple(Subspace.full(T.section_dim(i), p) for i in range(m)))


def _sections_of(word: Sequence[int], symbol_dims: Sequence[int]) -> list[Vector]:
    out = []
    pos = 0
    for n in symbol_dims:
        out.append(tuple(word[pos:pos + n]))
        pos += n
    return out


def support(word: Sequence[int], symbol_dims: Sequence[int] | None = None) -> list[int]:
    """Sections on which ``word`` is nonzero."""
    if symbol_dims is None:
        return [i for i, x in enumerate(word) if x]
    return [i for i, blk in enumerate(_sections_of(word, symbol_dims)) if any(blk)]


def elementary_trellis(
    g: Sequence[int],
    span: CircularSpan,
    m: int | None = None,
    p: int = 2,
    symbol_dims: Sequence[int] | None = None,
) -> Trellis:
    """One-generator trellis whose code is ``<g>``.

    A one-dimensional state is present at the state times strictly inside
    ``span`` and absent elsewhere; every trajectory is ``alpha * g`` with all
    present states equal to ``alpha``.
    """
    if symbol_dims is None:
        if m is None:
            m = len(g)
        symbol_dims = (1,) * m
    symbol_dims = tuple(symbol_dims)
    m = len(symbol_dims)
    if len(g) != sum(symbol_dims):
        raise TrellisError(f"generator of length {len(g)} for symbol dims {symbol_dims}")
    g = tuple(int(x) % p for x in g)
    if not any(g):
        raise TrellisError("generator must be nonzero")
    if not (0 <= span.start < m and 0 <= span.stop < m):
        raise TrellisError(f"span {span} out of range for m = {m}")
    covered = set(span.sections(m))
    outside = [i for i in support(g, symbol_dims) if i not in covered]
    if outside:
        raise TrellisError(f"generator support escapes span {span} at section(s) {outside}")
    interior = span.interior_boundaries(m)
    state_dims = tuple(1 if i in interior else 0 for i in range(m))
    blocks = _sections_of(g, symbol_dims)
    cons = []
    for i in range(m):
        sigma0 = (1,) if i in interior else ()
        sigma1 = (1,) if (i + 1) % m in interior else ()
        n = state_dims[i] + symbol_dims[i] + state_dims[(i + 1) % m]
        cons.append(Subspace(p, n, (sigma0 + blocks[i] + sigma1,)))
    return Trellis(p, symbol_dims, state_dims, tuple(cons))


def product(T1: Trellis, T2: Trellis) -> Trellis:
    """Product trellis: states concatenate, symbols add.  Realizes ``code(T1) + code(T2)``."""
    if T1.m != T2.m or T1.p != T2.p or T1.symbol_dims != T2.symbol_dims:
        raise TrellisError("product needs the same field, section count and symbol dims")
    m = T1.m
    cons = []
    for i in range(m):
        d0, n, d1 = T1.layout(i)
        e0, _, e1 = T2.layout(i)
        rows = []
        for r in T1.constraints[i].basis:
            s, a, t = r[:d0], r[d0:d0 + n], r[d0 + n:]
            rows.append(s + (0,) * e0 + a + t + (0,) * e1)
        for r in T2.constraints[i].basis:
            s, a, t = r[:e0], r[e0:e0 + n], r[e0 + n:]
            rows.append((0,) * d0 + s + a + (0,) * d1 + t)
        cons.append(Subspace(T1.p, d0 + e0 + n + d1 + e1, tuple(rows)))
    dims = tuple(x + y for x, y in zip(T1.state_dims, T2.state_dims))
    return Trellis(T1.p, T1.symbol_dims, dims, tuple(cons))


def from_generators(
    gens: Sequence[tuple[Sequence[int], CircularSpan]],
    m: int | None = None,
    p: int = 2,
    symbol_dims: Sequence[int] | None = None,
) -> Trellis:
    """Product of the elementary trellises of ``(generator, span)`` pairs."""
    if symbol_dims is None:
        if m is None:
            if not gens:
                raise TrellisError("m is required for an empty generator list")
            m = len(gens[0][0])
        symbol_dims = (1,) * m
    T = trivial_trellis(len(symbol_dims), p, symbol_dims)
    for g, span in gens:
        T = product(T, elementary_trellis(g, span, p=p, symbol_dims=symbol_dims))
    return T


def relabel_states(T: Trellis, i: int, matrix: Sequence[Sequence[int]]) -> Trellis:
    """Change coordinates of ``S_i`` by the invertible ``matrix`` (new = matrix @ old)."""
    m = T.m
    i %= m
    d = T.state_dims[i]
    p = T.p
    M = [tuple(r) for r in matrix]
    if len(M) != d or any(len(r) != d for r in M):
        raise TrellisError(f"relabeling matrix must be {d}x{d}")
    if rank(M, p, d) != d:
        raise TrellisError("relabeling matrix is not invertible")

    def mv(v):
        return tuple(sum(a * b for a, b in zip(row, v)) % p for row in M)

    cons = list(T.constraints)
    for sec in {(i - 1) % m, i}:
        d0, n, d1 = T.layout(sec)
        rows = []
        for r in cons[sec].basis:
            s, a, t = r[:d0], r[d0:d0 + n], r[d0 + n:]
            if sec == i:
                s = mv(s)
            if (sec + 1) % m == i:
                t = mv(t)
            rows.append(s + a + t)
        cons[sec] = Subspace(p, d0 + n + d1, tuple(rows))
    return T.replace(constraints=tuple(cons))


__all__ = [
    "Behavior",
    "CircularSpan",
    "LinearSystem",
    "Trellis",
    "TrellisError",
    "behavior",
    "check",
    "code",
    "direct_sum",
    "elementary_trellis",
    "from_generators",
    "full_trellis",
    "make_trellis",
    "product",
    "relabel_states",
    "support",
    "trivial_trellis",
    "validate",
]
