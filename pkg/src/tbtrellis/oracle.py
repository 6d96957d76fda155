"""Brute-force validators.

Everything here works by enumerating vectors and testing membership with
``Subspace.contains``; no row reduction, kernels or complements are used
directly, so a bug in the linear algebra cannot hide behind itself.
Enumerations are capped by hard guards that raise instead of sampling.
"""

from __future__ import annotations

import itertools
import math
from typing import Iterator, Sequence

from . import analysis
from .duality import dual
from .errors import GuardExceeded
from .gflinalg import Subspace, Vector
from .trellis import Trellis, behavior, code

LIMIT = 1 << 20
MATRIX_LIMIT = 1 << 16


def _guard(p: int, exponent: int, what: str, limit: int = LIMIT) -> None:
    if p ** exponent > limit:
        raise GuardExceeded(f"{what}: {p}^{exponent} candidates exceed the limit of {limit}")


def _vectors(p: int, n: int) -> Iterator[Vector]:
    return itertools.product(range(p), repeat=n)


def enumerate_behavior(T: Trellis) -> list[Vector]:
    """Every ``(a_0..a_{m-1} | s_0..s_{m-1})`` meeting all constraints, sorted.

    The guard is on the whole candidate space; the search itself walks the
    sections in order and abandons a prefix as soon as a branch fails.
    """
    m, p = T.m, T.p
    _guard(p, sum(T.symbol_dims) + sum(T.state_dims), "behavior enumeration")
    found = []

    def walk(i, s0, s, syms, states):
        if i == m:
            found.append(tuple(itertools.chain(*syms, *states)))
            return
        last = i == m - 1
        for a in _vectors(p, T.symbol_dims[i]):
            nexts = [s0] if last else _vectors(p, T.state_dims[i + 1])
            for t in nexts:
                if T.constraints[i].contains(s + a + tuple(t)):
                    walk(i + 1, s0, tuple(t), syms + [a], states + ([] if last else [tuple(t)]))

    for s0 in _vectors(p, T.state_dims[0]):
        walk(0, s0, s0, [], [s0])
    return sorted(found)


def enumerate_zero_paths(T: Trellis, j: int, L: int) -> list[Vector]:
    """State tuples ``(s_j, .., s_{j+L})`` joined by zero-symbol branches, sorted.

    Indices wrap mod ``m``; the end state is tied to the start only when ``L = m``.
    """
    m, p = T.m, T.p
    if not 0 <= L <= m:
        raise ValueError(f"path length {L} out of range 0..{m}")
    j %= m
    times = [(j + k) % m for k in range(L + 1)]
    free = times[:-1] if L == m else times
    _guard(p, sum(T.state_dims[t] for t in free), "zero-path enumeration")
    out = []
    for combo in itertools.product(*(list(_vectors(p, T.state_dims[t])) for t in free)):
        states = list(combo) + ([combo[0]] if L == m else [])
        ok = all(
            T.constraints[times[k]].contains(states[k] + (0,) * T.symbol_dims[times[k]] + states[k + 1])
            for k in range(L)
        )
        if ok:
            out.append(tuple(itertools.chain(*states)))
    return sorted(out)


def enumerate_code(basis: Sequence[Sequence[int]], p: int = 2, n: int | None = None) -> list[Vector]:
    """All linear combinations of ``basis``, deduplicated and sorted."""
    basis = [tuple(int(x) % p for x in r) for r in basis]
    if n is None:
        if not basis:
            raise ValueError("length n is required for an empty basis")
        n = len(basis[0])
    _guard(p, len(basis), "code enumeration")
    words = set()
    for coeffs in _vectors(p, len(basis)):
        words.add(tuple(sum(c * r[k] for c, r in zip(coeffs, basis)) % p for k in range(n)))
    return sorted(words)


def _circular_support_length(sections: Sequence[int], m: int) -> int:
    return min(max((s - start) % m for s in sections) + 1 for start in range(m))


def min_support_interval(C: Subspace | Sequence[Sequence[int]], p: int = 2,
                         symbol_dims: Sequence[int] | None = None) -> float:
    """Shortest circular interval (in sections) supporting a nonzero word; ``inf`` for the zero code."""
    if isinstance(C, Subspace):
        words, n = enumerate_code(C.basis, C.p, C.n), C.n
    else:
        rows = [tuple(r) for r in C]
        if not rows:
            return math.inf
        words, n = enumerate_code(rows, p), len(rows[0])
    if symbol_dims is None:
        symbol_dims = (1,) * n
    m = len(symbol_dims)
    offsets = list(itertools.accumulate(symbol_dims, initial=0))
    best = math.inf
    for w in words:
        secs = [i for i in range(m) if any(w[offsets[i]:offsets[i + 1]])]
        if secs:
            best = min(best, _circular_support_length(secs, m))
    return best


def enumerate_space(W: Subspace) -> list[Vector]:
    """All vectors of the ambient space lying in ``W``, found by membership tests."""
    _guard(W.p, W.n, "ambient enumeration")
    return [v for v in _vectors(W.p, W.n) if W.contains(v)]


def _invertible(p: int, d: int) -> list[tuple[Vector, ...]]:
    _guard(p, d * d, "state relabeling search", MATRIX_LIMIT)
    return [M for M in itertools.product(list(_vectors(p, d)), repeat=d) if _nonsingular(M, p)]


def _nonsingular(M, p) -> bool:
    """Nonsingular iff no nonzero vector is sent to zero (checked exhaustively)."""
    d = len(M)
    for v in _vectors(p, d):
        if any(v) and not any(sum(r[k] * v[k] for k in range(d)) % p for r in M):
            return False
    return True


def _maps(C1: Subspace, C2: Subspace, M0, M1, d0, n, p) -> bool:
    """Does ``M0 x I x M1`` carry ``C1`` into ``C2``?  (Equal dims make into = onto.)"""
    if C1.dim != C2.dim:
        return False

    def mv(M, v):
        return tuple(sum(a * b for a, b in zip(row, v)) % p for row in M)

    for r in C1.basis:
        s, a, t = r[:d0], r[d0:d0 + n], r[d0 + n:]
        if not C2.contains(mv(M0, s) + a + mv(M1, t)):
            return False
    return True


def are_isomorphic(T1: Trellis, T2: Trellis) -> bool:
    """Whether some invertible state relabeling turns ``T1`` into ``T2`` (tiny state dims only)."""
    if (T1.p, T1.symbol_dims, T1.state_dims) != (T2.p, T2.symbol_dims, T2.state_dims):
        return False
    m, p = T1.m, T1.p
    mats = [_invertible(p, d) for d in T1.state_dims]

    def extend(i, chosen):
        if i == m:
            return True
        d0, n, _ = T1.layout(i)
        options = [chosen[0]] if i == m - 1 else mats[i + 1]
        for M in options:
            if _maps(T1.constraints[i], T2.constraints[i], chosen[i], M, d0, n, p):
                if extend(i + 1, chosen + [M]):
                    return True
        return False

    return any(extend(0, [M0]) for M0 in mats[0])


def verify(T: Trellis) -> dict[str, bool]:
    """Compare every linear-algebra computation of the package against enumeration."""
    results: dict[str, bool] = {}
    trajectories = enumerate_behavior(T)
    results["behavior"] = trajectories == sorted(behavior(T).subspace.elements())
    C = code(T)
    words = sorted({w[:C.n] for w in trajectories})
    results["code"] = words == enumerate_code(C.basis, T.p, C.n)
    _guard(T.p, C.n, "dual code enumeration")
    results["dual_code"] = sorted(code(dual(T)).elements()) == [
        v for v in _vectors(T.p, C.n) if all(sum(x * y for x, y in zip(v, w)) % T.p == 0 for w in words)
    ]
    for L in sorted({L for L in (T.m - 2, T.m - 1, T.m) if L >= 0}):
        results[f"zero_paths_L{L}"] = all(
            enumerate_zero_paths(T, j, L) == sorted(analysis.zero_path_space(T, j, L).subspace.elements())
            for j in range(T.m)
        )
    return results
