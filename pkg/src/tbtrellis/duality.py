"""Normal-graph dual of a trellis.

Dual state and symbol spaces are identified with the primal coordinate
spaces through the standard dot product.  In dual constraint ``i`` the left
state ``s_i`` carries the inverted sign, so the dual constraint is ``{(x, y, z) :
-x.s + y.a + z.t = 0 for all (s, a, t) in C_i}``.  With the sign always on the
same side, dualizing twice returns the original constraints exactly.
"""

from __future__ import annotations

from .gflinalg import Subspace, orthogonal_complement
from .trellis import Trellis, check


def dual_constraint(T: Trellis, i: int) -> Subspace:
    d0, _, _ = T.layout(i)
    p = T.p
    perp = orthogonal_complement(T.constraints[i % T.m])
    rows = tuple(tuple((-x) % p for x in r[:d0]) + r[d0:] for r in perp.basis)
    return Subspace(p, perp.n, rows)


def dual(T: Trellis) -> Trellis:
    """The dual trellis; it realizes the orthogonal code of ``code(T)``."""
    check(T)
    flags = T.sign_flags
    if T.p > 2:
        flags = tuple(not f for f in flags)
    return T.replace(
        constraints=tuple(dual_constraint(T, i) for i in range(T.m)),
        sign_flags=flags,
    )


def constraint_is_trim(T: Trellis, i: int) -> bool:
    """Both state projections of ``C_i`` are surjective."""
    d0, n, d1 = T.layout(i)
    C = T.constraints[i % T.m]
    left = C.project(range(d0))
    right = C.project(range(d0 + n, d0 + n + d1))
    return left.is_full() and right.is_full()


def improper_branch(C: Subspace, d0: int, n: int, d1: int):
    """A nonzero branch ``(s, 0, 0)`` or ``(0, 0, t)`` of ``C``, or ``None``."""
    for block in (range(d0), range(d0 + n, d0 + n + d1)):
        meet = C & Subspace(C.p, C.n, _units(C.n, block))
        if not meet.is_zero():
            return min(meet.basis)
    return None


def _units(n, cols):
    return tuple(tuple(1 if j == c else 0 for j in range(n)) for c in cols)


def constraint_is_proper(T: Trellis, i: int) -> bool:
    return improper_branch(T.constraints[i % T.m], *T.layout(i)) is None


def check_trim_proper_duality(T: Trellis, i: int) -> tuple[bool, bool]:
    """``(C_i is trim, dual C_i is proper)``; the two always agree."""
    return constraint_is_trim(T, i), constraint_is_proper(dual(T), i)
