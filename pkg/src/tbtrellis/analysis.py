"""Structural predicates of a trellis, each with a concrete witness on failure.

Paths of length ``L`` are open: ``L`` sections and ``L + 1`` state times,
with no identification of the endpoints.  Only ``L = m`` closes the path,
which is how observability is restated as a path condition.

Witness choice is reproducible: the smallest failing time index, and the
lexicographically least vector of the relevant RREF basis.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from .duality import constraint_is_trim, dual, improper_branch
from .errors import InvariantViolation
from .gflinalg import Subspace, Vector
from .trellis import Behavior, LinearSystem, Trellis, behavior


@dataclass(frozen=True)
class Verdict:
    ok: bool
    witness: dict[str, Any] | None = None
    caveat: str | None = None

    def __bool__(self) -> bool:
        return self.ok


@dataclass(frozen=True)
class ZeroPathSpace:
    """State tuples along all-zero-symbol paths from time ``start`` over ``length`` sections."""

    start: int
    length: int
    dims: tuple[int, ...]
    subspace: Subspace
    closed: bool = False

    @property
    def dim(self) -> int:
        return self.subspace.dim

    def is_trivial(self) -> bool:
        return self.subspace.is_zero()

    def times(self, m: int) -> list[int]:
        return [(self.start + k) % m for k in range(self.length + 1)]

    def states(self, v) -> list[Vector]:
        out, pos = [], 0
        for d in self.dims:
            out.append(tuple(v[pos:pos + d]))
            pos += d
        return out

    def witness(self) -> list[Vector] | None:
        if self.is_trivial():
            return None
        return self.states(min(self.subspace.basis))


def _check_length(T: Trellis, L: int) -> None:
    if not 0 <= L <= T.m:
        raise ValueError(f"path length {L} out of range 0..{T.m}")


def zero_path_space(T: Trellis, j: int, L: int) -> ZeroPathSpace:
    """Zero-word paths starting at state time ``j`` and running over ``L`` sections.

    For ``L = m`` the final state is identified with the first, so the result
    is the set of unobservable state sequences (written with ``s_j`` repeated
    at the end).
    """
    _check_length(T, L)
    m = T.m
    j %= m
    sys = LinearSystem(T.p)
    nblocks = L if L == m else L + 1
    blocks = [sys.block(T.state_dims[(j + k) % m]) for k in range(nblocks)]
    for k in range(L):
        i = (j + k) % m
        d0, n, d1 = T.layout(i)
        right = blocks[(k + 1) % nblocks]
        sys.constrain(T.constraints[i], [(blocks[k], d0), (None, n), (right, d1)])
    sol = sys.solve()
    times = [(j + k) % m for k in range(L + 1)]
    dims = tuple(T.state_dims[t] for t in times)
    if L == m:
        head = sys.cols(blocks[0])
        rows = tuple(r + tuple(r[c] for c in head) for r in sol.basis)
        sol = Subspace(T.p, sum(dims), rows)
    return ZeroPathSpace(j, L, dims, sol, closed=L == m)


def path_space(T: Trellis, j: int, L: int) -> tuple[Subspace, list[list[int]]]:
    """All open paths (symbols free) from time ``j`` over ``L < m`` sections.

    Returns the solution space and, per state time along the path, its columns.
    """
    if not 0 <= L < T.m:
        raise ValueError(f"open path length {L} out of range 0..{T.m - 1}")
    m = T.m
    sys = LinearSystem(T.p)
    states = [sys.block(T.state_dims[j % m])]
    for k in range(L):
        i = (j + k) % m
        d0, n, d1 = T.layout(i)
        a = sys.block(n)
        nxt = sys.block(d1)
        sys.constrain(T.constraints[i], [(states[-1], d0), (a, n), (nxt, d1)])
        states.append(nxt)
    return sys.solve(), [sys.cols(b) for b in states]


# --- trimness and properness ----------------------------------------------------


def _behavior(T: Trellis, B: Behavior | None) -> Behavior:
    return B if B is not None else behavior(T)


def _unreached(reached: Subspace) -> Vector:
    for k in range(reached.n):
        e = tuple(1 if c == k else 0 for c in range(reached.n))
        if not reached.contains(e):
            return e
    raise AssertionError("reached subspace is full")


def is_state_trim(T: Trellis, B: Behavior | None = None) -> Verdict:
    B = _behavior(T, B)
    for i in range(T.m):
        reached = B.states(i)
        if not reached.is_full():
            return Verdict(False, {
                "time": i,
                "reached": [list(r) for r in reached.basis],
                "unreached_state": list(_unreached(reached)),
            })
    return Verdict(True)


def is_branch_trim(T: Trellis, B: Behavior | None = None) -> Verdict:
    B = _behavior(T, B)
    for i in range(T.m):
        used = B.branches(i)
        C = T.constraints[i]
        if used != C:
            unused = min(r for r in C.basis if not used.contains(r))
            return Verdict(False, {
                "section": i,
                "unused_branch": list(unused),
                "used": [list(r) for r in used.basis],
            })
    return Verdict(True)


def is_proper(T: Trellis) -> Verdict:
    for i in range(T.m):
        b = improper_branch(T.constraints[i], *T.layout(i))
        if b is not None:
            return Verdict(False, {"section": i, "improper_branch": list(b)})
    return Verdict(True)


# --- observability and controllability -----------------------------------------


def unobservable_space(T: Trellis, B: Behavior | None = None) -> Subspace:
    return _behavior(T, B).unobservable()


def is_observable(T: Trellis, B: Behavior | None = None) -> Verdict:
    B = _behavior(T, B)
    U = B.unobservable()
    if U.is_zero():
        return Verdict(True)
    v = min(U.basis)
    _, states = B.split((0,) * T.length + v)
    return Verdict(False, {"trajectory": [list(s) for s in states]})


def dimension_deficit(T: Trellis, B: Behavior | None = None) -> int:
    """``dim B - (sum dim C_i - dim S)``; never negative, zero iff controllable."""
    B = _behavior(T, B)
    return B.dim - (T.constraint_dim_sum - T.state_dim_sum)


def is_controllable(T: Trellis, B: Behavior | None = None, D: Trellis | None = None) -> Verdict:
    """Dimension test, cross-checked against observability of the dual."""
    deficit = dimension_deficit(T, B)
    if deficit < 0:
        raise InvariantViolation(f"behavior smaller than the kernel bound (deficit {deficit})")
    D = D if D is not None else dual(T)
    dual_obs = is_observable(D)
    if (deficit == 0) != dual_obs.ok:
        raise InvariantViolation("dimension-formula controllability disagrees with dual observability")
    if deficit == 0:
        return Verdict(True)
    return Verdict(False, {"deficit": deficit, "dual_trajectory": dual_obs.witness["trajectory"]})


# --- span-one / span-two -----------------------------------------------------------


def _first_zero_path(T: Trellis, L: int) -> tuple[int, ZeroPathSpace] | None:
    for j in range(T.m):
        Z = zero_path_space(T, j, L)
        if not Z.is_trivial():
            return j, Z
    return None


def _path_verdict(T: Trellis, L: int, caveat: str | None = None) -> Verdict:
    hit = _first_zero_path(T, L)
    if hit is None:
        return Verdict(True, caveat=caveat)
    j, Z = hit
    path = Z.witness()
    return Verdict(False, {
        "start": j,
        "stop": (j + L) % T.m,
        "length": L,
        "path": [list(s) for s in path],
    }, caveat=caveat)


def _oc(T: Trellis) -> bool:
    return bool(is_observable(T)) and dimension_deficit(T) == 0


HYPOTHESIS_CAVEAT = "trellis is not observable and controllable; path criterion evaluated anyway"


def is_span_one_observable(T: Trellis) -> Verdict:
    """No nontrivial zero-word path of length ``m - 1``."""
    return _path_verdict(T, T.m - 1, None if _oc(T) else HYPOTHESIS_CAVEAT)


def is_span_one_controllable(T: Trellis, B: Behavior | None = None, D: Trellis | None = None) -> Verdict:
    D = D if D is not None else dual(T)
    v = is_span_one_observable(D)
    if v.caveat is None and _oc(T):
        if v.ok != is_branch_trim(T, B).ok:
            raise InvariantViolation("span-one controllability disagrees with branch-trimness")
    if v.ok:
        return Verdict(True, caveat=v.caveat)
    return Verdict(False, {"dual_path": v.witness}, caveat=v.caveat)


def is_span_two_observable(T: Trellis) -> Verdict:
    """No nontrivial zero-word path of length ``m - 2``."""
    if T.m < 2:
        raise ValueError("span-two observability needs m >= 2")
    return _path_verdict(T, T.m - 2)


def span_two_connected(T: Trellis) -> Verdict:
    """Every state pair in ``S_i x S_{i-2}`` is joined by a path of length ``m - 2``."""
    if T.m < 2:
        raise ValueError("span-two controllability needs m >= 2")
    m = T.m
    for i in range(m):
        P, cols = path_space(T, i, m - 2)
        ends = P.project(cols[0] + cols[-1])
        if not ends.is_full():
            return Verdict(False, {"start": i, "stop": (i - 2) % m,
                                   "connected_pairs": [list(r) for r in ends.basis]})
    return Verdict(True)


def is_span_two_controllable(T: Trellis, D: Trellis | None = None) -> Verdict:
    """Dual span-two observability, cross-checked against endpoint connectivity.

    The two routes provably agree whenever every constraint code is trim
    (equivalently the dual is proper); the cross-check is enforced there.
    """
    D = D if D is not None else dual(T)
    v = is_span_two_observable(D)
    conn = span_two_connected(T)
    caveat = None
    if all(constraint_is_trim(T, i) for i in range(T.m)):
        if v.ok != conn.ok:
            raise InvariantViolation("dual span-two observability disagrees with path connectivity")
    elif v.ok != conn.ok:
        caveat = "constraint codes not trim: connectivity test differs from dual path test"
    if v.ok:
        return Verdict(True, caveat=caveat)
    return Verdict(False, {"dual_path": v.witness}, caveat=caveat)


# --- the full battery ---------------------------------------------------------------


PREDICATES = (
    "state_trim",
    "branch_trim",
    "proper",
    "observable",
    "controllable",
    "span_one_observable",
    "span_one_controllable",
    "span_two_observable",
    "span_two_controllable",
)


@dataclass
class PropertyReport:
    state_trim: bool
    branch_trim: bool
    proper: bool
    observable: bool
    controllable: bool
    span_one_observable: bool
    span_one_controllable: bool
    span_two_observable: bool | None
    span_two_controllable: bool | None
    witnesses: dict[str, Any] = field(default_factory=dict)
    caveats: list[str] = field(default_factory=list)

    @property
    def trim_proper(self) -> bool:
        return self.state_trim and self.branch_trim and self.proper

    @property
    def irreducible_criterion(self) -> bool:
        """State-trim, branch-trim, proper, span-two-observable and -controllable.

        With a single section the span-two predicates are undefined and the
        span-one pair stands in for them.
        """
        if self.span_two_observable is None:
            return bool(self.trim_proper and self.span_one_observable and self.span_one_controllable)
        return bool(self.trim_proper and self.span_two_observable and self.span_two_controllable)

    def flags(self) -> dict[str, bool | None]:
        return {k: getattr(self, k) for k in PREDICATES}

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = dict(self.flags())
        out["locally_irreducible_criterion"] = self.irreducible_criterion
        out["witnesses"] = self.witnesses
        out["caveats"] = list(self.caveats)
        return out


def check_implication_chain(report: PropertyReport) -> None:
    """S2O => S1O => observable, and S2C => S1C => controllable."""
    chains = (
        ("span_two_observable", "span_one_observable", "observable"),
        ("span_two_controllable", "span_one_controllable", "controllable"),
    )
    for chain in chains:
        for strong, weak in zip(chain, chain[1:]):
            if getattr(report, strong) and not getattr(report, weak):
                raise InvariantViolation(f"{strong} holds but {weak} fails")


def property_report(T: Trellis) -> PropertyReport:
    B = behavior(T)
    D = dual(T)
    verdicts = {
        "state_trim": is_state_trim(T, B),
        "branch_trim": is_branch_trim(T, B),
        "proper": is_proper(T),
        "observable": is_observable(T, B),
        "controllable": is_controllable(T, B, D),
        "span_one_observable": is_span_one_observable(T),
        "span_one_controllable": is_span_one_controllable(T, B, D),
    }
    if T.m >= 2:
        verdicts["span_two_observable"] = is_span_two_observable(T)
        verdicts["span_two_controllable"] = is_span_two_controllable(T, D)
    witnesses = {k: v.witness for k, v in verdicts.items() if not v.ok}
    caveats = sorted({v.caveat for v in verdicts.values() if v.caveat})
    if T.m < 2:
        caveats.append("m < 2: span-two predicates undefined; span-one predicates used instead")
    report = PropertyReport(
        **{k: verdicts[k].ok if k in verdicts else None for k in PREDICATES},
        witnesses=witnesses,
        caveats=caveats,
    )
    check_implication_chain(report)
    return report
