"""Local reductions: trimming, merging, branch replacement, and the reduction cascade.

``reduce_step`` applies the first applicable rule of a fixed cascade:

1. not state-trim            -> trim to the reached states
2. not proper                -> merge (dual of rule 1)
3. unobservable              -> trim away one unobservable state direction
4. uncontrollable            -> merge (dual of rule 3)
5. span-one-unobservable     -> add one zero-symbol branch closing a zero path, then trim
6. not branch-trim           -> drop unused branches, then merge (dual of rule 5)
7. span-two-unobservable     -> adjoin a state, trim it back, then trim a non-trim neighbor
8. span-two-uncontrollable   -> dual of rule 7

Every firing strictly lowers the state-dimension sum and keeps the code; both
facts are checked at run time rather than assumed.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Any, Sequence

from . import analysis
from .duality import dual
from .errors import InvariantViolation
from .gflinalg import Subspace, extend_to_complement, kernel, orthogonal_complement, quotient_map, unit_vectors
from .trellis import Trellis, TrellisError, behavior, check, code


@dataclass(frozen=True)
class ComplexityProfile:
    state_dims: tuple[int, ...]
    constraint_dims: tuple[int, ...]

    @classmethod
    def of(cls, T: Trellis) -> ComplexityProfile:
        return cls(T.state_dims, tuple(c.dim for c in T.constraints))

    @property
    def state_dim_sum(self) -> int:
        return sum(self.state_dims)

    @property
    def constraint_dim_sum(self) -> int:
        return sum(self.constraint_dims)

    @property
    def measure(self) -> tuple[int, int]:
        return self.state_dim_sum, self.constraint_dim_sum

    def to_dict(self) -> dict[str, Any]:
        return {
            "state_dim_sum": self.state_dim_sum,
            "constraint_dim_sum": self.constraint_dim_sum,
            "state_dims": list(self.state_dims),
            "constraint_dims": list(self.constraint_dims),
        }


# Kinds of primitive steps, and the kind of the mirrored step on the dual.
DUAL_KIND = {
    "trim_state": "merge_state",
    "merge_state": "trim_state",
    "branch_trim": "branch_expand",
    "branch_expand": "branch_trim",
    "adjoin_state": "adjoin_dual_state",
    "adjoin_dual_state": "adjoin_state",
}


@dataclass(frozen=True)
class ReductionStep:
    kind: str
    time: int
    space_used: Subspace
    profile_before: ComplexityProfile
    profile_after: ComplexityProfile
    rule: int
    composite: str | None = None
    after: Trellis | None = field(default=None, compare=False, repr=False)
    coords: tuple | None = field(default=None, compare=False, repr=False)

    @property
    def strict(self) -> bool:
        return self.profile_after.state_dim_sum < self.profile_before.state_dim_sum

    @property
    def dual_kind(self) -> str:
        return DUAL_KIND[self.kind]

    def to_dict(self) -> dict[str, Any]:
        return {
            "kind": self.kind,
            "rule": self.rule,
            "composite": self.composite,
            "time": self.time,
            "space_used": [list(r) for r in self.space_used.basis],
            "space_ambient_dim": self.space_used.n,
            "strict": self.strict,
            "profile_before": self.profile_before.to_dict(),
            "profile_after": self.profile_after.to_dict(),
        }


# --- primitives ------------------------------------------------------------------------


def _pullback(C: Subspace, maps: Sequence[Sequence[Sequence[int]] | None], dims: Sequence[int]) -> Subspace:
    """Preimage of ``C`` under a block-diagonal map.

    ``maps[k]`` is the matrix (rows = old coordinates) taking new block ``k``
    coordinates to old ones, or ``None`` for the identity.  ``dims`` are the
    new block dimensions.
    """
    p = C.p
    checks = orthogonal_complement(C).basis
    rows = []
    for h in checks:
        row, pos = [], 0
        for M, d in zip(maps, dims):
            if M is None:
                row.extend(h[pos:pos + d])
                pos += d
            else:
                old = len(M)
                seg = h[pos:pos + old]
                row.extend(sum(seg[r] * M[r][c] for r in range(old)) % p for c in range(d))
                pos += old
        rows.append(row)
    return kernel(rows, p, sum(dims))


def _pushforward(C: Subspace, maps, old_dims: Sequence[int]) -> Subspace:
    """Image of ``C`` under a block-diagonal map (``maps[k]`` rows = new coordinates)."""
    p = C.p
    rows = []
    for r in C.basis:
        out, pos = [], 0
        for M, d in zip(maps, old_dims):
            seg = r[pos:pos + d]
            if M is None:
                out.extend(seg)
            else:
                out.extend(sum(a * b for a, b in zip(mrow, seg)) % p for mrow in M)
            pos += d
        rows.append(tuple(out))
    new_n = sum(d if M is None else len(M) for M, d in zip(maps, old_dims))
    return Subspace(p, new_n, tuple(rows))


def _state_subspace(T: Trellis, i: int, W: Subspace) -> None:
    if W.p != T.p or W.n != T.state_dims[i % T.m]:
        raise TrellisError(f"subspace of GF({W.p})^{W.n} is not a subspace of S_{i % T.m}")


def trim_state(T: Trellis, i: int, target: Subspace, basis: Sequence[Sequence[int]] | None = None) -> Trellis:
    """Restrict ``S_i`` to ``target`` and keep only branches through it.

    The new ``S_i`` is coordinatized by ``basis`` (default: ``target``'s RREF
    basis).  The code may change; callers decide whether it did.
    """
    check(T)
    m = T.m
    i %= m
    _state_subspace(T, i, target)
    if basis is None:
        basis = target.basis
    elif len(basis) != target.dim or Subspace(T.p, target.n, tuple(map(tuple, basis))) != target:
        raise TrellisError("basis does not span the trim target")
    k = target.dim
    embed = tuple(tuple(basis[r][c] for r in range(k)) for c in range(target.n))
    dims = list(T.state_dims)
    dims[i] = k
    cons = list(T.constraints)
    for sec in sorted({(i - 1) % m, i}):
        d0, n, d1 = T.layout(sec)
        left = embed if sec == i else None
        right = embed if (sec + 1) % m == i else None
        new0 = k if left is not None else d0
        new1 = k if right is not None else d1
        cons[sec] = _pullback(T.constraints[sec], [left, None, right], [new0, n, new1])
    return T.replace(state_dims=tuple(dims), constraints=tuple(cons))


def merge_state(T: Trellis, i: int, Y: Subspace, matrix: Sequence[Sequence[int]] | None = None) -> Trellis:
    """Replace ``S_i`` by ``S_i / Y`` and push the incident constraints forward.

    ``matrix`` optionally fixes the quotient coordinates; its rows must be a
    basis of the annihilator of ``Y``.
    """
    check(T)
    m = T.m
    i %= m
    _state_subspace(T, i, Y)
    if matrix is None:
        Q = quotient_map(T.state_dims[i], Y)
    else:
        Q = tuple(tuple(r) for r in matrix)
        if len(Q) != Y.n - Y.dim or Subspace(T.p, Y.n, Q) != orthogonal_complement(Y):
            raise TrellisError("quotient matrix rows must be a basis of the annihilator of Y")
    dims = list(T.state_dims)
    dims[i] = len(Q)
    cons = list(T.constraints)
    for sec in sorted({(i - 1) % m, i}):
        d0, n, d1 = T.layout(sec)
        left = Q if sec == i else None
        right = Q if (sec + 1) % m == i else None
        cons[sec] = _pushforward(T.constraints[sec], [left, None, right], [d0, n, d1])
    return T.replace(state_dims=tuple(dims), constraints=tuple(cons))


def branch_kind(T: Trellis, i: int, new: Subspace) -> str | None:
    """``branch_trim``, ``branch_expand`` or ``None`` (unchanged) for replacing ``C_i``."""
    old = T.constraints[i % T.m]
    if new == old:
        return None
    if new <= old:
        return "branch_trim"
    if old <= new:
        return "branch_expand"
    raise TrellisError(f"replacement for C_{i % T.m} is neither a subspace nor a superspace")


def branch_replace(T: Trellis, i: int, new: Subspace) -> Trellis:
    """Swap constraint ``C_i`` for a comparable subspace or superspace."""
    check(T)
    old = T.constraints[i % T.m]
    if new.p != old.p or new.n != old.n:
        raise TrellisError(f"replacement for C_{i % T.m} lives in the wrong space")
    branch_kind(T, i, new)
    return T.with_constraint(i, new)


def adjoin_state(T: Trellis, i: int, into: Sequence[int], out_of: Sequence[int]) -> Trellis:
    """Append a state coordinate ``x`` to ``S_i`` with branches ``(into|0|x)`` and ``(x|0|out_of)``.

    ``into`` lies in ``S_{i-1}`` and ``out_of`` in ``S_{i+1}``; old branches
    get ``x = 0``.  If ``into .. out_of`` are the ends of a zero-word path
    around the rest of the trellis, the code does not change.
    """
    check(T)
    m = T.m
    if m < 2:
        raise TrellisError("adjoining a state needs m >= 2")
    i %= m
    prev, cur = (i - 1) % m, i
    d = T.state_dims[i]
    p = T.p
    dims = list(T.state_dims)
    dims[i] = d + 1
    cons = list(T.constraints)
    d0, n, _ = T.layout(prev)
    rows = [r + (0,) for r in T.constraints[prev].basis]
    rows.append(tuple(into) + (0,) * n + (0,) * d + (1,))
    cons[prev] = Subspace(p, len(rows[-1]), tuple(rows))
    _, n1, e1 = T.layout(cur)
    rows = [r[:d] + (0,) + r[d:] for r in T.constraints[cur].basis]
    rows.append((0,) * d + (1,) + (0,) * n1 + tuple(out_of))
    cons[cur] = Subspace(p, d + 1 + n1 + e1, tuple(rows))
    return T.replace(state_dims=tuple(dims), constraints=tuple(cons))


def adjoin_dual_state(D: Trellis, i: int, into: Sequence[int], out_of: Sequence[int]) -> Trellis:
    """The step on ``D`` that is dual to ``adjoin_state`` on ``dual(D)``.

    The new coordinate of ``S_i`` is free at one end and pinned by the
    dual branch relations at the other, so the code of ``D`` is unchanged
    exactly when the primal adjoin keeps its code.
    """
    return dual(adjoin_state(dual(D), i, into, out_of))


def mirror_step(D: Trellis, step: ReductionStep) -> Trellis:
    """Apply the dual of ``step`` to ``D``, the dual of the trellis the step started from.

    The mirrored trim or merge reuses the step's recorded coordinates, so
    the result equals ``dual(step.after)`` exactly.
    """
    i = step.time
    kind = step.kind
    if kind == "trim_state":
        return merge_state(D, i, orthogonal_complement(step.space_used), step.coords)
    if kind == "merge_state":
        return trim_state(D, i, orthogonal_complement(step.space_used), step.coords)
    if kind in ("branch_trim", "branch_expand"):
        return branch_replace(D, i, dual(step.after).constraints[i])
    if kind in ("adjoin_state", "adjoin_dual_state"):
        return dual(step.after)
    raise TrellisError(f"unknown step kind {kind!r}")


def mirror_trace(T: Trellis, steps: Sequence[ReductionStep]) -> list[Trellis]:
    """Replay ``steps`` (starting from ``T``) on ``dual(T)``; returns each mirrored trellis."""
    out = []
    D = dual(T)
    for step in steps:
        D = mirror_step(D, step)
        out.append(D)
    return out


# --- cascade ---------------------------------------------------------------------------


class _Trace:
    def __init__(self, T: Trellis, rule: int, composite: str | None = None):
        self.T = T
        self.target = code(T)
        self.rule = rule
        self.composite = composite
        self.steps: list[ReductionStep] = []

    def apply(self, kind: str, time: int, space: Subspace, after: Trellis, coords=None) -> Trellis:
        if code(after) != self.target:
            raise InvariantViolation(f"rule {self.rule} {kind} at time {time} changed the code")
        if coords is None and kind == "trim_state":
            coords = space.basis
        elif coords is None and kind == "merge_state":
            coords = quotient_map(space.n, space)
        before = self.T
        self.steps.append(ReductionStep(
            kind, time % before.m, space, ComplexityProfile.of(before), ComplexityProfile.of(after),
            self.rule, self.composite, after, None if coords is None else tuple(map(tuple, coords)),
        ))
        self.T = after
        return after


def _rule_trim_unreached(T: Trellis) -> tuple[int, Subspace] | None:
    B = behavior(T)
    for i in range(T.m):
        R = B.states(i)
        if not R.is_full():
            return i, R
    return None


def _rule_trim_unobservable(T: Trellis) -> tuple[int, Subspace] | None:
    v = analysis.is_observable(T)
    if v.ok:
        return None
    traj = v.witness["trajectory"]
    i = next(k for k, s in enumerate(traj) if any(s))
    return i, extend_to_complement(traj[i], Subspace.full(T.state_dims[i], T.p))


def _merge_from_dual(trace: _Trace, finder) -> Trellis | None:
    """Apply ``finder`` to the dual; mirror its trim as a merge on the primal."""
    hit = finder(dual(trace.T))
    if hit is None:
        return None
    i, target = hit
    Y = orthogonal_complement(target)
    return trace.apply("merge_state", i, Y, merge_state(trace.T, i, Y, target.basis), target.basis)


def _rule1(T):
    hit = _rule_trim_unreached(T)
    if hit is None:
        return None
    tr = _Trace(T, 1)
    i, R = hit
    tr.apply("trim_state", i, R, trim_state(T, i, R))
    return tr


def _rule2(T):
    if analysis.is_proper(T):
        return None
    tr = _Trace(T, 2)
    if _merge_from_dual(tr, _rule_trim_unreached) is None:
        raise InvariantViolation("improper trellis whose dual is state-trim")
    return tr


def _rule3(T):
    hit = _rule_trim_unobservable(T)
    if hit is None:
        return None
    tr = _Trace(T, 3)
    i, target = hit
    tr.apply("trim_state", i, target, trim_state(T, i, target))
    return tr


def _rule4(T):
    if analysis.dimension_deficit(T) == 0:
        return None
    tr = _Trace(T, 4)
    if _merge_from_dual(tr, _rule_trim_unobservable) is None:
        raise InvariantViolation("uncontrollable trellis whose dual is observable")
    return tr


def _rule5(T):
    v = analysis.is_span_one_observable(T)
    if v.ok:
        return None
    m = T.m
    path = [tuple(s) for s in v.witness["path"]]
    j = v.witness["start"]
    i = (j - 1) % m
    first, last = path[0], path[-1]
    tr = _Trace(T, 5, "s1_composite")
    closing = last + (0,) * T.symbol_dims[i] + first
    C = T.constraints[i]
    expanded = Subspace(T.p, C.n, C.basis + (closing,))
    tr.apply("branch_expand", i, Subspace(T.p, C.n, (closing,)), branch_replace(T, i, expanded))
    # trim at an endpoint of the closing branch where the loop state is nonzero
    t, s = (i, last) if any(last) else (j, first)
    target = extend_to_complement(s, Subspace.full(T.state_dims[t], T.p))
    tr.apply("trim_state", t, target, trim_state(tr.T, t, target))
    return tr


def _rule6(T):
    v = analysis.is_branch_trim(T)
    if v.ok:
        return None
    i = v.witness["section"]
    used = behavior(T).branches(i)
    tr = _Trace(T, 6, "s1_composite")
    tr.apply("branch_trim", i, used, branch_replace(T, i, used))
    if _merge_from_dual(tr, _rule_trim_unobservable) is None:
        raise InvariantViolation("branch-trimmed trellis is still controllable")
    return tr


def _complements(d: int, p: int):
    """Complements of the last coordinate line in GF(p)^(d+1), preferred one first.

    Each complement is the graph ``{(x, phi(x))}`` of a functional ``phi`` on
    the first ``d`` coordinates; ``phi = 0`` (the old space) is skipped.
    """
    full = Subspace.full(d + 1, p)
    first = extend_to_complement(unit_vectors(d + 1)[d], full)
    yield first
    for phi in itertools.product(range(p), repeat=d):
        if not any(phi):
            continue
        rows = tuple(unit_vectors(d)[k] + (phi[k],) for k in range(d))
        W = Subspace(p, d + 1, rows)
        if W != first:
            yield W


def _span_two_candidates(T: Trellis):
    m = T.m
    L = m - 2
    for j in range(m):
        Z = analysis.zero_path_space(T, j, L)
        if Z.is_trivial():
            continue
        ordered = sorted(Z.subspace.basis)
        rest = sorted(v for v in Z.subspace.elements() if any(v) and v not in ordered)
        for vec in ordered + rest:
            yield j, Z.states(vec)


def _rule7(T):
    if T.m < 2 or analysis.is_span_two_observable(T):
        return None
    m = T.m
    for j, path in _span_two_candidates(T):
        mid = (j - 1) % m
        start, end = path[0], path[-1]
        base = adjoin_state(T, mid, end, start)
        d = T.state_dims[mid]
        for target in _complements(d, T.p):
            trimmed = trim_state(base, mid, target)
            hit = _rule_trim_unreached(trimmed)
            if hit is None:
                continue
            k, R = hit
            tr = _Trace(T, 7, "s2_composite")
            new_line = Subspace(T.p, d + 1, (unit_vectors(d + 1)[d],))
            tr.apply("adjoin_state", mid, new_line, base)
            tr.apply("trim_state", mid, target, trimmed)
            tr.apply("trim_state", k, R, trim_state(trimmed, k, R))
            return tr
    if check_code_hypothesis(code(T), T.symbol_dims):
        raise InvariantViolation("span-two-unobservable trellis admits no reducing state extension")
    # Without the short-support hypothesis a span-two defect need not be removable.
    return None


def _rule8(T):
    if T.m < 2:
        return None
    D = dual(T)
    inner = _rule7(D)
    if inner is None:
        return None
    tr = _Trace(T, 8, "s2_composite")
    for step in inner.steps:
        after = dual(step.after)
        space = orthogonal_complement(step.space_used) if step.kind == "trim_state" else step.space_used
        tr.apply(step.dual_kind, step.time, space, after, step.coords)
    return tr


RULES = (_rule1, _rule2, _rule3, _rule4, _rule5, _rule6, _rule7, _rule8)


def reduce_step(T: Trellis) -> tuple[Trellis, list[ReductionStep]] | None:
    """Fire the first applicable cascade rule, or return ``None`` at a fixpoint."""
    check(T)
    for rule in RULES:
        tr = rule(T)
        if tr is not None:
            before, after = ComplexityProfile.of(T), ComplexityProfile.of(tr.T)
            if after.state_dim_sum >= before.state_dim_sum:
                raise InvariantViolation(f"rule {tr.rule} did not reduce the state dimension")
            return tr.T, tr.steps
    return None


class StepBudgetExceeded(InvariantViolation):
    pass


def reduce_to_irreducible(T: Trellis, max_firings: int | None = None) -> tuple[Trellis, list[ReductionStep]]:
    """Iterate ``reduce_step`` to a fixpoint; returns the final trellis and all steps."""
    check(T)
    if max_firings is None:
        max_firings = T.state_dim_sum + T.constraint_dim_sum
    target = code(T)
    steps: list[ReductionStep] = []
    firings = 0
    while True:
        res = reduce_step(T)
        if res is None:
            break
        firings += 1
        if firings > max_firings:
            raise StepBudgetExceeded(f"more than {max_firings} rule firings")
        T, new = res
        steps.extend(new)
    if code(T) != target:
        raise InvariantViolation("reduction changed the code")
    return T, steps


# --- irreducibility ----------------------------------------------------------------------


def _window_space(n: int, cols, p: int) -> Subspace:
    return Subspace(p, n, tuple(tuple(1 if j == c else 0 for j in range(n)) for c in cols))


def short_support_words(C: Subspace, symbol_dims: Sequence[int] | None = None, span: int = 2) -> list[int]:
    """Start sections of circular windows of ``<= span`` sections that carry a nonzero codeword."""
    if symbol_dims is None:
        symbol_dims = (1,) * C.n
    m = len(symbol_dims)
    offsets = [sum(symbol_dims[:i]) for i in range(m)]
    hits = []
    for i in range(m):
        secs = {(i + k) % m for k in range(min(span, m))}
        cols = [offsets[s] + c for s in sorted(secs) for c in range(symbol_dims[s])]
        if not (C & _window_space(C.n, cols, C.p)).is_zero():
            hits.append(i)
    return hits


def check_code_hypothesis(C: Subspace, symbol_dims: Sequence[int] | None = None) -> bool:
    """Neither ``C`` nor its dual has a nonzero word supported on <= 2 consecutive sections."""
    return not short_support_words(C, symbol_dims) and not short_support_words(
        orthogonal_complement(C), symbol_dims
    )


@dataclass(frozen=True)
class IrreducibilityVerdict:
    criterion_holds: bool
    hypothesis: bool
    report: analysis.PropertyReport = field(repr=False)

    def __bool__(self) -> bool:
        return self.criterion_holds

    @property
    def caveat(self) -> str | None:
        if self.hypothesis:
            return None
        return "code or its dual has a nonzero word on <= 2 consecutive sections; " \
               "the criterion is only known to characterize local irreducibility otherwise"


def is_locally_irreducible(T: Trellis) -> IrreducibilityVerdict:
    report = analysis.property_report(T)
    return IrreducibilityVerdict(report.irreducible_criterion, check_code_hypothesis(code(T), T.symbol_dims), report)
